//! `scan2sim`: surface → quad-dominant remesh → voxel hex mesh → quality
//! gate → static analysis → coloured glTF, plus Chamfer evaluation.

mod config;
mod report;
mod stages;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use config::{Config, Overrides};
use report::{StageReport, Status};
use stages::{Context, Stage};

pub const THREADS_ENV: &str = "SCAN2SIM_THREADS";

#[derive(Debug)]
pub enum CliError {
    /// Bad configuration or arguments (exit 2).
    Config(String),
    /// The quality gate rejected the mesh (exit 3).
    Gate(String),
    /// Anything that failed while running (exit 1).
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Gate(_) => 3,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Gate(m) => write!(f, "{m}"),
            CliError::Runtime(m) => write!(f, "{m}"),
        }
    }
}

impl From<scan2sim_core::Error> for CliError {
    fn from(e: scan2sim_core::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "scan2sim", version, about = "Scan-to-simulation mesh pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Curvature-adaptive quad-dominant remeshing of the input surface.
    Remesh(Args),
    /// Voxel hex meshing of the remeshed surface, with load-case node sets.
    Voxelize(Args),
    /// Element quality audit; exits 3 when the gate fails.
    Audit(Args),
    /// Linear-elastic static analysis of the volume mesh.
    Simulate(Args),
    /// Boundary surface with a nodal field as vertex-coloured glTF.
    Export(Args),
    /// Chamfer distance between a surface and a reference.
    Chamfer(Args),
    /// remesh, voxelize, audit, simulate and export in sequence (plus
    /// chamfer when a reference is configured).
    Pipeline(Args),
}

#[derive(clap::Args, Debug, Clone)]
struct Args {
    /// JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Input file; for single stages this replaces the previous stage's artifact.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Voxel edge length in mm.
    #[arg(long)]
    voxel_size: Option<f64>,
    /// Sampling seed for the Chamfer evaluation.
    #[arg(long)]
    seed: Option<u64>,
    /// Reference surface for the Chamfer evaluation.
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Samples per surface for the Chamfer evaluation.
    #[arg(long)]
    samples: Option<usize>,
    /// Field to export (von_mises, displacement, stress_xx … stress_zx).
    #[arg(long)]
    field: Option<String>,
    /// Log progress (RUST_LOG takes precedence).
    #[arg(short, long)]
    verbose: bool,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("{THREADS_ENV}='{value}' is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))
}

fn run_pipeline(ctx: &Context) -> Result<(), CliError> {
    ctx.config.require_voxel_size()?;
    let start = Instant::now();
    let mut plan = vec![Stage::Remesh, Stage::Voxelize, Stage::Audit, Stage::Simulate, Stage::Export];
    if ctx.config.evaluation.reference.is_some() {
        plan.push(Stage::Chamfer);
    }
    let mut outputs = std::collections::BTreeMap::new();
    let mut result = Ok(());
    for stage in plan {
        let r = stages::run(ctx, stage);
        outputs.insert(stage.name().to_string(), format!("reports/{}.json", stage.name()));
        if let Err(e) = r {
            result = Err(e);
            break;
        }
    }
    let status = match &result {
        Ok(()) => Status::Ok,
        Err(CliError::Gate(_)) => Status::GateFailed,
        Err(_) => Status::Failed,
    };
    let mut inputs = std::collections::BTreeMap::new();
    if let Some(i) = &ctx.config.input {
        inputs.insert("surface".to_string(), i.to_string_lossy().into_owned());
    }
    let report = StageReport {
        stage: "pipeline".into(),
        status,
        duration_ms: start.elapsed().as_millis() as u64,
        inputs,
        outputs,
        summary: json!({ "config": ctx.config }),
        error: result.as_ref().err().map(|e| e.to_string()),
    };
    let path = ctx.config.output_dir.join("reports").join("pipeline.json");
    let text = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
    std::fs::write(&path, text).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    result
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (stage, args) = match cli.command {
        Command::Remesh(a) => (Some(Stage::Remesh), a),
        Command::Voxelize(a) => (Some(Stage::Voxelize), a),
        Command::Audit(a) => (Some(Stage::Audit), a),
        Command::Simulate(a) => (Some(Stage::Simulate), a),
        Command::Export(a) => (Some(Stage::Export), a),
        Command::Chamfer(a) => (Some(Stage::Chamfer), a),
        Command::Pipeline(a) => (None, a),
    };
    let level = if args.verbose { "info" } else { "warn" };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    configure_threads()?;
    let overrides = Overrides {
        input: args.input.clone(),
        output_dir: args.output_dir.clone(),
        voxel_size: args.voxel_size,
        seed: args.seed,
        reference: args.reference.clone(),
        samples: args.samples,
        field: args.field.clone(),
    };
    let config = Config::load(args.config.as_deref(), &overrides)?;
    if let Some(input) = &args.input {
        if !input.exists() {
            return Err(CliError::Config(format!("input {} does not exist", input.display())));
        }
    }
    std::fs::create_dir_all(&config.output_dir)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", config.output_dir.display())))?;
    match stage {
        Some(s) => {
            let ctx = Context {
                config,
                stage_input: args.input,
            };
            stages::run(&ctx, s).map(|_| ())
        }
        None => {
            if let Some(i) = &config.input {
                if !i.exists() {
                    return Err(CliError::Config(format!("input {} does not exist", i.display())));
                }
            }
            let ctx = Context {
                config,
                stage_input: None,
            };
            run_pipeline(&ctx)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("scan2sim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
