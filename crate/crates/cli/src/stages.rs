//! The pipeline stages. Each reads its inputs from files, writes its
//! artifacts into the output directory and fills in a [`Record`].

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::info;
use serde::{Deserialize, Serialize};
use serde_json::json;

use scan2sim_core::fea::{assemble_loads, element_to_nodal, solve_static, FieldResult};
use scan2sim_core::fidelity::evaluate_pair;
use scan2sim_core::io::{self, colormap::Colormap, inp, load_surface_auto, read_inp, write_vtk};
use scan2sim_core::mesh::{ScalarField, VolumeMesh};
use scan2sim_core::quality::audit as audit_mesh;
use scan2sim_core::remesh::remesh as remesh_surface;
use scan2sim_core::voxel::{register_node_set, VoxelGrid};

use crate::config::Config;
use crate::report::{Record, StageReport, Status};
use crate::CliError;

pub const REMESHED_OBJ: &str = "remeshed.obj";
pub const REMESHED_VTK: &str = "remeshed.vtk";
pub const VOLUME_INP: &str = "volume.inp";
pub const VOLUME_VTK: &str = "volume.vtk";
pub const QUALITY_JSON: &str = "quality.json";
pub const QUALITY_TXT: &str = "quality.txt";
pub const RESULT_VTK: &str = "result.vtk";
pub const RESULT_JSON: &str = "result.json";
pub const FIELDS_JSON: &str = "fields.json";
pub const MODEL_INP: &str = "model.inp";
pub const CHAMFER_JSON: &str = "chamfer.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Remesh,
    Voxelize,
    Audit,
    Simulate,
    Export,
    Chamfer,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Remesh => "remesh",
            Stage::Voxelize => "voxelize",
            Stage::Audit => "audit",
            Stage::Simulate => "simulate",
            Stage::Export => "export",
            Stage::Chamfer => "chamfer",
        }
    }
}

pub struct Context {
    pub config: Config,
    /// Explicit input for a single stage run; chained stages read the
    /// previous stage's artifact instead.
    pub stage_input: Option<PathBuf>,
}

impl Context {
    fn out(&self, name: &str) -> PathBuf {
        self.config.output_dir.join(name)
    }

    fn input_or(&self, artifact: &str) -> PathBuf {
        self.stage_input.clone().unwrap_or_else(|| self.out(artifact))
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn read_volume(path: &Path) -> Result<VolumeMesh, CliError> {
    if !path.exists() {
        return Err(CliError::Runtime(format!(
            "volume mesh {} not found (run `voxelize` first or pass --input)",
            path.display()
        )));
    }
    Ok(read_inp(path)?)
}

/// Runs one stage and writes its report, whether or not it succeeded.
pub fn run(ctx: &Context, stage: Stage) -> Result<StageReport, CliError> {
    let out_dir = &ctx.config.output_dir;
    let reports = out_dir.join("reports");
    std::fs::create_dir_all(&reports)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", reports.display())))?;
    let mut rec = Record::new(out_dir);
    let start = Instant::now();
    let result = match stage {
        Stage::Remesh => remesh(ctx, &mut rec),
        Stage::Voxelize => voxelize(ctx, &mut rec),
        Stage::Audit => audit(ctx, &mut rec),
        Stage::Simulate => simulate(ctx, &mut rec),
        Stage::Export => export(ctx, &mut rec),
        Stage::Chamfer => chamfer(ctx, &mut rec),
    };
    let status = match (&result, rec.gate_failed) {
        (Err(_), _) => Status::Failed,
        (Ok(()), true) => Status::GateFailed,
        (Ok(()), false) => Status::Ok,
    };
    let report = StageReport {
        stage: stage.name().to_string(),
        status,
        duration_ms: start.elapsed().as_millis() as u64,
        inputs: rec.inputs,
        outputs: rec.outputs,
        summary: rec.summary,
        error: result.as_ref().err().map(|e| e.to_string()),
    };
    write_text(&reports.join(format!("{}.json", stage.name())), &to_json(&report))?;
    info!("{} finished in {} ms", stage.name(), report.duration_ms);
    result?;
    if status == Status::GateFailed {
        return Err(CliError::Gate(
            "mesh quality gate failed; see quality.txt for the violated thresholds".into(),
        ));
    }
    Ok(report)
}

fn remesh(ctx: &Context, rec: &mut Record) -> Result<(), CliError> {
    let input = ctx
        .stage_input
        .clone()
        .or_else(|| ctx.config.input.clone())
        .ok_or_else(|| CliError::Config("no input surface: set `input` in the config or pass --input".into()))?;
    rec.input("surface", &input);
    let surface = load_surface_auto(&input)?;
    let out = remesh_surface(&surface, &ctx.config.remesh)?;
    let obj = ctx.out(REMESHED_OBJ);
    io::save_quad_obj(&out.quads, &obj)?;
    rec.output("surface", &obj);
    let vtk = ctx.out(REMESHED_VTK);
    write_vtk(&out.quads, &[], &vtk)?;
    rec.output("vtk", &vtk);
    let s = &out.summary;
    println!(
        "remesh: {} quads + {} triangles (quad fraction {:.3}, average min quad angle {:.2}°)",
        s.quads,
        s.triangles,
        s.quad_fraction,
        s.average_min_quad_angle.unwrap_or(f64::NAN)
    );
    rec.summary = serde_json::to_value(s).expect("serializable");
    Ok(())
}

fn voxelize(ctx: &Context, rec: &mut Record) -> Result<(), CliError> {
    let h = ctx.config.require_voxel_size()?;
    let input = ctx.input_or(REMESHED_OBJ);
    rec.input("surface", &input);
    let surface = load_surface_auto(&input)?;
    let grid = VoxelGrid::classify(&surface, h)?;
    let mut mesh = grid.to_volume_mesh()?;
    let mut sets = BTreeMap::new();
    for s in &ctx.config.load_case.node_sets {
        let n = register_node_set(&mut mesh, &s.name, &s.select)?;
        sets.insert(s.name.clone(), n);
    }
    let deck = ctx.out(VOLUME_INP);
    write_text(&deck, &inp::mesh_deck(&mesh))?;
    rec.output("mesh", &deck);
    let vtk = ctx.out(VOLUME_VTK);
    write_vtk(&mesh, &[], &vtk)?;
    rec.output("vtk", &vtk);
    println!(
        "voxelize: {} hexahedra, {} nodes at voxel size {h}",
        mesh.element_count(),
        mesh.node_count()
    );
    rec.summary = json!({
        "voxel_size": h,
        "grid_dims": grid.dims,
        "elements": mesh.element_count(),
        "nodes": mesh.node_count(),
        "volume": mesh.total_volume(),
        "surface_volume": surface.signed_volume(),
        "node_sets": sets,
    });
    Ok(())
}

fn audit(ctx: &Context, rec: &mut Record) -> Result<(), CliError> {
    let input = ctx.input_or(VOLUME_INP);
    rec.input("mesh", &input);
    let mesh = read_volume(&input)?;
    let report = audit_mesh(&mesh, &ctx.config.quality, true)?;
    let json_path = ctx.out(QUALITY_JSON);
    write_text(&json_path, &(report.to_json() + "\n"))?;
    rec.output("report", &json_path);
    let table = report.to_table();
    let txt = ctx.out(QUALITY_TXT);
    write_text(&txt, &table)?;
    rec.output("table", &txt);
    print!("{table}");
    rec.gate_failed = !report.gate_passed;
    rec.summary = json!({
        "gate_passed": report.gate_passed,
        "hex": report.hex,
        "tet": report.tet,
        "degenerate": report.degenerate.len(),
    });
    Ok(())
}

/// Per-node and per-element solution arrays consumed by `export`.
#[derive(Debug, Serialize, Deserialize)]
pub struct FieldDump {
    pub displacements: Vec<[f64; 3]>,
    pub reactions: Vec<[f64; 3]>,
    pub stresses: Vec<[f64; 6]>,
    pub strains: Vec<[f64; 6]>,
    pub von_mises: Vec<f64>,
}

fn simulate(ctx: &Context, rec: &mut Record) -> Result<(), CliError> {
    let cfg = &ctx.config;
    let input = ctx.input_or(VOLUME_INP);
    rec.input("mesh", &input);
    let mut mesh = read_volume(&input)?;
    for s in &cfg.load_case.node_sets {
        if mesh.node_set(&s.name).is_err() {
            register_node_set(&mut mesh, &s.name, &s.select)?;
        }
    }
    let load = cfg.load_case.load_case();
    let result: FieldResult = solve_static(&mesh, &cfg.material, &load, &cfg.solver)?;

    let f = assemble_loads(&mesh, &cfg.material, &load)?;
    let mut applied = [0.0; 3];
    for (i, v) in f.iter().enumerate() {
        applied[i % 3] += v;
    }
    // Imbalance per axis relative to the total applied load magnitude.
    let scale: f64 = f.iter().map(|v| v.abs()).sum();
    let reaction = result.total_reaction();
    let imbalance: Vec<f64> = (0..3)
        .map(|a| {
            let r = (reaction[a] + applied[a]).abs();
            if scale > 0.0 {
                r / scale
            } else {
                r
            }
        })
        .collect();

    let vtk = ctx.out(RESULT_VTK);
    write_vtk(&mesh, &result.fields(), &vtk)?;
    rec.output("vtk", &vtk);
    let deck = ctx.out(MODEL_INP);
    write_text(&deck, &io::inp_deck(&mesh, &cfg.material, &load)?)?;
    rec.output("deck", &deck);
    let dump = FieldDump {
        displacements: result.displacements.clone(),
        reactions: result.reactions.clone(),
        stresses: result.stresses.clone(),
        strains: result.strains.clone(),
        von_mises: result.von_mises.clone(),
    };
    let fields = ctx.out(FIELDS_JSON);
    write_text(&fields, &(serde_json::to_string(&dump).expect("serializable") + "\n"))?;
    rec.output("fields", &fields);
    let summary = json!({
        "elements": mesh.element_count(),
        "nodes": mesh.node_count(),
        "material": cfg.material,
        "max_displacement": result.max_displacement(),
        "max_von_mises": result.max_von_mises(),
        "applied_load": applied,
        "total_reaction": reaction,
        "equilibrium_error": imbalance,
        "solver": result.stats,
    });
    let json_path = ctx.out(RESULT_JSON);
    write_text(&json_path, &to_json(&summary))?;
    rec.output("summary", &json_path);
    println!(
        "simulate: max displacement {:.6e} mm, max von Mises {:.6e} MPa ({:?}, residual {:.2e})",
        result.max_displacement(),
        result.max_von_mises(),
        result.stats.method,
        result.stats.relative_residual
    );
    rec.summary = summary;
    Ok(())
}

fn nodal_field(name: &str, mesh: &VolumeMesh, dump: &FieldDump) -> Result<Vec<f64>, CliError> {
    if name == "displacement" {
        return Ok(dump
            .displacements
            .iter()
            .map(|d| (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt())
            .collect());
    }
    let per_element: Vec<f64> = match name {
        "von_mises" => dump.von_mises.clone(),
        _ => {
            let c = ["stress_xx", "stress_yy", "stress_zz", "stress_xy", "stress_yz", "stress_zx"]
                .iter()
                .position(|&n| n == name)
                .ok_or_else(|| CliError::Config(format!("unknown export field '{name}'")))?;
            dump.stresses.iter().map(|s| s[c]).collect()
        }
    };
    Ok(element_to_nodal(&ScalarField::per_element(name, per_element), mesh)?.values)
}

fn export(ctx: &Context, rec: &mut Record) -> Result<(), CliError> {
    let cfg = &ctx.config;
    let input = ctx.input_or(VOLUME_INP);
    rec.input("mesh", &input);
    let mesh = read_volume(&input)?;
    let fields_path = ctx.out(FIELDS_JSON);
    rec.input("fields", &fields_path);
    let text = std::fs::read_to_string(&fields_path).map_err(|e| {
        CliError::Runtime(format!(
            "cannot read {} (run `simulate` first): {e}",
            fields_path.display()
        ))
    })?;
    let dump: FieldDump =
        serde_json::from_str(&text).map_err(|e| CliError::Runtime(format!("{}: {e}", fields_path.display())))?;
    if dump.displacements.len() != mesh.node_count() || dump.von_mises.len() != mesh.element_count() {
        return Err(CliError::Runtime(format!(
            "{} does not match the mesh in {}",
            fields_path.display(),
            input.display()
        )));
    }
    let name = cfg.export.field.as_str();
    let colormap: Colormap = cfg.colormap()?;
    let nodal = nodal_field(name, &mesh, &dump)?;
    let (surface, node_of) = mesh.boundary_surface()?;
    let values: Vec<f64> = node_of.iter().map(|&i| nodal[i]).collect();
    let field = ScalarField::per_node(name, values);
    let range = field.range();
    let glb = ctx.out(&format!("{name}.glb"));
    io::export_gltf_colored(&surface, &field, colormap, &glb)?;
    rec.output("gltf", &glb);
    println!(
        "export: {name} on {} boundary triangles -> {}",
        surface.face_count(),
        glb.display()
    );
    rec.summary = json!({
        "field": name,
        "colormap": colormap.name(),
        "range": range.map(|(lo, hi)| [lo, hi]),
        "vertices": surface.vertex_count(),
        "triangles": surface.face_count(),
    });
    Ok(())
}

fn chamfer(ctx: &Context, rec: &mut Record) -> Result<(), CliError> {
    let ev = &ctx.config.evaluation;
    let reconstructed = ctx
        .stage_input
        .clone()
        .or_else(|| ev.reconstructed.clone())
        .or_else(|| ctx.config.input.clone())
        .ok_or_else(|| CliError::Config("no surface to evaluate: pass --input".into()))?;
    let reference = ev
        .reference
        .clone()
        .ok_or_else(|| CliError::Config("no reference surface: set evaluation.reference or pass --reference".into()))?;
    rec.input("reconstructed", &reconstructed);
    rec.input("reference", &reference);
    let p = load_surface_auto(&reconstructed)?;
    let q = load_surface_auto(&reference)?;
    let report = evaluate_pair(&p, &q, ev.samples, ev.seed)?;
    let path = ctx.out(CHAMFER_JSON);
    write_text(&path, &(report.to_json() + "\n"))?;
    rec.output("report", &path);
    println!("chamfer: CD = {:.6e} ({} samples, seed {})", report.cd, report.samples, report.seed);
    rec.summary = serde_json::to_value(&report).expect("serializable");
    Ok(())
}
