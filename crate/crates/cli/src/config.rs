//! Run configuration: JSON file plus command-line overrides.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use scan2sim_core::fea::{Constraint, LoadCase, Material, SolverSettings, SurfaceLoad, STANDARD_GRAVITY};
use scan2sim_core::io::Colormap;
use scan2sim_core::quality::Thresholds;
use scan2sim_core::remesh::RemeshParams;
use scan2sim_core::voxel::NodeSelector;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedSelector {
    pub name: String,
    pub select: NodeSelector,
}

/// Load case with node sets described by selectors, resolved on the
/// voxel mesh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LoadCaseConfig {
    pub gravity: [f64; 3],
    pub node_sets: Vec<NamedSelector>,
    pub surface_loads: Vec<SurfaceLoad>,
    pub constraints: Vec<Constraint>,
}

impl Default for LoadCaseConfig {
    /// Self-weight, 500 N downward on the top layer, bottom layer pinned.
    fn default() -> Self {
        LoadCaseConfig {
            gravity: [0.0, 0.0, -STANDARD_GRAVITY],
            node_sets: vec![
                NamedSelector {
                    name: "bottom".into(),
                    select: NodeSelector::ZMinLayer,
                },
                NamedSelector {
                    name: "top".into(),
                    select: NodeSelector::ZMaxLayer,
                },
            ],
            surface_loads: vec![SurfaceLoad {
                node_set: "top".into(),
                force: [0.0, 0.0, -500.0],
                distribution: Default::default(),
            }],
            constraints: vec![Constraint::pinned("bottom")],
        }
    }
}

impl LoadCaseConfig {
    pub fn load_case(&self) -> LoadCase {
        LoadCase {
            gravity: self.gravity,
            surface_loads: self.surface_loads.clone(),
            constraints: self.constraints.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvaluationConfig {
    /// Reference surface for the Chamfer evaluation.
    pub reference: Option<PathBuf>,
    /// Surface to evaluate; defaults to the run input.
    pub reconstructed: Option<PathBuf>,
    pub samples: usize,
    pub seed: u64,
}

impl Default for EvaluationConfig {
    fn default() -> Self {
        EvaluationConfig {
            reference: None,
            reconstructed: None,
            samples: 100_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExportConfig {
    /// von_mises, displacement, or stress_xx … stress_zx.
    pub field: String,
    pub colormap: String,
}

impl Default for ExportConfig {
    fn default() -> Self {
        ExportConfig {
            field: "von_mises".into(),
            colormap: "viridis".into(),
        }
    }
}

pub const EXPORT_FIELDS: [&str; 8] = [
    "von_mises",
    "displacement",
    "stress_xx",
    "stress_yy",
    "stress_zz",
    "stress_xy",
    "stress_yz",
    "stress_zx",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub input: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub remesh: RemeshParams,
    /// Voxel edge in mm. Required by `voxelize` and `pipeline`.
    pub voxel_size: Option<f64>,
    pub quality: Thresholds,
    pub material: Material,
    pub load_case: LoadCaseConfig,
    pub solver: SolverSettings,
    pub evaluation: EvaluationConfig,
    pub export: ExportConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            input: None,
            output_dir: PathBuf::from("scan2sim-out"),
            remesh: RemeshParams::default(),
            voxel_size: None,
            quality: Thresholds::default(),
            material: Material::spruce(),
            load_case: LoadCaseConfig::default(),
            solver: SolverSettings::default(),
            evaluation: EvaluationConfig::default(),
            export: ExportConfig::default(),
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub input: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
    pub voxel_size: Option<f64>,
    pub seed: Option<u64>,
    pub reference: Option<PathBuf>,
    pub samples: Option<usize>,
    pub field: Option<String>,
}

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl Config {
    /// Reads the file (if any), resolves its relative paths against the
    /// file's directory and applies the overrides.
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Config, CliError> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| config_error(format!("cannot read config {}: {e}", p.display())))?;
                let mut c: Config = serde_json::from_str(&text)
                    .map_err(|e| config_error(format!("invalid config {}: {e}", p.display())))?;
                let base = p.parent().unwrap_or(Path::new(""));
                let rebase = |q: &mut PathBuf| {
                    if q.is_relative() {
                        *q = base.join(&*q);
                    }
                };
                c.input.as_mut().map(rebase);
                rebase(&mut c.output_dir);
                c.evaluation.reference.as_mut().map(rebase);
                c.evaluation.reconstructed.as_mut().map(rebase);
                c
            }
            None => Config::default(),
        };
        let o = overrides.clone();
        if o.input.is_some() {
            cfg.input = o.input;
        }
        if let Some(d) = o.output_dir {
            cfg.output_dir = d;
        }
        if o.voxel_size.is_some() {
            cfg.voxel_size = o.voxel_size;
        }
        if let Some(s) = o.seed {
            cfg.evaluation.seed = s;
        }
        if o.reference.is_some() {
            cfg.evaluation.reference = o.reference;
        }
        if let Some(n) = o.samples {
            cfg.evaluation.samples = n;
        }
        if let Some(f) = o.field {
            cfg.export.field = f;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn require_voxel_size(&self) -> Result<f64, CliError> {
        self.voxel_size
            .ok_or_else(|| config_error("no voxel size: set `voxel_size` in the config or pass --voxel-size"))
    }

    /// Checks everything that can be checked before touching any mesh.
    pub fn validate(&self) -> Result<(), CliError> {
        let r = &self.remesh;
        if let (Some(lo), Some(hi)) = (r.min_edge, r.max_edge) {
            if !(lo > 0.0 && lo < hi) {
                return Err(config_error(format!("remesh: need 0 < min_edge < max_edge (got {lo}, {hi})")));
            }
        }
        for (name, v) in [("min_edge", r.min_edge), ("max_edge", r.max_edge)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(config_error(format!("remesh.{name} must be positive")));
                }
            }
        }
        if !(r.sensitivity > 0.0 && r.sensitivity <= 1.0) {
            return Err(config_error("remesh.sensitivity must lie in (0, 1]"));
        }
        if !(r.smooth_lambda > 0.0 && r.smooth_lambda <= 1.0) {
            return Err(config_error("remesh.smooth_lambda must lie in (0, 1]"));
        }
        if let Some(h) = self.voxel_size {
            if !(h > 0.0 && h.is_finite()) {
                return Err(config_error(format!("voxel_size {h} must be positive")));
            }
        }
        let t = &self.quality;
        for (name, v) in [
            ("min_angle_hex", t.min_angle_hex),
            ("min_angle_tet", t.min_angle_tet),
            ("max_angle", t.max_angle),
            ("aspect_ratio", t.aspect_ratio),
            ("shape_factor", t.shape_factor),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(config_error(format!("quality.{name} must be a non-negative number")));
            }
        }
        self.material
            .validate()
            .map_err(|e| config_error(format!("material: {e}")))?;
        if !(self.solver.tolerance > 0.0) {
            return Err(config_error("solver.tolerance must be positive"));
        }
        let lc = &self.load_case;
        let mut names = BTreeSet::new();
        for s in &lc.node_sets {
            if !names.insert(s.name.as_str()) {
                return Err(config_error(format!("load_case: node set '{}' defined twice", s.name)));
            }
            if let NodeSelector::Box { min, max } = &s.select {
                if (0..3).any(|a| !(min[a] <= max[a])) {
                    return Err(config_error(format!("load_case: box for '{}' has min > max", s.name)));
                }
            }
        }
        for sl in &lc.surface_loads {
            if !names.contains(sl.node_set.as_str()) {
                return Err(config_error(format!("load_case: surface load uses undefined set '{}'", sl.node_set)));
            }
            if sl.force.iter().any(|f| !f.is_finite()) {
                return Err(config_error("load_case: surface load force must be finite"));
            }
        }
        for c in &lc.constraints {
            if !names.contains(c.node_set.as_str()) {
                return Err(config_error(format!("load_case: constraint uses undefined set '{}'", c.node_set)));
            }
            if c.dofs.is_empty() || c.dofs.iter().any(|d| !(1..=3).contains(d)) {
                return Err(config_error(format!(
                    "load_case: constraint on '{}' needs DOFs from 1, 2, 3",
                    c.node_set
                )));
            }
        }
        if lc.gravity.iter().any(|g| !g.is_finite()) {
            return Err(config_error("load_case.gravity must be finite"));
        }
        if self.evaluation.samples == 0 {
            return Err(config_error("evaluation.samples must be at least 1"));
        }
        if !EXPORT_FIELDS.contains(&self.export.field.as_str()) {
            return Err(config_error(format!(
                "export.field '{}' is not one of {}",
                self.export.field,
                EXPORT_FIELDS.join(", ")
            )));
        }
        self.colormap()?;
        Ok(())
    }

    pub fn colormap(&self) -> Result<Colormap, CliError> {
        self.export
            .colormap
            .parse()
            .map_err(|e| config_error(format!("export.colormap: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_is_default() {
        let c: Config = serde_json::from_str("{}").unwrap();
        assert_eq!(c, Config::default());
        c.validate().unwrap();
    }

    #[test]
    fn partial_load_case_keeps_other_defaults() {
        let c: Config = serde_json::from_str(r#"{"load_case": {"surface_loads": []}}"#).unwrap();
        assert!(c.load_case.surface_loads.is_empty());
        assert_eq!(c.load_case.constraints, vec![Constraint::pinned("bottom")]);
    }

    #[test]
    fn selectors_parse() {
        let c: Config = serde_json::from_str(
            r#"{"load_case": {"node_sets": [
                {"name": "a", "select": "z_min_layer"},
                {"name": "b", "select": {"box": {"min": [0, 0, 0], "max": [1, 1, 1]}}}
            ], "surface_loads": [], "constraints": [{"node_set": "a", "dofs": [3]}]}}"#,
        )
        .unwrap();
        c.validate().unwrap();
        assert_eq!(c.load_case.node_sets[0].select, NodeSelector::ZMinLayer);
    }

    #[test]
    fn rejects_bad_values() {
        for bad in [
            r#"{"voxel_size": -1}"#,
            r#"{"remesh": {"sensitivity": 0}}"#,
            r#"{"material": {"young_modulus": 1, "poisson_ratio": 0.5, "density": 0}}"#,
            r#"{"load_case": {"constraints": [{"node_set": "nowhere", "dofs": [1]}]}}"#,
            r#"{"load_case": {"constraints": [{"node_set": "bottom", "dofs": [4]}]}}"#,
            r#"{"export": {"field": "pressure"}}"#,
            r#"{"export": {"colormap": "rainbow"}}"#,
        ] {
            let c: Config = serde_json::from_str(bad).unwrap();
            assert!(c.validate().is_err(), "{bad}");
        }
        assert!(serde_json::from_str::<Config>(r#"{"voxelsize": 1}"#).is_err());
    }
}
