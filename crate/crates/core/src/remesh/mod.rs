//! Curvature-adaptive quad-dominant remeshing.
//!
//! Pipeline: mean-curvature estimate → sizing field → isotropic remeshing
//! → triangle pairing → uniform Laplacian smoothing.

mod bvh;
mod curvature;
mod isotropic;
mod quads;
mod smooth;

use serde::{Deserialize, Serialize};

pub use bvh::{Closest, TriangleBvh};
pub use curvature::{estimate_curvature, CurvatureEstimate};
pub use isotropic::{isotropic_remesh, RemeshDiagnostics};
pub use quads::{pair_to_quads, pair_to_quads_with_stats, PairingStats, AUGMENT_DEPTH};
pub use smooth::{laplacian_smooth, PolygonSurface};

use crate::error::{Error, Result};
use crate::mesh::{QuadDominantMesh, TriangleMesh};

/// Per-vertex target edge length in mm.
#[derive(Debug, Clone, PartialEq)]
pub struct SizingField {
    pub values: Vec<f64>,
    pub min_edge: f64,
    pub max_edge: f64,
}

/// `size = clamp(max_edge / (1 + sensitivity · κ · max_edge), min_edge, max_edge)`.
pub fn compute_sizing(
    curvature: &CurvatureEstimate,
    min_edge: f64,
    max_edge: f64,
    sensitivity: f64,
) -> Result<SizingField> {
    if !(min_edge > 0.0 && min_edge < max_edge && max_edge.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "edge bounds must satisfy 0 < min_edge < max_edge (got {min_edge}, {max_edge})"
        )));
    }
    if !(sensitivity > 0.0 && sensitivity <= 1.0) {
        return Err(Error::InvalidParameter(format!("sensitivity {sensitivity} must lie in (0, 1]")));
    }
    let values = curvature
        .values
        .iter()
        .map(|&k| (max_edge / (1.0 + sensitivity * k * max_edge)).clamp(min_edge, max_edge))
        .collect();
    Ok(SizingField {
        values,
        min_edge,
        max_edge,
    })
}

/// Remeshing controls. Unset edge bounds default to
/// `max_edge = bbox diagonal / 20` and `min_edge = max_edge / 4`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RemeshParams {
    pub min_edge: Option<f64>,
    pub max_edge: Option<f64>,
    pub sensitivity: f64,
    pub iterations: usize,
    pub smooth_iterations: usize,
    pub smooth_lambda: f64,
    pub preserve_boundary: bool,
}

impl Default for RemeshParams {
    fn default() -> Self {
        RemeshParams {
            min_edge: None,
            max_edge: None,
            sensitivity: 0.5,
            iterations: 5,
            smooth_iterations: 3,
            smooth_lambda: 0.5,
            preserve_boundary: true,
        }
    }
}

impl RemeshParams {
    /// Resolved (min_edge, max_edge) for `mesh`.
    pub fn edge_bounds(&self, mesh: &TriangleMesh) -> Result<(f64, f64)> {
        let diag = mesh.bounding_box().ok_or(Error::EmptyMesh)?.diagonal();
        let max = self.max_edge.unwrap_or(diag / 20.0);
        let min = self.min_edge.unwrap_or(max / 4.0);
        Ok((min, max))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemeshSummary {
    pub input_triangles: usize,
    pub remeshed_triangles: usize,
    pub quads: usize,
    pub triangles: usize,
    pub quad_fraction: f64,
    pub average_min_quad_angle: Option<f64>,
    pub min_edge: f64,
    pub max_edge: f64,
    pub mean_curvature: f64,
    pub diagnostics: RemeshDiagnostics,
    pub pairing: PairingStats,
}

#[derive(Debug, Clone)]
pub struct RemeshOutput {
    /// Isotropic triangle mesh before pairing.
    pub triangles: TriangleMesh,
    /// Smoothed quad-dominant mesh.
    pub quads: QuadDominantMesh,
    pub summary: RemeshSummary,
}

/// Runs the full remeshing pipeline.
pub fn remesh(mesh: &TriangleMesh, params: &RemeshParams) -> Result<RemeshOutput> {
    let (min_edge, max_edge) = params.edge_bounds(mesh)?;
    let curvature = estimate_curvature(mesh);
    let sizing = compute_sizing(&curvature, min_edge, max_edge, params.sensitivity)?;
    let (tri, diagnostics) = isotropic_remesh(mesh, &sizing, params.iterations)?;
    let (paired, pairing) = pair_to_quads_with_stats(&tri, AUGMENT_DEPTH);
    let quads = laplacian_smooth(
        &paired,
        params.smooth_iterations,
        params.smooth_lambda,
        params.preserve_boundary,
    )?;
    let summary = RemeshSummary {
        input_triangles: mesh.face_count(),
        remeshed_triangles: tri.face_count(),
        quads: quads.quads().len(),
        triangles: quads.triangles().len(),
        quad_fraction: quads.quad_fraction(),
        average_min_quad_angle: quads.average_min_quad_angle(),
        min_edge,
        max_edge,
        mean_curvature: curvature.mean(),
        diagnostics,
        pairing,
    };
    Ok(RemeshOutput {
        triangles: tri,
        quads,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curv(values: Vec<f64>) -> CurvatureEstimate {
        CurvatureEstimate {
            values,
            non_manifold: 0,
            degenerate: 0,
        }
    }

    #[test]
    fn sizing_limits_and_monotonicity() {
        let s = compute_sizing(&curv(vec![0.0, 0.1, 1.0, 1e300]), 0.5, 4.0, 1.0).unwrap();
        assert_eq!(s.values[0], 4.0);
        assert_eq!(s.values[3], 0.5);
        assert!(s.values.windows(2).all(|w| w[0] >= w[1]));
        assert!(compute_sizing(&curv(vec![]), 2.0, 1.0, 0.5).is_err());
        assert!(compute_sizing(&curv(vec![]), 1.0, 2.0, 0.0).is_err());
    }
}
