//! Discrete mean curvature from the cotangent Laplacian with mixed Voronoi
//! areas.

use log::warn;
use rayon::prelude::*;

use crate::mesh::topology::{boundary_vertices, non_manifold_vertices, vertex_faces, vertex_neighbors};
use crate::mesh::{TriangleMesh, Vec3};

/// Per-vertex absolute mean curvature in 1/mm.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureEstimate {
    pub values: Vec<f64>,
    /// Vertices assigned 0 because their neighbourhood is non-manifold.
    pub non_manifold: usize,
    /// Vertices assigned 0 because their mixed area vanishes.
    pub degenerate: usize,
}

impl CurvatureEstimate {
    pub fn mean(&self) -> f64 {
        if self.values.is_empty() {
            return 0.0;
        }
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

fn cot(u: &Vec3, v: &Vec3) -> f64 {
    let s = u.cross(v).norm();
    if s == 0.0 {
        0.0
    } else {
        u.dot(v) / s
    }
}

/// Mean-curvature normal contribution and mixed area of vertex `v`.
fn vertex_curvature(mesh: &TriangleMesh, v: usize, faces_of: &[usize]) -> Option<f64> {
    let p = mesh.vertices();
    let mut lap = Vec3::zeros();
    let mut area = 0.0;
    for &f in faces_of {
        let face = mesh.faces()[f];
        let k = face.iter().position(|&x| x == v).expect("incident face");
        let (i, j, l) = (face[k], face[(k + 1) % 3], face[(k + 2) % 3]);
        let (xi, xj, xl) = (p[i], p[j], p[l]);
        // Angles at j and l.
        let cot_j = cot(&(xi - xj), &(xl - xj));
        let cot_l = cot(&(xi - xl), &(xj - xl));
        lap += (xl - xi) * cot_j + (xj - xi) * cot_l;
        let tri_area = 0.5 * (xj - xi).cross(&(xl - xi)).norm();
        let obtuse_i = (xj - xi).dot(&(xl - xi)) < 0.0;
        let obtuse_other = (xi - xj).dot(&(xl - xj)) < 0.0 || (xi - xl).dot(&(xj - xl)) < 0.0;
        area += if obtuse_i {
            tri_area / 2.0
        } else if obtuse_other {
            tri_area / 4.0
        } else {
            ((xl - xi).norm_squared() * cot_j + (xj - xi).norm_squared() * cot_l) / 8.0
        };
    }
    if !(area > 0.0) {
        return None;
    }
    // lap / (2A) is the mean-curvature normal 2H·n.
    Some((lap / (2.0 * area)).norm() / 2.0)
}

/// Absolute mean curvature at every vertex. Boundary vertices take the value
/// of their nearest interior neighbour (0 if they have none); non-manifold
/// vertices and vertices with zero mixed area get 0 with a warning.
pub fn estimate_curvature(mesh: &TriangleMesh) -> CurvatureEstimate {
    let n = mesh.vertex_count();
    let faces = mesh.faces();
    let vf = vertex_faces(n, faces);
    let boundary = boundary_vertices(n, faces);
    let non_manifold = non_manifold_vertices(n, faces);
    let raw: Vec<Option<f64>> = (0..n)
        .into_par_iter()
        .map(|v| {
            if non_manifold[v] || boundary[v] || vf[v].is_empty() {
                Some(0.0)
            } else {
                vertex_curvature(mesh, v, &vf[v])
            }
        })
        .collect();
    let degenerate = raw.iter().filter(|r| r.is_none()).count();
    let mut values: Vec<f64> = raw.into_iter().map(|r| r.unwrap_or(0.0)).collect();
    let nbrs = vertex_neighbors(n, faces);
    let p = mesh.vertices();
    let interior_values = values.clone();
    for v in 0..n {
        if !boundary[v] || non_manifold[v] {
            continue;
        }
        let nearest = nbrs[v]
            .iter()
            .filter(|&&w| !boundary[w] && !non_manifold[w])
            .map(|&w| ((p[w] - p[v]).norm_squared(), w))
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        values[v] = nearest.map_or(0.0, |(_, w)| interior_values[w]);
    }
    let nm = non_manifold.iter().filter(|&&b| b).count();
    if nm > 0 {
        warn!("{nm} non-manifold vertices assigned zero curvature");
    }
    if degenerate > 0 {
        warn!("{degenerate} vertices with zero mixed area assigned zero curvature");
    }
    CurvatureEstimate {
        values,
        non_manifold: nm,
        degenerate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primitives::{icosphere, square_grid};

    #[test]
    fn sphere_curvature_is_inverse_radius() {
        let c = estimate_curvature(&icosphere(10.0, 3));
        assert!((c.mean() - 0.1).abs() < 0.01);
        for v in &c.values {
            assert!((v - 0.1).abs() < 0.02);
        }
        let big = estimate_curvature(&icosphere(20.0, 3));
        assert!((c.mean() / big.mean() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn flat_grid_is_zero() {
        let g = square_grid(5, 5, 1.0);
        let c = estimate_curvature(&g);
        assert!(c.values.iter().all(|&v| v.abs() < 1e-12));
    }
}
