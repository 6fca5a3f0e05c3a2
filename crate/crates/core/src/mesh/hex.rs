//! Trilinear 8-node hexahedron reference map.
//!
//! Node order follows the usual C3D8 / VTK_HEXAHEDRON convention: nodes 0-3
//! form the bottom face counter-clockwise seen from +ζ, nodes 4-7 the top.

use super::Point;
use nalgebra::Matrix3;

pub const XI: [f64; 8] = [-1.0, 1.0, 1.0, -1.0, -1.0, 1.0, 1.0, -1.0];
pub const ETA: [f64; 8] = [-1.0, -1.0, 1.0, 1.0, -1.0, -1.0, 1.0, 1.0];
pub const ZETA: [f64; 8] = [-1.0, -1.0, -1.0, -1.0, 1.0, 1.0, 1.0, 1.0];

/// The six faces, each listed counter-clockwise seen from outside.
pub const FACES: [[usize; 4]; 6] = [
    [0, 3, 2, 1],
    [4, 5, 6, 7],
    [0, 1, 5, 4],
    [1, 2, 6, 5],
    [2, 3, 7, 6],
    [3, 0, 4, 7],
];

pub const EDGES: [[usize; 2]; 12] = [
    [0, 1],
    [1, 2],
    [2, 3],
    [3, 0],
    [4, 5],
    [5, 6],
    [6, 7],
    [7, 4],
    [0, 4],
    [1, 5],
    [2, 6],
    [3, 7],
];

pub fn shape_functions(xi: f64, eta: f64, zeta: f64) -> [f64; 8] {
    let mut n = [0.0; 8];
    for i in 0..8 {
        n[i] = 0.125 * (1.0 + XI[i] * xi) * (1.0 + ETA[i] * eta) * (1.0 + ZETA[i] * zeta);
    }
    n
}

/// Derivatives of the shape functions; row `a` holds ∂N/∂(ξ, η, ζ)[a].
pub fn shape_derivatives(xi: f64, eta: f64, zeta: f64) -> [[f64; 8]; 3] {
    let mut d = [[0.0; 8]; 3];
    for i in 0..8 {
        d[0][i] = 0.125 * XI[i] * (1.0 + ETA[i] * eta) * (1.0 + ZETA[i] * zeta);
        d[1][i] = 0.125 * (1.0 + XI[i] * xi) * ETA[i] * (1.0 + ZETA[i] * zeta);
        d[2][i] = 0.125 * (1.0 + XI[i] * xi) * (1.0 + ETA[i] * eta) * ZETA[i];
    }
    d
}

/// Jacobian J[a][b] = ∂x_b/∂ξ_a.
pub fn jacobian(coords: &[Point; 8], dn: &[[f64; 8]; 3]) -> Matrix3<f64> {
    let mut j = Matrix3::zeros();
    for a in 0..3 {
        for i in 0..8 {
            for b in 0..3 {
                j[(a, b)] += dn[a][i] * coords[i][b];
            }
        }
    }
    j
}

/// Jacobian determinant at each of the 8 corners.
pub fn corner_jacobians(coords: &[Point; 8]) -> [f64; 8] {
    let mut out = [0.0; 8];
    for i in 0..8 {
        let dn = shape_derivatives(XI[i], ETA[i], ZETA[i]);
        out[i] = jacobian(coords, &dn).determinant();
    }
    out
}
