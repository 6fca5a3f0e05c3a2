//! Element stiffness matrices and strain-displacement operators.

use nalgebra::{DMatrix, SMatrix};

use super::Material;
use crate::error::{Error, Result};
use crate::mesh::{hex, tet_signed_volume, ElementNodes, Point, VolumeMesh};

pub type Strain = [f64; 6];

/// Strain-displacement matrix rows in Voigt order (xx, yy, zz, xy, yz, zx)
/// with engineering shear strains, from physical shape-function gradients.
fn b_matrix(grad: &[[f64; 3]]) -> DMatrix<f64> {
    let n = grad.len();
    let mut b = DMatrix::zeros(6, 3 * n);
    for (i, g) in grad.iter().enumerate() {
        let c = 3 * i;
        b[(0, c)] = g[0];
        b[(1, c + 1)] = g[1];
        b[(2, c + 2)] = g[2];
        b[(3, c)] = g[1];
        b[(3, c + 1)] = g[0];
        b[(4, c + 1)] = g[2];
        b[(4, c + 2)] = g[1];
        b[(5, c)] = g[2];
        b[(5, c + 2)] = g[0];
    }
    b
}

/// Physical gradients of the hex shape functions at (ξ, η, ζ) and the
/// Jacobian determinant there.
fn hex_gradients(pts: &[Point; 8], xi: f64, eta: f64, zeta: f64) -> ([[f64; 3]; 8], f64) {
    let dn = hex::shape_derivatives(xi, eta, zeta);
    let j = hex::jacobian(pts, &dn);
    let det = j.determinant();
    let inv = j.try_inverse().unwrap_or_else(SMatrix::zeros);
    let mut g = [[0.0; 3]; 8];
    for (i, gi) in g.iter_mut().enumerate() {
        for (b, gb) in gi.iter_mut().enumerate() {
            *gb = (0..3).map(|a| inv[(b, a)] * dn[a][i]).sum();
        }
    }
    (g, det)
}

fn tet_gradients(p: &[Point; 4]) -> ([[f64; 3]; 4], f64) {
    let vol = tet_signed_volume(p);
    let m = nalgebra::Matrix3::from_columns(&[p[1] - p[0], p[2] - p[0], p[3] - p[0]]);
    let inv = m.try_inverse().unwrap_or_else(SMatrix::zeros);
    // Rows of inv are the gradients of the barycentric coordinates 1..3.
    let mut g = [[0.0; 3]; 4];
    for i in 1..4 {
        for a in 0..3 {
            g[i][a] = inv[(i - 1, a)];
            g[0][a] -= inv[(i - 1, a)];
        }
    }
    (g, vol)
}

const GAUSS: f64 = 0.577_350_269_189_625_8;

/// 24×24 hex8 stiffness by 2×2×2 Gauss quadrature. Errors report element 0;
/// [`element_stiffness`] substitutes the mesh index.
pub fn hex8_stiffness(pts: &[Point; 8], material: &Material) -> Result<DMatrix<f64>> {
    let d = material.elasticity_matrix();
    let mut k = DMatrix::zeros(24, 24);
    for &z in &[-GAUSS, GAUSS] {
        for &y in &[-GAUSS, GAUSS] {
            for &x in &[-GAUSS, GAUSS] {
                let (g, det) = hex_gradients(pts, x, y, z);
                if !(det > 0.0) {
                    return Err(Error::NonPositiveJacobian { element: 0, det });
                }
                let b = b_matrix(&g);
                let db = &d * &b;
                k += b.transpose() * db * det;
            }
        }
    }
    symmetrize(&mut k);
    Ok(k)
}

/// 12×12 constant-strain tet4 stiffness.
pub fn tet4_stiffness(pts: &[Point; 4], material: &Material) -> Result<DMatrix<f64>> {
    let (g, vol) = tet_gradients(pts);
    if !(vol > 0.0) {
        return Err(Error::NonPositiveJacobian { element: 0, det: vol });
    }
    let b = b_matrix(&g);
    let d = material.elasticity_matrix();
    let mut k = b.transpose() * (&d * &b) * vol;
    symmetrize(&mut k);
    Ok(k)
}

fn symmetrize(k: &mut DMatrix<f64>) {
    let n = k.nrows();
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (k[(i, j)] + k[(j, i)]);
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
}

/// Stiffness of mesh element `e` (hexes first, then tets).
pub fn element_stiffness(mesh: &VolumeMesh, e: usize, material: &Material) -> Result<DMatrix<f64>> {
    let nh = mesh.hexes().len();
    let res = match mesh.element(e) {
        ElementNodes::Hex8(_) => hex8_stiffness(&mesh.hex_points(e), material),
        ElementNodes::Tet4(_) => tet4_stiffness(&mesh.tet_points(e - nh), material),
    };
    res.map_err(|err| match err {
        Error::NonPositiveJacobian { det, .. } => Error::NonPositiveJacobian { element: e, det },
        other => other,
    })
}

/// Strain at the element centre from the element's nodal displacements.
pub fn element_center_strain(mesh: &VolumeMesh, e: usize, u: &[f64]) -> Strain {
    let nh = mesh.hexes().len();
    let (b, nodes): (DMatrix<f64>, &[usize]) = match mesh.element(e) {
        ElementNodes::Hex8(_) => {
            let (g, _) = hex_gradients(&mesh.hex_points(e), 0.0, 0.0, 0.0);
            (b_matrix(&g), &mesh.hexes()[e][..])
        }
        ElementNodes::Tet4(_) => {
            let (g, _) = tet_gradients(&mesh.tet_points(e - nh));
            (b_matrix(&g), &mesh.tets()[e - nh][..])
        }
    };
    let mut strain = [0.0; 6];
    for (r, s) in strain.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (i, &n) in nodes.iter().enumerate() {
            for a in 0..3 {
                acc += b[(r, 3 * i + a)] * u[3 * n + a];
            }
        }
        *s = acc;
    }
    strain
}
