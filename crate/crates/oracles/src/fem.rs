//! Textbook hex8 stiffness written in index notation, plus dense assembly.

use crate::P3;

/// Natural coordinates of the eight corners, counter-clockwise bottom face
/// then top face.
const CORNERS: [[f64; 3]; 8] = [
    [-1.0, -1.0, -1.0],
    [1.0, -1.0, -1.0],
    [1.0, 1.0, -1.0],
    [-1.0, 1.0, -1.0],
    [-1.0, -1.0, 1.0],
    [1.0, -1.0, 1.0],
    [1.0, 1.0, 1.0],
    [-1.0, 1.0, 1.0],
];

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn inv3(m: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let d = det3(m);
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            // Cofactor of m[j][i].
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            r[i][j] = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) / d;
        }
    }
    r
}

/// 24×24 stiffness of a trilinear hexahedron, 2×2×2 Gauss:
/// K[3i+a][3j+b] = ∫ λ ∂aNi ∂bNj + μ ∂bNi ∂aNj + μ δab ∇Ni·∇Nj.
pub fn hex8_stiffness(x: &[P3; 8], young: f64, poisson: f64) -> Vec<Vec<f64>> {
    let lambda = young * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson));
    let mu = young / (2.0 * (1.0 + poisson));
    let g = 1.0 / 3f64.sqrt();
    let mut k = vec![vec![0.0; 24]; 24];
    for gp in 0..8 {
        let q = [CORNERS[gp][0] * g, CORNERS[gp][1] * g, CORNERS[gp][2] * g];
        // dN/dξ for each node.
        let mut dn = [[0.0; 3]; 8];
        for (i, c) in CORNERS.iter().enumerate() {
            let f = [1.0 + c[0] * q[0], 1.0 + c[1] * q[1], 1.0 + c[2] * q[2]];
            dn[i] = [
                0.125 * c[0] * f[1] * f[2],
                0.125 * f[0] * c[1] * f[2],
                0.125 * f[0] * f[1] * c[2],
            ];
        }
        // jac[r][s] = dx_s / dξ_r
        let mut jac = [[0.0; 3]; 3];
        for i in 0..8 {
            for r in 0..3 {
                for s in 0..3 {
                    jac[r][s] += dn[i][r] * x[i][s];
                }
            }
        }
        let det = det3(jac);
        let inv = inv3(jac);
        let mut grad = [[0.0; 3]; 8];
        for i in 0..8 {
            for a in 0..3 {
                grad[i][a] = (0..3).map(|r| inv[a][r] * dn[i][r]).sum();
            }
        }
        for i in 0..8 {
            for j in 0..8 {
                let gg: f64 = (0..3).map(|c| grad[i][c] * grad[j][c]).sum();
                for a in 0..3 {
                    for b in 0..3 {
                        let mut v = lambda * grad[i][a] * grad[j][b] + mu * grad[i][b] * grad[j][a];
                        if a == b {
                            v += mu * gg;
                        }
                        k[3 * i + a][3 * j + b] += v * det;
                    }
                }
            }
        }
    }
    k
}

/// Dense global stiffness from hex8 elements.
pub fn assemble_dense(nodes: &[P3], hexes: &[[usize; 8]], young: f64, poisson: f64) -> Vec<Vec<f64>> {
    let n = 3 * nodes.len();
    let mut k = vec![vec![0.0; n]; n];
    for h in hexes {
        let x = h.map(|i| nodes[i]);
        let ke = hex8_stiffness(&x, young, poisson);
        for i in 0..8 {
            for j in 0..8 {
                for a in 0..3 {
                    for b in 0..3 {
                        k[3 * h[i] + a][3 * h[j] + b] += ke[3 * i + a][3 * j + b];
                    }
                }
            }
        }
    }
    k
}

pub fn matvec(k: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    k.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}
