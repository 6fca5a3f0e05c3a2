//! Linear solvers for the reduced stiffness system.

use log::{debug, warn};
use serde::{Deserialize, Serialize};

use super::sparse::CsrMatrix;
use crate::error::{Error, Result};
use crate::numeric::{dot, norm};

/// Solver controls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverSettings {
    /// Relative residual target ‖f − K·u‖ / ‖f‖.
    pub tolerance: f64,
    /// Iteration cap; `None` uses 10·n + 1000.
    pub max_iterations: Option<usize>,
    /// Systems with at most this many unknowns fall back to dense Cholesky
    /// when conjugate gradients fail.
    pub dense_fallback_limit: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            tolerance: 1e-10,
            max_iterations: None,
            dense_fallback_limit: 3000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    Trivial,
    Pcg,
    Cholesky,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    pub method: SolveMethod,
    pub iterations: usize,
    /// True relative residual of the returned solution.
    pub relative_residual: f64,
    pub free_dofs: usize,
}

fn true_residual(a: &CsrMatrix, x: &[f64], b: &[f64]) -> Vec<f64> {
    let ax = a.mul_vec(x);
    b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect()
}

/// Jacobi-preconditioned conjugate gradients. Returns the solution, the
/// iteration count and the true relative residual; convergence is
/// confirmed against the true residual, restarting from it if the
/// recursive residual has drifted.
pub fn pcg(a: &CsrMatrix, b: &[f64], tol: f64, max_iter: usize) -> (Vec<f64>, usize, f64) {
    let n = a.dim();
    let bnorm = norm(b);
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return (x, 0, 0.0);
    }
    let inv_diag: Vec<f64> = a
        .diagonal()
        .iter()
        .map(|&d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(ri, di)| ri * di).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    let mut it = 0;
    while it < max_iter {
        if norm(&r) <= tol * bnorm {
            r = true_residual(a, &x, b);
            let rel = norm(&r) / bnorm;
            if rel <= tol {
                return (x, it, rel);
            }
            debug!("pcg restart at iteration {it}, true residual {rel:e}");
            z = r.iter().zip(&inv_diag).map(|(ri, di)| ri * di).collect();
            p.clone_from(&z);
            rz = dot(&r, &z);
        }
        a.mul_vec_into(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            break;
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
        it += 1;
    }
    let rel = norm(&true_residual(a, &x, b)) / bnorm;
    (x, it, rel)
}

/// Solves the SPD system `a·x = b`, PCG first and dense Cholesky as the
/// fallback for small systems.
pub fn solve_spd(a: &CsrMatrix, b: &[f64], settings: &SolverSettings) -> Result<(Vec<f64>, SolveStats)> {
    let n = a.dim();
    if n == 0 || b.iter().all(|&v| v == 0.0) {
        return Ok((
            vec![0.0; n],
            SolveStats {
                method: SolveMethod::Trivial,
                iterations: 0,
                relative_residual: 0.0,
                free_dofs: n,
            },
        ));
    }
    let cap = settings.max_iterations.unwrap_or(10 * n + 1000);
    let (x, iterations, rel) = pcg(a, b, settings.tolerance, cap);
    if rel <= settings.tolerance {
        return Ok((
            x,
            SolveStats {
                method: SolveMethod::Pcg,
                iterations,
                relative_residual: rel,
                free_dofs: n,
            },
        ));
    }
    if n > settings.dense_fallback_limit {
        return Err(Error::NotConverged {
            iterations,
            residual: rel,
        });
    }
    warn!("conjugate gradients stalled at {rel:e}; using dense Cholesky");
    let chol = nalgebra::Cholesky::new(a.to_dense())
        .ok_or_else(|| Error::UnderConstrained("stiffness matrix is not positive definite".into()))?;
    let x: Vec<f64> = chol
        .solve(&nalgebra::DVector::from_column_slice(b))
        .iter()
        .copied()
        .collect();
    let rel = norm(&true_residual(a, &x, b)) / norm(b);
    if !(rel <= settings.tolerance) {
        return Err(Error::NotConverged {
            iterations,
            residual: rel,
        });
    }
    Ok((
        x,
        SolveStats {
            method: SolveMethod::Cholesky,
            iterations,
            relative_residual: rel,
            free_dofs: n,
        },
    ))
}
