//! Fifth-order WENO reconstruction of one-sided derivatives for
//! Hamilton-Jacobi equations (Jiang-Shu weights on the difference field).
//!
//! The forward differences u_j = (psi_j - psi_{j-1})/dx are the exact cell
//! averages of d_x psi over [x_{j-1}, x_j]; the left-biased nodal derivative
//! p^- at x_i is the classical right-edge WENO5 reconstruction from cells
//! C_{i-2}..C_{i+2}, and p^+ is its mirror image.

use crate::error::{Error, Result};
use crate::grid::GridField;

/// Regularization of the smoothness indicators.
pub const WENO_EPS: f64 = 1e-6;

/// Right-edge value from five consecutive cell averages.
#[inline]
fn edge_value(v0: f64, v1: f64, v2: f64, v3: f64, v4: f64) -> f64 {
    let q0 = (2.0 * v0 - 7.0 * v1 + 11.0 * v2) / 6.0;
    let q1 = (-v1 + 5.0 * v2 + 2.0 * v3) / 6.0;
    let q2 = (2.0 * v2 + 5.0 * v3 - v4) / 6.0;

    let b0 = 13.0 / 12.0 * (v0 - 2.0 * v1 + v2).powi(2) + 0.25 * (v0 - 4.0 * v1 + 3.0 * v2).powi(2);
    let b1 = 13.0 / 12.0 * (v1 - 2.0 * v2 + v3).powi(2) + 0.25 * (v1 - v3).powi(2);
    let b2 = 13.0 / 12.0 * (v2 - 2.0 * v3 + v4).powi(2) + 0.25 * (3.0 * v2 - 4.0 * v3 + v4).powi(2);

    let a0 = 0.1 / ((WENO_EPS + b0) * (WENO_EPS + b0));
    let a1 = 0.6 / ((WENO_EPS + b1) * (WENO_EPS + b1));
    let a2 = 0.3 / ((WENO_EPS + b2) * (WENO_EPS + b2));
    let s = a0 + a1 + a2;
    (a0 * q0 + a1 * q1 + a2 * q2) / s
}

/// Left- and right-biased approximations of d_x psi at every node of a
/// periodic field.
pub fn weno5_reconstruct(field: &GridField) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = field.grid.n_cells;
    if !field.grid.periodic {
        return Err(Error::NonPeriodic("weno5_reconstruct"));
    }
    if n < 6 {
        return Err(Error::GridTooSmall { need: 6, got: n });
    }
    let dx = field.grid.dx();
    let psi = &field.values;
    // u[j] = cell average of psi' over [x_{j-1}, x_j]
    let u: Vec<f64> = (0..n)
        .map(|j| (psi[j] - psi[(j + n - 1) % n]) / dx)
        .collect();

    let at = |k: isize| u[k.rem_euclid(n as isize) as usize];
    let mut p_minus = vec![0.0; n];
    let mut p_plus = vec![0.0; n];
    for i in 0..n {
        let i = i as isize;
        p_minus[i as usize] = edge_value(at(i - 2), at(i - 1), at(i), at(i + 1), at(i + 2));
        p_plus[i as usize] = edge_value(at(i + 3), at(i + 2), at(i + 1), at(i), at(i - 1));
    }
    Ok((p_minus, p_plus))
}
