//! Log-space Gaussian convolution on a periodic grid.
//!
//! The kinetic solver works on `L = ln u = -psi/eps`, whose within-cell
//! variation can reach many e-folds. Convolving `u` against the scaled
//! Gaussian therefore interpolates `L` piecewise-linearly and integrates each
//! cell exactly: on a cell where `L(y) = a + s y`,
//!
//!   int omega_sigma(y) e^{a + s y} dy
//!     = e^{a + s^2 sigma^2 / 2} * NormalMass((A - s sigma^2)/sigma, (B - s sigma^2)/sigma),
//!
//! which is evaluated stably through tail-aware erfc differences. The cell
//! masses are renormalized by the untilted truncated total so that constant
//! fields are exact fixed points.

use crate::error::{Error, Result};
use crate::special::{ln_normal_mass, LseAcc};
use rayon::prelude::*;

/// Kernel truncation radius in units of sigma.
const CUTOFF_SIGMAS: f64 = 8.0;

/// ln of (omega_sigma * exp(L))(x_i) for every node of a periodic grid.
///
/// `sigma == 0` is the point-mass limit: the convolution is the identity.
pub fn log_conv_periodic(log_u: &[f64], dx: f64, sigma: f64) -> Result<Vec<f64>> {
    let n = log_u.len();
    if sigma == 0.0 {
        return Ok(log_u.to_vec());
    }
    if !(sigma > 0.0 && dx > 0.0) {
        return Err(Error::InvalidParam(format!(
            "log_conv_periodic: sigma = {sigma}, dx = {dx}"
        )));
    }
    // largest |slope| of L, to widen the cutoff for the tilted mean
    let mut s_max = 0.0f64;
    for j in 0..n {
        let a = log_u[j];
        let b = log_u[(j + 1) % n];
        if a.is_finite() && b.is_finite() {
            s_max = s_max.max(((b - a) / dx).abs());
        }
    }
    let radius = CUTOFF_SIGMAS * sigma + s_max * sigma * sigma;
    let m_cells = (radius / dx).ceil() as usize + 1;
    if 2 * m_cells + 2 >= n {
        return Err(Error::Unsupported(format!(
            "convolution radius {radius:.3} does not fit the periodic domain \
             ({n} cells of dx = {dx:.4})"
        )));
    }

    // untilted truncated mass over the same cell range, for renormalization
    let ln_total = ln_normal_mass(
        -(m_cells as f64) * dx / sigma,
        m_cells as f64 * dx / sigma,
    );

    let out: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = LseAcc::new();
            for m in -(m_cells as isize)..(m_cells as isize) {
                // cell y in [m dx, (m+1) dx]; L(x_i - y) runs linearly from
                // log_u[i-m] at the left edge to log_u[i-m-1] at the right
                let jl = (i as isize - m).rem_euclid(n as isize) as usize;
                let jr = (i as isize - m - 1).rem_euclid(n as isize) as usize;
                let mut l0 = log_u[jl];
                let mut l1 = log_u[jr];
                if l0 == f64::NEG_INFINITY && l1 == f64::NEG_INFINITY {
                    continue;
                }
                // one vanishing endpoint: steep but finite surrogate slope
                if l0 == f64::NEG_INFINITY {
                    l0 = l1 - 700.0;
                }
                if l1 == f64::NEG_INFINITY {
                    l1 = l0 - 700.0;
                }
                let s = (l1 - l0) / dx;
                let y0 = m as f64 * dx;
                let shift = s * sigma * sigma;
                let term = l0 - s * y0
                    + 0.5 * s * s * sigma * sigma
                    + ln_normal_mass((y0 - shift) / sigma, (y0 + dx - shift) / sigma);
                acc.add(term);
            }
            acc.value() - ln_total
        })
        .collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;

    #[test]
    fn constant_is_exact_fixed_point() {
        let log_u = vec![-3.25; 64];
        let out = log_conv_periodic(&log_u, 0.1, 0.17).unwrap();
        for v in out {
            assert!((v + 3.25).abs() < 1e-13);
        }
    }

    #[test]
    fn point_mass_is_identity() {
        let log_u: Vec<f64> = (0..32).map(|i| -((i as f64) * 0.3 - 2.0).abs()).collect();
        let out = log_conv_periodic(&log_u, 0.05, 0.0).unwrap();
        assert_eq!(out, log_u);
    }

    #[test]
    fn linear_log_field_shifts_by_mgf() {
        // if L = s x (locally linear), conv multiplies u by exp(s^2 sigma^2/2);
        // use a periodic tent and check deep inside one linear flank
        let n = 256;
        let dx = 0.02;
        let s = 3.0;
        let log_u: Vec<f64> = (0..n)
            .map(|i| {
                let x = i as f64 * dx;
                let half = n as f64 * dx / 2.0;
                -s * (x - half).abs()
            })
            .collect();
        let sigma = 0.06;
        let out = log_conv_periodic(&log_u, dx, sigma).unwrap();
        let expect_gain = 0.5 * s * s * sigma * sigma;
        // a node far from both kinks
        let i = n / 4;
        assert!(
            (out[i] - log_u[i] - expect_gain).abs() < 1e-10,
            "gain = {} vs {expect_gain}",
            out[i] - log_u[i]
        );
    }

    #[test]
    fn matches_fine_quadrature_on_smooth_data() {
        let n = 128;
        let dx = 0.1;
        let len = n as f64 * dx;
        let sigma = 0.22;
        let psi = |x: f64| 0.7 * (1.0 - (2.0 * std::f64::consts::PI * x / len).cos());
        let log_u: Vec<f64> = (0..n).map(|i| -psi(i as f64 * dx)).collect();
        let out = log_conv_periodic(&log_u, dx, sigma).unwrap();
        // reference: adaptive quadrature against the same piecewise-linear L
        let pl = |x: f64| {
            let s = (x / dx).rem_euclid(n as f64);
            let j = s.floor() as usize % n;
            let t = s - s.floor();
            log_u[j] * (1.0 - t) + log_u[(j + 1) % n] * t
        };
        for i in [0usize, 17, 60, 101] {
            let xi = i as f64 * dx;
            let w = 8.0 * sigma;
            let refv = quad::adaptive(
                |y: f64| {
                    (-0.5 * (y / sigma) * (y / sigma)).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
                        * pl(xi - y).exp()
                },
                -w,
                w,
                1e-13,
            )
            .unwrap();
            assert!(
                (out[i] - refv.ln()).abs() < 1e-9,
                "node {i}: {} vs {}",
                out[i],
                refv.ln()
            );
        }
    }

    #[test]
    fn domain_too_narrow_is_rejected() {
        let log_u = vec![0.0; 20];
        assert!(log_conv_periodic(&log_u, 0.01, 1.0).is_err());
    }
}
