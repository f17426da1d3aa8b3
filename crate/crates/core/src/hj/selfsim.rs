//! Self-similar decay diagnostics for power-shape initial data.
//!
//! With the small-p Hamiltonian `H(p) ~ A |p|^q`, the ansatz
//! `psi(t,x) = c(t) |x - x_c|^alpha` closes exactly for `alpha = q/(q-1)`
//! and reduces to the amplitude equation `c' = -kappa c^q` with
//! `kappa = A alpha^q`, whose solution decays like `t^{-1/(q-1)}`.

use crate::error::{Error, Result};
use crate::fit;
use crate::grid::GridField;
use crate::hamiltonian::asymptote_constant;
use serde::Serialize;

#[derive(Clone, Copy, Debug)]
pub struct SelfSimilarSpec {
    /// Exponent q of the effective power Hamiltonian A |p|^q.
    pub q: f64,
    /// Prefactor A.
    pub prefactor: f64,
    /// Initial amplitude c0 and profile center.
    pub c0: f64,
    pub x_center: f64,
}

impl SelfSimilarSpec {
    /// Subdiffusive case: `H ~ (sigma p)^{2/mu} K_mu`, so q = 2/mu.
    pub fn subdiffusive(mu: f64, sigma: f64, c0: f64, x_center: f64) -> Self {
        let q = 2.0 / mu;
        Self {
            q,
            prefactor: sigma.powf(q) * asymptote_constant(mu),
            c0,
            x_center,
        }
    }

    /// Diffusive control: `H = K(e^{sigma^2 p^2/2} - 1) ~ (K sigma^2 / 2) p^2`.
    pub fn diffusive(rate: f64, sigma: f64, c0: f64, x_center: f64) -> Self {
        Self {
            q: 2.0,
            prefactor: 0.5 * rate * sigma * sigma,
            c0,
            x_center,
        }
    }

    /// Shape exponent alpha = q/(q-1); equals 2/(2-mu) in the subdiffusive case.
    pub fn shape_exponent(&self) -> f64 {
        self.q / (self.q - 1.0)
    }

    /// kappa of the amplitude equation c' = -kappa c^q.
    pub fn kappa(&self) -> f64 {
        self.prefactor * self.shape_exponent().powf(self.q)
    }

    /// Closed-form amplitude c(t) of the ODE oracle.
    pub fn ode_amplitude(&self, t: f64) -> f64 {
        let qm1 = self.q - 1.0;
        (self.c0.powf(-qm1) + self.kappa() * qm1 * t).powf(-1.0 / qm1)
    }

    /// Initial profile c0 |x - x_c|^alpha.
    pub fn initial_profile(&self, x: f64) -> f64 {
        self.c0 * (x - self.x_center).abs().powf(self.shape_exponent())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfSimilarReport {
    /// Log-log slope of the measured amplitude over the fit window.
    pub fitted_exponent: f64,
    /// Same fit applied to the ODE-oracle amplitude at the same times.
    pub oracle_exponent: f64,
    /// Asymptotic decay exponent -1/(q-1) (equals -mu/(2-mu)).
    pub asymptotic_exponent: f64,
    /// Max deviation of amplitude-normalized profiles across the window,
    /// excluding the numerical-diffusion zone where the reference profile
    /// is below `collapse_floor`.
    pub max_collapse_deviation: f64,
    pub collapse_floor: f64,
    /// (t, measured amplitude, oracle amplitude) triples of the fit window.
    pub amplitudes: Vec<(f64, f64, f64)>,
}

/// Analyze snapshots from an [`super::integrate`] run started from the
/// spec's power-shape initial profile. The fit window is the upper half of
/// the positive-time snapshots (log-spaced sampling makes that the late-time
/// decades).
pub fn self_similar_check(
    snapshots: &[GridField],
    spec: &SelfSimilarSpec,
) -> Result<SelfSimilarReport> {
    let usable: Vec<&GridField> = snapshots.iter().filter(|s| s.time > 0.0).collect();
    if usable.len() < 8 {
        return Err(Error::InsufficientSnapshots {
            need: 8,
            got: usable.len(),
        });
    }
    let window = &usable[usable.len() / 2..];

    // amplitude = max psi / max of the unit basis |x - x_c|^alpha
    let grid = window[0].grid;
    let basis_max = (0..grid.n_cells)
        .map(|i| (grid.node(i) - spec.x_center).abs().powf(spec.shape_exponent()))
        .fold(0.0f64, f64::max);
    let mut ts = Vec::new();
    let mut cs = Vec::new();
    let mut oracle = Vec::new();
    for s in window {
        ts.push(s.time);
        cs.push(s.max() / basis_max);
        oracle.push(spec.ode_amplitude(s.time));
    }
    let fitted_exponent = fit::loglog_slope(&ts, &cs);
    let oracle_exponent = fit::loglog_slope(&ts, &oracle);

    let collapse_floor = 0.1;
    let reference: Vec<f64> = {
        let s = window[0];
        let m = s.max();
        s.values.iter().map(|v| v / m).collect()
    };
    let mut max_dev = 0.0f64;
    for s in &window[1..] {
        let m = s.max();
        for (i, v) in s.values.iter().enumerate() {
            if reference[i] >= collapse_floor {
                max_dev = max_dev.max((v / m - reference[i]).abs());
            }
        }
    }

    Ok(SelfSimilarReport {
        fitted_exponent,
        oracle_exponent,
        asymptotic_exponent: -1.0 / (spec.q - 1.0),
        max_collapse_deviation: max_dev,
        collapse_floor,
        amplitudes: ts
            .iter()
            .zip(cs.iter().zip(&oracle))
            .map(|(t, (c, o))| (*t, *c, *o))
            .collect(),
    })
}
