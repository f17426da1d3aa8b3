//! Solver for `d_t psi + H(d_x psi) = 0` on a periodic 1-D grid:
//! WENO5 one-sided derivatives, Lax-Friedrichs numerical Hamiltonian,
//! TVD-RK3 (Shu-Osher) time stepping.

pub mod selfsim;
pub mod weno;

pub use selfsim::{self_similar_check, SelfSimilarReport, SelfSimilarSpec};
pub use weno::weno5_reconstruct;

use crate::error::{Error, Result};
use crate::grid::GridField;
use crate::hamiltonian::HamiltonianTable;
use std::sync::Arc;

/// Hamiltonian supplied to the solver: a sampled table (with root-solve
/// fallback outside its range) or a direct callable.
#[derive(Clone)]
pub enum Hamiltonian {
    Table(Arc<HamiltonianTable>),
    Callable(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl Hamiltonian {
    pub fn callable<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        Self::Callable(Arc::new(f))
    }

    pub fn eval(&self, p: f64) -> Result<f64> {
        match self {
            Self::Table(t) => t.eval(p),
            Self::Callable(f) => Ok(f(p)),
        }
    }
}

impl std::fmt::Debug for Hamiltonian {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Table(t) => write!(f, "Hamiltonian::Table(p_max = {})", t.p_max()),
            Self::Callable(_) => write!(f, "Hamiltonian::Callable"),
        }
    }
}

/// Run configuration for [`integrate`].
///
/// `alpha = Some(a)` fixes the Lax-Friedrichs bound (and hence dt) for the
/// whole run; `alpha = None` re-derives it each step from the realized
/// derivative range via the table slopes, which keeps long subdiffusive runs
/// affordable once the profile flattens.
#[derive(Clone, Debug)]
pub struct HJRunConfig {
    pub cfl: f64,
    pub t_end: f64,
    pub snapshot_times: Vec<f64>,
    pub hamiltonian: Hamiltonian,
    pub alpha: Option<f64>,
}

impl HJRunConfig {
    pub fn new(hamiltonian: Hamiltonian, t_end: f64) -> Self {
        Self {
            cfl: 0.4,
            t_end,
            snapshot_times: default_snapshots(t_end),
            hamiltonian,
            alpha: None,
        }
    }

    pub fn with_cfl(mut self, cfl: f64) -> Self {
        self.cfl = cfl;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn with_snapshots(mut self, times: Vec<f64>) -> Self {
        self.snapshot_times = times;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(Error::InvalidParam(format!(
                "cfl = {} must lie in (0, 1)",
                self.cfl
            )));
        }
        if !(self.t_end > 0.0) {
            return Err(Error::InvalidParam(format!(
                "t_end = {} must be > 0",
                self.t_end
            )));
        }
        if self.snapshot_times.is_empty() {
            return Err(Error::InvalidParam("empty snapshot list".into()));
        }
        let mut prev = -f64::EPSILON;
        for &t in &self.snapshot_times {
            if t < prev {
                return Err(Error::InvalidParam("snapshot times must be sorted".into()));
            }
            if t < 0.0 || t > self.t_end * (1.0 + 1e-12) {
                return Err(Error::InvalidParam(format!(
                    "snapshot time {t} outside [0, {}]",
                    self.t_end
                )));
            }
            prev = t;
        }
        if let Some(a) = self.alpha {
            if a < 0.0 {
                return Err(Error::InvalidParam(format!("alpha = {a} must be >= 0")));
            }
        } else if matches!(self.hamiltonian, Hamiltonian::Callable(_)) {
            return Err(Error::InvalidParam(
                "a callable Hamiltonian needs an explicit alpha bound".into(),
            ));
        }
        Ok(())
    }
}

/// 20 snapshot times at regular intervals in ln(t), spanning four decades
/// below t_end.
pub fn default_snapshots(t_end: f64) -> Vec<f64> {
    let n = 20;
    let t0 = t_end * 1e-4;
    (0..n)
        .map(|k| t0 * (t_end / t0).powf(k as f64 / (n - 1) as f64))
        .collect()
}

/// Lax-Friedrichs numerical Hamiltonian
/// `H((p- + p+)/2) - alpha (p+ - p-)/2`; consistent when p- = p+.
pub fn lax_friedrichs_hamiltonian<H: Fn(f64) -> Result<f64>>(
    p_minus: f64,
    p_plus: f64,
    hamiltonian: H,
    alpha: f64,
) -> Result<f64> {
    Ok(hamiltonian(0.5 * (p_minus + p_plus))? - 0.5 * alpha * (p_plus - p_minus))
}

fn rhs(field: &GridField, h: &Hamiltonian, alpha: f64) -> Result<Vec<f64>> {
    let (pm, pp) = weno5_reconstruct(field)?;
    let mut out = vec![0.0; field.grid.n_cells];
    for i in 0..out.len() {
        out[i] = -lax_friedrichs_hamiltonian(pm[i], pp[i], |p| h.eval(p), alpha)?;
    }
    Ok(out)
}

fn euler_combine(base: &GridField, c0: f64, stage: &GridField, dt: f64, l: &[f64]) -> GridField {
    let values = base
        .values
        .iter()
        .zip(stage.values.iter().zip(l))
        .map(|(b, (s, li))| c0 * b + (1.0 - c0) * (s + dt * li))
        .collect();
    GridField {
        grid: base.grid,
        values,
        time: base.time,
    }
}

fn rk3_step(field: &GridField, dt: f64, h: &Hamiltonian, alpha: f64) -> Result<GridField> {
    let l0 = rhs(field, h, alpha)?;
    let u1 = euler_combine(field, 0.0, field, dt, &l0);
    let l1 = rhs(&u1, h, alpha)?;
    let u2 = euler_combine(field, 0.75, &u1, dt, &l1);
    let l2 = rhs(&u2, h, alpha)?;
    let mut out = euler_combine(field, 1.0 / 3.0, &u2, dt, &l2);
    out.time = field.time + dt;
    Ok(out)
}

/// One TVD-RK3 step under the configured CFL bound.
pub fn rk3_advance(field: &GridField, dt: f64, config: &HJRunConfig) -> Result<GridField> {
    config.validate()?;
    let alpha = match config.alpha {
        Some(a) => a,
        None => step_alpha(field, config)?,
    };
    let limit = config.cfl * field.grid.dx() / alpha.max(1e-12);
    if dt > limit * (1.0 + 1e-9) {
        return Err(Error::CflViolation { dt, limit });
    }
    let out = rk3_step(field, dt, &config.hamiltonian, alpha)?;
    check_finite(&out)?;
    Ok(out)
}

fn check_finite(field: &GridField) -> Result<()> {
    for (i, v) in field.values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::Blowup {
                t: field.time,
                node: i,
                context: "Lax-Friedrichs step produced a non-finite value".into(),
            });
        }
    }
    Ok(())
}

/// Dissipation bound for the current step: max |H'| over the realized
/// derivative range (table slopes), inflated 10%.
fn step_alpha(field: &GridField, config: &HJRunConfig) -> Result<f64> {
    match (&config.hamiltonian, config.alpha) {
        (_, Some(a)) => Ok(a),
        (Hamiltonian::Table(t), None) => {
            let (pm, pp) = weno5_reconstruct(field)?;
            let lo = pm.iter().chain(&pp).copied().fold(f64::INFINITY, f64::min);
            let hi = pm
                .iter()
                .chain(&pp)
                .copied()
                .fold(f64::NEG_INFINITY, f64::max);
            Ok((1.1 * t.slope_bound(lo, hi)).max(1e-12))
        }
        (Hamiltonian::Callable(_), None) => Err(Error::InvalidParam(
            "a callable Hamiltonian needs an explicit alpha bound".into(),
        )),
    }
}

/// March the field to `t_end`, returning one snapshot per requested time
/// (requested times are hit exactly by shortening the final substep).
pub fn integrate(initial: &GridField, config: &HJRunConfig) -> Result<Vec<GridField>> {
    config.validate()?;
    check_finite(initial)?;
    if !initial.grid.periodic {
        return Err(Error::NonPeriodic("integrate"));
    }
    let dx = initial.grid.dx();
    let mut field = initial.clone();
    field.time = 0.0;
    let mut snapshots = Vec::with_capacity(config.snapshot_times.len());
    for &target in &config.snapshot_times {
        while field.time < target * (1.0 - 1e-14) {
            let alpha = step_alpha(&field, config)?;
            let mut dt = config.cfl * dx / alpha.max(1e-12);
            dt = dt.min(target - field.time);
            field = rk3_step(&field, dt, &config.hamiltonian, alpha)?;
            check_finite(&field)?;
        }
        let mut snap = field.clone();
        snap.time = target;
        snapshots.push(snap);
    }
    Ok(snapshots)
}

/// Largest increase of the running max across consecutive snapshots, and the
/// largest pointwise increase; both are ~0 for decaying Hamiltonians
/// (H >= 0, H(0) = 0) up to Lax-Friedrichs dissipation.
pub fn decay_violations(snapshots: &[GridField]) -> (f64, f64) {
    let mut max_viol = 0.0f64;
    let mut point_viol = 0.0f64;
    for w in snapshots.windows(2) {
        max_viol = max_viol.max(w[1].max() - w[0].max());
        for (a, b) in w[0].values.iter().zip(&w[1].values) {
            point_viol = point_viol.max(b - a);
        }
    }
    (max_viol, point_viol)
}

/// Largest relative growth of max |D+ psi| across consecutive snapshots.
pub fn lipschitz_growth(snapshots: &[GridField]) -> f64 {
    let norms: Vec<f64> = snapshots
        .iter()
        .map(|s| {
            s.forward_differences()
                .iter()
                .fold(0.0f64, |acc, d| acc.max(d.abs()))
        })
        .collect();
    let mut worst = 0.0f64;
    for w in norms.windows(2) {
        if w[0] > 0.0 {
            worst = worst.max(w[1] / w[0] - 1.0);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid1D;

    #[test]
    fn lf_consistency_and_formula() {
        // consistency: p- = p+ = 1 for H = p^2/2
        let v = lax_friedrichs_hamiltonian(1.0, 1.0, |p| Ok(0.5 * p * p), 2.0).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
        // direct formula: H = 0, alpha = 1
        let v = lax_friedrichs_hamiltonian(0.0, 2.0, |_| Ok(0.0), 1.0).unwrap();
        assert!((v + 1.0).abs() < 1e-15);
    }

    #[test]
    fn lf_monotone_when_alpha_dominates() {
        // nondecreasing in p-, nonincreasing in p+ for alpha >= sup |H'|
        let h = |p: f64| Ok(0.5 * p * p);
        let alpha = 3.0; // |p| <= 3 below
        let eps = 1e-6;
        let mut k = 0u32;
        for pm in [-2.5f64, -0.7, 0.0, 1.3, 2.5] {
            for pp in [-2.5f64, -0.7, 0.0, 1.3, 2.5] {
                let base = lax_friedrichs_hamiltonian(pm, pp, h, alpha).unwrap();
                let dm = lax_friedrichs_hamiltonian(pm + eps, pp, h, alpha).unwrap();
                let dp = lax_friedrichs_hamiltonian(pm, pp + eps, h, alpha).unwrap();
                assert!(dm >= base - 1e-12);
                assert!(dp <= base + 1e-12);
                k += 1;
            }
        }
        assert_eq!(k, 25);
    }

    #[test]
    fn zero_hamiltonian_is_identity() {
        let g = Grid1D::periodic(0.0, 1.0, 32).unwrap();
        let f = GridField::from_fn(g, |x| (2.0 * std::f64::consts::PI * x).sin(), 0.0).unwrap();
        let cfg = HJRunConfig::new(Hamiltonian::callable(|_| 0.0), 1.0)
            .with_alpha(0.0)
            .with_snapshots(vec![0.5, 1.0]);
        let snaps = integrate(&f, &cfg).unwrap();
        for s in &snaps {
            assert!(s.sup_distance(&f).unwrap() < 1e-15);
        }
    }

    #[test]
    fn constants_are_fixed_points() {
        let g = Grid1D::periodic(0.0, 1.0, 24).unwrap();
        let f = GridField::constant(g, 2.5, 0.0);
        let cfg = HJRunConfig::new(Hamiltonian::callable(|p: f64| 0.5 * p * p), 0.5)
            .with_alpha(1.0)
            .with_snapshots(vec![0.5]);
        let snaps = integrate(&f, &cfg).unwrap();
        assert!(snaps[0].sup_distance(&f).unwrap() < 1e-14);
    }

    #[test]
    fn cfl_violation_detected() {
        let g = Grid1D::periodic(0.0, 1.0, 32).unwrap();
        let f = GridField::constant(g, 0.0, 0.0);
        let cfg = HJRunConfig::new(Hamiltonian::callable(|p| p), 1.0).with_alpha(1.0);
        let dt_bad = 2.0 * cfg.cfl * g.dx();
        assert!(matches!(
            rk3_advance(&f, dt_bad, &cfg),
            Err(Error::CflViolation { .. })
        ));
    }

    #[test]
    fn config_validation() {
        let h = Hamiltonian::callable(|_| 0.0);
        let mut cfg = HJRunConfig::new(h.clone(), 1.0).with_alpha(1.0);
        cfg.snapshot_times = vec![];
        assert!(integrate(
            &GridField::constant(Grid1D::periodic(0.0, 1.0, 16).unwrap(), 0.0, 0.0),
            &cfg
        )
        .is_err());
        let cfg = HJRunConfig::new(h.clone(), 1.0).with_alpha(1.0).with_cfl(1.5);
        assert!(cfg.validate().is_err());
        // callable without alpha is rejected
        let cfg = HJRunConfig::new(h, 1.0);
        assert!(cfg.validate().is_err());
    }
}
