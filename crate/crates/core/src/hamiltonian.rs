//! The effective Hamiltonian `H(p)`: the unique `H >= 0` such that
//! `Phi_hat(H) = 1 / omega_hat(p)`, where `omega_hat(p) = exp(sigma^2 p^2 / 2)`
//! is the Gaussian moment generating function.
//!
//! Everything is solved in log space, `ln Phi_hat(H) = -sigma^2 p^2 / 2`,
//! so that large `|p|` only overflows where `H` itself leaves the f64 range.

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::special::gamma;
use crate::waiting::WaitingLaw;
use rayon::prelude::*;

/// Residual tolerance of the root refinement, in `ln Phi_hat` units.
const LOG_RESID_TOL: f64 = 1e-13;
/// Largest admissible `sigma^2 p^2 / 2` before `omega_hat` leaves f64 range.
const MAX_LOG_MGF: f64 = 700.0;

/// Gaussian moment generating function `int omega(z) exp(z p) dz = exp(sigma^2 p^2 / 2)`.
pub fn omega_mgf(p: f64, sigma: f64) -> Result<f64> {
    let e = ln_omega_mgf(p, sigma);
    if e > MAX_LOG_MGF {
        return Err(Error::Overflow(format!(
            "omega_hat exponent sigma^2 p^2/2 = {e:.1} exceeds the representable range"
        )));
    }
    Ok(e.exp())
}

/// `ln omega_hat(p) = sigma^2 p^2 / 2`.
pub fn ln_omega_mgf(p: f64, sigma: f64) -> f64 {
    0.5 * sigma * sigma * p * p
}

/// `K_mu = (2 Gamma(1-mu))^{-1/mu}`, the constant of the small-p equivalent
/// `H(p) ~ (sigma p)^{2/mu} K_mu`.
pub fn asymptote_constant(mu: f64) -> f64 {
    (2.0 * gamma(1.0 - mu)).powf(-1.0 / mu)
}

/// Small-p asymptote `(sigma p)^{2/mu} (2 Gamma(1-mu))^{-1/mu}`.
pub fn asymptote_small_p(p: f64, mu: f64, sigma: f64) -> f64 {
    (sigma * p.abs()).powf(2.0 / mu) * asymptote_constant(mu)
}

/// Closed form for the constant-rate law: `H(p) = K (exp(sigma^2 p^2/2) - 1)`,
/// the algebraic solution of `K/(K+H) = exp(-sigma^2 p^2/2)`.
pub fn hamiltonian_diffusive(p: f64, rate: f64, sigma: f64) -> Result<f64> {
    if !(rate > 0.0) {
        return Err(Error::InvalidParam(format!("rate = {rate} must be > 0")));
    }
    Ok(rate * omega_mgf(p, sigma)?.ln().exp_m1())
}

fn ln_laplace(law: &WaitingLaw, h: f64) -> Result<f64> {
    Ok(law.laplace(h)?.ln())
}

/// Initial guess for the root of `ln Phi_hat(H) = ln_target`.
fn seed(law: &WaitingLaw, ln_target: f64) -> f64 {
    match *law {
        WaitingLaw::Exponential { rate } => {
            // exact inverse of K/(K+H)
            rate * (-ln_target).exp_m1()
        }
        WaitingLaw::PowerLaw { mu } => {
            if -ln_target < 0.5 {
                // 1 - Phi_hat(s) ~ Gamma(1-mu) s^mu
                ((-(ln_target.exp_m1())) / gamma(1.0 - mu)).powf(1.0 / mu)
            } else {
                // Phi_hat(s) ~ Phi(0)/s for large s
                mu * (-ln_target).exp()
            }
        }
    }
}

/// Solve `ln Phi_hat(H) = ln_target` for `H >= 0` by bracketing, bisection
/// and secant refinement.
pub fn solve_hamiltonian(law: &WaitingLaw, ln_target: f64) -> Result<f64> {
    if ln_target > 0.0 {
        return Err(Error::Domain(format!(
            "target ln(1/omega_hat) = {ln_target} must be <= 0"
        )));
    }
    if ln_target == 0.0 {
        return Ok(0.0);
    }
    if -ln_target > MAX_LOG_MGF {
        return Err(Error::Overflow(format!(
            "H would exceed the f64 exponent range (ln target = {ln_target:.1})"
        )));
    }

    // g is strictly decreasing in H, g(0) = -ln_target > 0.
    let g = |h: f64| -> Result<f64> { Ok(ln_laplace(law, h)? - ln_target) };

    let h0 = seed(law, ln_target).max(1e-300);
    let mut lo = h0 / 4.0;
    let mut hi = h0 * 4.0;
    let mut g_lo = g(lo)?;
    while g_lo < 0.0 {
        hi = lo;
        lo /= 16.0;
        if lo < 1e-305 {
            lo = 0.0;
            g_lo = -ln_target;
            break;
        }
        g_lo = g(lo)?;
    }
    let mut g_hi = g(hi)?;
    while g_hi > 0.0 {
        lo = hi;
        g_lo = g_hi;
        hi *= 16.0;
        if hi > 1e306 {
            return Err(Error::Bracket(format!(
                "no sign change found up to H = {hi:e} (ln target = {ln_target})"
            )));
        }
        g_hi = g(hi)?;
    }

    for _ in 0..30 {
        if hi - lo <= 1e-6 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let g_mid = g(mid)?;
        if g_mid >= 0.0 {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
            g_hi = g_mid;
        }
    }

    // secant refinement inside the bracket
    let (mut x0, mut f0, mut x1, mut f1) = (lo, g_lo, hi, g_hi);
    let mut best = if f0.abs() < f1.abs() { (x0, f0) } else { (x1, f1) };
    for _ in 0..60 {
        if best.1.abs() <= LOG_RESID_TOL || (ln_target.exp() * best.1.abs()) <= LOG_RESID_TOL {
            return Ok(best.0);
        }
        if f1 == f0 {
            break;
        }
        let mut x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if !(x2 > lo && x2 < hi) {
            x2 = 0.5 * (lo + hi);
        }
        let f2 = g(x2)?;
        if f2 >= 0.0 {
            lo = x2;
        } else {
            hi = x2;
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        if f2.abs() < best.1.abs() {
            best = (x2, f2);
        }
        if (x1 - x0).abs() <= 1e-16 * x1.abs() {
            break;
        }
    }
    if best.1.abs() <= 1e-6 {
        Ok(best.0)
    } else {
        Err(Error::Bracket(format!(
            "root refinement stalled with log residual {:e}",
            best.1
        )))
    }
}

/// `H(p)` for the model's power-law residence times.
pub fn hamiltonian_eval(p: f64, params: &ModelParams) -> Result<f64> {
    let law = WaitingLaw::power_law(params.mu)?;
    solve_hamiltonian(&law, -ln_omega_mgf(p, params.sigma))
}

/// `H(p)` for an arbitrary waiting law (used with the exponential control).
pub fn hamiltonian_for_law(p: f64, law: &WaitingLaw, sigma: f64) -> Result<f64> {
    solve_hamiltonian(law, -ln_omega_mgf(p, sigma))
}

/// Space-dependent Hamiltonian `H(x, p)` with `mu` replaced by `mu(x)`.
pub fn hamiltonian_x(x: f64, p: f64, params: &ModelParams) -> Result<f64> {
    let profile = params
        .mu_of_x
        .as_ref()
        .ok_or_else(|| Error::InvalidParam("hamiltonian_x requires mu_of_x".into()))?;
    let law = WaitingLaw::power_law(profile.eval(x))?;
    solve_hamiltonian(&law, -ln_omega_mgf(p, params.sigma))
}

/// Sampled `(p, H, H')` with the Lipschitz bound needed by Lax-Friedrichs.
#[derive(Clone, Debug)]
pub struct HamiltonianTable {
    pub p_grid: Vec<f64>,
    pub h_values: Vec<f64>,
    pub h_slope: Vec<f64>,
    pub alpha_bound: f64,
    pub law: WaitingLaw,
    pub sigma: f64,
}

/// Central-difference slope with step `1e-5 * max(1, |p|)`.
fn slope_at(law: &WaitingLaw, sigma: f64, p: f64) -> Result<f64> {
    let h = 1e-5 * p.abs().max(1.0);
    let up = solve_hamiltonian(law, -ln_omega_mgf(p + h, sigma))?;
    let dn = solve_hamiltonian(law, -ln_omega_mgf(p - h, sigma))?;
    Ok((up - dn) / (2.0 * h))
}

/// Tabulate `H` on the symmetric grid [-p_max, p_max]; `n_points` must be
/// odd so that p = 0 is a node.
pub fn build_table_for_law(
    law: &WaitingLaw,
    sigma: f64,
    p_max: f64,
    n_points: usize,
) -> Result<HamiltonianTable> {
    if !(p_max > 0.0) {
        return Err(Error::InvalidParam(format!("p_max = {p_max} must be > 0")));
    }
    if n_points < 3 || n_points % 2 == 0 {
        return Err(Error::InvalidParam(format!(
            "n_points = {n_points} must be odd and >= 3"
        )));
    }
    if ln_omega_mgf(p_max, sigma) > MAX_LOG_MGF {
        return Err(Error::Overflow(format!(
            "table p_max = {p_max} exceeds the representable exponent range; \
             clamp below p = {:.3}",
            (2.0 * MAX_LOG_MGF).sqrt() / sigma
        )));
    }
    let half = n_points / 2;
    let dp = p_max / half as f64;
    // H is even: solve the p >= 0 half and mirror
    let pos: Vec<(f64, f64)> = (0..=half)
        .into_par_iter()
        .map(|i| -> Result<(f64, f64)> {
            let p = i as f64 * dp;
            let h = solve_hamiltonian(law, -ln_omega_mgf(p, sigma))?;
            let hp = if i == 0 { 0.0 } else { slope_at(law, sigma, p)? };
            Ok((h, hp))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut p_grid = Vec::with_capacity(n_points);
    let mut h_values = Vec::with_capacity(n_points);
    let mut h_slope = Vec::with_capacity(n_points);
    for i in 0..n_points {
        let k = i as isize - half as isize;
        p_grid.push(k as f64 * dp);
        let (h, hp) = pos[k.unsigned_abs()];
        h_values.push(h);
        h_slope.push(if k < 0 { -hp } else { hp });
    }
    let alpha_bound = 1.05
        * h_slope
            .iter()
            .fold(0.0f64, |acc, s| acc.max(s.abs()));
    Ok(HamiltonianTable {
        p_grid,
        h_values,
        h_slope,
        alpha_bound,
        law: *law,
        sigma,
    })
}

/// Table for the model parameters (power-law residence times).
pub fn build_table(params: &ModelParams, p_max: f64, n_points: usize) -> Result<HamiltonianTable> {
    let law = WaitingLaw::power_law(params.mu)?;
    build_table_for_law(&law, params.sigma, p_max, n_points)
}

impl HamiltonianTable {
    pub fn p_max(&self) -> f64 {
        *self.p_grid.last().unwrap()
    }

    fn dp(&self) -> f64 {
        self.p_grid[1] - self.p_grid[0]
    }

    /// `H(p)` by cubic (Catmull-Rom) interpolation of the table, falling back
    /// to a direct root solve outside the tabulated range. Interpolated
    /// values are clamped at 0 (H >= 0).
    pub fn eval(&self, p: f64) -> Result<f64> {
        let pm = self.p_max();
        if p.abs() > pm {
            return solve_hamiltonian(&self.law, -ln_omega_mgf(p, self.sigma));
        }
        let n = self.p_grid.len();
        let dp = self.dp();
        let s = (p - self.p_grid[0]) / dp;
        let i = (s.floor() as usize).min(n - 2);
        let t = s - i as f64;
        let y0 = self.h_values[i.saturating_sub(1).max(0)];
        let y1 = self.h_values[i];
        let y2 = self.h_values[i + 1];
        let y3 = self.h_values[(i + 2).min(n - 1)];
        let m1 = if i == 0 { y2 - y1 } else { 0.5 * (y2 - y0) };
        let m2 = if i + 2 > n - 1 {
            y2 - y1
        } else {
            0.5 * (y3 - y1)
        };
        let t2 = t * t;
        let t3 = t2 * t;
        let v = (2.0 * t3 - 3.0 * t2 + 1.0) * y1
            + (t3 - 2.0 * t2 + t) * m1
            + (-2.0 * t3 + 3.0 * t2) * y2
            + (t3 - t2) * m2;
        Ok(v.max(0.0))
    }

    /// Largest `|H'|` over tabulated nodes whose p lies in [p_lo, p_hi]
    /// (the range is widened to the enclosing nodes).
    pub fn slope_bound(&self, p_lo: f64, p_hi: f64) -> f64 {
        let dp = self.dp();
        let n = self.p_grid.len();
        let lo = (((p_lo - self.p_grid[0]) / dp).floor() as isize).clamp(0, n as isize - 1) as usize;
        let hi = (((p_hi - self.p_grid[0]) / dp).ceil() as isize).clamp(0, n as isize - 1) as usize;
        self.h_slope[lo..=hi]
            .iter()
            .fold(0.0f64, |acc, s| acc.max(s.abs()))
    }

    /// Structural invariants: H(0) = 0, evenness, nonnegativity, convexity of
    /// the sampled values and the alpha bound.
    pub fn check_invariants(&self, convexity_tol: f64) -> Result<()> {
        let n = self.p_grid.len();
        let mid = n / 2;
        if self.h_values[mid].abs() > 1e-12 {
            return Err(Error::InvalidParam(format!(
                "table H(0) = {} is not 0",
                self.h_values[mid]
            )));
        }
        let scale = self.h_values[n - 1].abs().max(1.0);
        for i in 0..n {
            if self.h_values[i] < 0.0 {
                return Err(Error::InvalidParam(format!(
                    "H({}) = {} < 0",
                    self.p_grid[i], self.h_values[i]
                )));
            }
            let j = n - 1 - i;
            if (self.h_values[i] - self.h_values[j]).abs() > 1e-9 * scale {
                return Err(Error::InvalidParam(format!(
                    "table is not even at p = {}",
                    self.p_grid[i]
                )));
            }
        }
        for i in 1..n - 1 {
            let d2 = self.h_values[i + 1] - 2.0 * self.h_values[i] + self.h_values[i - 1];
            if d2 < -convexity_tol {
                return Err(Error::InvalidParam(format!(
                    "convexity violated at p = {}: second difference {d2:e}",
                    self.p_grid[i]
                )));
            }
        }
        let max_slope = self
            .h_slope
            .iter()
            .fold(0.0f64, |acc, s| acc.max(s.abs()));
        if self.alpha_bound < max_slope {
            return Err(Error::InvalidParam(format!(
                "alpha_bound {} < max |H'| = {max_slope}",
                self.alpha_bound
            )));
        }
        Ok(())
    }

    /// CSV serialization with header `p,H,Hp`, full round-trip precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,H,Hp\n");
        for i in 0..self.p_grid.len() {
            out.push_str(&format!(
                "{},{},{}\n",
                self.p_grid[i], self.h_values[i], self.h_slope[i]
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(mu: f64, sigma: f64) -> ModelParams {
        ModelParams::new(mu, sigma).unwrap()
    }

    #[test]
    fn mgf_values() {
        assert!((omega_mgf(0.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((omega_mgf(1.0, 1.0).unwrap() - 0.5f64.exp()).abs() < 1e-15);
        assert!((omega_mgf(-1.3, 0.7).unwrap() - omega_mgf(1.3, 0.7).unwrap()).abs() < 1e-15);
        assert!(omega_mgf(60.0, 1.0).is_err());
    }

    #[test]
    fn hamiltonian_zero_at_zero() {
        for mu in [0.12, 0.5, 0.98] {
            assert_eq!(hamiltonian_eval(0.0, &params(mu, 1.0)).unwrap(), 0.0);
        }
    }

    #[test]
    fn diffusive_closed_form() {
        assert_eq!(hamiltonian_diffusive(0.0, 1.0, 1.0).unwrap(), 0.0);
        let v = hamiltonian_diffusive(1.0, 1.0, 1.0).unwrap();
        assert!((v - (0.5f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn generic_solver_matches_exponential_closed_form() {
        let law = WaitingLaw::exponential(1.0).unwrap();
        for i in 0..=40 {
            let p = -2.0 + 0.1 * i as f64;
            let num = hamiltonian_for_law(p, &law, 1.0).unwrap();
            let exact = hamiltonian_diffusive(p, 1.0, 1.0).unwrap();
            if exact == 0.0 {
                assert!(num.abs() < 1e-14);
            } else {
                assert!(
                    ((num - exact) / exact).abs() < 1e-8,
                    "p = {p}: {num} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn hamiltonian_x_reduces_at_endpoints() {
        let profile = crate::params::SpatialExponent::linear(0.0, 0.3, 1.0, 0.7).unwrap();
        let p = params(0.5, 1.0).with_mu_of_x(profile);
        for (x, mu) in [(0.0, 0.3), (1.0, 0.7), (0.5, 0.5)] {
            let hx = hamiltonian_x(x, 0.8, &p).unwrap();
            let h = hamiltonian_eval(0.8, &params(mu, 1.0)).unwrap();
            assert!((hx - h).abs() < 1e-9 * h.max(1.0), "x = {x}");
            assert_eq!(hamiltonian_x(x, 0.0, &p).unwrap(), 0.0);
        }
        assert!(hamiltonian_x(0.0, 1.0, &params(0.5, 1.0)).is_err());
    }

    #[test]
    fn table_even_grid_and_invariants() {
        let t = build_table(&params(0.3, 1.0), 2.0, 201).unwrap();
        t.check_invariants(1e-8).unwrap();
        assert_eq!(t.h_values[100], 0.0);
        // monotone on p >= 0
        for i in 100..200 {
            assert!(t.h_values[i + 1] >= t.h_values[i] - 1e-12);
        }
        assert!(build_table(&params(0.3, 1.0), 2.0, 200).is_err());
        assert!(build_table(&params(0.3, 1.0), 0.0, 201).is_err());
    }

    #[test]
    fn table_interpolation_accuracy() {
        let pars = params(0.5, 1.0);
        let t = build_table(&pars, 2.0, 201).unwrap();
        for p in [0.11, 0.733, 1.555, -1.21] {
            let exact = hamiltonian_eval(p, &pars).unwrap();
            let interp = t.eval(p).unwrap();
            assert!(
                (interp - exact).abs() < 1e-6 * exact.max(1e-3),
                "p = {p}: {interp} vs {exact}"
            );
        }
        // fallback outside the range hits the solver
        let exact = hamiltonian_eval(2.5, &pars).unwrap();
        assert!((t.eval(2.5).unwrap() - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn csv_round_trips() {
        let t = build_table(&params(0.5, 1.0), 1.0, 5).unwrap();
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "p,H,Hp");
        let row: Vec<f64> = lines
            .next()
            .unwrap()
            .split(',')
            .map(|v| v.parse().unwrap())
            .collect();
        assert_eq!(row[0], t.p_grid[0]);
        assert_eq!(row[1], t.h_values[0]);
        assert_eq!(row[2], t.h_slope[0]);
    }
}
