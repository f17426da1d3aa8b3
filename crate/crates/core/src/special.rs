//! Small numerical helpers: stable Gaussian tail masses and log-sum-exp.

use statrs::function::erf::{erf, erfc};

pub use statrs::function::gamma::gamma;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// ln of the standard normal mass on [lo, hi] (z-scores, lo <= hi).
///
/// Uses erfc on the side away from the origin so that deep-tail cells keep
/// full relative accuracy instead of cancelling against 1.
pub fn ln_normal_mass(lo: f64, hi: f64) -> f64 {
    debug_assert!(lo <= hi);
    let mass = if lo >= 0.0 {
        0.5 * (erfc(lo / SQRT_2) - erfc(hi / SQRT_2))
    } else if hi <= 0.0 {
        0.5 * (erfc(-hi / SQRT_2) - erfc(-lo / SQRT_2))
    } else {
        0.5 * (erf(hi / SQRT_2) + erf(-lo / SQRT_2))
    };
    if mass <= 0.0 {
        f64::NEG_INFINITY
    } else {
        mass.ln()
    }
}

/// log(sum(exp(terms))) with the usual max shift; empty input gives -inf.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    let s: f64 = terms.iter().map(|t| (t - m).exp()).sum();
    m + s.ln()
}

/// log(exp(a) + exp(b)).
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Streaming log-sum-exp accumulator (order-stable for a fixed term order).
#[derive(Clone, Copy, Debug)]
pub struct LseAcc {
    max: f64,
    sum: f64,
}

impl LseAcc {
    pub fn new() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            sum: 0.0,
        }
    }

    pub fn add(&mut self, term: f64) {
        if term == f64::NEG_INFINITY {
            return;
        }
        if term <= self.max {
            self.sum += (term - self.max).exp();
        } else {
            self.sum = self.sum * (self.max - term).exp() + 1.0;
            self.max = term;
        }
    }

    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.sum.ln()
        }
    }
}

impl Default for LseAcc {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_mass_matches_both_tails() {
        let full = ln_normal_mass(-8.0, 8.0);
        assert!(full.abs() < 2e-15);
        // symmetric tails
        let a = ln_normal_mass(3.0, 4.0);
        let b = ln_normal_mass(-4.0, -3.0);
        assert!((a - b).abs() < 1e-13);
        // against a direct midpoint check in a far tail cell
        let lo = 6.0;
        let hi = 6.1;
        let approx = (-0.5 * 6.05f64 * 6.05).exp() / (2.0 * std::f64::consts::PI).sqrt() * 0.1;
        assert!((ln_normal_mass(lo, hi) - approx.ln()).abs() < 1e-3);
    }

    #[test]
    fn lse_matches_direct_sum() {
        let terms = [-3.0, -1.0, 0.5, -700.0, 2.0];
        let direct: f64 = terms.iter().map(|t| t.exp()).sum::<f64>().ln();
        assert!((log_sum_exp(&terms) - direct).abs() < 1e-14);
        let mut acc = LseAcc::new();
        for t in terms {
            acc.add(t);
        }
        assert!((acc.value() - direct).abs() < 1e-14);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
    }
}
