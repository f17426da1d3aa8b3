//! Residence-time laws: the heavy-tailed power law `Phi(a) = mu (1+a)^{-1-mu}`
//! of the subdiffusive model and the constant-rate exponential used as the
//! diffusive control.

use crate::error::{Error, Result};
use crate::quad;

/// Absolute tolerance of the Laplace-transform quadrature.
pub const LAPLACE_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WaitingLaw {
    /// `Phi(a) = mu (1+a)^{-1-mu}`, jump rate `beta(a) = mu/(1+a)`, `0 < mu < 1`.
    PowerLaw { mu: f64 },
    /// `Phi(a) = rate * exp(-rate a)`, the age-independent control case.
    Exponential { rate: f64 },
}

impl WaitingLaw {
    pub fn power_law(mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu < 1.0) {
            return Err(Error::InvalidParam(format!(
                "power-law exponent mu = {mu} must lie in (0, 1)"
            )));
        }
        Ok(Self::PowerLaw { mu })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate > 0.0) {
            return Err(Error::InvalidParam(format!("rate = {rate} must be > 0")));
        }
        Ok(Self::Exponential { rate })
    }

    /// Density `Phi(a)`.
    pub fn density(&self, a: f64) -> Result<f64> {
        if a < 0.0 {
            return Err(Error::Domain(format!("residence time a = {a} < 0")));
        }
        Ok(match *self {
            Self::PowerLaw { mu } => mu * (1.0 + a).powf(-1.0 - mu),
            Self::Exponential { rate } => rate * (-rate * a).exp(),
        })
    }

    /// Survival function `S(a) = exp(-int_0^a beta)`.
    pub fn survival(&self, a: f64) -> f64 {
        match *self {
            Self::PowerLaw { mu } => (1.0 + a).powf(-mu),
            Self::Exponential { rate } => (-rate * a).exp(),
        }
    }

    /// Cumulative distribution `F(a) = 1 - S(a)`.
    pub fn cdf(&self, a: f64) -> f64 {
        1.0 - self.survival(a)
    }

    /// Jump rate `beta(a) = Phi(a)/S(a)`.
    pub fn rate(&self, a: f64) -> f64 {
        match *self {
            Self::PowerLaw { mu } => mu / (1.0 + a),
            Self::Exponential { rate } => rate,
        }
    }

    /// Laplace transform `Phi_hat(s) = int_0^inf Phi(a) exp(-s a) da`.
    ///
    /// For the power law the integral is split at a = 1 and the algebraic
    /// tail is flattened by the substitution `1 + a = w^{-1/mu}`, which turns
    /// it into a bounded smooth integrand on a compact interval:
    ///
    ///   int_1^inf Phi(a) e^{-sa} da = int_0^{2^{-mu}} exp(-s (w^{-1/mu} - 1)) dw.
    pub fn laplace(&self, s: f64) -> Result<f64> {
        if s < 0.0 {
            return Err(Error::Domain(format!("laplace argument s = {s} < 0")));
        }
        match *self {
            Self::Exponential { rate } => Ok(rate / (rate + s)),
            Self::PowerLaw { mu } => {
                if s == 0.0 {
                    return Ok(1.0);
                }
                let head = quad::adaptive(
                    |a: f64| mu * (1.0 + a).powf(-1.0 - mu) * (-s * a).exp(),
                    0.0,
                    1.0,
                    0.5 * LAPLACE_TOL,
                )?;
                let tail = quad::adaptive(
                    |w: f64| {
                        if w <= 0.0 {
                            return 0.0;
                        }
                        (-s * (w.powf(-1.0 / mu) - 1.0)).exp()
                    },
                    0.0,
                    (0.5f64).powf(mu),
                    0.5 * LAPLACE_TOL,
                )?;
                Ok(head + tail)
            }
        }
    }

    /// CDF increment over [a0, a1], the zeroth product-integration moment.
    pub fn mass(&self, a0: f64, a1: f64) -> f64 {
        self.cdf(a1) - self.cdf(a0)
    }

    /// First moment `int_{a0}^{a1} a Phi(a) da` in closed form.
    pub fn first_moment(&self, a0: f64, a1: f64) -> f64 {
        match *self {
            Self::PowerLaw { mu } => {
                // antiderivative of a*Phi: mu (1+a)^{1-mu}/(1-mu) + (1+a)^{-mu}
                let prim = |a: f64| mu * (1.0 + a).powf(1.0 - mu) / (1.0 - mu) + (1.0 + a).powf(-mu);
                prim(a1) - prim(a0)
            }
            Self::Exponential { rate } => {
                let prim = |a: f64| -((a + 1.0 / rate) * (-rate * a).exp());
                prim(a1) - prim(a0)
            }
        }
    }
}

/// Density of the power law (standalone form of the model's `Phi`).
pub fn phi_density(a: f64, mu: f64) -> Result<f64> {
    WaitingLaw::power_law(mu)?.density(a)
}

/// Forward Laplace transform of the power-law density.
pub fn phi_laplace(s: f64, mu: f64) -> Result<f64> {
    WaitingLaw::power_law(mu)?.laplace(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_closed_form_values() {
        // Phi(0) = mu, Phi(1) = mu 2^{-1-mu}
        assert!((phi_density(0.0, 0.5).unwrap() - 0.5).abs() < 1e-15);
        let expect = 0.5 * 2.0f64.powf(-1.5);
        assert!((phi_density(1.0, 0.5).unwrap() - expect).abs() < 1e-15);
        assert!(phi_density(-1e-12, 0.5).is_err());
    }

    #[test]
    fn density_normalizes() {
        for mu in [0.12, 0.3, 0.5, 0.7, 0.98] {
            let law = WaitingLaw::power_law(mu).unwrap();
            // full mass via the tail substitution at s = 0
            let head = quad::adaptive(|a| law.density(a).unwrap(), 0.0, 1.0, 1e-13).unwrap();
            let tail = law.survival(1.0);
            assert!((head + tail - 1.0).abs() < 1e-10, "mu = {mu}");
        }
    }

    #[test]
    fn laplace_endpoints_and_monotonicity() {
        let law = WaitingLaw::power_law(0.4).unwrap();
        assert!((law.laplace(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(law.laplace(-1.0).is_err());
        let mut prev = 1.0 + 1e-15;
        for k in -6..=6 {
            let s = 10f64.powi(k);
            let v = law.laplace(s).unwrap();
            assert!(v < prev, "Phi_hat must strictly decrease at s = {s}");
            assert!(v > 0.0 && v <= 1.0);
            prev = v;
        }
    }

    #[test]
    fn exponential_laplace_is_closed_form() {
        let law = WaitingLaw::exponential(2.5).unwrap();
        for s in [0.0, 0.3, 7.0] {
            assert!((law.laplace(s).unwrap() - 2.5 / (2.5 + s)).abs() < 1e-15);
        }
    }

    #[test]
    fn moments_match_quadrature() {
        for law in [
            WaitingLaw::power_law(0.3).unwrap(),
            WaitingLaw::exponential(1.7).unwrap(),
        ] {
            for (a0, a1) in [(0.0, 0.25), (0.5, 2.0), (3.0, 10.0)] {
                let m0 = quad::adaptive(|a| law.density(a).unwrap(), a0, a1, 1e-14).unwrap();
                let m1 = quad::adaptive(|a| a * law.density(a).unwrap(), a0, a1, 1e-14).unwrap();
                assert!((law.mass(a0, a1) - m0).abs() < 1e-12);
                assert!((law.first_moment(a0, a1) - m1).abs() < 1e-12);
            }
        }
    }
}
