//! Model parameters: subdiffusion exponent, jump width, and the optional
//! space-dependent exponent profile.

use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// Space-dependent subdiffusion exponent `mu(x)` with declared range
/// `[min, max]`, which must sit strictly inside (0, 1).
#[derive(Clone)]
pub struct SpatialExponent {
    func: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    min: f64,
    max: f64,
}

impl SpatialExponent {
    pub fn new<F>(func: F, min: f64, max: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(min > 0.0 && max < 1.0 && min <= max) {
            return Err(Error::InvalidParam(format!(
                "mu(x) range [{min}, {max}] must lie strictly inside (0, 1)"
            )));
        }
        Ok(Self {
            func: Arc::new(func),
            min,
            max,
        })
    }

    /// Linear profile between (x0, mu0) and (x1, mu1), clamped outside.
    pub fn linear(x0: f64, mu0: f64, x1: f64, mu1: f64) -> Result<Self> {
        let (lo, hi) = if mu0 <= mu1 { (mu0, mu1) } else { (mu1, mu0) };
        Self::new(
            move |x| {
                let t = ((x - x0) / (x1 - x0)).clamp(0.0, 1.0);
                mu0 + t * (mu1 - mu0)
            },
            lo,
            hi,
        )
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.func)(x).clamp(self.min, self.max)
    }

    pub fn range(&self) -> (f64, f64) {
        (self.min, self.max)
    }
}

impl fmt::Debug for SpatialExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpatialExponent[{}, {}]", self.min, self.max)
    }
}

/// The pair (mu, sigma) of the model, plus the optional mu(x) profile.
#[derive(Clone, Debug)]
pub struct ModelParams {
    pub mu: f64,
    pub sigma: f64,
    pub mu_of_x: Option<SpatialExponent>,
}

impl ModelParams {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !(mu > 0.0 && mu < 1.0) {
            return Err(Error::InvalidParam(format!(
                "mu = {mu} must lie strictly in (0, 1)"
            )));
        }
        if !(sigma > 0.0) {
            return Err(Error::InvalidParam(format!("sigma = {sigma} must be > 0")));
        }
        Ok(Self {
            mu,
            sigma,
            mu_of_x: None,
        })
    }

    pub fn with_mu_of_x(mut self, profile: SpatialExponent) -> Self {
        self.mu_of_x = Some(profile);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range() {
        assert!(ModelParams::new(0.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, 1.0).is_err());
        assert!(ModelParams::new(0.5, 0.0).is_err());
        assert!(ModelParams::new(-0.1, 1.0).is_err());
        assert!(SpatialExponent::new(|_| 0.5, 0.0, 0.5).is_err());
        assert!(SpatialExponent::new(|_| 0.5, 0.3, 1.0).is_err());
    }

    #[test]
    fn linear_profile_clamps() {
        let p = SpatialExponent::linear(0.0, 0.3, 10.0, 0.7).unwrap();
        assert!((p.eval(0.0) - 0.3).abs() < 1e-15);
        assert!((p.eval(10.0) - 0.7).abs() < 1e-15);
        assert!((p.eval(5.0) - 0.5).abs() < 1e-15);
        assert!((p.eval(-4.0) - 0.3).abs() < 1e-15);
        assert!((p.eval(40.0) - 0.7).abs() < 1e-15);
    }
}
