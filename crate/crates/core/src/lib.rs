//! Numerics for the subdiffusive age-structured renewal model and its
//! hyperbolic (large-deviation) limit.
//!
//! The model couples a heavy-tailed residence-time law `Phi(a) = mu (1+a)^{-1-mu}`
//! with Gaussian spatial jumps. Under the Hopf-Cole rescaling the boundary
//! value `psi_eps = -eps ln n_eps(t,x,0)` converges to the viscosity solution
//! of `d_t psi + H(d_x psi) = 0`, where `H(p)` is obtained by inverting the
//! Laplace transform of `Phi` at `exp(-sigma^2 p^2 / 2)`.
//!
//! The crate provides four subsystems:
//! - [`hamiltonian`]: the residence-time law, its Laplace transform and the
//!   effective Hamiltonian `H(p)` / `H(x,p)` with tabulation for flux solvers;
//! - [`hj`]: a WENO5 / Lax-Friedrichs / TVD-RK3 solver for the limiting
//!   Hamilton-Jacobi equation on periodic 1-D grids;
//! - [`kinetic`]: the eps-rescaled renewal fixed point for `u = exp(-psi_eps/eps)`,
//!   the history/initial-layer split and the a priori bound checks;
//! - [`mc`]: continuous-time random walk Monte Carlo for independent validation.

pub mod error;
pub mod fit;
pub mod grid;
pub mod hamiltonian;
pub mod hj;
pub mod kinetic;
pub mod mc;
pub mod params;
pub mod quad;
pub mod special;
pub mod validate;
pub mod waiting;

pub use error::{Error, Result};
pub use grid::{Grid1D, GridField};
pub use params::ModelParams;
