//! Low-regularity exponential integrators for nonlinear Schrödinger equations
//! on the one-dimensional torus.
//!
//! The crate is organised in layers:
//!
//! * [`spectral`]: torus grid, Fourier transforms, multiplier symbols, Sobolev
//!   norms and random initial data.
//! * [`quadratic`]: first-order (LI1) and symmetric second-order (SLI2)
//!   steppers for `i w_t = -w_xx + ε w²` and `i w_t = -w_xx + ε |w|²`.
//! * [`cubic`]: the non-resonant schemes NRLI1 / NRSLI2 for
//!   `i w_t = -w_xx + ε² |w|² w`, and the OS18 and Strang baselines.
//! * [`harness`]: trajectories, reference solutions, sweeps and order fits.
//! * [`oracle`]: brute-force Fourier sums and a Lawson RK4 reference flow used
//!   to cross-check the steppers.
//! * [`cli`]: the `lowreg-nlse` command line front end.

pub mod cli;
pub mod cubic;
pub mod error;
pub mod fixed_point;
pub mod harness;
pub mod oracle;
pub mod quadratic;
pub mod selftest;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use spectral::{OperatorSymbols, SpectralField, TorusGrid};
