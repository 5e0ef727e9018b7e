//! Picard iteration for the implicit symmetric schemes.

use crate::spectral::SpectralField;
use crate::{Error, Result};

/// Sobolev index in which fixed-point residuals are measured.
pub const RESIDUAL_NORM_R: f64 = 1.0;

#[derive(Debug, Clone)]
pub struct FixedPointSolution {
    pub field: SpectralField,
    pub iterations: usize,
    pub residual: f64,
}

/// A residual that stops decreasing while below `STALL_FACTOR · tol` is
/// accepted as converged; it has reached the rounding floor of the map.
pub const STALL_FACTOR: f64 = 100.0;

/// Iterates `x ← map(x)` from `initial` until `‖x_{k+1} - x_k‖₁ ≤ tol`, or
/// until the residual stalls within `STALL_FACTOR · tol`.
pub fn solve<F>(
    initial: SpectralField,
    tol: f64,
    max_iter: usize,
    mut map: F,
) -> Result<FixedPointSolution>
where
    F: FnMut(&SpectralField) -> Result<SpectralField>,
{
    let mut current = initial;
    let mut residual = f64::INFINITY;
    for k in 1..=max_iter {
        let next = map(&current)?;
        let previous = residual;
        residual = (&next - &current).sobolev_norm(RESIDUAL_NORM_R);
        current = next;
        if residual <= tol || (residual >= previous && residual <= STALL_FACTOR * tol) {
            return Ok(FixedPointSolution {
                field: current,
                iterations: k,
                residual,
            });
        }
        if !residual.is_finite() {
            return Err(Error::SolverFailure {
                iterations: k,
                residual,
            });
        }
    }
    Err(Error::SolverFailure {
        iterations: max_iter,
        residual,
    })
}
