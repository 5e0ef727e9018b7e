//! Pseudo-spectral machinery on the torus `(-π, π)`.
//!
//! Fields are stored as Fourier coefficients in ascending frequency order
//! `l = -N/2, …, N/2 - 1`, normalised so that `f(x_j) = Σ_l f̂_l e^{i l x_j}`.
//! Pointwise products are formed on the `N`-point collocation grid without
//! padding; [`SpectralField::truncate_two_thirds`] is available as an optional
//! dealiasing filter.

mod field;
mod grid;
mod io;
mod phi;
mod random;
mod symbols;

pub use field::SpectralField;
pub use grid::TorusGrid;
pub use io::{read_field, read_field_from, write_field, write_field_to};
pub use phi::{expm1_complex, phi1, PHI1_SERIES_RADIUS};
pub use random::random_initial_data;
pub use symbols::OperatorSymbols;

use crate::Result;
use num_complex::Complex64;

/// Samples on the collocation grid to Fourier coefficients (`1/N` normalisation).
pub fn forward_transform(values: &[Complex64], grid: &TorusGrid) -> Result<SpectralField> {
    SpectralField::from_samples(grid, values)
}

/// Fourier coefficients to samples `f(x_j)`.
pub fn inverse_transform(field: &SpectralField) -> Vec<Complex64> {
    field.samples()
}

/// Applies `e^{i t ∂ₓ²}`, i.e. multiplies mode `l` by `e^{-i t l²}`.
pub fn free_propagate(field: &SpectralField, t: f64) -> SpectralField {
    field.free_propagate(t)
}

/// Regularised `∂ₓ⁻¹`: `1/(il)` off the zero mode, `0` on it.
pub fn antiderivative(field: &SpectralField) -> SpectralField {
    field.antiderivative()
}

/// Applies `φ₁(a ∂ₓ²)`, which acts on mode `l` as `φ₁(-a l²)`.
pub fn apply_phi1_laplacian(field: &SpectralField, a: Complex64) -> SpectralField {
    field.apply_phi1_laplacian(a)
}

/// `‖f‖_r = (Σ_l (1+|l|)^{2r} |f̂_l|²)^{1/2}`.
pub fn sobolev_norm(field: &SpectralField, r: f64) -> f64 {
    field.sobolev_norm(r)
}
