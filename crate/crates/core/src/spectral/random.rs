use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{SpectralField, TorusGrid};
use crate::{Error, Result};

/// Random data `û_l = ⟨l⟩^{-θ} U_l` with `U_l = a + ib`, `a, b ~ U[0, 1)`,
/// and `⟨l⟩ = max(|l|, 1)`.
///
/// The stream is `ChaCha8Rng::seed_from_u64(seed)`; coefficients are drawn
/// in ascending `l`, real part first.
pub fn random_initial_data(grid: &TorusGrid, theta: f64, seed: u64) -> Result<SpectralField> {
    if !(theta >= 0.0 && theta.is_finite()) {
        return Err(Error::arg(format!("theta must be >= 0, got {theta}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = grid
        .modes()
        .map(|l| {
            let re: f64 = rng.random();
            let im: f64 = rng.random();
            let bracket = l.unsigned_abs().max(1) as f64;
            Complex64::new(re, im) * bracket.powf(-theta)
        })
        .collect();
    SpectralField::new(grid, coeffs)
}
