use num_complex::Complex64;

use super::phi::phi1;
use super::TorusGrid;
use crate::{Error, Result};

/// Per-frequency multipliers for a fixed time step `tau`, in ascending mode order.
///
/// `tau` may be negative; the symmetric schemes are checked by stepping backwards.
#[derive(Debug, Clone)]
pub struct OperatorSymbols {
    tau: f64,
    grid: TorusGrid,
    prop: Vec<Complex64>,
    prop_inv: Vec<Complex64>,
    inv_dx: Vec<Complex64>,
    phi1_2: Vec<Complex64>,
    phi1_1: Vec<Complex64>,
    phi1_1c: Vec<Complex64>,
    one_minus_phi1_2: Vec<Complex64>,
}

impl OperatorSymbols {
    pub fn new(grid: &TorusGrid, tau: f64) -> Result<Self> {
        if !tau.is_finite() {
            return Err(Error::arg(format!("tau must be finite, got {tau}")));
        }
        let table = |f: &dyn Fn(f64) -> Complex64| -> Vec<Complex64> {
            grid.modes().map(|l| f(l as f64)).collect()
        };
        let i = Complex64::i();
        let phi1_2 = table(&|l| phi1(i * (2.0 * tau * l * l)));
        Ok(Self {
            tau,
            grid: grid.clone(),
            prop: table(&|l| Complex64::from_polar(1.0, -tau * l * l)),
            prop_inv: table(&|l| Complex64::from_polar(1.0, tau * l * l)),
            inv_dx: table(&|l| {
                if l == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(0.0, -1.0 / l)
                }
            }),
            one_minus_phi1_2: phi1_2.iter().map(|p| 1.0 - p).collect(),
            phi1_2,
            phi1_1: table(&|l| phi1(i * (tau * l * l))),
            phi1_1c: table(&|l| phi1(-i * (tau * l * l))),
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    /// `e^{-iτl²}`, symbol of `e^{iτ∂ₓ²}`.
    pub fn prop(&self) -> &[Complex64] {
        &self.prop
    }

    /// `e^{iτl²}`, symbol of `e^{-iτ∂ₓ²}`.
    pub fn prop_inv(&self) -> &[Complex64] {
        &self.prop_inv
    }

    /// `1/(il)`, zero at `l = 0`.
    pub fn inv_dx(&self) -> &[Complex64] {
        &self.inv_dx
    }

    /// `φ₁(2iτl²)`, symbol of `φ₁(-2iτ∂ₓ²)`.
    pub fn phi1_2(&self) -> &[Complex64] {
        &self.phi1_2
    }

    /// `φ₁(iτl²)`, symbol of `φ₁(-iτ∂ₓ²)`.
    pub fn phi1_1(&self) -> &[Complex64] {
        &self.phi1_1
    }

    /// `φ₁(-iτl²)`, symbol of `φ₁(iτ∂ₓ²)`.
    pub fn phi1_1c(&self) -> &[Complex64] {
        &self.phi1_1c
    }

    /// `1 - φ₁(2iτl²)`.
    pub fn one_minus_phi1_2(&self) -> &[Complex64] {
        &self.one_minus_phi1_2
    }

    pub(crate) fn check(&self, grid: &TorusGrid, tau: f64) -> Result<()> {
        if *grid != self.grid {
            return Err(Error::GridMismatch {
                expected: self.grid.n_modes(),
                found: grid.n_modes(),
            });
        }
        if tau != self.tau {
            return Err(Error::StepMismatch {
                scheme: tau,
                symbols: self.tau,
            });
        }
        Ok(())
    }
}
