use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::phi::phi1;
use super::TorusGrid;
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A complex field on the torus held as Fourier coefficients `f̂_l`, `l ∈ L`,
/// in ascending order of `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: TorusGrid,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn new(grid: &TorusGrid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.n_modes() {
            return Err(Error::arg(format!(
                "expected {} coefficients, got {}",
                grid.n_modes(),
                coeffs.len()
            )));
        }
        Ok(Self {
            grid: grid.clone(),
            coeffs,
        })
    }

    pub fn zeros(grid: &TorusGrid) -> Self {
        Self {
            grid: grid.clone(),
            coeffs: vec![ZERO; grid.n_modes()],
        }
    }

    /// Builds a field from a function of the frequency.
    pub fn from_modes(grid: &TorusGrid, f: impl FnMut(i64) -> Complex64) -> Self {
        Self {
            grid: grid.clone(),
            coeffs: grid.modes().map(f).collect(),
        }
    }

    pub fn constant(grid: &TorusGrid, c: Complex64) -> Self {
        Self::from_modes(grid, |l| if l == 0 { c } else { ZERO })
    }

    /// `a e^{ilx}`; panics if `l ∉ L`.
    pub fn single_mode(grid: &TorusGrid, l: i64, a: Complex64) -> Self {
        assert!(grid.index_of(l).is_some(), "mode {l} outside grid");
        Self::from_modes(grid, |m| if m == l { a } else { ZERO })
    }

    /// Forward transform of collocation samples `f(x_j)`.
    pub fn from_samples(grid: &TorusGrid, values: &[Complex64]) -> Result<Self> {
        if values.len() != grid.n_modes() {
            return Err(Error::arg(format!(
                "expected {} samples, got {}",
                grid.n_modes(),
                values.len()
            )));
        }
        Ok(Self {
            grid: grid.clone(),
            coeffs: grid.forward(values),
        })
    }

    /// Inverse transform: `f(x_j) = Σ_l f̂_l e^{i l x_j}`.
    pub fn samples(&self) -> Vec<Complex64> {
        self.grid.inverse(&self.coeffs)
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// `f̂_l`, or zero when `l ∉ L`.
    pub fn coeff(&self, l: i64) -> Complex64 {
        self.grid.index_of(l).map_or(ZERO, |k| self.coeffs[k])
    }

    pub fn set_coeff(&mut self, l: i64, value: Complex64) {
        let k = self
            .grid
            .index_of(l)
            .unwrap_or_else(|| panic!("mode {l} outside grid"));
        self.coeffs[k] = value;
    }

    /// `f̂_0`, the mean of the field.
    pub fn zero_mode(&self) -> Complex64 {
        self.coeff(0)
    }

    pub fn map_modes(&self, f: impl Fn(i64, Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid.clone(),
            coeffs: self
                .grid
                .modes()
                .zip(&self.coeffs)
                .map(|(l, c)| f(l, *c))
                .collect(),
        }
    }

    /// Multiplies mode-wise by a symbol table in storage order.
    pub fn apply_symbol(&self, symbol: &[Complex64]) -> Self {
        debug_assert_eq!(symbol.len(), self.coeffs.len());
        Self {
            grid: self.grid.clone(),
            coeffs: self.coeffs.iter().zip(symbol).map(|(c, s)| c * s).collect(),
        }
    }

    /// Pointwise complex conjugate, expressed on the coefficients.
    pub fn conj(&self) -> Self {
        let grid = &self.grid;
        Self::from_modes(grid, |l| self.coeff(grid.alias(-l)).conj())
    }

    /// Combines several fields pointwise on the collocation grid.
    pub fn pointwise<F>(fields: &[&SpectralField], f: F) -> Result<Self>
    where
        F: Fn(&[Complex64]) -> Complex64,
    {
        let first = fields
            .first()
            .ok_or_else(|| Error::arg("pointwise needs at least one field"))?;
        let grid = first.grid.clone();
        for g in fields {
            g.check_grid(&grid)?;
        }
        let samples: Vec<Vec<Complex64>> = fields.iter().map(|g| g.samples()).collect();
        let mut args = vec![ZERO; fields.len()];
        let values: Vec<Complex64> = (0..grid.n_modes())
            .map(|j| {
                for (a, s) in args.iter_mut().zip(&samples) {
                    *a = s[j];
                }
                f(&args)
            })
            .collect();
        Ok(Self {
            coeffs: grid.forward(&values),
            grid,
        })
    }

    /// Pointwise product `f·g`.
    pub fn product(&self, other: &SpectralField) -> Result<Self> {
        Self::pointwise(&[self, other], |v| v[0] * v[1])
    }

    /// `e^{i t ∂ₓ²}`: mode `l` times `e^{-i t l²}`.
    pub fn free_propagate(&self, t: f64) -> Self {
        self.map_modes(|l, c| {
            let l = l as f64;
            c * Complex64::from_polar(1.0, -t * l * l)
        })
    }

    pub fn antiderivative(&self) -> Self {
        self.map_modes(|l, c| {
            if l == 0 {
                ZERO
            } else {
                c * Complex64::new(0.0, -1.0 / l as f64)
            }
        })
    }

    /// Spectral `∂ₓ`: mode `l` times `il`.
    pub fn derivative(&self) -> Self {
        self.map_modes(|l, c| c * Complex64::new(0.0, l as f64))
    }

    /// `φ₁(a ∂ₓ²)`: mode `l` times `φ₁(-a l²)`.
    pub fn apply_phi1_laplacian(&self, a: Complex64) -> Self {
        self.map_modes(|l, c| {
            let l = l as f64;
            c * phi1(-a * (l * l))
        })
    }

    pub fn sobolev_norm(&self, r: f64) -> f64 {
        self.grid
            .modes()
            .zip(&self.coeffs)
            .map(|(l, c)| (1.0 + l.unsigned_abs() as f64).powf(2.0 * r) * c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `Σ_l |f̂_l|²`, the mean square of the field over the torus.
    pub fn l2_norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// 2/3-rule filter: zeroes every mode with `|l| > N/3`.
    pub fn truncate_two_thirds(&self) -> Self {
        let cutoff = self.grid.n_modes() as f64 / 3.0;
        self.map_modes(|l, c| if (l.abs() as f64) > cutoff { ZERO } else { c })
    }

    /// Embeds into a larger grid by zero padding (or truncates to a smaller one).
    pub fn resample(&self, grid: &TorusGrid) -> Self {
        Self::from_modes(grid, |l| self.coeff(l))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub(crate) fn check_grid(&self, grid: &TorusGrid) -> Result<()> {
        if self.grid != *grid {
            return Err(Error::GridMismatch {
                expected: grid.n_modes(),
                found: self.grid.n_modes(),
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        Self {
            grid: self.grid.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }

    /// Adds `c` to the zero mode, i.e. adds a constant function.
    pub fn add_constant(mut self, c: Complex64) -> Self {
        if let Some(k) = self.grid.index_of(0) {
            self.coeffs[k] += c;
        }
        self
    }
}

// Arithmetic panics if the grids differ; steppers validate grids on entry.
impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: Self) -> SpectralField {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: Self) -> SpectralField {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Add for SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: Self) -> SpectralField {
        &self + &rhs
    }
}

impl Sub for SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: Self) -> SpectralField {
        &self - &rhs
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self.map_modes(|_, c| -c)
    }
}

impl Mul<Complex64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: Complex64) -> SpectralField {
        self.map_modes(|_, c| c * rhs)
    }
}

impl Mul<Complex64> for SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: Complex64) -> SpectralField {
        &self * rhs
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: f64) -> SpectralField {
        self.map_modes(|_, c| c * rhs)
    }
}

impl Mul<f64> for SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: f64) -> SpectralField {
        &self * rhs
    }
}
