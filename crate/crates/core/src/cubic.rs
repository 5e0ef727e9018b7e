//! One-step maps for the cubic NLS equation `i w_t = -w_xx + ε² |w|² w`.
//!
//! In the twisted variable the frozen-field Duhamel integral has phase
//! `l² + l₁² - l₂² - l₃² = 2(l - l₂)(l - l₃)` for `l = -l₁ + l₂ + l₃`.
//! The non-resonant schemes integrate the resonant quadruples
//! (`l = l₂` or `l = l₃`) exactly, with weight `τ`, and approximate the rest by
//! the dominant phase `2l₁²`, giving weight `τ φ₁(2iτl₁²)`. The resonant
//! correction collapses onto the zero mode of `g(u)` and the diagonal `h(u)`,
//! so every step costs `O(N log N)`.

use num_complex::Complex64;

use crate::fixed_point::{self, FixedPointSolution};
use crate::quadratic::{DEFAULT_FP_MAX_ITER, DEFAULT_FP_TOL};
use crate::spectral::{OperatorSymbols, SpectralField, TorusGrid};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubicScheme {
    Nrli1,
    Nrsli2,
    Os18,
    Strang,
}

impl CubicScheme {
    pub fn is_symmetric(self) -> bool {
        matches!(self, CubicScheme::Nrsli2 | CubicScheme::Strang)
    }
}

/// Which step the `g`, `h` corrections of NRSLI2 are built with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResonantCorrection {
    /// `±τ/2` multipliers, as produced by composing the half step with its
    /// adjoint. Symmetric.
    #[default]
    HalfStep,
    /// Full-step `1 - φ₁(2iτl²)` multipliers on both sides. Not symmetric;
    /// kept for comparison.
    FullStep,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CubicSchemeConfig {
    eps: f64,
    tau: f64,
    scheme: CubicScheme,
    fp_tol: f64,
    fp_max_iter: usize,
    dealias: bool,
    correction: ResonantCorrection,
}

impl CubicSchemeConfig {
    pub fn new(eps: f64, tau: f64, scheme: CubicScheme) -> Result<Self> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::arg(format!("eps must lie in (0, 1], got {eps}")));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::arg(format!("tau must be > 0, got {tau}")));
        }
        Ok(Self {
            eps,
            tau,
            scheme,
            fp_tol: DEFAULT_FP_TOL,
            fp_max_iter: DEFAULT_FP_MAX_ITER,
            dealias: false,
            correction: ResonantCorrection::default(),
        })
    }

    pub fn with_fixed_point(mut self, tol: f64, max_iter: usize) -> Result<Self> {
        if !(tol > 0.0) || max_iter == 0 {
            return Err(Error::arg(format!(
                "fixed-point settings need tol > 0 and max_iter >= 1, got {tol}, {max_iter}"
            )));
        }
        self.fp_tol = tol;
        self.fp_max_iter = max_iter;
        Ok(self)
    }

    pub fn with_dealias(mut self, dealias: bool) -> Self {
        self.dealias = dealias;
        self
    }

    pub fn with_scheme(mut self, scheme: CubicScheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_correction(mut self, correction: ResonantCorrection) -> Self {
        self.correction = correction;
        self
    }

    /// The same scheme run backwards in time (`τ → -τ`).
    pub fn reversed(&self) -> Self {
        Self {
            tau: -self.tau,
            ..self.clone()
        }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn scheme(&self) -> CubicScheme {
        self.scheme
    }

    pub fn fp_tol(&self) -> f64 {
        self.fp_tol
    }

    pub fn fp_max_iter(&self) -> usize {
        self.fp_max_iter
    }

    pub fn dealias(&self) -> bool {
        self.dealias
    }

    pub fn correction(&self) -> ResonantCorrection {
        self.correction
    }

    fn check(&self, w: &SpectralField, ops: &OperatorSymbols, expected: CubicScheme) -> Result<()> {
        if self.scheme != expected {
            return Err(Error::arg(format!(
                "stepper {expected:?} called with a {:?} config",
                self.scheme
            )));
        }
        ops.check(w.grid(), self.tau)
    }

    /// `u² v` on the grid.
    fn cubic_product(&self, u: &SpectralField, v: &SpectralField) -> SpectralField {
        let p = SpectralField::pointwise(&[u, v], |z| z[0] * z[0] * z[1])
            .expect("operands share the stepper grid");
        if self.dealias {
            p.truncate_two_thirds()
        } else {
            p
        }
    }
}

/// The resonance structure of the cubic Duhamel integral on a grid, and the
/// diagonal multiplier `1 - φ₁(2iτl²)` of `h`.
#[derive(Debug, Clone)]
pub struct ResonanceWeights {
    grid: TorusGrid,
    tau: f64,
    h_multiplier: Vec<Complex64>,
}

impl ResonanceWeights {
    pub fn new(ops: &OperatorSymbols) -> Self {
        Self {
            grid: ops.grid().clone(),
            tau: ops.tau(),
            h_multiplier: ops.one_minus_phi1_2().to_vec(),
        }
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn h_multiplier(&self) -> &[Complex64] {
        &self.h_multiplier
    }

    /// `l² + l₁² - l₂² - l₃²` in factored form `2(l - l₂)(l - l₃)`, valid when
    /// `l = -l₁ + l₂ + l₃`.
    pub fn phase(l: i64, l2: i64, l3: i64) -> i64 {
        2 * (l - l2) * (l - l3)
    }

    pub fn is_resonant(l: i64, l2: i64, l3: i64) -> bool {
        l == l2 || l == l3
    }

    /// Integration weight used by the non-resonant schemes for a quadruple.
    pub fn weight(&self, l: i64, l1: i64, l2: i64, l3: i64) -> Complex64 {
        debug_assert_eq!(l, -l1 + l2 + l3);
        if Self::is_resonant(l, l2, l3) {
            Complex64::new(self.tau, 0.0)
        } else {
            let l1 = l1 as f64;
            self.tau * crate::spectral::phi1(Complex64::new(0.0, 2.0 * self.tau * l1 * l1))
        }
    }
}

/// `(ĝ(u))₀ = Σ_m |û_m|² M_m` for a diagonal multiplier `M` (by Parseval, the
/// mean of `u · (M ū)`).
fn g_zero_with(u: &SpectralField, multiplier: &[Complex64]) -> Complex64 {
    u.coeffs()
        .iter()
        .zip(multiplier)
        .map(|(z, m)| z.norm_sqr() * m)
        .sum()
}

fn h_with(u: &SpectralField, multiplier: &[Complex64]) -> SpectralField {
    let coeffs = u
        .coeffs()
        .iter()
        .zip(multiplier)
        .map(|(z, m)| m * z.norm_sqr() * z)
        .collect();
    SpectralField::new(u.grid(), coeffs).expect("same length as input")
}

/// `(ĝ(u))₀` with `g(u) = u (1 - φ₁(-2iτ∂ₓ²)) ū`.
pub fn g_zero_mode(u: &SpectralField, ops: &OperatorSymbols) -> Result<Complex64> {
    u.check_grid(ops.grid())?;
    Ok(g_zero_with(u, ops.one_minus_phi1_2()))
}

/// `ĥ_l = (1 - φ₁(2iτl²)) |û_l|² û_l`.
pub fn h_field(u: &SpectralField, ops: &OperatorSymbols) -> Result<SpectralField> {
    u.check_grid(ops.grid())?;
    Ok(h_with(u, ops.one_minus_phi1_2()))
}

fn i_times(x: f64) -> Complex64 {
    Complex64::new(0.0, x)
}

fn os18_part(w: &SpectralField, cfg: &CubicSchemeConfig, ops: &OperatorSymbols) -> SpectralField {
    let (eps, tau) = (cfg.eps, cfg.tau);
    let phi_wbar = w.conj().apply_symbol(ops.phi1_2());
    let nl = cfg.cubic_product(w, &phi_wbar);
    (w - &(&nl * i_times(tau * eps * eps))).apply_symbol(ops.prop())
}

fn correction(w: &SpectralField, cfg: &CubicSchemeConfig, ops: &OperatorSymbols) -> SpectralField {
    let (eps, tau) = (cfg.eps, cfg.tau);
    let e2t = eps * eps * tau;
    let g0 = g_zero_with(w, ops.one_minus_phi1_2());
    let prop_w = w.apply_symbol(ops.prop());
    let prop_h = h_with(w, ops.one_minus_phi1_2()).apply_symbol(ops.prop());
    &(&prop_w * (i_times(-2.0 * e2t) * g0)) + &(&prop_h * i_times(e2t))
}

/// NRLI1:
///
/// ```text
/// w⁺ = e^{iτ∂²}[w - iτε² w² (φ₁(-2iτ∂²) w̄)] - 2iε²τ (ĝ(w))₀ e^{iτ∂²}w + iε²τ e^{iτ∂²}h(w)
/// ```
pub fn nrli1_step(w: &SpectralField, cfg: &CubicSchemeConfig, ops: &OperatorSymbols) -> Result<SpectralField> {
    cfg.check(w, ops, CubicScheme::Nrli1)?;
    Ok(&os18_part(w, cfg, ops) + &correction(w, cfg, ops))
}

/// The resonance-based first-order scheme without the zero-mode correction:
/// `w⁺ = e^{iτ∂²}[w - iτε² w² (φ₁(-2iτ∂²) w̄)]`.
pub fn os18_step(w: &SpectralField, cfg: &CubicSchemeConfig, ops: &OperatorSymbols) -> Result<SpectralField> {
    cfg.check(w, ops, CubicScheme::Os18)?;
    Ok(os18_part(w, cfg, ops))
}

/// The two terms NRLI1 adds on top of OS18:
/// `-2iε²τ (ĝ(w))₀ e^{iτ∂²}w + iε²τ e^{iτ∂²}h(w)`.
pub fn nrli1_correction(w: &SpectralField, cfg: &CubicSchemeConfig, ops: &OperatorSymbols) -> Result<SpectralField> {
    ops.check(w.grid(), cfg.tau)?;
    Ok(correction(w, cfg, ops))
}

/// NRSLI2, the composition of the NRLI1 half step with its adjoint:
///
/// ```text
/// w⁺ = e^{iτ∂²}[w - iτε²/2 w² (φ₁(-iτ∂²) w̄)] - iτε²/2 (w⁺)² (φ₁(iτ∂²) w̄⁺)
///      - iτε²/2 [2 g₀(w) e^{iτ∂²}w - e^{iτ∂²}h(w) + 2 g₀(w⁺) w⁺ - h(w⁺)]
/// ```
///
/// With [`ResonantCorrection::HalfStep`] the `g`, `h` on the `w` side use the
/// multiplier `1 - φ₁(iτl²)` (step `τ/2`) and those on the `w⁺` side use
/// `1 - φ₁(-iτl²)` (step `-τ/2`).
pub fn nrsli2_solve(w: &SpectralField, cfg: &CubicSchemeConfig, ops: &OperatorSymbols) -> Result<FixedPointSolution> {
    cfg.check(w, ops, CubicScheme::Nrsli2)?;
    let (eps, tau) = (cfg.eps, cfg.tau);
    let half = i_times(eps * eps * tau / 2.0);
    let (mult_old, mult_new): (Vec<Complex64>, Vec<Complex64>) = match cfg.correction {
        ResonantCorrection::HalfStep => (
            ops.phi1_1().iter().map(|p| 1.0 - p).collect(),
            ops.phi1_1c().iter().map(|p| 1.0 - p).collect(),
        ),
        ResonantCorrection::FullStep => (
            ops.one_minus_phi1_2().to_vec(),
            ops.one_minus_phi1_2().to_vec(),
        ),
    };

    let nl_old = cfg.cubic_product(w, &w.conj().apply_symbol(ops.phi1_1()));
    let corr_old = &(w * (2.0 * g_zero_with(w, &mult_old))) - &h_with(w, &mult_old);
    let known = (&(w - &(&nl_old * half)) - &(&corr_old * half)).apply_symbol(ops.prop());

    let guess = nrli1_step(w, &cfg.clone().with_scheme(CubicScheme::Nrli1), ops)?;
    fixed_point::solve(guess, cfg.fp_tol, cfg.fp_max_iter, |next| {
        let nl_new = cfg.cubic_product(next, &next.conj().apply_symbol(ops.phi1_1c()));
        let corr_new = &(next * (2.0 * g_zero_with(next, &mult_new))) - &h_with(next, &mult_new);
        Ok(&known - &(&(&nl_new + &corr_new) * half))
    })
}

pub fn nrsli2_step(w: &SpectralField, cfg: &CubicSchemeConfig, ops: &OperatorSymbols) -> Result<SpectralField> {
    nrsli2_solve(w, cfg, ops).map(|s| s.field)
}

/// Strang splitting: half free step, exact flow of `i w_t = ε²|w|²w`
/// (`w ↦ w e^{-iτε²|w|²}`), half free step.
pub fn strang_step(w: &SpectralField, cfg: &CubicSchemeConfig, ops: &OperatorSymbols) -> Result<SpectralField> {
    cfg.check(w, ops, CubicScheme::Strang)?;
    let (eps, tau) = (cfg.eps, cfg.tau);
    let half = w.free_propagate(tau / 2.0);
    let kicked = SpectralField::pointwise(&[&half], |z| {
        z[0] * Complex64::from_polar(1.0, -tau * eps * eps * z[0].norm_sqr())
    })?;
    let kicked = if cfg.dealias {
        kicked.truncate_two_thirds()
    } else {
        kicked
    };
    Ok(kicked.free_propagate(tau / 2.0))
}
