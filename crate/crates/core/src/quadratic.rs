//! One-step maps for the quadratic NLS equations
//!
//! ```text
//! i w_t = -w_xx + ε w²      (Nonlinearity::Square)
//! i w_t = -w_xx + ε |w|²    (Nonlinearity::ModulusSquare)
//! ```
//!
//! The first-order schemes integrate the frozen-field Duhamel term exactly,
//! using `(l₁+l₂)² - l₁² - l₂² = 2l₁l₂` to express the oscillatory integral
//! through `∂ₓ⁻¹`. The second-order schemes are the trapezoidal (symmetric)
//! counterparts and are solved by fixed-point iteration.

use num_complex::Complex64;

use crate::fixed_point::{self, FixedPointSolution};
use crate::spectral::{OperatorSymbols, SpectralField};
use crate::{Error, Result};

pub const DEFAULT_FP_TOL: f64 = 1e-12;
pub const DEFAULT_FP_MAX_ITER: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nonlinearity {
    /// `ε w²`
    Square,
    /// `ε |w|²`
    ModulusSquare,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadSchemeConfig {
    eps: f64,
    tau: f64,
    nonlinearity: Nonlinearity,
    fp_tol: f64,
    fp_max_iter: usize,
    dealias: bool,
}

impl QuadSchemeConfig {
    pub fn new(eps: f64, tau: f64, nonlinearity: Nonlinearity) -> Result<Self> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::arg(format!("eps must lie in (0, 1], got {eps}")));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::arg(format!("tau must be > 0, got {tau}")));
        }
        Ok(Self {
            eps,
            tau,
            nonlinearity,
            fp_tol: DEFAULT_FP_TOL,
            fp_max_iter: DEFAULT_FP_MAX_ITER,
            dealias: false,
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

    pub fn nonlinearity(&self) -> Nonlinearity {
        self.nonlinearity
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

    fn check(&self, w: &SpectralField, ops: &OperatorSymbols, expected: Nonlinearity) -> Result<()> {
        if self.nonlinearity != expected {
            return Err(Error::arg(format!(
                "scheme needs nonlinearity {expected:?}, config has {:?}",
                self.nonlinearity
            )));
        }
        ops.check(w.grid(), self.tau)
    }

    fn product(&self, a: &SpectralField, b: &SpectralField) -> SpectralField {
        let p = a.product(b).expect("operands share the stepper grid");
        if self.dealias {
            p.truncate_two_thirds()
        } else {
            p
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// LI1 for `ε w²`:
///
/// ```text
/// w⁺ = (1 - 2iετŵ₀) e^{iτ∂²} w + iετ ŵ₀² + ε/2 [ (e^{iτ∂²}∂⁻¹w)² - e^{iτ∂²}(∂⁻¹w)² ]
/// ```
pub fn li1_step(w: &SpectralField, cfg: &QuadSchemeConfig, ops: &OperatorSymbols) -> Result<SpectralField> {
    cfg.check(w, ops, Nonlinearity::Square)?;
    let (eps, tau) = (cfg.eps, cfg.tau);
    let a0 = w.zero_mode();
    let prop_w = w.apply_symbol(ops.prop());
    let dw = w.apply_symbol(ops.inv_dx());
    let prop_dw = dw.apply_symbol(ops.prop());
    let bracket = &cfg.product(&prop_dw, &prop_dw) - &cfg.product(&dw, &dw).apply_symbol(ops.prop());
    let out = &(&prop_w * (1.0 - c(0.0, 2.0 * eps * tau) * a0)) + &(&bracket * (eps / 2.0));
    Ok(out.add_constant(c(0.0, eps * tau) * a0 * a0))
}

/// First-order scheme for `ε |w|²`:
///
/// ```text
/// w⁺ = (1 - iετ conj(ŵ₀)) e^{iτ∂²} w - iετ (‖w‖² - |ŵ₀|²)
///      + ε/2 ∂⁻¹[ (e^{iτ∂²}w)(e^{-iτ∂²}∂⁻¹w̄) - e^{iτ∂²}(w ∂⁻¹w̄) ]
/// ```
///
/// `‖w‖² = Σ|ŵ_l|²`. The resonant set `{m = 0} ∪ {k = 0}` of the phase `2mk`
/// overlaps at `l = 0`; subtracting `|ŵ₀|²` keeps that term from being
/// counted twice, so constant data follows forward Euler for `iv' = ε|v|²`.
pub fn li1_conj_step(w: &SpectralField, cfg: &QuadSchemeConfig, ops: &OperatorSymbols) -> Result<SpectralField> {
    cfg.check(w, ops, Nonlinearity::ModulusSquare)?;
    let (eps, tau) = (cfg.eps, cfg.tau);
    let a0 = w.zero_mode();
    let prop_w = w.apply_symbol(ops.prop());
    let d_wbar = w.conj().apply_symbol(ops.inv_dx());
    let bracket = &cfg.product(&prop_w, &d_wbar.apply_symbol(ops.prop_inv()))
        - &cfg.product(w, &d_wbar).apply_symbol(ops.prop());
    let out = &(&prop_w * (1.0 - c(0.0, eps * tau) * a0.conj()))
        + &(&bracket.apply_symbol(ops.inv_dx()) * (eps / 2.0));
    Ok(out.add_constant(c(0.0, -eps * tau) * (w.l2_norm_sqr() - a0.norm_sqr())))
}

/// SLI2 for `ε w²`, returning the converged fixed point with iteration stats.
///
/// ```text
/// w⁺ = e^{iτ∂²}w - iετ(ŵ₀ e^{iτ∂²}w + ŵ⁺₀ w⁺) + iετ/2 (ŵ₀² + (ŵ⁺₀)²)
///      + ε/4 [ (e^{iτ∂²}∂⁻¹w)² + (∂⁻¹w⁺)² - e^{iτ∂²}((∂⁻¹w)² + (e^{-iτ∂²}∂⁻¹w⁺)²) ]
/// ```
pub fn sli2_solve(w: &SpectralField, cfg: &QuadSchemeConfig, ops: &OperatorSymbols) -> Result<FixedPointSolution> {
    cfg.check(w, ops, Nonlinearity::Square)?;
    let (eps, tau) = (cfg.eps, cfg.tau);
    let a0 = w.zero_mode();
    let prop_w = w.apply_symbol(ops.prop());
    let dw = w.apply_symbol(ops.inv_dx());
    let prop_dw = dw.apply_symbol(ops.prop());
    let sq_prop_dw = cfg.product(&prop_dw, &prop_dw);
    let sq_dw = cfg.product(&dw, &dw);

    let guess = li1_step(w, cfg, ops)?;
    fixed_point::solve(guess, cfg.fp_tol, cfg.fp_max_iter, |next| {
        let a1 = next.zero_mode();
        let dn = next.apply_symbol(ops.inv_dx());
        let back_dn = dn.apply_symbol(ops.prop_inv());
        let minus = (&sq_dw + &cfg.product(&back_dn, &back_dn)).apply_symbol(ops.prop());
        let bracket = &(&sq_prop_dw + &cfg.product(&dn, &dn)) - &minus;
        let zero_terms = &(&prop_w * a0) + &(next * a1);
        let out = &(&prop_w - &(&zero_terms * c(0.0, eps * tau))) + &(&bracket * (eps / 4.0));
        Ok(out.add_constant(c(0.0, eps * tau / 2.0) * (a0 * a0 + a1 * a1)))
    })
}

pub fn sli2_step(w: &SpectralField, cfg: &QuadSchemeConfig, ops: &OperatorSymbols) -> Result<SpectralField> {
    sli2_solve(w, cfg, ops).map(|s| s.field)
}

/// Symmetric second-order scheme for `ε |w|²`:
///
/// ```text
/// w⁺ = e^{iτ∂²}w - iετ/2 (conj(ŵ₀) e^{iτ∂²}w + conj(ŵ⁺₀) w⁺)
///      - iετ/2 (‖w‖² - |ŵ₀|² + ‖w⁺‖² - |ŵ⁺₀|²)
///      + ε/4 ∂⁻¹[ (e^{iτ∂²}w)(e^{-iτ∂²}∂⁻¹w̄) + w⁺ ∂⁻¹w̄⁺
///                 - e^{iτ∂²}( w ∂⁻¹w̄ + (e^{-iτ∂²}w⁺)(e^{iτ∂²}∂⁻¹w̄⁺) ) ]
/// ```
///
/// This is the trapezoidal average of the exact frozen-field integrals at
/// both ends of the step; on constant data it is the trapezoidal rule for
/// `iv' = ε|v|²`.
pub fn sli2_conj_solve(w: &SpectralField, cfg: &QuadSchemeConfig, ops: &OperatorSymbols) -> Result<FixedPointSolution> {
    cfg.check(w, ops, Nonlinearity::ModulusSquare)?;
    let (eps, tau) = (cfg.eps, cfg.tau);
    let half = c(0.0, eps * tau / 2.0);
    let a0 = w.zero_mode();
    let prop_w = w.apply_symbol(ops.prop());
    let d_wbar = w.conj().apply_symbol(ops.inv_dx());
    let known_plus = cfg.product(&prop_w, &d_wbar.apply_symbol(ops.prop_inv()));
    let known_minus = cfg.product(w, &d_wbar);
    let mass0 = w.l2_norm_sqr() - a0.norm_sqr();

    let guess = li1_conj_step(w, cfg, ops)?;
    fixed_point::solve(guess, cfg.fp_tol, cfg.fp_max_iter, |next| {
        let a1 = next.zero_mode();
        let d_nbar = next.conj().apply_symbol(ops.inv_dx());
        let plus = &known_plus + &cfg.product(next, &d_nbar);
        let minus = (&known_minus
            + &cfg.product(&next.apply_symbol(ops.prop_inv()), &d_nbar.apply_symbol(ops.prop())))
            .apply_symbol(ops.prop());
        let bracket = (&plus - &minus).apply_symbol(ops.inv_dx());
        let zero_terms = &(&prop_w * a0.conj()) + &(next * a1.conj());
        let out = &(&prop_w - &(&zero_terms * half)) + &(&bracket * (eps / 4.0));
        let mass1 = next.l2_norm_sqr() - a1.norm_sqr();
        Ok(out.add_constant(-half * (mass0 + mass1)))
    })
}

pub fn sli2_conj_step(w: &SpectralField, cfg: &QuadSchemeConfig, ops: &OperatorSymbols) -> Result<SpectralField> {
    sli2_conj_solve(w, cfg, ops).map(|s| s.field)
}
