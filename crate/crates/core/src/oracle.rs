//! Independent reference constructions used to cross-check the steppers.
//!
//! Nothing here is on the steppers' code path. The Fourier-sum oracles work
//! with true integer frequencies (no aliasing) and evaluate the frozen-field
//! Duhamel integrals in the twisted variable by brute force; the steppers are
//! compared against them on fields whose spectrum is padded so that products
//! do not alias.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::spectral::{phi1, SpectralField, TorusGrid};

/// Sparse spectrum keyed by true frequency.
pub type Spectrum = std::collections::BTreeMap<i64, Complex64>;

/// Zero-centred random data: `û_l = ⟨l⟩^{-θ} (a + ib)`, `a, b ~ U[-1/2, 1/2)`.
pub fn generic_field(grid: &TorusGrid, theta: f64, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    SpectralField::from_modes(grid, |l| {
        let re: f64 = rng.random::<f64>() - 0.5;
        let im: f64 = rng.random::<f64>() - 0.5;
        Complex64::new(re, im) * (l.unsigned_abs().max(1) as f64).powf(-theta)
    })
}

/// Random spectrum on `l ∈ [-n/2, n/2 - 1]` (any even `n`), drawn like
/// [`random_initial_data`](crate::spectral::random_initial_data): `⟨l⟩^{-θ}(a + ib)`,
/// `a, b ~ U[0, 1)`, ascending `l`, real part first.
pub fn random_spectrum(n: usize, theta: f64, seed: u64) -> Spectrum {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = (n / 2) as i64;
    (-half..half)
        .map(|l| {
            let re: f64 = rng.random();
            let im: f64 = rng.random();
            (l, Complex64::new(re, im) * (l.unsigned_abs().max(1) as f64).powf(-theta))
        })
        .collect()
}

/// A power-of-two grid with at least `4n` modes. Data supported on `n` modes
/// has alias-free products up to cubic order there.
pub fn padded_grid(n: usize) -> TorusGrid {
    TorusGrid::new((4 * n).next_power_of_two().max(4)).expect("power of two")
}

pub fn spectrum_of(field: &SpectralField) -> Spectrum {
    field
        .grid()
        .modes()
        .zip(field.coeffs())
        .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
        .map(|(l, c)| (l, *c))
        .collect()
}

/// Places a spectrum on a grid; panics if a frequency does not fit.
pub fn field_from_spectrum(grid: &TorusGrid, spectrum: &Spectrum) -> SpectralField {
    let mut f = SpectralField::zeros(grid);
    for (l, c) in spectrum {
        f.set_coeff(*l, *c);
    }
    f
}

/// `∫₀^τ e^{iΩs} ds`, exact.
pub fn exact_phase_integral(omega: i64, tau: f64) -> Complex64 {
    if omega == 0 {
        Complex64::new(tau, 0.0)
    } else {
        let w = omega as f64;
        ((Complex64::new(0.0, w * tau)).exp() - 1.0) / Complex64::new(0.0, w)
    }
}

fn add(out: &mut Spectrum, l: i64, c: Complex64) {
    *out.entry(l).or_insert(Complex64::new(0.0, 0.0)) += c;
}

fn propagate(spec: &Spectrum, tau: f64) -> Spectrum {
    spec.iter()
        .map(|(l, c)| (*l, c * Complex64::from_polar(1.0, -tau * (l * l) as f64)))
        .collect()
}

/// One LI1 step for `ε w²` from the double sum
/// `v⁺_k = v_k - iε Σ_{l₁+l₂=k} ∫₀^τ e^{2il₁l₂s} ds v_{l₁} v_{l₂}`, then `w⁺ = e^{iτ∂²} v⁺`.
pub fn li1_double_sum(w: &Spectrum, eps: f64, tau: f64) -> Spectrum {
    let mut v = w.clone();
    let i_eps = Complex64::new(0.0, eps);
    for (l1, a) in w {
        for (l2, b) in w {
            let omega = (l1 + l2).pow(2) - l1 * l1 - l2 * l2;
            add(&mut v, l1 + l2, -i_eps * exact_phase_integral(omega, tau) * a * b);
        }
    }
    propagate(&v, tau)
}

/// One first-order step for `ε |w|²` from the exact double sum over
/// `k = l + m`, `m` a mode of `w̄` (`(w̄)_m = conj(ŵ_{-m})`).
pub fn li1_conj_double_sum(w: &Spectrum, eps: f64, tau: f64) -> Spectrum {
    let mut v = w.clone();
    let i_eps = Complex64::new(0.0, eps);
    for (l, a) in w {
        for (neg_m, b) in w {
            let m = -neg_m;
            let k = l + m;
            let omega = k * k - l * l + m * m;
            add(&mut v, k, -i_eps * exact_phase_integral(omega, tau) * a * b.conj());
        }
    }
    propagate(&v, tau)
}

/// Which weight the cubic triple-sum oracle puts on non-resonant quadruples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubicWeights {
    /// Resonant quadruples get `τ`, others `τ φ₁(2iτl₁²)` (NRLI1).
    NonResonant,
    /// Every quadruple gets `τ φ₁(2iτl₁²)` (OS18).
    Uniform,
}

/// One first-order cubic step from the triple sum over `l = -l₁ + l₂ + l₃`.
/// Resonance is decided from the raw phase `l² + l₁² - l₂² - l₃²`.
pub fn cubic_triple_sum(w: &Spectrum, eps: f64, tau: f64, weights: CubicWeights) -> Spectrum {
    let mut v = w.clone();
    let coef = Complex64::new(0.0, -eps * eps);
    for (l1, a1) in w {
        let approx = tau * phi1(Complex64::new(0.0, 2.0 * tau * (l1 * l1) as f64));
        for (l2, a2) in w {
            for (l3, a3) in w {
                let l = -l1 + l2 + l3;
                let omega = l * l + l1 * l1 - l2 * l2 - l3 * l3;
                let weight = match weights {
                    CubicWeights::NonResonant if omega == 0 => Complex64::new(tau, 0.0),
                    _ => approx,
                };
                add(&mut v, l, coef * weight * a1.conj() * a2 * a3);
            }
        }
    }
    propagate(&v, tau)
}

/// Right-hand side of the twisted equation at time `s`, evaluated pseudo-spectrally.
fn twisted_rhs(v: &SpectralField, s: f64, eps: f64, cubic: bool, conj: bool) -> SpectralField {
    let u = v.free_propagate(s);
    let nl = if cubic {
        SpectralField::pointwise(&[&u], |z| z[0].norm_sqr() * z[0]).unwrap() * (eps * eps)
    } else if conj {
        SpectralField::pointwise(&[&u], |z| Complex64::new(z[0].norm_sqr(), 0.0)).unwrap() * eps
    } else {
        SpectralField::pointwise(&[&u], |z| z[0] * z[0]).unwrap() * eps
    };
    (&nl * Complex64::new(0.0, -1.0)).free_propagate(-s)
}

/// Which equation [`lawson_rk4`] integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    QuadraticSquare,
    QuadraticModulusSquare,
    Cubic,
}

/// Reference flow over `[0, t]`: classical RK4 on the twisted variable
/// (Lawson / integrating-factor form) with `substeps` equal steps.
pub fn lawson_rk4(w0: &SpectralField, eps: f64, t: f64, substeps: usize, eq: Equation) -> SpectralField {
    let cubic = eq == Equation::Cubic;
    let conj = eq == Equation::QuadraticModulusSquare;
    let h = t / substeps as f64;
    let f = |v: &SpectralField, s: f64| twisted_rhs(v, s, eps, cubic, conj);
    let mut v = w0.clone();
    for n in 0..substeps {
        let s = n as f64 * h;
        let k1 = f(&v, s);
        let k2 = f(&(&v + &(&k1 * (h / 2.0))), s + h / 2.0);
        let k3 = f(&(&v + &(&k2 * (h / 2.0))), s + h / 2.0);
        let k4 = f(&(&v + &(&k3 * h)), s + h);
        let incr = &(&(&k1 + &(&k2 * 2.0)) + &(&k3 * 2.0)) + &k4;
        v = &v + &(&incr * (h / 6.0));
    }
    v.free_propagate(t)
}

/// Frozen-field Duhamel term `∫₀^τ e^{-is∂²}[(e^{is∂²}v)²] ds` by composite
/// Gauss–Legendre quadrature (5 nodes per panel).
pub fn frozen_quadratic_integral(v: &SpectralField, tau: f64, panels: usize) -> SpectralField {
    const NODES: [f64; 5] = [
        -0.906_179_845_938_664,
        -0.538_469_310_105_683,
        0.0,
        0.538_469_310_105_683,
        0.906_179_845_938_664,
    ];
    const WEIGHTS: [f64; 5] = [
        0.236_926_885_056_189,
        0.478_628_670_499_366,
        0.568_888_888_888_889,
        0.478_628_670_499_366,
        0.236_926_885_056_189,
    ];
    let h = tau / panels as f64;
    let mut acc = SpectralField::zeros(v.grid());
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        for (x, wt) in NODES.iter().zip(WEIGHTS) {
            let s = mid + 0.5 * h * x;
            let u = v.free_propagate(s);
            let sq = u.product(&u).unwrap().free_propagate(-s);
            acc = &acc + &(&sq * (0.5 * h * wt));
        }
    }
    acc
}
