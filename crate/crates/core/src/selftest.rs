//! Small-grid oracle and symmetry checks behind the `selftest` subcommand.

use std::io::Write;

use crate::cubic::{self, CubicScheme, CubicSchemeConfig};
use crate::oracle::{self, CubicWeights, Spectrum};
use crate::quadratic::{self, Nonlinearity, QuadSchemeConfig};
use crate::spectral::{OperatorSymbols, SpectralField};
use crate::Result;

pub const ORACLE_TOL: f64 = 1e-10;

const SEEDS: u64 = 10;

fn gap(grid_field: &SpectralField, oracle: &Spectrum) -> f64 {
    (grid_field - &oracle::field_from_spectrum(grid_field.grid(), oracle)).sobolev_norm(1.0)
}

/// Largest H¹ gap between a first-order quadratic step and its double-sum
/// oracle over `SEEDS` fields on `n` modes.
pub fn quadratic_oracle_gap(n: usize, nl: Nonlinearity, eps: f64, tau: f64) -> Result<f64> {
    let grid = oracle::padded_grid(n);
    let cfg = QuadSchemeConfig::new(eps, tau, nl)?;
    let ops = OperatorSymbols::new(&grid, tau)?;
    let mut worst: f64 = 0.0;
    for seed in 0..SEEDS {
        let spec = oracle::random_spectrum(n, 1.0, seed);
        let w = oracle::field_from_spectrum(&grid, &spec);
        let (ours, exact) = match nl {
            Nonlinearity::Square => (quadratic::li1_step(&w, &cfg, &ops)?, oracle::li1_double_sum(&spec, eps, tau)),
            Nonlinearity::ModulusSquare => (
                quadratic::li1_conj_step(&w, &cfg, &ops)?,
                oracle::li1_conj_double_sum(&spec, eps, tau),
            ),
        };
        worst = worst.max(gap(&ours, &exact));
    }
    Ok(worst)
}

/// Same for NRLI1 / OS18 against the triple-sum oracle.
pub fn cubic_oracle_gap(n: usize, scheme: CubicScheme, eps: f64, tau: f64) -> Result<f64> {
    let grid = oracle::padded_grid(n);
    let cfg = CubicSchemeConfig::new(eps, tau, scheme)?;
    let ops = OperatorSymbols::new(&grid, tau)?;
    let weights = if scheme == CubicScheme::Os18 {
        CubicWeights::Uniform
    } else {
        CubicWeights::NonResonant
    };
    let mut worst: f64 = 0.0;
    for seed in 0..SEEDS {
        let spec = oracle::random_spectrum(n, 1.0, seed);
        let w = oracle::field_from_spectrum(&grid, &spec);
        let ours = match scheme {
            CubicScheme::Os18 => cubic::os18_step(&w, &cfg, &ops)?,
            _ => cubic::nrli1_step(&w, &cfg.clone().with_scheme(CubicScheme::Nrli1), &ops)?,
        };
        worst = worst.max(gap(&ours, &oracle::cubic_triple_sum(&spec, eps, tau, weights)));
    }
    Ok(worst)
}

/// `‖Φ_{-τ}(Φ_τ(w)) - w‖₁` for one of the named schemes.
pub fn round_trip_gap(scheme: &str, w: &SpectralField, eps: f64, tau: f64) -> Result<f64> {
    let g = w.grid();
    let fwd = OperatorSymbols::new(g, tau)?;
    let bwd = OperatorSymbols::new(g, -tau)?;
    let back = match scheme {
        "li1" | "sli2" | "li1-conj" | "sli2-conj" => {
            let nl = if scheme.ends_with("conj") {
                Nonlinearity::ModulusSquare
            } else {
                Nonlinearity::Square
            };
            let cfg = QuadSchemeConfig::new(eps, tau, nl)?;
            let step = match scheme {
                "li1" => quadratic::li1_step,
                "li1-conj" => quadratic::li1_conj_step,
                "sli2" => quadratic::sli2_step,
                _ => quadratic::sli2_conj_step,
            };
            step(&step(w, &cfg, &fwd)?, &cfg.reversed(), &bwd)?
        }
        _ => {
            let kind = match scheme {
                "nrli1" => CubicScheme::Nrli1,
                "os18" => CubicScheme::Os18,
                "strang" => CubicScheme::Strang,
                _ => CubicScheme::Nrsli2,
            };
            let cfg = CubicSchemeConfig::new(eps, tau, kind)?;
            let step = match kind {
                CubicScheme::Nrli1 => cubic::nrli1_step,
                CubicScheme::Os18 => cubic::os18_step,
                CubicScheme::Strang => cubic::strang_step,
                CubicScheme::Nrsli2 => cubic::nrsli2_step,
            };
            step(&step(w, &cfg, &fwd)?, &cfg.reversed(), &bwd)?
        }
    };
    Ok((&back - w).sobolev_norm(1.0))
}

fn line(log: &mut dyn Write, ok: bool, what: &str, value: f64, bound: &str) -> Result<bool> {
    writeln!(log, "{} {what}: {value:.3e} ({bound})", if ok { "PASS" } else { "FAIL" })?;
    Ok(ok)
}

/// Runs every check, printing one line each; true when all pass.
pub fn run(log: &mut dyn Write) -> Result<bool> {
    let (eps, tau) = (0.7, 0.3);
    let mut all = true;
    for n in [8, 16] {
        for (nl, name) in [(Nonlinearity::Square, "li1"), (Nonlinearity::ModulusSquare, "li1-conj")] {
            let g = quadratic_oracle_gap(n, nl, eps, tau)?;
            all &= line(log, g <= ORACLE_TOL, &format!("{name} double-sum oracle, N={n}"), g, "<= 1e-10")?;
        }
    }
    for n in [8, 12, 16] {
        for (scheme, name) in [(CubicScheme::Nrli1, "nrli1"), (CubicScheme::Os18, "os18")] {
            let g = cubic_oracle_gap(n, scheme, eps, tau)?;
            all &= line(log, g <= ORACLE_TOL, &format!("{name} triple-sum oracle, N={n}"), g, "<= 1e-10")?;
        }
    }

    let grid = crate::TorusGrid::new(16)?;
    let fp_tol = quadratic::DEFAULT_FP_TOL;
    let fields: Vec<SpectralField> = (0..5).map(|s| oracle::generic_field(&grid, 2.0, s)).collect();
    for scheme in ["sli2", "sli2-conj", "nrsli2", "strang"] {
        let mut worst: f64 = 0.0;
        for w in &fields {
            worst = worst.max(round_trip_gap(scheme, w, 0.5, 0.05)?);
        }
        all &= line(log, worst <= 10.0 * fp_tol, &format!("{scheme} round trip, N=16"), worst, "<= 10 fp_tol")?;
    }
    for scheme in ["li1", "li1-conj", "nrli1", "os18"] {
        let mut best: f64 = 0.0;
        for w in &fields {
            best = best.max(round_trip_gap(scheme, w, 0.5, 0.05)?);
        }
        all &= line(log, best >= 1e-6, &format!("{scheme} is not symmetric, N=16"), best, ">= 1e-6")?;
    }
    Ok(all)
}
