use std::collections::HashMap;

use rayon::join;

use super::{Equation, Scheme, SimParams};
use crate::cubic::{self, CubicScheme, CubicSchemeConfig};
use crate::fixed_point::RESIDUAL_NORM_R;
use crate::oracle;
use crate::quadratic::{self, Nonlinearity, QuadSchemeConfig};
use crate::spectral::{OperatorSymbols, SpectralField, TorusGrid};
use crate::{Error, Result};

enum Config {
    Quadratic(QuadSchemeConfig),
    Cubic(CubicSchemeConfig),
}

/// A scheme bound to its symbol table for one step size.
pub(crate) struct Stepper {
    scheme: Scheme,
    config: Config,
    ops: OperatorSymbols,
}

impl Stepper {
    pub(crate) fn new(params: &SimParams, scheme: Scheme, tau: f64, grid: &TorusGrid) -> Result<Self> {
        scheme.check_equation(params.equation)?;
        let config = match params.equation {
            Equation::Cubic => {
                let kind = match scheme {
                    Scheme::Nrli1 => CubicScheme::Nrli1,
                    Scheme::Os18 => CubicScheme::Os18,
                    Scheme::Nrsli2 => CubicScheme::Nrsli2,
                    _ => CubicScheme::Strang,
                };
                Config::Cubic(
                    CubicSchemeConfig::new(params.eps, tau, kind)?
                        .with_fixed_point(params.fp_tol, params.fp_max_iter)?
                        .with_dealias(params.dealias),
                )
            }
            eq => {
                let nl = if eq == Equation::QuadraticSquare {
                    Nonlinearity::Square
                } else {
                    Nonlinearity::ModulusSquare
                };
                Config::Quadratic(
                    QuadSchemeConfig::new(params.eps, tau, nl)?
                        .with_fixed_point(params.fp_tol, params.fp_max_iter)?
                        .with_dealias(params.dealias),
                )
            }
        };
        Ok(Self {
            scheme,
            config,
            ops: OperatorSymbols::new(grid, tau)?,
        })
    }

    /// One step; the second component is the fixed-point iteration count of
    /// implicit schemes.
    pub(crate) fn step(&self, w: &SpectralField) -> Result<(SpectralField, Option<usize>)> {
        let ops = &self.ops;
        match (&self.config, self.scheme) {
            (Config::Quadratic(cfg), Scheme::Li1) => match cfg.nonlinearity() {
                Nonlinearity::Square => quadratic::li1_step(w, cfg, ops),
                Nonlinearity::ModulusSquare => quadratic::li1_conj_step(w, cfg, ops),
            }
            .map(|f| (f, None)),
            (Config::Quadratic(cfg), _) => match cfg.nonlinearity() {
                Nonlinearity::Square => quadratic::sli2_solve(w, cfg, ops),
                Nonlinearity::ModulusSquare => quadratic::sli2_conj_solve(w, cfg, ops),
            }
            .map(|s| (s.field, Some(s.iterations))),
            (Config::Cubic(cfg), _) => match cfg.scheme() {
                CubicScheme::Nrli1 => cubic::nrli1_step(w, cfg, ops).map(|f| (f, None)),
                CubicScheme::Os18 => cubic::os18_step(w, cfg, ops).map(|f| (f, None)),
                CubicScheme::Strang => cubic::strang_step(w, cfg, ops).map(|f| (f, None)),
                CubicScheme::Nrsli2 => {
                    cubic::nrsli2_solve(w, cfg, ops).map(|s| (s.field, Some(s.iterations)))
                }
            },
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrajectoryStats {
    pub steps: usize,
    pub fp_iter_max: Option<usize>,
    pub fp_iter_mean: Option<f64>,
    /// `max_n ‖w^n‖₁`, including the initial state.
    pub max_h1: f64,
}

#[derive(Default)]
struct StatsAcc {
    steps: usize,
    fp_max: usize,
    fp_sum: usize,
    fp_count: usize,
    max_h1: f64,
}

impl StatsAcc {
    fn observe(&mut self, w: &SpectralField, iterations: Option<usize>) {
        self.max_h1 = self.max_h1.max(w.sobolev_norm(RESIDUAL_NORM_R));
        if let Some(k) = iterations {
            self.fp_max = self.fp_max.max(k);
            self.fp_sum += k;
            self.fp_count += 1;
        }
    }

    fn finish(self) -> TrajectoryStats {
        let implicit = self.fp_count > 0;
        TrajectoryStats {
            steps: self.steps,
            fp_iter_max: implicit.then_some(self.fp_max),
            fp_iter_mean: implicit.then(|| self.fp_sum as f64 / self.fp_count as f64),
            max_h1: self.max_h1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub step: usize,
    pub time: f64,
    pub field: SpectralField,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub final_state: SpectralField,
    /// One entry per requested sample time, in request order.
    pub snapshots: Vec<Snapshot>,
    pub stats: TrajectoryStats,
}

/// Advances `w0` by `round(t_final/τ)` steps of `params.scheme`, recording the
/// state at the step nearest to each of `sample_times`.
pub fn run_trajectory(params: &SimParams, w0: &SpectralField, sample_times: &[f64]) -> Result<Trajectory> {
    params.validate()?;
    let grid = params.grid()?;
    w0.check_grid(&grid)?;
    let n = params.n_steps();
    let sample_steps: Vec<usize> = sample_times
        .iter()
        .map(|t| {
            if t.is_finite() && *t >= 0.0 {
                Ok(((t / params.tau).round() as usize).min(n))
            } else {
                Err(Error::arg(format!("sample time must be finite and >= 0, got {t}")))
            }
        })
        .collect::<Result<_>>()?;
    let mut snapshots: Vec<Option<Snapshot>> = vec![None; sample_steps.len()];
    let mut record = |k: usize, w: &SpectralField| {
        for (slot, s) in snapshots.iter_mut().zip(&sample_steps) {
            if *s == k {
                *slot = Some(Snapshot {
                    step: k,
                    time: k as f64 * params.tau,
                    field: w.clone(),
                });
            }
        }
    };

    let mut acc = StatsAcc::default();
    acc.observe(w0, None);
    record(0, w0);
    let mut w = w0.clone();
    if n > 0 {
        let stepper = Stepper::new(params, params.scheme, params.tau, &grid)?;
        for k in 1..=n {
            let (next, iterations) = stepper.step(&w).map_err(|e| Error::AtStep {
                step: k,
                source: Box::new(e),
            })?;
            w = next;
            acc.steps = k;
            acc.observe(&w, iterations);
            record(k, &w);
        }
    }
    Ok(Trajectory {
        final_state: w,
        snapshots: snapshots.into_iter().map(|s| s.expect("every sample step is reached")).collect(),
        stats: acc.finish(),
    })
}

#[derive(Debug, Clone)]
pub struct Reference {
    /// States at the requested times.
    pub states: Vec<SpectralField>,
    pub stats: TrajectoryStats,
}

/// Runs the symmetric reference scheme of `params.equation` from `w0` and
/// returns the state at each of `times` (non-decreasing, ≥ 0). Between
/// consecutive targets the interval is split into `⌈Δt/ref_tau⌉` equal steps,
/// so every target is hit exactly and no step exceeds `ref_tau`.
pub fn reference_at_times(
    params: &SimParams,
    w0: &SpectralField,
    ref_tau: f64,
    times: &[f64],
) -> Result<Reference> {
    reference_with(params, params.equation.reference_scheme(), w0, ref_tau, times)
}

fn reference_with(
    params: &SimParams,
    scheme: Scheme,
    w0: &SpectralField,
    ref_tau: f64,
    times: &[f64],
) -> Result<Reference> {
    if !(ref_tau > 0.0 && ref_tau.is_finite()) {
        return Err(Error::arg(format!("ref_tau must be > 0, got {ref_tau}")));
    }
    let grid = params.grid()?;
    w0.check_grid(&grid)?;
    let mut steppers: HashMap<u64, Stepper> = HashMap::new();
    let mut acc = StatsAcc::default();
    acc.observe(w0, None);
    let mut states = Vec::with_capacity(times.len());
    let mut w = w0.clone();
    let mut t = 0.0;
    for &target in times {
        if !(target.is_finite() && target >= t) {
            return Err(Error::arg(format!(
                "reference times must be finite, >= 0 and non-decreasing, got {target} after {t}"
            )));
        }
        let dt = target - t;
        // tolerate representation error in `dt`
        let m = (dt / ref_tau * (1.0 - 1e-12)).ceil() as usize;
        if m > 0 {
            let h = dt / m as f64;
            if !steppers.contains_key(&h.to_bits()) {
                steppers.insert(h.to_bits(), Stepper::new(params, scheme, h, &grid)?);
            }
            let stepper = &steppers[&h.to_bits()];
            for _ in 0..m {
                let (next, iterations) = stepper.step(&w).map_err(|e| Error::AtStep {
                    step: acc.steps + 1,
                    source: Box::new(e),
                })?;
                w = next;
                acc.steps += 1;
                acc.observe(&w, iterations);
            }
        }
        t = target;
        states.push(w.clone());
    }
    Ok(Reference {
        states,
        stats: acc.finish(),
    })
}

/// The reference state at the runner's actual horizon.
pub fn reference_solution(params: &SimParams, w0: &SpectralField, ref_tau: f64) -> Result<SpectralField> {
    params.validate()?;
    if ref_tau > params.tau / 10.0 {
        return Err(Error::arg(format!(
            "ref_tau must be <= tau/10 = {}, got {ref_tau}",
            params.tau / 10.0
        )));
    }
    let mut r = reference_at_times(params, w0, ref_tau, &[params.horizon()])?;
    Ok(r.states.pop().expect("one target"))
}

/// Reference at `times` plus the self-consistency gap `‖ref(ref_tau) - ref(ref_tau/2)‖₁`
/// at each time.
pub(crate) fn checked_reference(
    params: &SimParams,
    w0: &SpectralField,
    ref_tau: f64,
    times: &[f64],
) -> Result<(Reference, Vec<f64>)> {
    let (coarse, fine) = join(
        || reference_at_times(params, w0, ref_tau, times),
        || reference_at_times(params, w0, ref_tau / 2.0, times),
    );
    let (coarse, fine) = (coarse?, fine?);
    let gaps = coarse
        .states
        .iter()
        .zip(&fine.states)
        .map(|(a, b)| (a - b).sobolev_norm(1.0))
        .collect();
    Ok((coarse, gaps))
}

/// `‖ref - other‖₁` at the horizon, where `other` is an independent fine-step
/// solution: Strang splitting for the cubic equation, an integrating-factor
/// RK4 for the quadratic ones.
pub fn cross_validate_reference(params: &SimParams, w0: &SpectralField, ref_tau: f64) -> Result<f64> {
    params.validate()?;
    let horizon = params.horizon();
    let reference = reference_at_times(params, w0, ref_tau, &[horizon])?;
    let other = match params.equation {
        Equation::Cubic => reference_with(params, Scheme::Strang, w0, ref_tau, &[horizon])?
            .states
            .remove(0),
        eq => {
            let substeps = ((horizon / ref_tau).ceil() as usize).max(1);
            let kind = if eq == Equation::QuadraticSquare {
                oracle::Equation::QuadraticSquare
            } else {
                oracle::Equation::QuadraticModulusSquare
            };
            oracle::lawson_rk4(w0, params.eps, horizon, substeps, kind)
        }
    };
    Ok((&reference.states[0] - &other).sobolev_norm(1.0))
}
