use std::fs;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::trajectory::{checked_reference, run_trajectory, TrajectoryStats};
use super::{fit_order, Equation, OrderFit, Scheme, SimParams};
use crate::spectral::SpectralField;
use crate::{Error, Result};

/// A record is reliable when its error is at least this multiple of the
/// reference self-consistency gap.
pub const RELIABILITY_FACTOR: f64 = 10.0;

/// Largest allowed error growth between adjacent points of a τ sweep as τ decreases.
pub const MONOTONE_FACTOR: f64 = 1.5;

/// Lower bound on the default reference step.
pub const REF_TAU_FLOOR: f64 = 1e-4;

/// One measured error. Serialised column order is the CSV schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub equation: Equation,
    pub scheme: Scheme,
    pub eps: f64,
    pub tau: f64,
    pub theta: f64,
    pub seed: u64,
    pub n_modes: usize,
    /// Actual final time, `n_steps · τ`.
    pub t_final: f64,
    pub error_norm_r: f64,
    pub error: f64,
    pub ref_tau: f64,
    pub wall_seconds: f64,
    pub fp_iter_max: Option<usize>,
    pub fp_iter_mean: Option<f64>,
    /// `‖ref(ref_tau) - ref(ref_tau/2)‖₁` at `t_final`.
    #[serde(skip)]
    pub reference_gap: f64,
    /// `max_n ‖w^n‖₁` along the scheme trajectory.
    #[serde(skip)]
    pub max_h1: f64,
    /// `max ‖w(t)‖₁` along the reference trajectory.
    #[serde(skip)]
    pub reference_max_h1: f64,
}

impl SweepRecord {
    pub fn is_reliable(&self) -> bool {
        self.error.is_finite() && self.error >= RELIABILITY_FACTOR * self.reference_gap
    }

    /// Same record with the wall-clock field cleared, for determinism checks.
    pub fn without_timing(&self) -> Self {
        Self {
            wall_seconds: 0.0,
            ..self.clone()
        }
    }

    fn new(p: &SimParams, t_final: f64, error: f64, ref_tau: f64, wall: f64, stats: &TrajectoryStats) -> Self {
        Self {
            equation: p.equation,
            scheme: p.scheme,
            eps: p.eps,
            tau: p.tau,
            theta: p.theta,
            seed: p.seed,
            n_modes: p.n_modes,
            t_final,
            error_norm_r: p.error_norm_r,
            error,
            ref_tau,
            wall_seconds: wall,
            fp_iter_max: stats.fp_iter_max,
            fp_iter_mean: stats.fp_iter_mean,
            reference_gap: 0.0,
            max_h1: stats.max_h1,
            reference_max_h1: 0.0,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SweepOptions {
    /// Reference step; defaults to `max(min τ / 100, REF_TAU_FLOOR)`.
    pub ref_tau: Option<f64>,
}

impl SweepOptions {
    fn ref_tau(&self, min_tau: f64) -> Result<f64> {
        let r = self.ref_tau.unwrap_or((min_tau / 100.0).max(REF_TAU_FLOOR));
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::arg(format!("ref_tau must be > 0, got {r}")));
        }
        if r > min_tau / 10.0 {
            return Err(Error::arg(format!(
                "ref_tau must be <= tau/10 = {}, got {r}",
                min_tau / 10.0
            )));
        }
        Ok(r)
    }
}

#[derive(Debug, Clone)]
pub struct Sweep {
    pub records: Vec<SweepRecord>,
    /// `None` when some error is zero, so no log-log fit exists.
    pub fit: Option<OrderFit>,
}

impl Sweep {
    fn fitted(abscissa: &str, records: Vec<SweepRecord>, x: impl Fn(&SweepRecord) -> f64) -> Self {
        let points: Vec<(f64, f64)> = records.iter().map(|r| (x(r), r.error)).collect();
        Self {
            fit: fit_order(abscissa, &points).ok(),
            records,
        }
    }
}

fn with_scheme(base: &SimParams, scheme: Scheme) -> Result<SimParams> {
    let p = SimParams {
        scheme,
        ..base.clone()
    };
    p.validate()?;
    Ok(p)
}

fn timed_run(p: &SimParams, w0: &SpectralField, samples: &[f64]) -> Result<(super::Trajectory, f64)> {
    let start = Instant::now();
    let tr = run_trajectory(p, w0, samples)?;
    Ok((tr, start.elapsed().as_secs_f64()))
}

fn distinct_sorted(mut times: Vec<f64>) -> Vec<f64> {
    times.sort_by(f64::total_cmp);
    times.dedup();
    times
}

fn position(times: &[f64], t: f64) -> usize {
    times.iter().position(|s| *s == t).expect("time was registered")
}

/// Error at the snapped horizon against a shared reference, for each τ.
pub fn sweep_tau(base: &SimParams, tau_list: &[f64], opts: &SweepOptions) -> Result<Sweep> {
    Ok(sweep_tau_multi(base, &[base.scheme], tau_list, opts)?.remove(0))
}

/// [`sweep_tau`] for several schemes sharing one reference; one sweep per scheme.
pub fn sweep_tau_multi(
    base: &SimParams,
    schemes: &[Scheme],
    tau_list: &[f64],
    opts: &SweepOptions,
) -> Result<Vec<Sweep>> {
    if tau_list.len() < 4 {
        return Err(Error::arg(format!("tau sweep needs at least 4 values, got {}", tau_list.len())));
    }
    let mut cells = Vec::new();
    for &s in schemes {
        for &tau in tau_list {
            let p = SimParams { tau, ..with_scheme(base, s)? };
            if p.n_steps() == 0 {
                return Err(Error::arg(format!("tau = {tau} exceeds t_final = {}", p.t_final)));
            }
            cells.push(p);
        }
    }
    let min_tau = tau_list.iter().copied().fold(f64::INFINITY, f64::min);
    let ref_tau = opts.ref_tau(min_tau)?;
    let w0 = base.initial_data()?;
    let times = distinct_sorted(cells.iter().map(SimParams::horizon).collect());
    let (reference, gaps) = checked_reference(base, &w0, ref_tau, &times)?;

    let records: Vec<SweepRecord> = cells
        .par_iter()
        .map(|p| {
            let (tr, wall) = timed_run(p, &w0, &[])?;
            let t = p.horizon();
            let k = position(&times, t);
            let error = (&tr.final_state - &reference.states[k]).sobolev_norm(p.error_norm_r);
            let mut r = SweepRecord::new(p, t, error, ref_tau, wall, &tr.stats);
            r.reference_gap = gaps[k];
            r.reference_max_h1 = reference.stats.max_h1;
            Ok(r)
        })
        .collect::<Result<_>>()?;
    Ok(records
        .chunks(tau_list.len())
        .map(|c| Sweep::fitted("tau", c.to_vec(), |r| r.tau))
        .collect())
}

/// Error at `T/ε` (quadratic) or `T/ε²` (cubic) for each ε, with fixed τ.
pub fn sweep_eps(base: &SimParams, eps_list: &[f64], t_const: f64, opts: &SweepOptions) -> Result<Sweep> {
    Ok(sweep_eps_multi(base, &[base.scheme], eps_list, t_const, opts)?.remove(0))
}

pub fn sweep_eps_multi(
    base: &SimParams,
    schemes: &[Scheme],
    eps_list: &[f64],
    t_const: f64,
    opts: &SweepOptions,
) -> Result<Vec<Sweep>> {
    if eps_list.len() < 3 {
        return Err(Error::arg(format!("eps sweep needs at least 3 values, got {}", eps_list.len())));
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::arg("eps sweep values must be strictly decreasing"));
    }
    if !(t_const > 0.0 && t_const.is_finite()) {
        return Err(Error::arg(format!("T must be > 0, got {t_const}")));
    }
    let ref_tau = opts.ref_tau(base.tau)?;
    let w0 = base.initial_data()?;
    for &s in schemes {
        with_scheme(base, s)?;
    }

    let per_eps: Vec<Vec<SweepRecord>> = eps_list
        .par_iter()
        .map(|&eps| {
            let p = SimParams { eps, ..base.clone() }.with_long_time(t_const);
            p.validate()?;
            let t = p.horizon();
            let (reference, gaps) = checked_reference(&p, &w0, ref_tau, &[t])?;
            schemes
                .par_iter()
                .map(|&s| {
                    let ps = with_scheme(&p, s)?;
                    let (tr, wall) = timed_run(&ps, &w0, &[])?;
                    let error = (&tr.final_state - &reference.states[0]).sobolev_norm(ps.error_norm_r);
                    let mut r = SweepRecord::new(&ps, t, error, ref_tau, wall, &tr.stats);
                    r.reference_gap = gaps[0];
                    r.reference_max_h1 = reference.stats.max_h1;
                    Ok(r)
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok((0..schemes.len())
        .map(|j| Sweep::fitted("eps", per_eps.iter().map(|row| row[j].clone()).collect(), |r| r.eps))
        .collect())
}

/// Error against the reference at each sample time (snapped to the step grid).
pub fn error_vs_time(base: &SimParams, sample_times: &[f64], opts: &SweepOptions) -> Result<Vec<SweepRecord>> {
    Ok(error_vs_time_multi(base, &[base.scheme], sample_times, opts)?.remove(0))
}

pub fn error_vs_time_multi(
    base: &SimParams,
    schemes: &[Scheme],
    sample_times: &[f64],
    opts: &SweepOptions,
) -> Result<Vec<Vec<SweepRecord>>> {
    base.validate()?;
    if sample_times.is_empty() {
        return Err(Error::arg("error-vs-time needs at least one sample time"));
    }
    if sample_times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::arg("sample times must be strictly increasing"));
    }
    let last = sample_times[sample_times.len() - 1];
    if sample_times[0] < 0.0 || last > base.t_final + base.tau / 2.0 {
        return Err(Error::arg(format!(
            "sample times must lie in [0, t_final = {}]",
            base.t_final
        )));
    }
    let ref_tau = opts.ref_tau(base.tau)?;
    let n = base.n_steps();
    let snapped: Vec<f64> = sample_times
        .iter()
        .map(|t| ((t / base.tau).round() as usize).min(n) as f64 * base.tau)
        .collect();
    let times = distinct_sorted(snapped.clone());
    let w0 = base.initial_data()?;
    let (reference, gaps) = checked_reference(base, &w0, ref_tau, &times)?;

    schemes
        .par_iter()
        .map(|&s| {
            let p = with_scheme(base, s)?;
            let (tr, wall) = timed_run(&p, &w0, sample_times)?;
            Ok(tr
                .snapshots
                .iter()
                .map(|snap| {
                    let k = position(&times, snap.time);
                    let error = (&snap.field - &reference.states[k]).sobolev_norm(p.error_norm_r);
                    let mut r = SweepRecord::new(&p, snap.time, error, ref_tau, wall, &tr.stats);
                    r.reference_gap = gaps[k];
                    r.reference_max_h1 = reference.stats.max_h1;
                    r
                })
                .collect())
        })
        .collect()
}

/// Errors are non-increasing as τ decreases, up to [`MONOTONE_FACTOR`]
/// between adjacent points.
pub fn is_monotone_refinement(records: &[SweepRecord]) -> bool {
    let mut sorted: Vec<&SweepRecord> = records.iter().collect();
    sorted.sort_by(|a, b| b.tau.total_cmp(&a.tau));
    sorted.windows(2).all(|w| w[1].error <= MONOTONE_FACTOR * w[0].error)
}

/// Writes records as CSV through a temporary file and a rename.
pub fn write_records(path: &Path, records: &[SweepRecord]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::arg(format!("output path {} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut w = csv::Writer::from_path(&tmp)?;
        if records.is_empty() {
            w.write_record(CSV_HEADER)?;
        }
        for r in records {
            w.serialize(r)?;
        }
        w.flush()?;
        fs::rename(&tmp, path)?;
        Ok(())
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

pub fn read_records(path: &Path) -> Result<Vec<SweepRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(Error::Parse(format!("unexpected CSV header {header:?}")));
    }
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

pub(crate) const CSV_HEADER: [&str; 14] = [
    "equation",
    "scheme",
    "eps",
    "tau",
    "theta",
    "seed",
    "n_modes",
    "t_final",
    "error_norm_r",
    "error",
    "ref_tau",
    "wall_seconds",
    "fp_iter_max",
    "fp_iter_mean",
];
