//! `lowreg-nlse` command line: argument parsing, config-file merging and
//! dispatch to the harness.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::harness::{
    self, write_records, Equation, Scheme, SimParams, Sweep, SweepOptions, SweepRecord,
};
use crate::spectral::write_field;
use crate::{selftest, Error, Result};

/// Environment variable consulted when `--jobs` is absent.
pub const JOBS_ENV: &str = "LOWREG_NLSE_JOBS";

#[derive(Debug, Parser)]
#[command(
    name = "lowreg-nlse",
    version,
    about = "Low-regularity integrators for quadratic and cubic NLS on the torus"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run to --t-final (or T/ε, T/ε²) and report the error against the reference.
    Simulate(CommonArgs),
    /// Error at the long-time horizon for each τ in --tau-list.
    SweepTau(CommonArgs),
    /// Error at T/ε (quadratic) or T/ε² (cubic) for each ε in --eps-list.
    SweepEps(CommonArgs),
    /// Error against the reference at each of --sample-times.
    ErrorVsTime(CommonArgs),
    /// Oracle-equivalence and symmetry checks on small grids.
    Selftest,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// quadratic-square, quadratic-modulus-square or cubic
    #[arg(long)]
    pub equation: Option<String>,
    /// Scheme or comma-separated schemes: li1, sli2, nrli1, os18, nrsli2, strang
    #[arg(long)]
    pub scheme: Option<String>,
    #[arg(long, value_parser = parse_eps)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub tau_list: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', value_parser = parse_eps)]
    pub eps_list: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub sample_times: Option<Vec<f64>>,
    /// Initial-data regularity exponent
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub modes: Option<usize>,
    /// Horizon constant: t_final = T/ε (quadratic) or T/ε² (cubic)
    #[arg(long = "T", id = "T")]
    pub t_const: Option<f64>,
    /// Absolute final time (simulate only)
    #[arg(long)]
    pub t_final: Option<f64>,
    #[arg(long)]
    pub ref_tau: Option<f64>,
    #[arg(long)]
    pub error_norm_r: Option<f64>,
    #[arg(long)]
    pub fp_tol: Option<f64>,
    #[arg(long)]
    pub fp_max_iter: Option<usize>,
    #[arg(long)]
    pub dealias: bool,
    /// CSV output; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the final state(s) of simulate in the spectral text format
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
    /// JSON file with the same keys as the flags; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub jobs: Option<usize>,
}

/// Config-file mirror of [`CommonArgs`].
#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct FileConfig {
    equation: Option<String>,
    scheme: Option<String>,
    eps: Option<f64>,
    tau: Option<f64>,
    tau_list: Option<Vec<f64>>,
    eps_list: Option<Vec<f64>>,
    sample_times: Option<Vec<f64>>,
    theta: Option<f64>,
    seed: Option<u64>,
    modes: Option<usize>,
    #[serde(rename = "T")]
    t_const: Option<f64>,
    t_final: Option<f64>,
    ref_tau: Option<f64>,
    error_norm_r: Option<f64>,
    fp_tol: Option<f64>,
    fp_max_iter: Option<usize>,
    dealias: Option<bool>,
    out: Option<PathBuf>,
    snapshot: Option<PathBuf>,
    jobs: Option<usize>,
}

fn parse_eps(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("'{s}' is not a number"))?;
    check_eps(v).map_err(|e| e.to_string())?;
    Ok(v)
}

fn check_eps(v: f64) -> Result<()> {
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(Error::arg(format!("eps must lie in the interval (0, 1], got {v}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubcommandKind {
    Simulate,
    SweepTau,
    SweepEps,
    ErrorVsTime,
    Selftest,
}

/// A validated invocation.
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub subcommand: SubcommandKind,
    /// Base parameters; for the sweeps `tau`/`eps` hold the first list entry.
    pub params: SimParams,
    pub schemes: Vec<Scheme>,
    pub t_const: Option<f64>,
    pub tau_list: Vec<f64>,
    pub eps_list: Vec<f64>,
    pub sample_times: Vec<f64>,
    pub ref_tau: Option<f64>,
    pub out: Option<PathBuf>,
    pub snapshot: Option<PathBuf>,
    pub jobs: Option<usize>,
}

pub fn parse_args<I, T>(argv: I) -> Result<CliConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| Error::Argument(e.to_string()))?;
    CliConfig::from_cli(cli)
}

fn missing(flag: &str) -> Error {
    Error::arg(format!("missing required flag --{flag}"))
}

impl CliConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let (kind, args) = match cli.command {
            Command::Simulate(a) => (SubcommandKind::Simulate, a),
            Command::SweepTau(a) => (SubcommandKind::SweepTau, a),
            Command::SweepEps(a) => (SubcommandKind::SweepEps, a),
            Command::ErrorVsTime(a) => (SubcommandKind::ErrorVsTime, a),
            Command::Selftest => (SubcommandKind::Selftest, CommonArgs::default()),
        };
        Self::build(kind, args)
    }

    fn build(kind: SubcommandKind, a: CommonArgs) -> Result<Self> {
        let file = match &a.config {
            Some(path) => {
                let text = fs::read_to_string(path)?;
                serde_json::from_str::<FileConfig>(&text).map_err(|e| {
                    Error::Parse(format!("config file {}: {e}", path.display()))
                })?
            }
            None => FileConfig::default(),
        };
        let jobs = match a.jobs.or(file.jobs) {
            Some(j) => Some(j),
            None => match std::env::var(JOBS_ENV) {
                Ok(v) => Some(v.trim().parse().map_err(|_| {
                    Error::arg(format!("{JOBS_ENV} must be a non-negative integer, got '{v}'"))
                })?),
                Err(_) => None,
            },
        };
        if kind == SubcommandKind::Selftest {
            let equation = Equation::Cubic;
            return Ok(Self {
                subcommand: kind,
                params: SimParams::new(equation, Scheme::Nrli1, 1.0, 1.0),
                schemes: Vec::new(),
                t_const: None,
                tau_list: Vec::new(),
                eps_list: Vec::new(),
                sample_times: Vec::new(),
                ref_tau: None,
                out: None,
                snapshot: None,
                jobs,
            });
        }

        let equation: Equation = a
            .equation
            .or(file.equation)
            .ok_or_else(|| missing("equation"))?
            .parse()?;
        let schemes: Vec<Scheme> = a
            .scheme
            .or(file.scheme)
            .ok_or_else(|| missing("scheme"))?
            .split(',')
            .map(|s| s.trim().parse())
            .collect::<Result<_>>()?;
        for s in &schemes {
            s.check_equation(equation)?;
        }
        let tau_list = a.tau_list.or(file.tau_list).unwrap_or_default();
        let eps_list = a.eps_list.or(file.eps_list).unwrap_or_default();
        let sample_times = a.sample_times.or(file.sample_times).unwrap_or_default();
        for &e in &eps_list {
            check_eps(e)?;
        }

        let eps = match kind {
            SubcommandKind::SweepEps => *eps_list.first().ok_or_else(|| missing("eps-list"))?,
            _ => a.eps.or(file.eps).ok_or_else(|| missing("eps"))?,
        };
        check_eps(eps)?;
        let tau = match kind {
            SubcommandKind::SweepTau => *tau_list.first().ok_or_else(|| missing("tau-list"))?,
            _ => a.tau.or(file.tau).ok_or_else(|| missing("tau"))?,
        };
        if kind == SubcommandKind::ErrorVsTime && sample_times.is_empty() {
            return Err(missing("sample-times"));
        }

        let default_t = if equation.is_cubic() { 0.5 } else { 1.0 };
        let t_const = a.t_const.or(file.t_const);
        let t_final_flag = a.t_final.or(file.t_final);
        if t_final_flag.is_some() && kind != SubcommandKind::Simulate {
            return Err(Error::arg(
                "--t-final applies to simulate only; long-time runs take --T",
            ));
        }
        let t_const_or_default = t_const.unwrap_or(default_t);

        let mut params = SimParams::new(equation, schemes[0], eps, tau);
        params.t_final = t_final_flag
            .unwrap_or_else(|| equation.long_time_horizon(t_const_or_default, eps));
        if let Some(v) = a.theta.or(file.theta) {
            params.theta = v;
        }
        if let Some(v) = a.seed.or(file.seed) {
            params.seed = v;
        }
        if let Some(v) = a.modes.or(file.modes) {
            params.n_modes = v;
        }
        if let Some(v) = a.error_norm_r.or(file.error_norm_r) {
            params.error_norm_r = v;
        }
        if let Some(v) = a.fp_tol.or(file.fp_tol) {
            params.fp_tol = v;
        }
        if let Some(v) = a.fp_max_iter.or(file.fp_max_iter) {
            params.fp_max_iter = v;
        }
        params.dealias = a.dealias || file.dealias.unwrap_or(false);
        params.validate()?;

        Ok(Self {
            subcommand: kind,
            params,
            schemes,
            t_const: Some(t_const_or_default),
            tau_list,
            eps_list,
            sample_times,
            ref_tau: a.ref_tau.or(file.ref_tau),
            out: a.out.or(file.out),
            snapshot: a.snapshot.or(file.snapshot),
            jobs,
        })
    }
}

/// What a completed run produced.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub records: Vec<SweepRecord>,
    pub flagged: usize,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.flagged == 0 {
            0
        } else {
            1
        }
    }
}

/// Executes a validated config, writing CSV to `--out` (atomically) or to
/// `stdout`, and a short summary to `log`.
pub fn run(cfg: &CliConfig, stdout: &mut (dyn Write + Send), log: &mut (dyn Write + Send)) -> Result<RunReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::arg(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_inner(cfg, stdout, log))
}

fn run_inner(cfg: &CliConfig, stdout: &mut (dyn Write + Send), log: &mut (dyn Write + Send)) -> Result<RunReport> {
    let opts = SweepOptions {
        ref_tau: cfg.ref_tau,
    };
    let p = &cfg.params;
    let records: Vec<SweepRecord> = match cfg.subcommand {
        SubcommandKind::Selftest => {
            let ok = selftest::run(log)?;
            return Ok(RunReport {
                records: Vec::new(),
                flagged: usize::from(!ok),
            });
        }
        SubcommandKind::Simulate => {
            let recs = harness::error_vs_time_multi(p, &cfg.schemes, &[p.t_final], &opts)?;
            if let Some(path) = &cfg.snapshot {
                write_snapshots(cfg, path)?;
            }
            recs.into_iter().flatten().collect()
        }
        SubcommandKind::SweepTau => {
            let sweeps = harness::sweep_tau_multi(p, &cfg.schemes, &cfg.tau_list, &opts)?;
            report_fits(&sweeps, log)?;
            for s in &sweeps {
                if !harness::is_monotone_refinement(&s.records) {
                    writeln!(log, "warning: {} errors are not monotone in tau", s.records[0].scheme)?;
                }
            }
            sweeps.into_iter().flat_map(|s| s.records).collect()
        }
        SubcommandKind::SweepEps => {
            let t = cfg.t_const.expect("set during validation");
            let sweeps = harness::sweep_eps_multi(p, &cfg.schemes, &cfg.eps_list, t, &opts)?;
            report_fits(&sweeps, log)?;
            sweeps.into_iter().flat_map(|s| s.records).collect()
        }
        SubcommandKind::ErrorVsTime => {
            harness::error_vs_time_multi(p, &cfg.schemes, &cfg.sample_times, &opts)?
                .into_iter()
                .flatten()
                .collect()
        }
    };

    match &cfg.out {
        Some(path) => write_records(path, &records)?,
        None => {
            let mut w = csv::Writer::from_writer(&mut *stdout);
            for r in &records {
                w.serialize(r)?;
            }
            w.flush()?;
        }
    }
    let flagged = records.iter().filter(|r| !r.is_reliable()).count();
    for r in records.iter().filter(|r| !r.is_reliable()) {
        writeln!(
            log,
            "flagged: {} eps={} tau={} t={}: error {:e} is below {}x the reference gap {:e}",
            r.scheme,
            r.eps,
            r.tau,
            r.t_final,
            r.error,
            harness::RELIABILITY_FACTOR,
            r.reference_gap
        )?;
    }
    Ok(RunReport { records, flagged })
}

fn report_fits(sweeps: &[Sweep], log: &mut dyn Write) -> Result<()> {
    for s in sweeps {
        match &s.fit {
            Some(f) => writeln!(
                log,
                "{}: slope in {} = {:.4} over {} points",
                s.records[0].scheme, f.abscissa, f.slope, f.n_points
            )?,
            None => writeln!(log, "{}: no order fit (zero error)", s.records[0].scheme)?,
        }
    }
    Ok(())
}

fn write_snapshots(cfg: &CliConfig, path: &Path) -> Result<()> {
    let w0 = cfg.params.initial_data()?;
    for &s in &cfg.schemes {
        let p = SimParams {
            scheme: s,
            ..cfg.params.clone()
        };
        let tr = harness::run_trajectory(&p, &w0, &[])?;
        let target = if cfg.schemes.len() == 1 {
            path.to_path_buf()
        } else {
            let stem = path.file_stem().unwrap_or_default().to_string_lossy();
            let name = match path.extension() {
                Some(ext) => format!("{stem}-{s}.{}", ext.to_string_lossy()),
                None => format!("{stem}-{s}"),
            };
            path.with_file_name(name)
        };
        write_field(&tr.final_state, &target)?;
    }
    Ok(())
}

/// Entry point used by the binary; returns the process exit status.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let mut stdout = std::io::stdout();
    let mut stderr = std::io::stderr();
    let outcome = CliConfig::from_cli(cli).and_then(|cfg| run(&cfg, &mut stdout, &mut stderr));
    match outcome {
        Ok(report) => report.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
