//! Trajectories, reference solutions, and the error-vs-τ / ε / t experiments.

mod fit;
mod sweep;
mod trajectory;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::quadratic::{DEFAULT_FP_MAX_ITER, DEFAULT_FP_TOL};
use crate::spectral::{random_initial_data, SpectralField, TorusGrid};
use crate::{Error, Result};

pub use fit::{fit_order, OrderFit};
pub use sweep::{
    error_vs_time, error_vs_time_multi, is_monotone_refinement, read_records, sweep_eps,
    sweep_eps_multi, sweep_tau, sweep_tau_multi, write_records, Sweep, SweepOptions, SweepRecord,
    MONOTONE_FACTOR, RELIABILITY_FACTOR,
};
pub use trajectory::{
    cross_validate_reference, reference_at_times, reference_solution, run_trajectory,
    Reference, Snapshot, Trajectory, TrajectoryStats,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Equation {
    /// `i w_t = -w_xx + ε w²`
    QuadraticSquare,
    /// `i w_t = -w_xx + ε |w|²`
    QuadraticModulusSquare,
    /// `i w_t = -w_xx + ε² |w|² w`
    Cubic,
}

impl Equation {
    pub fn is_cubic(self) -> bool {
        self == Equation::Cubic
    }

    /// `T/ε` for the quadratic equations, `T/ε²` for the cubic one.
    pub fn long_time_horizon(self, t_const: f64, eps: f64) -> f64 {
        if self.is_cubic() {
            t_const / (eps * eps)
        } else {
            t_const / eps
        }
    }

    /// The symmetric scheme used for reference solutions.
    pub fn reference_scheme(self) -> Scheme {
        if self.is_cubic() {
            Scheme::Nrsli2
        } else {
            Scheme::Sli2
        }
    }

    pub fn schemes(self) -> &'static [Scheme] {
        if self.is_cubic() {
            &[Scheme::Nrli1, Scheme::Os18, Scheme::Nrsli2, Scheme::Strang]
        } else {
            &[Scheme::Li1, Scheme::Sli2]
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Equation::QuadraticSquare => "quadratic-square",
            Equation::QuadraticModulusSquare => "quadratic-modulus-square",
            Equation::Cubic => "cubic",
        })
    }
}

impl FromStr for Equation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "quadratic-square" | "quadratic" => Ok(Equation::QuadraticSquare),
            "quadratic-modulus-square" | "quadratic-modulus" => Ok(Equation::QuadraticModulusSquare),
            "cubic" => Ok(Equation::Cubic),
            _ => Err(Error::arg(format!(
                "unknown equation '{s}' (expected quadratic-square, quadratic-modulus-square or cubic)"
            ))),
        }
    }
}

/// Scheme identifiers. For the `|w|²` equation `Li1`/`Sli2` select the
/// conjugate-nonlinearity variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Li1,
    Sli2,
    Nrli1,
    Os18,
    Nrsli2,
    Strang,
}

impl Scheme {
    pub fn is_implicit(self) -> bool {
        matches!(self, Scheme::Sli2 | Scheme::Nrsli2)
    }

    pub fn check_equation(self, equation: Equation) -> Result<()> {
        if equation.schemes().contains(&self) {
            Ok(())
        } else {
            Err(Error::arg(format!("scheme {self} does not apply to the {equation} equation")))
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Li1 => "li1",
            Scheme::Sli2 => "sli2",
            Scheme::Nrli1 => "nrli1",
            Scheme::Os18 => "os18",
            Scheme::Nrsli2 => "nrsli2",
            Scheme::Strang => "strang",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "li1" => Ok(Scheme::Li1),
            "sli2" => Ok(Scheme::Sli2),
            "nrli1" => Ok(Scheme::Nrli1),
            "os18" => Ok(Scheme::Os18),
            "nrsli2" => Ok(Scheme::Nrsli2),
            "strang" => Ok(Scheme::Strang),
            _ => Err(Error::arg(format!(
                "unknown scheme '{s}' (expected li1, sli2, nrli1, os18, nrsli2 or strang)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimParams {
    pub equation: Equation,
    pub scheme: Scheme,
    pub eps: f64,
    pub tau: f64,
    /// Requested final time; the runner takes `round(t_final/τ)` steps.
    pub t_final: f64,
    pub n_modes: usize,
    pub theta: f64,
    pub seed: u64,
    pub error_norm_r: f64,
    pub fp_tol: f64,
    pub fp_max_iter: usize,
    pub dealias: bool,
}

impl SimParams {
    pub fn new(equation: Equation, scheme: Scheme, eps: f64, tau: f64) -> Self {
        Self {
            equation,
            scheme,
            eps,
            tau,
            t_final: 0.0,
            n_modes: 128,
            theta: 5.0,
            seed: 0,
            error_norm_r: 1.0,
            fp_tol: DEFAULT_FP_TOL,
            fp_max_iter: DEFAULT_FP_MAX_ITER,
            dealias: false,
        }
    }

    /// Sets `t_final` to `T/ε` (quadratic) or `T/ε²` (cubic).
    pub fn with_long_time(mut self, t_const: f64) -> Self {
        self.t_final = self.equation.long_time_horizon(t_const, self.eps);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return Err(Error::arg(format!("eps must lie in (0, 1], got {}", self.eps)));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::arg(format!("tau must be > 0, got {}", self.tau)));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(Error::arg(format!("t_final must be >= 0, got {}", self.t_final)));
        }
        if !(self.theta >= 0.0 && self.theta.is_finite()) {
            return Err(Error::arg(format!("theta must be >= 0, got {}", self.theta)));
        }
        if !(self.error_norm_r >= 0.0 && self.error_norm_r.is_finite()) {
            return Err(Error::arg(format!(
                "error_norm_r must be >= 0, got {}",
                self.error_norm_r
            )));
        }
        if !(self.fp_tol > 0.0) || self.fp_max_iter == 0 {
            return Err(Error::arg("fixed-point settings need tol > 0 and max_iter >= 1"));
        }
        self.scheme.check_equation(self.equation)?;
        TorusGrid::new(self.n_modes).map(|_| ())
    }

    pub fn n_steps(&self) -> usize {
        (self.t_final / self.tau).round() as usize
    }

    /// The final time actually reached, `n_steps · τ`.
    pub fn horizon(&self) -> f64 {
        self.n_steps() as f64 * self.tau
    }

    pub fn grid(&self) -> Result<TorusGrid> {
        TorusGrid::new(self.n_modes)
    }

    /// Random data with the configured `θ` and seed.
    pub fn initial_data(&self) -> Result<SpectralField> {
        random_initial_data(&self.grid()?, self.theta, self.seed)
    }
}
