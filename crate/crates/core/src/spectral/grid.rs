use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::{Error, Result};

struct Plans {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// Uniform collocation grid `x_j = -π + 2πj/N` with frequencies
/// `L = {-N/2, …, N/2 - 1}`.
///
/// Cloning is cheap; the FFT plans are shared and `Send + Sync`.
#[derive(Clone)]
pub struct TorusGrid {
    plans: Arc<Plans>,
}

impl TorusGrid {
    pub fn new(n_modes: usize) -> Result<Self> {
        if n_modes < 4 || !n_modes.is_power_of_two() {
            return Err(Error::arg(format!(
                "n_modes must be a power of two >= 4, got {n_modes}"
            )));
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n_modes);
        let inverse = planner.plan_fft_inverse(n_modes);
        Ok(Self {
            plans: Arc::new(Plans {
                n: n_modes,
                forward,
                inverse,
            }),
        })
    }

    #[inline]
    pub fn n_modes(&self) -> usize {
        self.plans.n
    }

    #[inline]
    pub fn min_mode(&self) -> i64 {
        -(self.plans.n as i64) / 2
    }

    #[inline]
    pub fn max_mode(&self) -> i64 {
        self.plans.n as i64 / 2 - 1
    }

    /// Frequencies in storage order.
    pub fn modes(&self) -> impl Iterator<Item = i64> + Clone {
        self.min_mode()..=self.max_mode()
    }

    #[inline]
    pub fn mode_at(&self, index: usize) -> i64 {
        index as i64 + self.min_mode()
    }

    /// Storage index of frequency `l`, if `l ∈ L`.
    #[inline]
    pub fn index_of(&self, l: i64) -> Option<usize> {
        if (self.min_mode()..=self.max_mode()).contains(&l) {
            Some((l - self.min_mode()) as usize)
        } else {
            None
        }
    }

    /// The representative of `l` modulo `N` inside `L`.
    #[inline]
    pub fn alias(&self, l: i64) -> i64 {
        let n = self.plans.n as i64;
        (l - self.min_mode()).rem_euclid(n) + self.min_mode()
    }

    pub fn point(&self, j: usize) -> f64 {
        -PI + 2.0 * PI * j as f64 / self.plans.n as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.plans.n).map(|j| self.point(j)).collect()
    }

    /// Samples to ascending-order coefficients.
    pub(crate) fn forward(&self, values: &[Complex64]) -> Vec<Complex64> {
        let n = self.plans.n;
        let mut buf = values.to_vec();
        self.plans.forward.process(&mut buf);
        let scale = 1.0 / n as f64;
        // x_0 = -π contributes the phase e^{ilπ} = (-1)^l.
        self.modes()
            .map(|l| {
                let c = buf[l.rem_euclid(n as i64) as usize] * scale;
                if l & 1 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect()
    }

    /// Ascending-order coefficients to samples.
    pub(crate) fn inverse(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let n = self.plans.n;
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (l, c) in self.modes().zip(coeffs) {
            buf[l.rem_euclid(n as i64) as usize] = if l & 1 == 0 { *c } else { -*c };
        }
        self.plans.inverse.process(&mut buf);
        buf
    }
}

impl PartialEq for TorusGrid {
    fn eq(&self, other: &Self) -> bool {
        self.plans.n == other.plans.n
    }
}

impl Eq for TorusGrid {}

impl fmt::Debug for TorusGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TorusGrid")
            .field("n_modes", &self.plans.n)
            .finish()
    }
}
