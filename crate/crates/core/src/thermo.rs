//! Equipartition-style "map temperature": the ensemble mean squared one-step
//! displacement, its time series, transient detection, tail averaging, and
//! the analytic fully-chaotic limit (1/4), cross-checked by quadrature.

use std::f64::consts::PI;

use crate::density::{Ensemble, InitSpec};
use crate::map::MapParams;
use crate::numeric::mean;
use crate::{Error, Result};

/// Scale below which temperatures count as "already zero" for transient
/// detection; a purely relative rule would chase decaying orbits forever.
pub const TRANSIENT_FLOOR: f64 = 1e-9;

/// Rolling-window rule deciding where the transient ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransientRule {
    /// Length of each rolling window (steps).
    pub window: usize,
    /// Relative change between consecutive window means that counts as settled.
    pub tol: f64,
}

impl Default for TransientRule {
    fn default() -> Self {
        TransientRule { window: 50, tol: 0.01 }
    }
}

/// Temperature trace of one ensemble: T[n] is the mean squared displacement
/// of step n -> n+1, for n = 0..=n_max.
#[derive(Debug, Clone, PartialEq)]
pub struct TemperatureSeries {
    mu: f64,
    m_members: usize,
    seed: u64,
    t: Vec<f64>,
    n0: usize,
    n0_fallback: bool,
    t_avg: f64,
}

impl TemperatureSeries {
    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn m_members(&self) -> usize {
        self.m_members
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The full trace, index = step.
    pub fn t(&self) -> &[f64] {
        &self.t
    }

    /// First step of the settled tail.
    pub fn n0(&self) -> usize {
        self.n0
    }

    /// True when no window pair settled and n0 fell back to a tenth of the run.
    pub fn n0_is_fallback(&self) -> bool {
        self.n0_fallback
    }

    /// Mean of T over the settled tail n >= n0.
    pub fn t_avg(&self) -> f64 {
        self.t_avg
    }
}

/// Mean squared displacement the ensemble would incur on its next step.
pub fn map_temperature(params: MapParams, ensemble: &Ensemble) -> f64 {
    ensemble.mean_sq_displacement(params)
}

/// Evolves a fresh uniform ensemble of `m_members` for `n_max + 1` steps,
/// recording the temperature of every step and the settled-tail average.
/// Deterministic given (mu, m_members, n_max, seed).
pub fn temperature_series(
    params: MapParams,
    m_members: usize,
    n_max: usize,
    seed: u64,
    rule: TransientRule,
) -> Result<TemperatureSeries> {
    let mut ensemble = Ensemble::new(m_members, seed, InitSpec::Uniform)?;
    let mut t = Vec::with_capacity(n_max + 1);
    for _ in 0..=n_max {
        t.push(ensemble.step_measuring(params));
    }
    let (n0, n0_fallback) = transient_cutoff(&t, rule)?;
    let t_avg = averaged_temperature(&t, n0);
    Ok(TemperatureSeries {
        mu: params.mu(),
        m_members,
        seed,
        t,
        n0,
        n0_fallback,
        t_avg,
    })
}

/// Smallest n0 whose rolling mean stops moving: consecutive window means
/// over [n0, n0+w) and [n0+w, n0+2w) differ by less than `tol` relative to
/// their size (or to [`TRANSIENT_FLOOR`] once everything is tiny).
///
/// Returns (n0, fallback); when no window pair settles, n0 falls back to a
/// tenth of the trace and the flag is set.
pub fn transient_cutoff(t: &[f64], rule: TransientRule) -> Result<(usize, bool)> {
    let w = rule.window;
    let need = 2 * w + 1;
    if t.len() < need {
        return Err(Error::SeriesTooShort { len: t.len(), window: w, need });
    }
    for n0 in 0..=t.len() - 2 * w {
        let a = mean(&t[n0..n0 + w]);
        let b = mean(&t[n0 + w..n0 + 2 * w]);
        if (b - a).abs() <= rule.tol * a.max(b).max(TRANSIENT_FLOOR) {
            return Ok((n0, false));
        }
    }
    let fallback = (t.len() - 1) / 10;
    log::warn!(
        "temperature trace never settled under window={w}, tol={}; \
         falling back to n0={fallback}",
        rule.tol
    );
    Ok((fallback, true))
}

/// Mean temperature over the settled tail t[n0..].
pub fn averaged_temperature(t: &[f64], n0: usize) -> f64 {
    assert!(n0 < t.len(), "cutoff leaves an empty tail");
    mean(&t[n0..])
}

/// Divides every sweep-averaged temperature by the largest one, so the
/// hottest parameter maps to exactly 1.
pub fn normalize_sweep_temperatures(t_avgs: &[f64]) -> Result<Vec<f64>> {
    assert!(!t_avgs.is_empty(), "nothing to normalize");
    let max = t_avgs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max <= 0.0 {
        return Err(Error::AllZeroTemperatures);
    }
    Ok(t_avgs.iter().map(|&v| v / max).collect())
}

/// Long-run temperature of the fully chaotic map: the stationary expectation
/// of the squared displacement (3x - 4x^2)^2 is exactly 1/4.
pub fn analytic_temperature_mu4() -> f64 {
    0.25
}

/// The same expectation by n-node Chebyshev–Gauss quadrature against the
/// arcsine weight — an independent cross-check of the closed form (the
/// integrand is a degree-4 polynomial, so any n >= 3 is exact up to rounding).
pub fn quadrature_temperature_mu4(n: usize) -> f64 {
    assert!(n >= 3, "need at least three nodes for a degree-4 integrand");
    let mut acc = 0.0;
    for k in 1..=n {
        let u = ((2 * k - 1) as f64 * PI / (2 * n) as f64).cos();
        let x = 0.5 * (1.0 + u);
        let v = 3.0 * x - 4.0 * x * x;
        acc += v * v;
    }
    acc / n as f64
}
