//! Parameter sweeps: one independent job per mu computes the invariant
//! density, its quantifiers, and the averaged map temperature. Per-mu seeds
//! derive from the master seed and the grid index, and every reduction has a
//! fixed order, so results are identical for any worker count.

use crate::config::SweepConfig;
use crate::density::{estimate_invariant_density, generic_x0, Ensemble, InitSpec};
use crate::map::MapParams;
use crate::numeric::spearman;
use crate::quantifiers::{fisher_increase_violations, fisher_information, variance, FISHER_INCREASE_TOL};
use crate::rng::child_seed;
use crate::thermo::temperature_series;
use crate::Result;

/// Per-mu results of a sweep job.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub fisher: f64,
    pub variance: f64,
    pub cr_complexity: f64,
    /// Same product with the variance in bin-index units (sigma^2 W^2).
    pub cr_complexity_bin_units: f64,
    pub t_avg: f64,
    /// t_avg divided by the sweep-wide maximum (0 when every t_avg is 0).
    pub t_norm: f64,
    pub n0: usize,
    pub n0_fallback: bool,
}

/// One grid point: either its results or the error that stopped it. Failures
/// never abort the rest of the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub mu: f64,
    /// The master seed (per-mu streams derive from it and the grid index).
    pub seed: u64,
    pub outcome: std::result::Result<SweepOutcome, String>,
}

/// Runs every grid point and fills the sweep-normalized temperature column.
///
/// Rows come back sorted by mu (the grid is kept sorted). Only configuration
/// problems error out; per-mu failures ride along inside their row.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let jobs: Vec<(usize, f64)> = config.mu_grid.values().iter().copied().enumerate().collect();
    let mut rows = execute(config, &jobs);
    let max = rows
        .iter()
        .filter_map(|r| r.outcome.as_ref().ok().map(|o| o.t_avg))
        .fold(f64::NEG_INFINITY, f64::max);
    if max > 0.0 {
        for row in &mut rows {
            if let Ok(outcome) = &mut row.outcome {
                outcome.t_norm = outcome.t_avg / max;
            }
        }
    } else {
        log::warn!("every averaged temperature is zero; t_norm stays 0");
    }
    Ok(rows)
}

#[cfg(feature = "parallel")]
fn execute(config: &SweepConfig, jobs: &[(usize, f64)]) -> Vec<SweepRow> {
    use rayon::prelude::*;
    match rayon::ThreadPoolBuilder::new().num_threads(config.workers).build() {
        Ok(pool) => pool.install(|| {
            jobs.par_iter().map(|&(i, mu)| sweep_job(config, i, mu)).collect()
        }),
        Err(e) => {
            log::warn!("worker pool unavailable ({e}); sweeping serially");
            jobs.iter().map(|&(i, mu)| sweep_job(config, i, mu)).collect()
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn execute(config: &SweepConfig, jobs: &[(usize, f64)]) -> Vec<SweepRow> {
    jobs.iter().map(|&(i, mu)| sweep_job(config, i, mu)).collect()
}

fn sweep_job(config: &SweepConfig, index: usize, mu: f64) -> SweepRow {
    let seed = config.seed;
    let fail = |e: String| SweepRow { mu, seed, outcome: Err(e) };
    let params = match MapParams::new(mu) {
        Ok(p) => p,
        Err(e) => return fail(e.to_string()),
    };
    // Two independent derived streams per grid point: one picks the orbit
    // start, one draws the temperature ensemble.
    let orbit_seed = child_seed(seed, 2 * index as u64);
    let ensemble_seed = child_seed(seed, 2 * index as u64 + 1);
    let x0 = generic_x0(params, orbit_seed);
    let density = match estimate_invariant_density(
        params,
        x0,
        config.n_steps,
        config.w_bins,
        config.burn_in,
    ) {
        Ok(d) => d,
        Err(e) => return fail(e.to_string()),
    };
    let fisher = fisher_information(&density);
    let var = variance(&density);
    let w = config.w_bins as f64;
    let series = match temperature_series(
        params,
        config.m_members,
        config.n_max_temperature,
        ensemble_seed,
        config.transient,
    ) {
        Ok(s) => s,
        Err(e) => return fail(e.to_string()),
    };
    SweepRow {
        mu,
        seed,
        outcome: Ok(SweepOutcome {
            fisher,
            variance: var,
            cr_complexity: fisher * var,
            cr_complexity_bin_units: fisher * (var * w * w),
            t_avg: series.t_avg(),
            t_norm: 0.0,
            n0: series.n0(),
            n0_fallback: series.n0_is_fallback(),
        }),
    }
}

/// One step of a joint quantifier/temperature evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionStep {
    pub step: usize,
    pub fisher: f64,
    pub variance: f64,
    pub cr_complexity: f64,
    /// Mean squared displacement of the step n -> n+1.
    pub temperature: f64,
}

/// Joint evolution of one ensemble: quantifiers of the state at each step
/// plus the temperature of the step taken from it.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionSeries {
    pub mu: f64,
    pub w_bins: usize,
    pub m_members: usize,
    pub seed: u64,
    pub points: Vec<EvolutionStep>,
    pub increase_violations: usize,
}

/// Evolves a fresh ensemble for `n_max` steps recording quantifiers and
/// temperature at every step.
pub fn run_evolution(
    params: MapParams,
    m_members: usize,
    n_max: usize,
    w_bins: usize,
    seed: u64,
    init: InitSpec,
) -> Result<EvolutionSeries> {
    let mut ensemble = Ensemble::new(m_members, seed, init)?;
    let mut points = Vec::with_capacity(n_max + 1);
    for step in 0..=n_max {
        let density = ensemble.density(w_bins);
        let fisher = fisher_information(&density);
        let var = variance(&density);
        let temperature = ensemble.step_measuring(params);
        points.push(EvolutionStep {
            step,
            fisher,
            variance: var,
            cr_complexity: fisher * var,
            temperature,
        });
    }
    let increase_violations =
        fisher_increase_violations(points.iter().map(|p| p.fisher), FISHER_INCREASE_TOL);
    Ok(EvolutionSeries {
        mu: params.mu(),
        w_bins,
        m_members,
        seed,
        points,
        increase_violations,
    })
}

/// One point of the quantifier-vs-temperature join.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JoinPoint {
    pub t_avg: f64,
    pub fisher: f64,
    pub cr_complexity: f64,
}

/// Reorders successful sweep rows by ascending averaged temperature,
/// preserving the mu order among equal temperatures.
pub fn join_vs_temperature(rows: &[SweepRow]) -> Vec<JoinPoint> {
    let mut joined: Vec<JoinPoint> = rows
        .iter()
        .filter_map(|row| {
            row.outcome.as_ref().ok().map(|o| JoinPoint {
                t_avg: o.t_avg,
                fisher: o.fisher,
                cr_complexity: o.cr_complexity,
            })
        })
        .collect();
    joined.sort_by(|a, b| a.t_avg.partial_cmp(&b.t_avg).unwrap());
    joined
}

/// Spearman rank correlation of fisher against t_avg over the join —
/// reported, never asserted (NaN when degenerate).
pub fn fisher_temperature_spearman(joined: &[JoinPoint]) -> f64 {
    let t: Vec<f64> = joined.iter().map(|p| p.t_avg).collect();
    let f: Vec<f64> = joined.iter().map(|p| p.fisher).collect();
    spearman(&t, &f)
}
