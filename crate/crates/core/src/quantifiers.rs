//! Information-theoretic quantifiers of binned densities: discrete Fisher
//! information, midpoint variance, and their product (the Cramér–Rao
//! complexity), plus their evolution along an ensemble's relaxation.

use crate::density::{Ensemble, HistogramDensity};
use crate::map::MapParams;
use crate::numeric::neumaier_sum;

/// Absolute tolerance for the monotonicity-violation counter: Monte-Carlo
/// jitter at ensemble sizes around 1e5 must not register as an increase.
pub const FISHER_INCREASE_TOL: f64 = 1e-3;

/// Discrete Fisher information `4 * sum_k (sqrt(p_k) - sqrt(p_{k-1}))^2`,
/// padded with virtual zero bins on both ends (W+1 gaps in total).
///
/// Bounded by [0, 8]: 8 exactly for a delta vector, 8/W for the uniform one.
/// Gap k of the reversed vector is the negation of gap W-k, so accumulating
/// each squared gap together with its mirror partner (and the pair sums in a
/// fixed order) makes the result bitwise invariant under reversal.
pub fn fisher_information(d: &HistogramDensity) -> f64 {
    let sq: Vec<f64> = d.p().iter().map(|&v| v.sqrt()).collect();
    let w = d.w_bins();
    let gap = |k: usize| -> f64 {
        let hi = if k < w { sq[k] } else { 0.0 };
        let lo = if k > 0 { sq[k - 1] } else { 0.0 };
        hi - lo
    };
    let gaps = w + 1;
    let mut paired = Vec::with_capacity(gaps / 2 + 1);
    for k in 0..gaps / 2 {
        let a = gap(k);
        let b = gap(gaps - 1 - k);
        paired.push(a * a + b * b);
    }
    if gaps % 2 == 1 {
        let m = gap(gaps / 2);
        paired.push(m * m);
    }
    4.0 * neumaier_sum(&paired)
}

/// Variance of the bin-midpoint coordinate under `p`, in x-units (so at most
/// 1/4 on [0, 1]).
///
/// Midpoints are centered first — c_i = (2i + 1 - W) / (2W) — which negates
/// exactly under the mirror i -> W-1-i. Accumulating each moment term with
/// its mirror partner then keeps the variance bitwise reversal-invariant and
/// avoids the cancellation of working around the raw mean.
pub fn variance(d: &HistogramDensity) -> f64 {
    let p = d.p();
    let w = p.len();
    let denom = 2.0 * w as f64;
    let c = |i: usize| (2 * i as i64 + 1 - w as i64) as f64 / denom;
    let mut first = Vec::with_capacity(w / 2);
    let mut second = Vec::with_capacity(w / 2);
    for i in 0..w / 2 {
        let j = w - 1 - i;
        let (ci, cj) = (c(i), c(j));
        first.push(p[i] * ci + p[j] * cj);
        second.push(p[i] * (ci * ci) + p[j] * (cj * cj));
    }
    // For odd W the middle midpoint sits exactly at the center (c = 0) and
    // contributes nothing to either moment.
    let mean = neumaier_sum(&first);
    let m2 = neumaier_sum(&second);
    // Clamp the 1-ulp negatives that m2 - mean^2 can produce near a delta.
    (m2 - mean * mean).max(0.0)
}

/// Cramér–Rao complexity `C = I * variance` (x-units).
pub fn cr_complexity(d: &HistogramDensity) -> f64 {
    fisher_information(d) * variance(d)
}

/// Cramér–Rao complexity with the variance in bin-index units (sigma^2 W^2),
/// for the reading in which both factors live on the integer grid.
pub fn cr_complexity_bin_units(d: &HistogramDensity) -> f64 {
    let w = d.w_bins() as f64;
    fisher_information(d) * (variance(d) * w * w)
}

/// Quantifiers of one invariant density together with how it was estimated.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantifierRecord {
    pub mu: f64,
    pub fisher: f64,
    pub variance: f64,
    pub cr_complexity: f64,
    pub n_steps: usize,
    pub w_bins: usize,
    pub seed: u64,
}

impl QuantifierRecord {
    /// Computes all quantifiers from one density estimate.
    pub fn from_density(d: &HistogramDensity, mu: f64, n_steps: usize, seed: u64) -> Self {
        let fisher = fisher_information(d);
        let var = variance(d);
        QuantifierRecord {
            mu,
            fisher,
            variance: var,
            cr_complexity: fisher * var,
            n_steps,
            w_bins: d.w_bins(),
            seed,
        }
    }
}

/// One step of a quantifier evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionRecord {
    pub step: usize,
    pub fisher: f64,
    pub variance: f64,
    pub cr_complexity: f64,
}

/// Quantifiers of an evolving ensemble, one record per step.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantifierSeries {
    pub mu: f64,
    pub w_bins: usize,
    pub m_members: usize,
    pub seed: u64,
    pub points: Vec<EvolutionRecord>,
    /// Steps where Fisher information rose by more than
    /// [`FISHER_INCREASE_TOL`] — recorded, never suppressed.
    pub increase_violations: usize,
}

/// Evolves a copy of the ensemble for `n_max` steps, recording the
/// quantifiers of its histogram at every step (step 0 = initial state).
pub fn quantifier_time_series(
    params: MapParams,
    ensemble: &Ensemble,
    n_max: usize,
    w_bins: usize,
) -> QuantifierSeries {
    let mut e = ensemble.clone();
    let mut points = Vec::with_capacity(n_max + 1);
    for step in 0..=n_max {
        if step > 0 {
            e.step(params);
        }
        let d = e.density(w_bins);
        let fisher = fisher_information(&d);
        let var = variance(&d);
        points.push(EvolutionRecord {
            step,
            fisher,
            variance: var,
            cr_complexity: fisher * var,
        });
    }
    let increase_violations =
        fisher_increase_violations(points.iter().map(|r| r.fisher), FISHER_INCREASE_TOL);
    QuantifierSeries {
        mu: params.mu(),
        w_bins,
        m_members: ensemble.len(),
        seed: ensemble.seed(),
        points,
        increase_violations,
    }
}

/// Counts consecutive steps where Fisher information grew by more than `tol`.
pub fn fisher_increase_violations<I>(fishers: I, tol: f64) -> usize
where
    I: IntoIterator<Item = f64>,
{
    let mut previous: Option<f64> = None;
    let mut count = 0;
    for fisher in fishers {
        if let Some(p) = previous {
            if fisher > p + tol {
                count += 1;
            }
        }
        previous = Some(fisher);
    }
    count
}
