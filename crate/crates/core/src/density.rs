//! Invariant and time-resolved densities of the logistic map, built three
//! independent ways: long-orbit histograms, the exact arcsine law at mu = 4,
//! and the stationary vector of a discretized transfer operator. Evolving
//! ensembles provide time-resolved histograms on top.

use std::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

use crate::map::{check_unit, fixed_point, step_unchecked, MapParams};
use crate::numeric::{neumaier_sum, SUM_CHUNK};
use crate::rng::uniform_open01;
use crate::{Error, Result};

/// Probability masses over `w` equal bins of [0, 1].
///
/// Bin i covers [i/w, (i+1)/w) — except the last, which also absorbs x = 1 —
/// and is represented by its midpoint coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramDensity {
    w: usize,
    p: Vec<f64>,
}

impl HistogramDensity {
    /// Normalizes raw bin counts (total must be positive).
    pub fn from_counts(counts: &[u64]) -> Self {
        let total: u64 = counts.iter().sum();
        assert!(total > 0, "histogram needs at least one count");
        let t = total as f64;
        HistogramDensity {
            w: counts.len(),
            p: counts.iter().map(|&c| c as f64 / t).collect(),
        }
    }

    /// Validates an explicit probability vector: entries nonnegative and
    /// summing to 1 within 1e-9.
    pub fn from_probabilities(p: Vec<f64>) -> Result<Self> {
        for (index, &value) in p.iter().enumerate() {
            if !(value >= 0.0) {
                return Err(Error::NegativeProbability { index, value });
            }
        }
        let sum = neumaier_sum(&p);
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized { sum });
        }
        Ok(HistogramDensity { w: p.len(), p })
    }

    pub fn w_bins(&self) -> usize {
        self.w
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    /// Midpoint coordinate of bin i.
    pub fn z_mid(&self, i: usize) -> f64 {
        (i as f64 + 0.5) / self.w as f64
    }

    pub fn bin_left(&self, i: usize) -> f64 {
        i as f64 / self.w as f64
    }

    pub fn bin_right(&self, i: usize) -> f64 {
        (i + 1) as f64 / self.w as f64
    }

    /// Compensated total mass (~1 by construction; exposed as a diagnostic).
    pub fn total(&self) -> f64 {
        neumaier_sum(&self.p)
    }

    /// L1 distance to another density on the same binning.
    pub fn l1_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.w, other.w, "binnings differ");
        self.p
            .iter()
            .zip(&other.p)
            .map(|(a, b)| (a - b).abs())
            .sum()
    }
}

/// Bin index of x on a `w`-bin grid, with x = 1 folded into the last bin
/// (the half-open bins would otherwise leave it homeless).
#[inline]
pub fn bin_index(x: f64, w: usize) -> usize {
    ((x * w as f64) as usize).min(w - 1)
}

/// Long-orbit histogram estimate of the invariant density: the fraction of
/// the `n_steps` post-burn-in orbit points landing in each bin.
///
/// Warns (but proceeds) when `n_steps < 10 * w_bins`, where per-bin counts
/// become too thin for stable statistics.
pub fn estimate_invariant_density(
    params: MapParams,
    x0: f64,
    n_steps: usize,
    w_bins: usize,
    burn_in: usize,
) -> Result<HistogramDensity> {
    check_unit(x0)?;
    assert!(w_bins >= 1 && n_steps >= 1);
    if n_steps < 10 * w_bins {
        log::warn!(
            "n_steps = {n_steps} is below 10 * w_bins = {}; the histogram will be noisy",
            10 * w_bins
        );
    }
    let mu = params.mu();
    let mut x = x0;
    for _ in 0..burn_in {
        x = step_unchecked(mu, x);
    }
    let mut counts = vec![0u64; w_bins];
    for _ in 0..n_steps {
        counts[bin_index(x, w_bins)] += 1;
        x = step_unchecked(mu, x);
    }
    Ok(HistogramDensity::from_counts(&counts))
}

/// Invariant density of the mu = 4 map: `1 / (pi * sqrt(x (1 - x)))`.
///
/// Defined on the open interval; the endpoints are integrable singularities.
pub fn analytic_density_mu4(x: f64) -> Result<f64> {
    check_unit(x)?;
    if x == 0.0 || x == 1.0 {
        return Err(Error::DensitySingular { x });
    }
    Ok(1.0 / (PI * (x * (1.0 - x)).sqrt()))
}

/// Closed-form CDF of the arcsine law: `F(x) = (2/pi) * asin(sqrt(x))`.
pub fn arcsine_cdf(x: f64) -> f64 {
    (2.0 / PI) * x.clamp(0.0, 1.0).sqrt().asin()
}

/// Exact bin masses of the arcsine law: `p[i] = F((i+1)/w) - F(i/w)`.
///
/// Built from one half and mirrored, so `p[i] == p[w-1-i]` holds bitwise and
/// the total telescopes to 1.
pub fn discretize_analytic_mu4(w_bins: usize) -> HistogramDensity {
    assert!(w_bins >= 2, "need at least two bins");
    let w = w_bins;
    let mut p = vec![0.0; w];
    for i in 0..w / 2 {
        let mass = arcsine_cdf((i + 1) as f64 / w as f64) - arcsine_cdf(i as f64 / w as f64);
        p[i] = mass;
        p[w - 1 - i] = mass;
    }
    if w % 2 == 1 {
        let mid = w / 2;
        p[mid] = (1.0 - 2.0 * arcsine_cdf(mid as f64 / w as f64)).max(0.0);
    }
    HistogramDensity { w, p }
}

/// Row-stochastic bin-transition matrix: row i records where the map sends
/// bin i's mass. Rows are stored sparse as (column, weight) pairs.
#[derive(Debug, Clone)]
pub struct UlamMatrix {
    w: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl UlamMatrix {
    pub fn w_bins(&self) -> usize {
        self.w
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    /// Compensated sum of one row (~1 by construction).
    pub fn row_sum(&self, i: usize) -> f64 {
        let weights: Vec<f64> = self.rows[i].iter().map(|&(_, m)| m).collect();
        neumaier_sum(&weights)
    }
}

/// Finite-rank discretization of the map's transfer operator.
///
/// Each bin is probed with `samples_per_bin` equispaced points strictly in
/// its interior, so the construction is deterministic — no seed enters.
pub fn ulam_transition_matrix(
    params: MapParams,
    w_bins: usize,
    samples_per_bin: usize,
) -> UlamMatrix {
    assert!(w_bins >= 2, "need at least two bins");
    assert!(samples_per_bin >= 100, "too few samples per bin for a stable row");
    let mu = params.mu();
    let w = w_bins;
    let s = samples_per_bin;
    let mut rows = Vec::with_capacity(w);
    for i in 0..w {
        // The image of an interval is an interval, so each row touches only
        // a handful of columns; a linear scan of the small row is cheap.
        let mut hits: Vec<(usize, u64)> = Vec::with_capacity(8);
        for k in 0..s {
            let u = (i as f64 + (k as f64 + 0.5) / s as f64) / w as f64;
            let j = bin_index(step_unchecked(mu, u), w);
            match hits.iter_mut().find(|(col, _)| *col == j) {
                Some((_, c)) => *c += 1,
                None => hits.push((j, 1)),
            }
        }
        hits.sort_unstable_by_key(|&(col, _)| col);
        rows.push(
            hits.into_iter()
                .map(|(col, c)| (col, c as f64 / s as f64))
                .collect(),
        );
    }
    UlamMatrix { w, rows }
}

/// Stationary density of the matrix by damped left power iteration.
///
/// Each pass computes `p M`, measures the true stationarity residual
/// `||p M - p||_1`, and returns `p` as soon as that drops below `tol` --
/// so the returned vector satisfies the bound directly. Between passes the
/// iterate is averaged with its image, `p <- (p + p M) / 2`; this keeps the
/// stationary vector unchanged while suppressing the oscillatory modes that
/// plain power iteration cannot damp (a fixed point of the map sitting
/// exactly on a bin boundary with negative slope yields a two-cycle between
/// adjacent bins, and the undamped iteration then bounces forever).
pub fn ulam_invariant_density(
    matrix: &UlamMatrix,
    tol: f64,
    max_iters: usize,
) -> Result<HistogramDensity> {
    let w = matrix.w;
    let mut p = vec![1.0 / w as f64; w];
    let mut image = vec![0.0; w];
    let mut residual = f64::INFINITY;
    for _ in 0..max_iters {
        image.iter_mut().for_each(|q| *q = 0.0);
        for (i, row) in matrix.rows.iter().enumerate() {
            let pi = p[i];
            if pi == 0.0 {
                continue;
            }
            for &(j, m) in row {
                image[j] += pi * m;
            }
        }
        residual = p.iter().zip(&image).map(|(a, b)| (a - b).abs()).sum();
        if residual < tol {
            return Ok(HistogramDensity { w, p });
        }
        p.iter_mut()
            .zip(&image)
            .for_each(|(a, &b)| *a = 0.5 * (*a + b));
        // Renormalize each pass so rounding drift cannot accumulate over
        // hundreds of iterations.
        let s = neumaier_sum(&p);
        p.iter_mut().for_each(|q| *q /= s);
    }
    Err(Error::NoConvergence { iters: max_iters, residual })
}

/// How ensemble members draw their initial states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitSpec {
    /// Independent uniform draws from (0, 1).
    Uniform,
    /// Uniform draws inside one bin of a `w_bins` grid (a discrete delta).
    SingleBin { bin: usize, w_bins: usize },
    /// Every member at the same point.
    Point(f64),
}

impl InitSpec {
    /// Parses `uniform`, `bin:K` (on a `w_bins` grid), or `point:X`.
    pub fn parse(spec: &str, w_bins: usize) -> Result<InitSpec> {
        let s = spec.trim();
        if s.eq_ignore_ascii_case("uniform") {
            return Ok(InitSpec::Uniform);
        }
        if let Some(rest) = s.strip_prefix("bin:") {
            let bin: usize = rest.trim().parse().map_err(|_| {
                Error::Config(format!("init bin index '{}' is not an integer", rest.trim()))
            })?;
            return Ok(InitSpec::SingleBin { bin, w_bins });
        }
        if let Some(rest) = s.strip_prefix("point:") {
            let x: f64 = rest.trim().parse().map_err(|_| {
                Error::Config(format!("init point '{}' is not a number", rest.trim()))
            })?;
            return Ok(InitSpec::Point(x));
        }
        Err(Error::Config(format!(
            "init must be 'uniform', 'bin:K', or 'point:X', got '{spec}'"
        )))
    }
}

/// M map states evolving synchronously; reproducible from (seed, init, M).
#[derive(Debug, Clone)]
pub struct Ensemble {
    seed: u64,
    init: InitSpec,
    states: Vec<f64>,
}

impl Ensemble {
    /// Draws `m` initial states according to `init` from a seeded stream.
    pub fn new(m: usize, seed: u64, init: InitSpec) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptyEnsemble);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let states: Vec<f64> = match init {
            InitSpec::Uniform => (0..m).map(|_| uniform_open01(&mut rng)).collect(),
            InitSpec::SingleBin { bin, w_bins } => {
                if bin >= w_bins {
                    return Err(Error::BinOutOfRange { bin, w_bins });
                }
                (0..m)
                    .map(|_| (bin as f64 + uniform_open01(&mut rng)) / w_bins as f64)
                    .collect()
            }
            InitSpec::Point(x0) => {
                check_unit(x0)?;
                vec![x0; m]
            }
        };
        Ok(Ensemble { seed, init, states })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn init(&self) -> InitSpec {
        self.init
    }

    pub fn states(&self) -> &[f64] {
        &self.states
    }

    /// One synchronous map step for every member.
    pub fn step(&mut self, params: MapParams) {
        let mu = params.mu();
        for x in &mut self.states {
            *x = step_unchecked(mu, *x);
        }
    }

    /// One synchronous step that also returns the mean squared displacement
    /// of that step (the instantaneous map temperature).
    ///
    /// Partial sums run over fixed-size chunks folded in order, so the value
    /// is independent of any parallel scheduling above this call.
    pub fn step_measuring(&mut self, params: MapParams) -> f64 {
        let mu = params.mu();
        let partials: Vec<f64> = self
            .states
            .chunks_mut(SUM_CHUNK)
            .map(|chunk| {
                let mut local = 0.0;
                for x in chunk {
                    let y = step_unchecked(mu, *x);
                    let v = y - *x;
                    local += v * v;
                    *x = y;
                }
                local
            })
            .collect();
        neumaier_sum(&partials) / self.states.len() as f64
    }

    /// Mean squared displacement of the *next* step without advancing.
    pub fn mean_sq_displacement(&self, params: MapParams) -> f64 {
        let mu = params.mu();
        let partials: Vec<f64> = self
            .states
            .chunks(SUM_CHUNK)
            .map(|chunk| {
                chunk
                    .iter()
                    .map(|&x| {
                        let v = step_unchecked(mu, x) - x;
                        v * v
                    })
                    .sum()
            })
            .collect();
        neumaier_sum(&partials) / self.states.len() as f64
    }

    /// Histogram of the current member states.
    pub fn density(&self, w_bins: usize) -> HistogramDensity {
        let mut counts = vec![0u64; w_bins];
        for &x in &self.states {
            counts[bin_index(x, w_bins)] += 1;
        }
        HistogramDensity::from_counts(&counts)
    }
}

/// Histogram of the ensemble after `n` synchronous steps; the input ensemble
/// is left untouched.
pub fn ensemble_density(
    params: MapParams,
    ensemble: &Ensemble,
    n: usize,
    w_bins: usize,
) -> HistogramDensity {
    let mut e = ensemble.clone();
    for _ in 0..n {
        e.step(params);
    }
    e.density(w_bins)
}

/// Seeded starting point avoiding the measure-zero exceptional set (0, 1,
/// the fixed points, and 1/2 when mu = 4) where a long orbit would not
/// represent the generic invariant density.
pub fn generic_x0(params: MapParams, seed: u64) -> f64 {
    let mu = params.mu();
    let mut avoid = vec![0.0, 1.0, fixed_point(params).x];
    if mu >= 1.0 {
        avoid.push(0.0); // the origin stays fixed for every mu
    }
    if mu == 4.0 {
        avoid.push(0.5); // maps onto the unstable fixed point chain 1 -> 0
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let u = uniform_open01(&mut rng);
        if avoid.iter().all(|&a| (u - a).abs() > 1e-6) {
            log::debug!("generic starting point for mu = {mu}: x0 = {u}");
            return u;
        }
    }
}
