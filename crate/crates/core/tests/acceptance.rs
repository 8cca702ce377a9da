//! Acceptance suite: eleven numbered quantitative targets for the toolkit,
//! one test per criterion, each printing its measured values.
//!
//! Four criteria are currently red for documented reasons inherent to the
//! prescribed computations, not to this implementation:
//!
//! - criterion 02: the bin-transition (Ulam) stationary vector at W = 100
//!   carries an irreducible O(W^-1/2) bias against the singular arcsine
//!   bin masses (measured L1 = 0.099, target 0.05). The bias persists with
//!   16x more samples per bin and shrinks only with finer partitions.
//! - criterion 05: the W = 100 Fisher values over mu in {3.7, 3.75, 3.8}
//!   scatter by ~35% among themselves (band structure differs per mu), so
//!   the mu = 4 value cannot sit within 20% of their mean (measured 26-28%
//!   across seeds).
//! - criterion 06: the complexity maximum over mu >= 3 falls, exactly and
//!   seed-independently, on the 4-cycle at mu = 3.50 (C = 0.345, Fisher
//!   exactly 8), one grid step outside the accepted window ending at
//!   3.51995.
//! - criterion 09: with M = 10^4 members the step-to-step sampling noise
//!   of the Fisher estimate is ~0.1, so counting increases above 1e-3
//!   yields ~20 in any 45-step tail, far above the target of 5.

use std::sync::OnceLock;
use std::time::Instant;

use logmap::config::SweepConfig;
use logmap::csv::{config_metadata, sweep_csv};
use logmap::density::{
    discretize_analytic_mu4, estimate_invariant_density, generic_x0,
    ulam_invariant_density, ulam_transition_matrix, Ensemble, HistogramDensity,
    InitSpec,
};
use logmap::map::{closed_form_orbit, iterate_orbit, MapParams};
use logmap::quantifiers::{
    cr_complexity, fisher_information, quantifier_time_series, variance,
};
use logmap::rng::uniform_open01;
use logmap::sweep::{run_sweep, SweepOutcome, SweepRow};
use logmap::thermo::{
    analytic_temperature_mu4, quadrature_temperature_mu4, temperature_series,
    TransientRule,
};
use rand_core::{RngCore, SeedableRng};

fn p(mu: f64) -> MapParams {
    MapParams::new(mu).unwrap()
}

struct DeskRun {
    rows: Vec<SweepRow>,
    elapsed_s: f64,
    csv: String,
}

impl DeskRun {
    fn outcome(&self, mu: f64) -> &SweepOutcome {
        self.rows
            .iter()
            .find(|r| (r.mu - mu).abs() < 1e-12)
            .unwrap_or_else(|| panic!("mu = {mu} missing from the default grid"))
            .outcome
            .as_ref()
            .unwrap_or_else(|e| panic!("sweep row mu = {mu} errored: {e}"))
    }
}

static DESK: OnceLock<DeskRun> = OnceLock::new();

/// Desk-profile sweep on one worker, shared by criteria 04, 05, 06 and 11.
fn desk_run() -> &'static DeskRun {
    DESK.get_or_init(|| {
        let mut cfg = SweepConfig::desk();
        cfg.workers = 1;
        let t0 = Instant::now();
        let rows = run_sweep(&cfg).expect("desk sweep must run");
        let elapsed_s = t0.elapsed().as_secs_f64();
        for r in &rows {
            assert!(r.outcome.is_ok(), "row mu = {} errored", r.mu);
        }
        let csv = sweep_csv(&rows, &config_metadata(&cfg));
        DeskRun { rows, elapsed_s, csv }
    })
}

#[test]
fn criterion_01_histogram_density_matches_arcsine_bins() {
    let params = p(4.0);
    let x0 = generic_x0(params, 42);
    let t0 = Instant::now();
    let d = estimate_invariant_density(params, x0, 1_000_000, 100, 1000).unwrap();
    let dt = t0.elapsed().as_secs_f64();
    let l1 = d.l1_distance(&discretize_analytic_mu4(100));
    assert!(
        l1 < 0.02,
        "criterion 01: FAIL  L1 = {l1:.5} (target < 0.02), runtime = {dt:.2} s"
    );
    assert!(
        dt < 5.0,
        "criterion 01: FAIL  runtime = {dt:.2} s (target < 5 s), L1 = {l1:.5}"
    );
    println!("criterion 01: PASS  L1 = {l1:.5} < 0.02, runtime = {dt:.2} s < 5 s");
}

#[test]
fn criterion_02_ulam_stationary_density_matches_arcsine_bins() {
    let m = ulam_transition_matrix(p(4.0), 100, 1000);
    let d = ulam_invariant_density(&m, 1e-12, 20_000).unwrap();
    let l1 = d.l1_distance(&discretize_analytic_mu4(100));
    assert!(
        l1 < 0.05,
        "criterion 02: FAIL  L1 = {l1:.5} (target < 0.05). The stationary \
         vector of the W = 100 bin-transition matrix is converged (identical \
         to 3 digits with 16x more samples per bin) but the uniform-within-bin \
         assumption underweights the singular edge bins by O(W^-1/2); the \
         measured error falls to 0.045 only at W = 800."
    );
    println!("criterion 02: PASS  L1 = {l1:.5} < 0.05");
}

#[test]
fn criterion_03_closed_forms_match_iteration() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    let mut worst = 0.0f64;
    let mut draws = 0;
    for _ in 0..100 {
        let x0 = uniform_open01(&mut rng);
        draws += 1;
        for mu in [2.0, 4.0] {
            let orbit = iterate_orbit(p(mu), x0, 20, 0).unwrap();
            for (n, &xn) in orbit.x.iter().enumerate() {
                let closed = closed_form_orbit(mu, x0, n as u32).unwrap();
                worst = worst.max((closed - xn).abs());
            }
        }
    }
    assert!(
        worst < 1e-9,
        "criterion 03: FAIL  max |closed - iterated| = {worst:.3e} over \
         {draws} seeded starts, n <= 20 (target < 1e-9)"
    );
    println!(
        "criterion 03: PASS  max |closed - iterated| = {worst:.3e} < 1e-9 \
         over {draws} starts, mu in {{2, 4}}, n <= 20"
    );
}

#[test]
fn criterion_04_fisher_peaks_at_mu_equal_one() {
    let run = desk_run();
    let max = run
        .rows
        .iter()
        .filter_map(|r| r.outcome.as_ref().ok())
        .map(|o| o.fisher)
        .fold(f64::NEG_INFINITY, f64::max);
    let at_one = run.outcome(1.0).fisher;
    // Every histogram supported on isolated bins reaches the delta bound 8
    // exactly, so the maximum is attained on a tie set; the criterion is
    // that mu = 1.0 belongs to it.
    assert!(
        at_one >= max - 1e-12,
        "criterion 04: FAIL  fisher(1.0) = {at_one} vs grid max {max}"
    );
    assert!(
        run.elapsed_s < 120.0,
        "criterion 04: FAIL  desk sweep took {:.1} s (target < 120 s)",
        run.elapsed_s
    );
    println!(
        "criterion 04: PASS  fisher(1.0) = {at_one} attains the grid max \
         ({max}); desk sweep {:.1} s < 120 s",
        run.elapsed_s
    );
}

#[test]
fn criterion_05_fisher_at_four_matches_late_chaos_plateau() {
    let run = desk_run();
    let f37 = run.outcome(3.7).fisher;
    let f375 = run.outcome(3.75).fisher;
    let f38 = run.outcome(3.8).fisher;
    let f4 = run.outcome(4.0).fisher;
    let plateau = (f37 + f375 + f38) / 3.0;
    let rel = (f4 - plateau).abs() / plateau;
    assert!(
        rel <= 0.20,
        "criterion 05: FAIL  fisher(4.0) = {f4:.4} vs plateau mean {plateau:.4} \
         (values {f37:.4}, {f375:.4}, {f38:.4}): relative deviation {rel:.3} \
         (target <= 0.20). The three plateau values scatter by ~35% among \
         themselves at W = 100 and the deviation is stable in [0.26, 0.29] \
         across seeds, so the miss is structural, not statistical."
    );
    println!(
        "criterion 05: PASS  fisher(4.0) = {f4:.4} within {rel:.3} of plateau \
         mean {plateau:.4}"
    );
}

#[test]
fn criterion_06_complexity_peaks_near_intermittency_window() {
    let run = desk_run();
    let (mu_star, c_star) = run
        .rows
        .iter()
        .filter(|r| r.mu >= 3.0)
        .filter_map(|r| r.outcome.as_ref().ok().map(|o| (r.mu, o.cr_complexity)))
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();
    let step = 0.05;
    let (lo, hi) = (3.56995 - step, 3.82843 + step);
    assert!(
        (lo..=hi).contains(&mu_star),
        "criterion 06: FAIL  argmax C over mu >= 3 is mu = {mu_star} \
         (C = {c_star:.5}), outside [{lo:.5}, {hi:.5}]. The maximum lands on \
         the 4-cycle at 3.50 (Fisher exactly 8, binned variance 0.0431) and \
         is seed-independent; the runner-up inside the window is 3.85 with \
         C = 0.314."
    );
    println!(
        "criterion 06: PASS  argmax C (mu >= 3) = {mu_star} in [{lo:.5}, {hi:.5}], \
         C = {c_star:.5}"
    );
}

#[test]
fn criterion_07_temperature_vanishes_for_convergent_mu() {
    let mut reports = Vec::new();
    for mu in [0.5, 1.5, 2.5] {
        let s = temperature_series(p(mu), 10_000, 1000, 42, TransientRule::default())
            .unwrap();
        let t = s.t_avg();
        assert!(
            t < 1e-9,
            "criterion 07: FAIL  averaged temperature at mu = {mu} is {t:.3e} \
             (target < 1e-9)"
        );
        reports.push(format!("T(mu={mu}) = {t:.2e}"));
    }
    println!("criterion 07: PASS  {} all < 1e-9", reports.join(", "));
}

#[test]
fn criterion_08_chaotic_temperature_is_one_quarter() {
    let s = temperature_series(p(4.0), 100_000, 1000, 42, TransientRule::default())
        .unwrap();
    let t = s.t_avg();
    let dev = (t - 0.25).abs();
    let moments = analytic_temperature_mu4();
    let quad = quadrature_temperature_mu4(64);
    let oracle_gap = (moments - quad).abs();
    assert!(
        dev < 0.005,
        "criterion 08: FAIL  t_avg = {t:.6} deviates {dev:.2e} from 0.25 \
         (target < 0.005)"
    );
    assert!(
        oracle_gap < 1e-10,
        "criterion 08: FAIL  moment oracle {moments} vs quadrature oracle \
         {quad} differ by {oracle_gap:.2e} (target < 1e-10)"
    );
    println!(
        "criterion 08: PASS  t_avg = {t:.6} (|dev| = {dev:.2e} < 0.005); \
         oracles {moments} vs {quad} agree to {oracle_gap:.2e}"
    );
}

#[test]
fn criterion_09_relaxation_from_single_bin_start() {
    let e = Ensemble::new(10_000, 42, InitSpec::SingleBin { bin: 30, w_bins: 100 })
        .unwrap();
    let s = quantifier_time_series(p(4.0), &e, 50, 100);
    let f: Vec<f64> = s.points.iter().map(|pt| pt.fisher).collect();
    assert_eq!(
        f[0], 8.0,
        "criterion 09: FAIL  fisher(n=0) = {} (a one-bin start must sit at \
         the delta bound exactly)",
        f[0]
    );
    assert!(
        f[50] < 1.0,
        "criterion 09: FAIL  fisher(n=50) = {} (target < 1)",
        f[50]
    );
    let late_increases = f[5..=50]
        .windows(2)
        .filter(|w| w[1] > w[0] + 1e-3)
        .count();
    assert!(
        late_increases < 5,
        "criterion 09: FAIL  {late_increases} Fisher increases above 1e-3 \
         over n in [5, 50] (target < 5); fisher(0) = {} and fisher(50) = {:.3} \
         do pass. With M = 10^4 members the per-step sampling noise of the \
         Fisher estimate is ~0.1, two orders above the 1e-3 tolerance, so \
         roughly half of the flat-tail steps count as increases for any seed \
         or start bin (measured 20-24 across five configurations).",
        f[0], f[50]
    );
    println!(
        "criterion 09: PASS  fisher(0) = {}, fisher(50) = {:.3}, increases = \
         {late_increases} < 5",
        f[0], f[50]
    );
}

#[test]
fn criterion_10_quantifier_identity_suite() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    let mut worst_product_gap = 0.0f64;
    let mut worst_uniform_gap = 0.0f64;
    for _ in 0..1000 {
        let w = 2 + (rng.next_u64() % 199) as usize;

        // Random probability vector on w bins.
        let weights: Vec<f64> = (0..w).map(|_| uniform_open01(&mut rng)).collect();
        let total: f64 = weights.iter().sum();
        let d = HistogramDensity::from_probabilities(
            weights.iter().map(|v| v / total).collect(),
        )
        .unwrap();
        let fisher = fisher_information(&d);
        assert!(
            (0.0..=8.0 + 1e-12).contains(&fisher),
            "criterion 10: FAIL  fisher = {fisher} out of [0, 8] at w = {w}"
        );
        let rev = HistogramDensity::from_probabilities(
            d.p().iter().rev().copied().collect(),
        )
        .unwrap();
        let fisher_rev = fisher_information(&rev);
        assert_eq!(
            fisher.to_bits(),
            fisher_rev.to_bits(),
            "criterion 10: FAIL  reversal changed fisher at w = {w}: {fisher} \
             vs {fisher_rev}"
        );
        let gap = (cr_complexity(&d) - fisher * variance(&d)).abs();
        worst_product_gap = worst_product_gap.max(gap);
        assert!(
            gap <= 1e-12,
            "criterion 10: FAIL  C differs from I*var by {gap:.2e} at w = {w}"
        );

        // Delta on a random bin: exactly the bound.
        let hot = (rng.next_u64() % w as u64) as usize;
        let mut delta = vec![0.0; w];
        delta[hot] = 1.0;
        let fisher_delta =
            fisher_information(&HistogramDensity::from_probabilities(delta).unwrap());
        assert_eq!(
            fisher_delta, 8.0,
            "criterion 10: FAIL  delta at bin {hot}/{w} gave fisher = {fisher_delta}"
        );

        // Uniform: 8/w up to rounding.
        let uniform = HistogramDensity::from_probabilities(vec![1.0 / w as f64; w])
            .unwrap();
        let ugap = (fisher_information(&uniform) - 8.0 / w as f64).abs();
        worst_uniform_gap = worst_uniform_gap.max(ugap);
        assert!(
            ugap <= 1e-12,
            "criterion 10: FAIL  uniform fisher off 8/w by {ugap:.2e} at w = {w}"
        );
    }
    println!(
        "criterion 10: PASS  1000 random vectors (w in [2, 200]): bounds, \
         delta = 8 exact, |uniform - 8/w| <= {worst_uniform_gap:.1e}, bitwise \
         reversal symmetry, |C - I*var| <= {worst_product_gap:.1e}"
    );
}

#[test]
fn criterion_11_sweep_is_byte_identical_across_worker_counts() {
    let baseline = desk_run();
    let mut cfg = SweepConfig::desk();
    cfg.workers = 4;
    let rows = run_sweep(&cfg).unwrap();
    let csv = sweep_csv(&rows, &config_metadata(&cfg));
    if csv != baseline.csv {
        let line = csv
            .lines()
            .zip(baseline.csv.lines())
            .position(|(a, b)| a != b)
            .map(|i| i + 1)
            .unwrap_or(0);
        panic!(
            "criterion 11: FAIL  workers=4 CSV differs from workers=1 CSV \
             (first difference at line {line})"
        );
    }
    println!(
        "criterion 11: PASS  workers=1 and workers=4 sweeps emit byte-identical \
         CSV ({} bytes)",
        csv.len()
    );
}
