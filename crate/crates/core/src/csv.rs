//! CSV emission with `#`-prefixed metadata headers. Column orders are fixed,
//! floats print in shortest round-trip form, and metadata never includes
//! scheduling details (worker count, output paths), so identical results
//! serialize to identical bytes.

use std::fmt::Write as _;

use crate::config::SweepConfig;
use crate::density::HistogramDensity;
use crate::quantifiers::QuantifierRecord;
use crate::sweep::{EvolutionSeries, JoinPoint, SweepRow};
use crate::thermo::TemperatureSeries;

/// Ordered `# key = value` header lines.
pub type Metadata = Vec<(&'static str, String)>;

/// Config echo for CSV headers. Excludes `output_dir` and `workers`: neither
/// influences the numbers, and leaving them out keeps runs byte-comparable.
pub fn config_metadata(config: &SweepConfig) -> Metadata {
    vec![
        ("version", env!("CARGO_PKG_VERSION").to_string()),
        ("mu_grid", config.mu_grid.echo()),
        ("n_steps", config.n_steps.to_string()),
        ("w_bins", config.w_bins.to_string()),
        ("m_members", config.m_members.to_string()),
        ("n_max_temperature", config.n_max_temperature.to_string()),
        ("burn_in", config.burn_in.to_string()),
        ("transient_window", config.transient.window.to_string()),
        ("transient_tol", config.transient.tol.to_string()),
        ("seed", config.seed.to_string()),
    ]
}

fn push_metadata(out: &mut String, metadata: &Metadata) {
    for (key, value) in metadata {
        let _ = writeln!(out, "# {key} = {value}");
    }
}

/// Quotes a field only when the text demands it.
fn field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

/// Columns: `bin_index,bin_left,bin_right,probability`.
pub fn density_csv(density: &HistogramDensity, metadata: &Metadata) -> String {
    let mut out = String::new();
    push_metadata(&mut out, metadata);
    out.push_str("bin_index,bin_left,bin_right,probability\n");
    for i in 0..density.w_bins() {
        let _ = writeln!(
            out,
            "{i},{},{},{}",
            density.bin_left(i),
            density.bin_right(i),
            density.p()[i]
        );
    }
    out
}

/// Columns: `mu,fisher,variance,cr_complexity,n_steps,w_bins,seed` (one row).
pub fn quantifier_csv(record: &QuantifierRecord, metadata: &Metadata) -> String {
    let mut out = String::new();
    push_metadata(&mut out, metadata);
    out.push_str("mu,fisher,variance,cr_complexity,n_steps,w_bins,seed\n");
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{}",
        record.mu,
        record.fisher,
        record.variance,
        record.cr_complexity,
        record.n_steps,
        record.w_bins,
        record.seed
    );
    out
}

/// Columns: `mu,step,temperature`; the trace's derived scalars (n0, t_avg)
/// ride along as metadata.
pub fn temperature_csv(series: &TemperatureSeries, metadata: &Metadata) -> String {
    let mut out = String::new();
    push_metadata(&mut out, metadata);
    let _ = writeln!(out, "# m_members = {}", series.m_members());
    let _ = writeln!(out, "# seed = {}", series.seed());
    let _ = writeln!(out, "# n0 = {}", series.n0());
    let _ = writeln!(out, "# n0_fallback = {}", series.n0_is_fallback());
    let _ = writeln!(out, "# t_avg = {}", series.t_avg());
    out.push_str("mu,step,temperature\n");
    for (step, t) in series.t().iter().enumerate() {
        let _ = writeln!(out, "{},{step},{t}", series.mu());
    }
    out
}

/// Columns: `mu,t_avg,t_norm,n0,m_members,seed` — one row per successful
/// grid point; failed points are noted as comments and skipped (the sweep
/// CSV carries their error text).
pub fn temperature_summary_csv(
    rows: &[SweepRow],
    m_members: usize,
    metadata: &Metadata,
) -> String {
    let mut out = String::new();
    push_metadata(&mut out, metadata);
    for row in rows {
        if let Err(e) = &row.outcome {
            let _ = writeln!(out, "# skipped mu = {}: {}", row.mu, e);
        }
    }
    out.push_str("mu,t_avg,t_norm,n0,m_members,seed\n");
    for row in rows {
        if let Ok(o) = &row.outcome {
            let _ = writeln!(
                out,
                "{},{},{},{},{m_members},{}",
                row.mu, o.t_avg, o.t_norm, o.n0, row.seed
            );
        }
    }
    out
}

/// Columns: `mu,fisher,variance,cr_complexity,cr_complexity_bin_units,
/// t_avg,t_norm,n0,seed,error`. Failed rows keep their place with empty
/// numeric fields and the error text in the last column.
pub fn sweep_csv(rows: &[SweepRow], metadata: &Metadata) -> String {
    let mut out = String::new();
    push_metadata(&mut out, metadata);
    out.push_str(
        "mu,fisher,variance,cr_complexity,cr_complexity_bin_units,t_avg,t_norm,n0,seed,error\n",
    );
    for row in rows {
        match &row.outcome {
            Ok(o) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},",
                    row.mu,
                    o.fisher,
                    o.variance,
                    o.cr_complexity,
                    o.cr_complexity_bin_units,
                    o.t_avg,
                    o.t_norm,
                    o.n0,
                    row.seed
                );
            }
            Err(e) => {
                let _ = writeln!(out, "{},,,,,,,,{},{}", row.mu, row.seed, field(e));
            }
        }
    }
    out
}

/// Columns: `step,fisher,cr_complexity,temperature`, with the monotonicity
/// counter as a footer comment.
pub fn evolution_csv(series: &EvolutionSeries, metadata: &Metadata) -> String {
    let mut out = String::new();
    push_metadata(&mut out, metadata);
    let _ = writeln!(out, "# mu = {}", series.mu);
    let _ = writeln!(out, "# w_bins = {}", series.w_bins);
    let _ = writeln!(out, "# m_members = {}", series.m_members);
    let _ = writeln!(out, "# seed = {}", series.seed);
    out.push_str("step,fisher,cr_complexity,temperature\n");
    for p in &series.points {
        let _ = writeln!(out, "{},{},{},{}", p.step, p.fisher, p.cr_complexity, p.temperature);
    }
    let _ = writeln!(out, "# increase_violations = {}", series.increase_violations);
    out
}

/// Columns: `t_avg,fisher,cr_complexity`, sorted by temperature upstream.
pub fn join_csv(joined: &[JoinPoint], metadata: &Metadata) -> String {
    let mut out = String::new();
    push_metadata(&mut out, metadata);
    out.push_str("t_avg,fisher,cr_complexity\n");
    for p in joined {
        let _ = writeln!(out, "{},{},{}", p.t_avg, p.fisher, p.cr_complexity);
    }
    out
}
