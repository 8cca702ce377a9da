//! `logmap`: logistic-map densities, information quantifiers, and map
//! temperature from the command line.
//!
//! Every subcommand resolves its run configuration in the same order —
//! built-in defaults, then `--profile`, then `--config` file keys, then the
//! `LOGMAP_OUTPUT_DIR` environment variable, then individual flags — writes
//! the requested CSV artifacts into the output directory, and drops a
//! `run-config.txt` echo of the effective configuration next to them.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use logmap::config::{parse_config_file, MuGrid, Profile, SweepConfig};
use logmap::csv::{
    config_metadata, density_csv, evolution_csv, join_csv, sweep_csv,
    temperature_csv, temperature_summary_csv, Metadata,
};
use logmap::density::{
    discretize_analytic_mu4, estimate_invariant_density, generic_x0,
    ulam_invariant_density, ulam_transition_matrix, HistogramDensity, InitSpec,
};
use logmap::map::MapParams;
use logmap::sweep::{
    fisher_temperature_spearman, join_vs_temperature, run_evolution, run_sweep,
    SweepRow,
};
use logmap::thermo::temperature_series;

/// Name of the environment variable that overrides the output directory.
const OUTPUT_DIR_ENV: &str = "LOGMAP_OUTPUT_DIR";

#[derive(Parser)]
#[command(
    name = "logmap",
    version,
    about = "Logistic-map invariant densities, Fisher/Cramer-Rao quantifiers, \
             and ensemble map temperature",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the mu grid: quantifiers and averaged temperature per mu.
    Sweep(SweepArgs),
    /// Invariant density of a single mu as a histogram CSV.
    Density(DensityArgs),
    /// Ensemble time evolution of the quantifiers at a single mu.
    Evolve(EvolveArgs),
    /// Ensemble temperature series at a single mu.
    Temperature(TemperatureArgs),
    /// Run the sweep, then join quantifiers against averaged temperature.
    JoinVsTemperature(SweepArgs),
}

/// Flags shared by every subcommand; each one overrides the matching
/// config-file key.
#[derive(Args, Clone, Debug, Default)]
struct ConfigArgs {
    /// Key = value configuration file applied before any flags.
    #[arg(long, value_name = "FILE", global = true)]
    config: Option<PathBuf>,

    /// Scale preset: "desk" (W=100, N=1e6, M=1e4) or "paper"/"full"
    /// (W=1e4, N=1e6, M=1e5).
    #[arg(long, value_name = "NAME", global = true)]
    profile: Option<String>,

    /// Mu grid: "default", "start:stop:step", or comma-separated values.
    #[arg(long, value_name = "GRID", global = true)]
    mu_grid: Option<String>,

    /// Orbit steps recorded into each invariant-density histogram.
    #[arg(long, value_name = "N", global = true)]
    n_steps: Option<usize>,

    /// Histogram resolution (number of bins on [0, 1]).
    #[arg(long, value_name = "W", global = true)]
    w_bins: Option<usize>,

    /// Ensemble size for temperature and evolution runs.
    #[arg(long, value_name = "M", global = true)]
    m_members: Option<usize>,

    /// Length of each temperature series.
    #[arg(long, value_name = "N", global = true)]
    n_max_temperature: Option<usize>,

    /// Iterations discarded before recording orbit statistics.
    #[arg(long, value_name = "N", global = true)]
    burn_in: Option<usize>,

    /// Window length for the settled-temperature detector.
    #[arg(long, value_name = "N", global = true)]
    transient_window: Option<usize>,

    /// Relative flatness tolerance for the settled-temperature detector.
    #[arg(long, value_name = "TOL", global = true)]
    transient_tol: Option<f64>,

    /// Master seed; every derived stream is a pure function of it.
    #[arg(long, value_name = "SEED", global = true)]
    seed: Option<u64>,

    /// Output directory for CSV artifacts (also settable via
    /// LOGMAP_OUTPUT_DIR; this flag wins over the environment).
    #[arg(long, value_name = "DIR", global = true)]
    output_dir: Option<PathBuf>,

    /// Worker threads for the sweep; 0 means one per core.
    #[arg(long, value_name = "N", global = true)]
    workers: Option<usize>,
}

impl ConfigArgs {
    /// Defaults -> profile -> config file -> environment -> flags.
    fn resolve(&self) -> Result<SweepConfig> {
        let mut cfg = match &self.config {
            Some(path) => parse_config_file(path)
                .with_context(|| format!("reading config file {}", path.display()))?,
            None => SweepConfig::default(),
        };
        if let Some(name) = &self.profile {
            Profile::parse(name)?.apply(&mut cfg);
        }
        if let Ok(dir) = std::env::var(OUTPUT_DIR_ENV) {
            if !dir.is_empty() {
                cfg.output_dir = PathBuf::from(dir);
            }
        }
        if let Some(grid) = &self.mu_grid {
            cfg.mu_grid = MuGrid::parse(grid)?;
        }
        if let Some(v) = self.n_steps {
            cfg.n_steps = v;
        }
        if let Some(v) = self.w_bins {
            cfg.w_bins = v;
        }
        if let Some(v) = self.m_members {
            cfg.m_members = v;
        }
        if let Some(v) = self.n_max_temperature {
            cfg.n_max_temperature = v;
        }
        if let Some(v) = self.burn_in {
            cfg.burn_in = v;
        }
        if let Some(v) = self.transient_window {
            cfg.transient.window = v;
        }
        if let Some(v) = self.transient_tol {
            cfg.transient.tol = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(dir) = &self.output_dir {
            cfg.output_dir = dir.clone();
        }
        if let Some(v) = self.workers {
            cfg.workers = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DensitySource {
    /// Long-orbit histogram from a generic seeded start.
    Orbit,
    /// Stationary vector of the bin-transition (Ulam) matrix.
    Ulam,
    /// Exact arcsine bin masses (mu = 4 only).
    Analytic,
}

#[derive(Args)]
struct DensityArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Map parameter, in (0, 4].
    #[arg(long)]
    mu: f64,
    /// How the density is produced.
    #[arg(long, value_enum, default_value_t = DensitySource::Orbit)]
    source: DensitySource,
    /// Interior sample points per bin for the Ulam matrix.
    #[arg(long, value_name = "S", default_value_t = 1000)]
    samples_per_bin: usize,
}

#[derive(Args)]
struct EvolveArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Map parameter, in (0, 4].
    #[arg(long)]
    mu: f64,
    /// Initial ensemble: "uniform", "bin:K" (delta in bin K), or
    /// "point:X" (all members at X).
    #[arg(long, default_value = "uniform")]
    init: String,
    /// Number of evolution steps to record.
    #[arg(long, value_name = "N", default_value_t = 50)]
    n_max: usize,
}

#[derive(Args)]
struct TemperatureArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Map parameter, in (0, 4].
    #[arg(long)]
    mu: f64,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Sweep(args) => cmd_sweep(&args.config),
        Command::Density(args) => cmd_density(&args),
        Command::Evolve(args) => cmd_evolve(&args),
        Command::Temperature(args) => cmd_temperature(&args),
        Command::JoinVsTemperature(args) => cmd_join(&args.config),
    }
}

/// Creates the output directory and records the effective configuration.
fn prepare_output(cfg: &SweepConfig) -> Result<()> {
    fs::create_dir_all(&cfg.output_dir).with_context(|| {
        format!("creating output directory {}", cfg.output_dir.display())
    })?;
    write_artifact(cfg, "run-config.txt", &cfg.echo())?;
    Ok(())
}

fn write_artifact(cfg: &SweepConfig, name: &str, content: &str) -> Result<()> {
    let path = cfg.output_dir.join(name);
    fs::write(&path, content).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Prints failed rows to stderr; returns failure when any row errored.
fn report_row_errors(rows: &[SweepRow]) -> ExitCode {
    let failed: Vec<&SweepRow> = rows.iter().filter(|r| r.outcome.is_err()).collect();
    if failed.is_empty() {
        return ExitCode::SUCCESS;
    }
    eprintln!("{} of {} grid points failed:", failed.len(), rows.len());
    for row in failed {
        if let Err(e) = &row.outcome {
            eprintln!("  mu = {}: {}", row.mu, e);
        }
    }
    ExitCode::FAILURE
}

fn cmd_sweep(config: &ConfigArgs) -> Result<ExitCode> {
    let cfg = config.resolve()?;
    prepare_output(&cfg)?;
    let rows = run_sweep(&cfg)?;
    let meta = config_metadata(&cfg);
    write_artifact(&cfg, "sweep.csv", &sweep_csv(&rows, &meta))?;
    write_artifact(
        &cfg,
        "temperature-summary.csv",
        &temperature_summary_csv(&rows, cfg.m_members, &meta),
    )?;
    let ok = rows.iter().filter(|r| r.outcome.is_ok()).count();
    println!("sweep finished: {ok} of {} grid points succeeded", rows.len());
    Ok(report_row_errors(&rows))
}

fn cmd_density(args: &DensityArgs) -> Result<ExitCode> {
    let cfg = args.config.resolve()?;
    let params = MapParams::new(args.mu)?;
    let density: HistogramDensity = match args.source {
        DensitySource::Orbit => {
            let x0 = generic_x0(params, cfg.seed);
            estimate_invariant_density(params, x0, cfg.n_steps, cfg.w_bins, cfg.burn_in)?
        }
        DensitySource::Ulam => {
            let matrix = ulam_transition_matrix(params, cfg.w_bins, args.samples_per_bin);
            ulam_invariant_density(&matrix, 1e-12, 20_000)?
        }
        DensitySource::Analytic => {
            if args.mu != 4.0 {
                bail!("analytic bin masses exist only for mu = 4, got {}", args.mu);
            }
            discretize_analytic_mu4(cfg.w_bins)
        }
    };
    prepare_output(&cfg)?;
    let mut meta: Metadata = config_metadata(&cfg);
    meta.push(("mu", args.mu.to_string()));
    meta.push(("source", format!("{:?}", args.source).to_lowercase()));
    if matches!(args.source, DensitySource::Ulam) {
        meta.push(("samples_per_bin", args.samples_per_bin.to_string()));
    }
    write_artifact(&cfg, "density.csv", &density_csv(&density, &meta))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_evolve(args: &EvolveArgs) -> Result<ExitCode> {
    let cfg = args.config.resolve()?;
    let params = MapParams::new(args.mu)?;
    let init = InitSpec::parse(&args.init, cfg.w_bins)?;
    let series = run_evolution(params, cfg.m_members, args.n_max, cfg.w_bins, cfg.seed, init)?;
    prepare_output(&cfg)?;
    let mut meta = config_metadata(&cfg);
    meta.push(("init", args.init.trim().to_lowercase()));
    meta.push(("n_max", args.n_max.to_string()));
    write_artifact(&cfg, "evolution.csv", &evolution_csv(&series, &meta))?;
    println!(
        "fisher increases above tolerance: {}",
        series.increase_violations
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_temperature(args: &TemperatureArgs) -> Result<ExitCode> {
    let cfg = args.config.resolve()?;
    let params = MapParams::new(args.mu)?;
    let series = temperature_series(
        params,
        cfg.m_members,
        cfg.n_max_temperature,
        cfg.seed,
        cfg.transient,
    )?;
    prepare_output(&cfg)?;
    let meta = config_metadata(&cfg);
    write_artifact(&cfg, "temperature.csv", &temperature_csv(&series, &meta))?;
    println!(
        "averaged temperature: {} (settled from step {}{})",
        series.t_avg(),
        series.n0(),
        if series.n0_is_fallback() { ", fallback cutoff" } else { "" }
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_join(config: &ConfigArgs) -> Result<ExitCode> {
    let cfg = config.resolve()?;
    prepare_output(&cfg)?;
    let rows = run_sweep(&cfg)?;
    let meta = config_metadata(&cfg);
    write_artifact(&cfg, "sweep.csv", &sweep_csv(&rows, &meta))?;
    let joined = join_vs_temperature(&rows);
    if joined.is_empty() {
        bail!("no grid point succeeded; nothing to join");
    }
    let spearman = fisher_temperature_spearman(&joined);
    let mut join_meta = meta.clone();
    join_meta.push(("spearman_fisher_vs_t", spearman.to_string()));
    write_artifact(&cfg, "join.csv", &join_csv(&joined, &join_meta))?;
    println!("Spearman rank correlation, fisher vs t_avg: {spearman}");
    Ok(report_row_errors(&rows))
}
