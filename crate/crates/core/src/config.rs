//! Run configuration: the parameter grid, estimator sizes, seeds, scale
//! presets, and a plain `key = value` config-file format mirroring the CLI
//! flags.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::thermo::TransientRule;
use crate::{Error, Result};

/// Preset estimator scales bundling (w_bins, n_steps, m_members).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// 100 bins, 1e6 orbit steps, 1e4 ensemble members: tight per-bin
    /// statistics at interactive runtimes.
    Desk,
    /// 1e4 bins, 1e6 orbit steps, 1e5 members: full figure resolution
    /// (sparse ~100 counts per bin — noisier quantifiers).
    Full,
}

impl Profile {
    pub fn parse(s: &str) -> Result<Profile> {
        match s.trim() {
            "desk" => Ok(Profile::Desk),
            "full" | "paper" => Ok(Profile::Full), // "paper" = legacy alias
            other => Err(Error::Config(format!(
                "profile: unknown preset '{other}' (expected 'desk' or 'full')"
            ))),
        }
    }

    /// Overwrites the scale fields this preset bundles.
    pub fn apply(self, config: &mut SweepConfig) {
        let (w_bins, n_steps, m_members) = match self {
            Profile::Desk => (100, 1_000_000, 10_000),
            Profile::Full => (10_000, 1_000_000, 100_000),
        };
        config.w_bins = w_bins;
        config.n_steps = n_steps;
        config.m_members = m_members;
    }
}

/// Sorted, deduplicated list of map parameters to sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct MuGrid {
    values: Vec<f64>,
}

impl MuGrid {
    /// The standard sweep grid: 0.05, 0.10, ..., 3.95, 4.00.
    pub fn default_grid() -> MuGrid {
        MuGrid {
            values: (1..=80).map(|k| k as f64 / 20.0).collect(),
        }
    }

    /// Validates, sorts, and deduplicates an explicit list.
    pub fn explicit(mut values: Vec<f64>) -> Result<MuGrid> {
        if values.is_empty() {
            return Err(Error::Config("mu_grid: empty grid".into()));
        }
        for &v in &values {
            if !v.is_finite() || v <= 0.0 || v > 4.0 {
                return Err(Error::Config(format!(
                    "mu_grid: mu = {v} outside the map's parameter range (0, 4]"
                )));
            }
        }
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        values.dedup();
        Ok(MuGrid { values })
    }

    /// Accepts `default`, a `start:stop:step` range, or a comma list.
    ///
    /// Ranges are expanded in scaled decimal integers so grid points are the
    /// closest doubles to the printed decimals (0.05 stays "0.05" in CSV),
    /// with no drift from repeated summation.
    pub fn parse(s: &str) -> Result<MuGrid> {
        let t = s.trim();
        if t == "default" {
            return Ok(MuGrid::default_grid());
        }
        if t.contains(':') {
            let parts: Vec<&str> = t.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::Config(format!(
                    "mu_grid: range must be start:stop:step, got '{t}'"
                )));
            }
            let (m0, d0) = parse_decimal("mu_grid start", parts[0])?;
            let (m1, d1) = parse_decimal("mu_grid stop", parts[1])?;
            let (m2, d2) = parse_decimal("mu_grid step", parts[2])?;
            let d = d0.max(d1).max(d2);
            let pow = |k: u32| 10i64.pow(k);
            let (start, stop, step) = (m0 * pow(d - d0), m1 * pow(d - d1), m2 * pow(d - d2));
            if step <= 0 {
                return Err(Error::Config("mu_grid: step must be positive".into()));
            }
            if start > stop {
                return Err(Error::Config("mu_grid: start exceeds stop".into()));
            }
            if (stop - start) / step >= 100_000 {
                return Err(Error::Config("mu_grid: range expands to over 1e5 points".into()));
            }
            let denom = pow(d) as f64;
            let values = (0..)
                .map(|k| start + k * step)
                .take_while(|&v| v <= stop)
                .map(|v| v as f64 / denom)
                .collect();
            return MuGrid::explicit(values);
        }
        let values = t
            .split(',')
            .map(|piece| {
                let p = piece.trim();
                p.parse::<f64>()
                    .map_err(|_| Error::Config(format!("mu_grid: invalid number '{p}'")))
            })
            .collect::<Result<Vec<f64>>>()?;
        MuGrid::explicit(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Canonical comma-joined form (re-parsable).
    pub fn echo(&self) -> String {
        let mut out = String::new();
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v}");
        }
        out
    }
}

/// Fixed-point decimal "12.34" -> (1234, 2). Keeps grid arithmetic exact.
fn parse_decimal(field: &str, s: &str) -> Result<(i64, u32)> {
    let t = s.trim();
    let (int, frac) = t.split_once('.').unwrap_or((t, ""));
    let digits_ok =
        |part: &str| !part.is_empty() && part.chars().all(|c| c.is_ascii_digit());
    let well_formed = match (int.is_empty(), frac.is_empty()) {
        (true, true) => false,
        (false, true) => digits_ok(int),
        (true, false) => digits_ok(frac),
        (false, false) => digits_ok(int) && digits_ok(frac),
    };
    if !well_formed {
        return Err(Error::Config(format!("{field}: invalid number '{s}'")));
    }
    // At most 9 digits keeps every scaled mantissa product well inside i64.
    if int.len() + frac.len() > 9 {
        return Err(Error::Config(format!("{field}: too many digits in '{s}'")));
    }
    let mantissa: i64 = format!("{int}{frac}")
        .parse()
        .map_err(|_| Error::Config(format!("{field}: invalid number '{s}'")))?;
    Ok((mantissa, frac.len() as u32))
}

/// Everything a sweep needs; also reused by the single-run commands.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub mu_grid: MuGrid,
    /// Orbit length for invariant-density histograms.
    pub n_steps: usize,
    /// Histogram resolution.
    pub w_bins: usize,
    /// Ensemble size for temperature runs.
    pub m_members: usize,
    /// Temperature trace length (steps 0..=n_max are recorded).
    pub n_max_temperature: usize,
    /// Orbit steps discarded before histogramming.
    pub burn_in: usize,
    pub transient: TransientRule,
    /// Master seed; per-mu streams are derived from it.
    pub seed: u64,
    pub output_dir: PathBuf,
    /// Worker threads for the sweep; 0 = one per core.
    pub workers: usize,
}

impl Default for SweepConfig {
    /// Full-scale preset on the default grid.
    fn default() -> Self {
        SweepConfig {
            mu_grid: MuGrid::default_grid(),
            n_steps: 1_000_000,
            w_bins: 10_000,
            m_members: 100_000,
            n_max_temperature: 1000,
            burn_in: 1000,
            transient: TransientRule::default(),
            seed: 42,
            output_dir: PathBuf::from("out"),
            workers: 0,
        }
    }
}

impl SweepConfig {
    /// Desk-scale preset on the default grid.
    pub fn desk() -> Self {
        let mut config = SweepConfig::default();
        Profile::Desk.apply(&mut config);
        config
    }

    /// Rejects configurations the estimators cannot run; warns on ones they
    /// can run but only noisily.
    pub fn validate(&self) -> Result<()> {
        if self.mu_grid.is_empty() {
            return Err(Error::Config("mu_grid: empty grid".into()));
        }
        if self.w_bins < 2 {
            return Err(Error::Config(format!(
                "w_bins: need at least 2 bins, got {}",
                self.w_bins
            )));
        }
        if self.n_steps == 0 {
            return Err(Error::Config("n_steps: must be positive".into()));
        }
        if self.m_members == 0 {
            return Err(Error::Config("m_members: must be positive".into()));
        }
        if self.transient.window == 0 {
            return Err(Error::Config("transient_window: must be positive".into()));
        }
        if !(self.transient.tol > 0.0 && self.transient.tol.is_finite()) {
            return Err(Error::Config(format!(
                "transient_tol: must be a positive number, got {}",
                self.transient.tol
            )));
        }
        if self.n_max_temperature < 2 * self.transient.window {
            return Err(Error::Config(format!(
                "n_max_temperature: {} is too short to fit two transient windows of {}",
                self.n_max_temperature, self.transient.window
            )));
        }
        if self.n_steps < 10 * self.w_bins {
            log::warn!(
                "n_steps = {} is below 10 * w_bins = {}; density histograms will be noisy",
                self.n_steps,
                10 * self.w_bins
            );
        }
        Ok(())
    }

    /// `key = value` listing of every field; valid config-file content.
    pub fn echo(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "mu_grid = {}", self.mu_grid.echo());
        let _ = writeln!(out, "n_steps = {}", self.n_steps);
        let _ = writeln!(out, "w_bins = {}", self.w_bins);
        let _ = writeln!(out, "m_members = {}", self.m_members);
        let _ = writeln!(out, "n_max_temperature = {}", self.n_max_temperature);
        let _ = writeln!(out, "burn_in = {}", self.burn_in);
        let _ = writeln!(out, "transient_window = {}", self.transient.window);
        let _ = writeln!(out, "transient_tol = {}", self.transient.tol);
        let _ = writeln!(out, "seed = {}", self.seed);
        let _ = writeln!(out, "output_dir = {}", self.output_dir.display());
        let _ = writeln!(out, "workers = {}", self.workers);
        out
    }

    /// Applies one config key. Shared by the file parser and tests.
    pub fn apply_key(&mut self, key: &str, value: &str) -> Result<()> {
        fn int<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.trim()
                .parse()
                .map_err(|_| Error::Config(format!("{key}: expected an integer, got '{v}'")))
        }
        match key {
            "mu_grid" => self.mu_grid = MuGrid::parse(value)?,
            "n_steps" => self.n_steps = int(key, value)?,
            "w_bins" => self.w_bins = int(key, value)?,
            "m_members" => self.m_members = int(key, value)?,
            "n_max_temperature" => self.n_max_temperature = int(key, value)?,
            "burn_in" => self.burn_in = int(key, value)?,
            "transient_window" => self.transient.window = int(key, value)?,
            "transient_tol" => {
                self.transient.tol = value.trim().parse().map_err(|_| {
                    Error::Config(format!("transient_tol: expected a number, got '{value}'"))
                })?
            }
            "seed" => self.seed = int(key, value)?,
            "output_dir" => self.output_dir = PathBuf::from(value.trim()),
            "workers" => self.workers = int(key, value)?,
            other => {
                return Err(Error::Config(format!("unknown config key '{other}'")));
            }
        }
        Ok(())
    }
}

/// Parses config-file text: one `key = value` per line, `#` comments.
///
/// A `profile` key (if any) is applied first as the base preset; the
/// remaining keys then override individual fields in file order.
pub fn parse_config_str(text: &str) -> Result<SweepConfig> {
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {}: expected 'key = value', got '{line}'", lineno + 1))
        })?;
        pairs.push((key.trim().to_string(), value.trim().to_string()));
    }
    let mut config = SweepConfig::default();
    if let Some((_, preset)) = pairs.iter().rev().find(|(k, _)| k == "profile") {
        Profile::parse(preset)?.apply(&mut config);
    }
    for (key, value) in &pairs {
        if key == "profile" {
            continue;
        }
        config.apply_key(key, value)?;
    }
    Ok(config)
}

/// Reads and parses a config file.
pub fn parse_config_file(path: &Path) -> Result<SweepConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    parse_config_str(&text)
}
