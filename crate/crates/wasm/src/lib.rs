//! Browser bindings for the logistic-map engine.
//!
//! Each exported function runs one operation of the native pipeline — orbit
//! density estimation, ensemble evolution, or a parameter sweep — and returns
//! the same CSV text the command-line tool writes to disk, so a page can plot
//! the numbers with no extra serialization layer. All functions are seeded
//! and deterministic: equal arguments give byte-identical CSV, in the browser
//! and in native tests alike.
//!
//! The plain-Rust entry points live in [`ops`]; the `#[wasm_bindgen]`
//! wrappers only translate errors into JavaScript exceptions.

use wasm_bindgen::prelude::*;

pub mod ops {
    //! The operations behind the exported functions, free of JavaScript
    //! types so native tests can call them directly.

    use logmap::config::{MuGrid, SweepConfig};
    use logmap::csv::{
        density_csv, evolution_csv, sweep_csv, Metadata,
    };
    use logmap::density::{
        discretize_analytic_mu4, estimate_invariant_density, generic_x0, InitSpec,
    };
    use logmap::map::MapParams;
    use logmap::sweep::{run_evolution, run_sweep};
    use logmap::{Error, Result};

    /// Long-orbit histogram of the invariant density at one `mu`.
    pub fn density(mu: f64, w_bins: u32, n_steps: u32, burn_in: u32, seed: u32) -> Result<String> {
        check_bins(w_bins)?;
        if n_steps == 0 {
            return Err(Error::Config("n_steps: must be positive".into()));
        }
        let params = MapParams::new(mu)?;
        let x0 = generic_x0(params, seed as u64);
        let d = estimate_invariant_density(
            params,
            x0,
            n_steps as usize,
            w_bins as usize,
            burn_in as usize,
        )?;
        let meta: Metadata = vec![
            ("mu", mu.to_string()),
            ("w_bins", w_bins.to_string()),
            ("n_steps", n_steps.to_string()),
            ("burn_in", burn_in.to_string()),
            ("seed", seed.to_string()),
            ("source", "orbit".into()),
        ];
        Ok(density_csv(&d, &meta))
    }

    /// Exact bin masses of the `mu = 4` arcsine density, for overlays.
    pub fn analytic_density(w_bins: u32) -> Result<String> {
        check_bins(w_bins)?;
        let d = discretize_analytic_mu4(w_bins as usize);
        let meta: Metadata = vec![
            ("mu", "4".into()),
            ("w_bins", w_bins.to_string()),
            ("source", "analytic".into()),
        ];
        Ok(density_csv(&d, &meta))
    }

    /// Fisher information, complexity, and temperature of an evolving
    /// ensemble, step by step from a chosen initial preparation.
    pub fn evolution(
        mu: f64,
        m_members: u32,
        n_max: u32,
        w_bins: u32,
        seed: u32,
        init: &str,
    ) -> Result<String> {
        check_bins(w_bins)?;
        let params = MapParams::new(mu)?;
        let spec = InitSpec::parse(init, w_bins as usize)?;
        let series = run_evolution(
            params,
            m_members as usize,
            n_max as usize,
            w_bins as usize,
            seed as u64,
            spec,
        )?;
        let meta: Metadata = vec![("init", init.trim().to_lowercase())];
        Ok(evolution_csv(&series, &meta))
    }

    /// Quantifiers and averaged temperature across a grid of `mu` values.
    ///
    /// `mu_grid` takes the same forms as the command line: `default`, a
    /// `start:stop:step` range, or a comma list.
    pub fn sweep(
        mu_grid: &str,
        n_steps: u32,
        w_bins: u32,
        m_members: u32,
        n_max_temperature: u32,
        seed: u32,
    ) -> Result<String> {
        let mut cfg = SweepConfig::desk();
        cfg.mu_grid = MuGrid::parse(mu_grid)?;
        cfg.n_steps = n_steps as usize;
        cfg.w_bins = w_bins as usize;
        cfg.m_members = m_members as usize;
        cfg.n_max_temperature = n_max_temperature as usize;
        cfg.seed = seed as u64;
        cfg.workers = 1;
        cfg.validate()?;
        let rows = run_sweep(&cfg)?;
        let meta = logmap::csv::config_metadata(&cfg);
        Ok(sweep_csv(&rows, &meta))
    }

    fn check_bins(w_bins: u32) -> Result<()> {
        if w_bins < 2 {
            return Err(Error::Config(format!(
                "w_bins: need at least 2 bins, got {w_bins}"
            )));
        }
        Ok(())
    }
}

fn js_err(e: logmap::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Histogram density of one long orbit; returns CSV text.
#[wasm_bindgen(js_name = densityCsv)]
pub fn density_csv_js(
    mu: f64,
    w_bins: u32,
    n_steps: u32,
    burn_in: u32,
    seed: u32,
) -> Result<String, JsError> {
    ops::density(mu, w_bins, n_steps, burn_in, seed).map_err(js_err)
}

/// Exact arcsine bin masses at `mu = 4`; returns CSV text.
#[wasm_bindgen(js_name = analyticDensityCsv)]
pub fn analytic_density_csv_js(w_bins: u32) -> Result<String, JsError> {
    ops::analytic_density(w_bins).map_err(js_err)
}

/// Ensemble evolution of fisher / complexity / temperature; returns CSV text.
///
/// `init` is `uniform`, `bin:K`, or `point:X`.
#[wasm_bindgen(js_name = evolutionCsv)]
pub fn evolution_csv_js(
    mu: f64,
    m_members: u32,
    n_max: u32,
    w_bins: u32,
    seed: u32,
    init: &str,
) -> Result<String, JsError> {
    ops::evolution(mu, m_members, n_max, w_bins, seed, init).map_err(js_err)
}

/// Parameter sweep over a `mu` grid; returns CSV text.
#[wasm_bindgen(js_name = sweepCsv)]
pub fn sweep_csv_js(
    mu_grid: &str,
    n_steps: u32,
    w_bins: u32,
    m_members: u32,
    n_max_temperature: u32,
    seed: u32,
) -> Result<String, JsError> {
    ops::sweep(mu_grid, n_steps, w_bins, m_members, n_max_temperature, seed).map_err(js_err)
}
