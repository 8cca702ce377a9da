//! Numerical engine for the logistic map `x_{n+1} = mu * x_n * (1 - x_n)`.
//!
//! The crate computes the objects needed to study how information-theoretic
//! quantifiers behave across the map's parameter range:
//!
//! - orbits, closed-form solutions, fixed points, velocities ([`map`]),
//! - invariant densities estimated three independent ways: long-orbit
//!   histograms, the exact arcsine law at `mu = 4`, and the stationary vector
//!   of a discretized transfer operator ([`density`]),
//! - discrete Fisher information, variance, and Cramér-Rao complexity of
//!   binned densities, including their evolution in time ([`quantifiers`]),
//! - an equipartition-style "map temperature" over ensembles, with transient
//!   detection and sweep-wide normalization ([`thermo`]),
//! - seeded, reproducible parameter sweeps and CSV emission ([`sweep`],
//!   [`config`], [`csv`]).
//!
//! All randomness flows from explicit `u64` seeds through ChaCha8, and the
//! batch pipelines produce byte-identical output for a fixed seed regardless
//! of worker count.

pub mod config;
pub mod csv;
pub mod density;
mod error;
pub mod map;
pub mod numeric;
pub mod quantifiers;
pub mod rng;
pub mod sweep;
pub mod thermo;

pub use error::{Error, Result};
