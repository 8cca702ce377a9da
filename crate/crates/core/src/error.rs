//! Error type shared by every module.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong inside the engine.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A map state left the unit interval (inputs only; iteration preserves it).
    #[error("x = {x} lies outside the unit interval [0, 1]")]
    XOutsideUnit { x: f64 },

    /// Control parameter outside the range where the map stays in [0, 1].
    #[error("mu = {mu} lies outside the valid range (0, 4]")]
    MuOutOfRange { mu: f64 },

    /// Closed-form orbits exist only for two parameter values.
    #[error("no closed-form orbit for mu = {mu} (supported: 2 and 4)")]
    NoClosedForm { mu: f64 },

    /// The mu = 2 closed form evaluates log(1 - 2*x0)-style terms that are
    /// singular at x0 = 1; iteration handles that point instead.
    #[error("closed form at mu = 2 is singular for x0 = 1; iterate instead")]
    ClosedFormSingular,

    /// The analytic mu = 4 density diverges at the interval endpoints.
    #[error("analytic density is singular at x = {x}")]
    DensitySingular { x: f64 },

    /// An orbit (or requested orbit) has too few points for the operation.
    #[error("orbit too short: need at least {need} points, got {got}")]
    OrbitTooShort { need: usize, got: usize },

    /// A probability vector does not sum to 1 within tolerance.
    #[error("probabilities sum to {sum:e}, expected 1 within 1e-9")]
    NotNormalized { sum: f64 },

    /// A probability vector contains a negative entry.
    #[error("probability p[{index}] = {value} is negative")]
    NegativeProbability { index: usize, value: f64 },

    /// A bin index points outside the binning it was built for.
    #[error("bin index {bin} out of range for {w_bins} bins")]
    BinOutOfRange { bin: usize, w_bins: usize },

    /// Power iteration ran out of iterations before the update settled.
    #[error("power iteration did not converge within {iters} iterations (residual {residual:e})")]
    NoConvergence { iters: usize, residual: f64 },

    /// Ensembles must have at least one member.
    #[error("ensemble has no members")]
    EmptyEnsemble,

    /// Transient detection needs two full windows of data.
    #[error("series of length {len} too short for window {window} (need at least {need})")]
    SeriesTooShort { len: usize, window: usize, need: usize },

    /// Normalizing a temperature sweep requires a positive maximum.
    #[error("cannot normalize: all averaged temperatures are zero")]
    AllZeroTemperatures,

    /// Invalid run configuration (message names the offending field).
    #[error("invalid configuration: {0}")]
    Config(String),
}
