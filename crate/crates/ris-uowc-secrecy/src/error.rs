use thiserror::Error;

/// Errors raised by the numerical kernel and the model layers.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument of a Gamma-family function landed on (or within 1e-12 of) a
    /// non-positive integer.
    #[error("gamma pole at z = {0}")]
    GammaPole(f64),

    /// Domain violation (negative shape, non-positive SNR, and similar).
    #[error("domain error: {0}")]
    Domain(String),

    /// No Mellin-Barnes contour separates the two pole families, even after
    /// perturbation.
    #[error("meijer-g pole collision: {0}")]
    PoleCollision(String),

    /// The Meijer-G evaluation failed its tail-decay / convergence test.
    #[error("meijer-g did not converge: {0}")]
    MeijerNonConvergence(String),

    /// Adaptive quadrature could not meet the requested tolerances; carries
    /// the best estimate and the achieved error bound.
    #[error("quadrature tolerance not met: estimate {estimate}, achieved error {achieved}")]
    ToleranceNotMet { estimate: f64, achieved: f64 },

    /// Moment matching produced a degenerate shape (a + 1 <= 0).
    #[error("degenerate moment matching: {0}")]
    DegenerateMoments(String),

    /// The closed-form series needs integer Meijer-G multiplicities that the
    /// supplied detection / turbulence parameters do not provide.
    #[error("unsupported parameters for series path: {0}")]
    UnsupportedParameters(String),

    /// The exact-SOP series reconstruction is gated behind an explicit flag.
    #[error("the exact-SOP series uses a reconstructed K_r6 coefficient; enable the experimental flag to evaluate it")]
    ExperimentalFlagRequired,

    /// Scenario-II coupling was requested with incompatible first-hop shapes.
    #[error("sample handle mismatch: {0}")]
    HandleMismatch(String),

    /// Sweep / scenario configuration rejected, with the offending field path.
    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },

    /// A water-condition label was not found in the mEGG parameter table.
    #[error("unknown water condition `{0}` in parameter table")]
    UnknownWaterCondition(String),

    /// Unknown figure preset name.
    #[error("unknown preset `{0}` (expected fig2..fig13)")]
    UnknownPreset(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("parameter table parse error: {0}")]
    TableParse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
