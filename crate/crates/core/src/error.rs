use thiserror::Error;

/// Errors raised by the interferometer model and its front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("slit index {index} out of range for a {count}-slit geometry")]
    SlitOutOfRange { index: usize, count: usize },

    #[error("invalid slit configuration: {0}")]
    InvalidConfiguration(String),

    #[error("invalid source state: {0}")]
    InvalidSource(String),

    #[error("splitting count must be between 1 and {max}, got {got}")]
    SplittingCount { got: usize, max: usize },

    #[error("photon number {n} exceeds the truncation n_max = {n_max}")]
    Truncation { n: u32, n_max: u32 },

    #[error("mode index {mode} out of range for {modes} modes")]
    ModeOutOfRange { mode: usize, modes: usize },

    #[error(
        "detection probability has a non-negligible imaginary part ({imag:e} vs scale {scale:e})"
    )]
    NonRealProbability { imag: f64, scale: f64 },

    #[error("invalid sorkin configuration: {0}")]
    InvalidSorkinConfig(String),

    #[error(
        "normalizer P_abc(0) = {0:e} is not strictly positive; geometry or source is degenerate"
    )]
    DegenerateNormalizer(f64),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },

    #[error("manifest: {0}")]
    Manifest(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
