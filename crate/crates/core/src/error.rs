use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("insufficient samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("degenerate density: all density values are zero")]
    DegenerateDensity,

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("HPD region is disconnected ({} segments): {segments:?}", segments.len())]
    MultimodalHpd { segments: Vec<(f64, f64)> },

    #[error("value {value} lies outside the support [{lower}, {upper}]")]
    OutOfSupport { value: f64, lower: f64, upper: f64 },

    #[error("division by zero: reference density vanishes at {at}")]
    DivisionByZero { at: f64 },

    #[error(
        "posterior grid truncates the support: {lower_tail:.3e} mass at the lower edge, {upper_tail:.3e} at the upper edge"
    )]
    TruncatedSupport { lower_tail: f64, upper_tail: f64 },

    #[error("numeric convergence failure: {0}")]
    NumericConvergence(String),

    #[error("line {line}: {message}")]
    MalformedInput { line: u64, message: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    ///
    /// Input and configuration problems map to 2, numeric failures to 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_)
            | Error::MalformedInput { .. }
            | Error::Config(_)
            | Error::Io(_) => 2,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
