use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An admissibility condition on (gamma, p, d, r) does not hold. The payload names
    /// the violated inequality with the offending numbers substituted.
    #[error("parameter window violated: {0}")]
    Window(String),

    #[error("grid side {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("grid spacing {0} is not a power of two")]
    NonDyadicSpacing(f64),

    #[error("unsupported wavelet order {0} (supported: 1..=10)")]
    UnsupportedOrder(usize),

    #[error("scale range [{j_min}, {j_max}] not representable on grid with levels [{lo}, {hi}]")]
    ScaleRange { j_min: i32, j_max: i32, lo: i32, hi: i32 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("quadrature did not converge: estimated error {achieved:e} above target {target:e}")]
    Quadrature { achieved: f64, target: f64 },

    #[error("moment of order {r} is infinite for stability index {p}")]
    InfiniteMoment { r: f64, p: f64 },

    #[error("laws with different stability indices cannot be summed ({0} vs {1})")]
    MixedStability(f64, f64),

    #[error("truncation ladder is not nested at rung {0}")]
    NonNested(usize),

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("support condition violated: {0}")]
    Support(String),

    #[error("empty frequency band [{lo}, {hi}]")]
    EmptyBand { lo: f64, hi: f64 },

    #[error("bad magic: expected \"FSF1\"")]
    BadMagic,

    #[error("header missing key \"{0}\"")]
    MissingKey(String),

    #[error("malformed header line {line}: {reason}")]
    BadHeader { line: usize, reason: String },

    #[error("short payload: expected {expected} bytes, found {actual}")]
    ShortPayload { expected: usize, actual: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
