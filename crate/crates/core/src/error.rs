use num_complex::Complex64;

use crate::group::Word;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("the homogeneous pair (0, 0) does not represent a point")]
    ZeroPoint,

    #[error("matrix is singular (|det| = {0:e})")]
    SingularMatrix(f64),

    #[error("degenerate cross-ratio{}", fmt_word(.word))]
    DegenerateCrossRatio { word: Option<Word> },

    #[error("map is not loxodromic (trace^2 = {trace_sq})")]
    NotLoxodromic { trace_sq: Complex64 },

    #[error("image of the circle is a line: the pole lies on the boundary")]
    ImageIsLine,

    #[error("word budget exceeded: {needed} words requested, budget {budget}")]
    CapacityExceeded { needed: u128, budget: u64 },

    #[error("point did not reach the fundamental domain within {steps} steps")]
    NoTermination { steps: usize },

    #[error("orbit point hits a divisor point{}", fmt_word(.word))]
    PoleHit { word: Option<Word> },

    #[error("denominator ({k}, {l}) is numerically zero ({value:e})")]
    SingularDenominator { k: usize, l: usize, value: f64 },

    #[error("quadrature unstable: doubling the node count moved the result by {delta:e}")]
    QuadratureUnstable { delta: f64 },

    #[error("divisor supports overlap")]
    OverlappingSupports,

    #[error("rejection sampler starved: acceptance rate {rate:.4}")]
    RejectionStarvation { rate: f64 },

    #[error("tolerance unreachable: {0}")]
    ToleranceUnreachable(String),

    #[error("bad deformation spec: {0}")]
    BadSpec(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable tag, used in emitted reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroPoint => "ZeroPoint",
            Error::SingularMatrix(_) => "SingularMatrix",
            Error::DegenerateCrossRatio { .. } => "DegenerateCrossRatio",
            Error::NotLoxodromic { .. } => "NotLoxodromic",
            Error::ImageIsLine => "ImageIsLine",
            Error::CapacityExceeded { .. } => "CapacityExceeded",
            Error::NoTermination { .. } => "NoTermination",
            Error::PoleHit { .. } => "PoleHit",
            Error::SingularDenominator { .. } => "SingularDenominator",
            Error::QuadratureUnstable { .. } => "QuadratureUnstable",
            Error::OverlappingSupports => "OverlappingSupports",
            Error::RejectionStarvation { .. } => "RejectionStarvation",
            Error::ToleranceUnreachable(_) => "ToleranceUnreachable",
            Error::BadSpec(_) => "BadSpec",
            Error::InvalidGroup(_) => "InvalidGroup",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }

    pub(crate) fn with_word(self, w: Word) -> Error {
        match self {
            Error::DegenerateCrossRatio { .. } => Error::DegenerateCrossRatio { word: Some(w) },
            Error::PoleHit { .. } => Error::PoleHit { word: Some(w) },
            other => other,
        }
    }
}

fn fmt_word(w: &Option<Word>) -> String {
    match w {
        Some(w) => format!(" at word {w}"),
        None => String::new(),
    }
}
