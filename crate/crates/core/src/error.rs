use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sampling grid too coarse: {samples} nodes cannot resolve truncation {trunc_n} (need at least {required})")]
    Aliasing {
        samples: usize,
        trunc_n: usize,
        required: usize,
    },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("multiplicity mismatch: expected dim {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("truncation leak {leak:.3e} exceeds tolerance {tolerance:.3e} (suggested N >= {suggested_n})")]
    TruncationLeak {
        leak: f64,
        tolerance: f64,
        suggested_n: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("evaluation at a pole: {location}")]
    Pole { location: Complex64 },

    #[error("quadrature tail estimate {estimate:.3e} above tolerance {tolerance:.3e}; need L >= {required_l:.3e}")]
    TailBound {
        estimate: f64,
        tolerance: f64,
        required_l: f64,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("operator is not an orthogonal projection (residual {residual:.3e})")]
    NotProjection { residual: f64 },

    #[error(
        "commutation residual {residual:.3e} is in the inconclusive band; increase the truncation"
    )]
    InconclusiveCommutation { residual: f64 },

    #[error("isometry equivalences disagree: gram defect {gram:.3e}, D+D- {orthogonality:.3e}, Q-SQ+ {hankel:.3e}")]
    MixedEquivalence {
        gram: f64,
        orthogonality: f64,
        hankel: f64,
    },

    #[error("discretization failure: {0}")]
    Discretization(String),

    #[error("linear algebra failure: {0}")]
    LinearAlgebra(String),

    #[error("scenario error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable snake_case name of the variant, used in reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Aliasing { .. } => "aliasing",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::TruncationLeak { .. } => "truncation_leak",
            Error::Domain(_) => "domain",
            Error::Pole { .. } => "pole",
            Error::TailBound { .. } => "tail_bound",
            Error::Unsupported(_) => "unsupported",
            Error::NotProjection { .. } => "not_projection",
            Error::InconclusiveCommutation { .. } => "inconclusive_commutation",
            Error::MixedEquivalence { .. } => "mixed_equivalence",
            Error::Discretization(_) => "discretization",
            Error::LinearAlgebra(_) => "linear_algebra",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
