use thiserror::Error;

use crate::ols::OlsViolation;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report. Each variant maps to a stable
/// machine-readable code (see [`Error::code`]) used by the CLI and the C ABI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("unknown standard lattice `{0}`")]
    UnknownLattice(String),
    #[error("lattice is not negative definite")]
    NotDefinite,
    #[error("zero vector")]
    ZeroVector,
    #[error("negative rank {0}")]
    NegativeRank(String),
    #[error("class has odd square {0}; the lattice is not even")]
    OddSquare(String),
    #[error("invalid surface model: {0}")]
    InvalidSurface(String),
    #[error("surface mismatch: {0}")]
    SurfaceMismatch(String),
    #[error("rank {0} is below the required minimum 2")]
    RankTooSmall(String),
    #[error("rank must be positive")]
    NonPositiveRank,
    #[error("rank-0 vectors have no reduced Hilbert polynomial here")]
    RankZeroHilbert,
    #[error("polarization has non-positive square")]
    NotPositiveSquare,
    #[error("v0 = 0 and v2 = 0: no wall divisor is defined")]
    DegenerateRankZero,
    #[error("classes lie in different components of the positive cone")]
    DifferentComponents,
    #[error("NS basis is not of the elliptic shape (sigma, f)")]
    NotEllipticBasis,
    #[error("polarization is not of the form sigma + l f")]
    NotSigmaPlusLf,
    #[error("inapplicable: {0}")]
    Inapplicable(String),
    #[error("unclassified: {0}")]
    Unclassified(String),
    #[error("not of the shape 2w with w primitive and w^2 = 2: {0}")]
    NotOlsShape(String),
    #[error("rank-0 tensor move requires a multiple of the polarization")]
    RankZeroTensorNotMultipleOfH,
    #[error("threshold not met: {value} < {threshold}")]
    ThresholdNotMet { value: String, threshold: String },
    #[error("wrong shape: {0}")]
    WrongShape(String),
    #[error("divisibility failure: {0}")]
    NotDivisible(String),
    #[error("nothing found below cap {0}")]
    NotFoundBelowCap(String),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(String, String),
    #[error("deformation of rank-0 vectors is not supported")]
    RankZeroDeformUnsupported,
    #[error("square mismatch: {0} vs {1}")]
    SquareMismatch(String, String),
    #[error("Picard rank too small (need at least 2)")]
    RhoTooSmall,
    #[error("polarization is not certified generic: {0}")]
    NotGeneric(String),
    #[error("invalid OLS triple: {0:?}")]
    Ols(Vec<OlsViolation>),
    #[error("invariant breach at move {index}: {detail}")]
    InvariantBreach { index: usize, detail: String },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::InvalidLattice(_) => "invalid_lattice",
            Error::UnknownLattice(_) => "unknown_lattice",
            Error::NotDefinite => "not_definite",
            Error::ZeroVector => "zero_vector",
            Error::NegativeRank(_) => "negative_rank",
            Error::OddSquare(_) => "odd_square",
            Error::InvalidSurface(_) => "invalid_surface",
            Error::SurfaceMismatch(_) => "surface_mismatch",
            Error::RankTooSmall(_) => "rank_too_small",
            Error::NonPositiveRank => "nonpositive_rank",
            Error::RankZeroHilbert => "rank_zero_hilbert",
            Error::NotPositiveSquare => "not_positive_square",
            Error::DegenerateRankZero => "degenerate_rank_zero",
            Error::DifferentComponents => "different_components",
            Error::NotEllipticBasis => "not_elliptic_basis",
            Error::NotSigmaPlusLf => "not_sigma_plus_lf",
            Error::Inapplicable(_) => "inapplicable",
            Error::Unclassified(_) => "unclassified",
            Error::NotOlsShape(_) => "not_ols_shape",
            Error::RankZeroTensorNotMultipleOfH => "rank_zero_tensor_not_multiple_of_h",
            Error::ThresholdNotMet { .. } => "threshold_not_met",
            Error::WrongShape(_) => "wrong_shape",
            Error::NotDivisible(_) => "not_divisible",
            Error::NotFoundBelowCap(_) => "not_found_below_cap",
            Error::RankMismatch(..) => "rank_mismatch",
            Error::RankZeroDeformUnsupported => "rank_zero_deform_unsupported",
            Error::SquareMismatch(..) => "square_mismatch",
            Error::RhoTooSmall => "rho_too_small",
            Error::NotGeneric(_) => "not_generic",
            Error::Ols(_) => "invalid_ols_triple",
            Error::InvariantBreach { .. } => "invariant_breach",
            Error::Parse(_) => "parse_error",
        }
    }
}
