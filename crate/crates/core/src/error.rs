use thiserror::Error;

/// Errors raised by the library.
///
/// Variants split into two groups that the CLI maps to different exit codes:
/// input/parameter problems and failed numerical hypotheses.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite matrix or vector entry")]
    NonFinite,
    #[error("matrix is not symmetric (asymmetry {asymmetry:.3e})")]
    NonSymmetric { asymmetry: f64 },
    #[error("matrix is singular or orientation reversing (det = {det:.6e})")]
    NotOrientationPreserving { det: f64 },
    #[error("rotation axis is not a unit vector (|axis| = {norm})")]
    NonUnitAxis { norm: f64 },
    #[error("invalid tolerance {key} = {value}")]
    InvalidTolerance { key: String, value: f64 },
    #[error("parameters out of range: {0}")]
    OutOfRange(String),
    #[error("middle eigenvalue {lambda2} differs from one by more than the tolerance")]
    MiddleEigenvalue { lambda2: f64 },
    #[error("no two-fold axis of the point group relates the two wells")]
    NoTwinAxis,
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("denominator of the shear-amount formula vanishes")]
    DegenerateDenominator,
    #[error("neither span condition of the shear-amount solver holds")]
    NoBranch,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("wedge angles cannot be ordered for the given plate normals")]
    OrderingFailed,
    #[error("wedge vectors are not orthogonal to the junction axis")]
    OrthogonalityFailed,
    #[error("residual {residual:.3e} exceeds tolerance {tol:.3e} ({context})")]
    Residual { residual: f64, tol: f64, context: String },
}

impl Error {
    /// `true` for errors that signal a failed numerical hypothesis rather than
    /// bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::MiddleEigenvalue { .. }
                | Error::NoTwinAxis
                | Error::HypothesisFailed(_)
                | Error::DegenerateDenominator
                | Error::NoBranch
                | Error::OrderingFailed
                | Error::OrthogonalityFailed
                | Error::Residual { .. }
        )
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonFinite => "non_finite",
            Error::NonSymmetric { .. } => "non_symmetric",
            Error::NotOrientationPreserving { .. } => "not_orientation_preserving",
            Error::NonUnitAxis { .. } => "non_unit_axis",
            Error::InvalidTolerance { .. } => "invalid_tolerance",
            Error::OutOfRange(_) => "out_of_range",
            Error::MiddleEigenvalue { .. } => "middle_eigenvalue",
            Error::NoTwinAxis => "no_twin_axis",
            Error::HypothesisFailed(_) => "hypothesis_failed",
            Error::DegenerateDenominator => "degenerate_denominator",
            Error::NoBranch => "no_branch",
            Error::Precondition(_) => "precondition",
            Error::OrderingFailed => "ordering_failed",
            Error::OrthogonalityFailed => "orthogonality_failed",
            Error::Residual { .. } => "residual",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
