use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// One violated invariant of a candidate almost Hermitian point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointViolation {
    pub invariant: PointInvariant,
    pub defect: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointInvariant {
    /// `J∘J + I ≠ 0`.
    ComplexStructure,
    /// `g` is not symmetric.
    MetricSymmetry,
    /// `g` has a non-positive eigenvalue.
    MetricPositivity,
    /// `g(JX,JY) ≠ g(X,Y)`.
    Compatibility,
}

impl fmt::Display for PointViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.invariant {
            PointInvariant::ComplexStructure => "J^2 = -I",
            PointInvariant::MetricSymmetry => "g symmetric",
            PointInvariant::MetricPositivity => "g positive definite",
            PointInvariant::Compatibility => "g(JX,JY) = g(X,Y)",
        };
        write!(f, "{what} violated (defect {:.3e})", self.defect)
    }
}

fn join(v: &[PointViolation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("odd dimension {0}: an almost complex structure needs even dimension")]
    OddDimension(usize),
    #[error("non-finite component in {0}")]
    NonFinite(&'static str),
    #[error("invalid almost Hermitian point: {}", join(.0))]
    InvalidPoint(Vec<PointViolation>),
    #[error("tensor is not curvature-class (symmetry defect {defect:.3e} > {tol:.1e})")]
    NotCurvatureClass { defect: f64, tol: f64 },
    #[error("complex dimension m = {m} too small, need m >= {min}")]
    DimensionTooSmall { m: usize, min: usize },
    #[error("tensor is not RK: max |R - R(J,J,J,J)| = {defect:.3e} > {tol:.1e}")]
    NotRk { defect: f64, tol: f64 },
    #[error("zero vector")]
    ZeroVector,
    #[error("degenerate plane")]
    DegeneratePlane,
    #[error("plane is not antiholomorphic (|g(X,JY)| = {defect:.3e})")]
    NotAntiholomorphic { defect: f64 },
    #[error("could not draw a non-degenerate basis after {attempts} attempts")]
    DegenerateBasis { attempts: usize },
    #[error("antiholomorphic frame construction failed after {attempts} attempts")]
    FrameConstruction { attempts: usize },
    #[error("point too close to chart boundary: margin {margin:.3e} < required {required:.3e}")]
    MarginViolation { margin: f64, required: f64 },
    #[error("singular metric")]
    SingularMetric,
    #[error("chart is not nearly Kähler: max |(∇_X J)X| = {defect:.3e} > {tol:.1e}")]
    NotNearlyKahler { defect: f64, tol: f64 },
    #[error("unknown model: {0}")]
    UnknownModel(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown scenario: {0}")]
    UnknownScenario(String),
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
