use thiserror::Error;

/// Errors raised when an operation receives input outside its contract.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix dimension {0} unsupported (1..=4)")]
    UnsupportedDimension(usize),

    #[error("matrix is not anti-Hermitian (deviation {deviation:e})")]
    NotAntiHermitian { deviation: f64 },

    #[error("matrix is not unitary at node {node} (deviation {deviation:e})")]
    NotUnitary { node: usize, deviation: f64 },

    #[error("grid with {0} nodes per axis is too coarse (need at least 8)")]
    GridTooCoarse(usize),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid form degree {degree} for {op}")]
    InvalidDegree { op: &'static str, degree: usize },

    #[error("degree overflow: {0} + {1} > 2")]
    DegreeOverflow(usize, usize),

    #[error("expected a real scalar-valued form: {0}")]
    NotScalar(String),

    #[error("connection is not flat (curvature L2 norm {curvature_l2:e})")]
    NotFlat { curvature_l2: f64 },

    #[error("path passes within {distance:e} of pole {pole_re}{pole_im:+}i")]
    PoleProximity { distance: f64, pole_re: f64, pole_im: f64 },

    #[error("non-finite potential coefficient at t = {t}")]
    NonFinite { t: f64 },

    #[error("path is not closed (gap {gap:e})")]
    OpenPath { gap: f64 },

    #[error("too few integration steps: {0} (need at least 100)")]
    TooFewSteps(usize),

    #[error("jet stencil degenerate for t = {0:e}")]
    DegenerateStencil(f64),

    #[error("potential is outside the su(2) scalar ansatz (residual {residual:e})")]
    OutsideAnsatz { residual: f64 },

    #[error("curve does not start at the base connection (‖E(0)‖ = {norm:e})")]
    CurveNotAnchored { norm: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed record: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
