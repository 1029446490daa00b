use alloc::boxed::Box;
use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("operands live on different mode grids or component counts")]
    GridMismatch,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("phi order {0} unsupported (max {max})", max = crate::phi::MAX_PHI_ORDER)]
    UnsupportedOrder(usize),

    #[error("spectrum has eigenvalue with positive real part {re:e}")]
    PositiveSpectrum { re: f64 },

    #[error("matrix dimension {dim} exceeds dense bound {max}")]
    DimensionOverflow { dim: usize, max: usize },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("singular matrix in {0}")]
    Singular(&'static str),

    #[error("stage iteration did not converge after {iterations} iterations (residual {residual:e})")]
    StageDivergence { iterations: usize, residual: f64 },

    #[error("step size {h:e} violates the contraction bound: h*M_a*M'[R] = {bound:e} > 1/2")]
    ContractionGuard { h: f64, bound: f64 },

    #[error("contraction guard requested but the problem supplies no Lipschitz estimate")]
    MissingLipschitz,

    #[error("derivative of the nonlinearity is not complex-linear; dense Jacobian unavailable")]
    NotComplexLinear,

    #[error("step {step} failed: {source}")]
    StepFailed { step: usize, source: Box<Error> },
}
