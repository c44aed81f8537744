use thiserror::Error;

/// Errors raised by the fractional-calculus engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FracError {
    #[error("gamma has a pole at {0}")]
    Pole(f64),

    #[error("|gamma({0})| exceeds the representable range")]
    Overflow(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("term t^{exponent} is not locally integrable at 0+ (exponent must exceed -1)")]
    NotIntegrable { exponent: f64 },

    #[error("t^{exponent} is not Caputo-admissible for order {alpha}")]
    NotCaputoAdmissible { exponent: f64, alpha: f64 },

    #[error("Caputo order {0} > 2 needs the m-th derivative supplied")]
    UnsupportedOrder(f64),

    #[error("length mismatch: expected {expected}, got {got}")]
    Length { expected: usize, got: usize },

    #[error("t^{exponent} has no Laplace transform (exponent must exceed -1)")]
    NotTransformable { exponent: f64 },

    #[error("initial value of order {order} diverges at 0+")]
    UnboundedInitialValue { order: usize },

    #[error("quadrature did not converge: last two estimates {last} and {previous}")]
    NonConvergence { last: f64, previous: f64 },

    #[error("Laplace tail bound {bound:e} exceeds tolerance {tol:e}")]
    TailBound { bound: f64, tol: f64 },

    #[error("term is not of Liouville class for order {alpha} (needs delta > alpha, got {delta})")]
    NotLiouvilleClass { delta: f64, alpha: f64 },

    #[error("hypothesis violated: {0}")]
    Precondition(String),

    #[error("step {step} of operator word failed: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<FracError>,
    },

    #[error("parse error at byte {offset}: expected {expected}")]
    Parse { offset: usize, expected: String },

    #[error("csv: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, FracError>;

impl From<csv::Error> for FracError {
    fn from(e: csv::Error) -> Self {
        FracError::Csv(e.to_string())
    }
}
