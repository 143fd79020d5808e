use crate::model::Momentum;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("momentum {0} is the zero mode, which is excluded here")]
    ZeroMomentum(Momentum),

    #[error("tabulated potential queried at |p| = {p} outside its range [0, {max}]")]
    OutOfRange { p: f64, max: f64 },

    #[error("cannot bound the lattice tail of this potential: {0}")]
    UnboundedTail(String),

    #[error("sector {0} lies outside the enumerated momentum window")]
    OutOfWindow(Momentum),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("sector {sector} has {size} basis states, above the cap of {cap}; try max_excited <= {suggested}")]
    BasisTooLarge {
        sector: Momentum,
        size: usize,
        cap: usize,
        suggested: usize,
    },

    #[error("eigensolver did not converge after {iterations} iterations (best residuals {residuals:?})")]
    NoConvergence {
        iterations: usize,
        residuals: Vec<f64>,
    },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("mismatched configurations: {0}")]
    Mismatch(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
