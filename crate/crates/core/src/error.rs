use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Newton/bisection refinement of a zero failed to converge.
    #[error("zero refinement did not converge in bracket [{lo}, {hi}]{}", index_suffix(.index))]
    NoConvergence {
        lo: f64,
        hi: f64,
        index: Option<usize>,
    },

    /// The argument sits too close to a pole of a ratio.
    #[error("pole error: {0}")]
    Pole(String),

    /// A requested tolerance or size exceeds the supported resources.
    #[error("resource error: {0}")]
    Resource(String),

    /// Input data failed validation (grids, traces, configurations).
    #[error("invalid input: {0}")]
    Invalid(String),
}

fn index_suffix(index: &Option<usize>) -> String {
    match index {
        Some(n) => format!(" (zero index {n})"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// True for errors a caller should report as a resource failure.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
