use thiserror::Error;

/// Errors raised by the core routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("{param} = {value} is out of domain: {reason}")]
    Domain {
        param: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The parameter point lies on a regime boundary or is otherwise not
    /// covered by any limit theorem.
    #[error("no theorem applies: {0}")]
    NoTheorem(&'static str),

    #[error("sample is not sorted in nondecreasing order (first violation at index {0})")]
    Unsorted(usize),

    #[error("sample contains a non-finite value at index {0}")]
    NonFinite(usize),

    #[error("{0} is empty")]
    Empty(&'static str),

    /// Adaptive quadrature exhausted its interval budget before meeting the
    /// requested tolerance.
    #[error(
        "quadrature did not converge: estimate {estimate:e}, error bound {error:e} \
         after {intervals} intervals (requested {requested:e})"
    )]
    Quadrature {
        estimate: f64,
        error: f64,
        requested: f64,
        intervals: usize,
    },

    /// Numerical inversion of a distribution function failed.
    #[error("inversion failed at probability {probability}: {reason}")]
    Inversion {
        probability: f64,
        reason: &'static str,
    },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(param: &'static str, value: f64, reason: &'static str) -> Error {
    Error::Domain {
        param,
        value,
        reason,
    }
}
