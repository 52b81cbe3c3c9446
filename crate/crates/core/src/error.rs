use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the domain an operation is defined on.
    #[error("invalid {name} = {value}: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A product or Gamma ratio left the representable range of `f64`.
    #[error("overflow while computing {0}")]
    Overflow(&'static str),

    /// A power series did not meet its tail tolerance within the term cap.
    #[error("series did not converge: rho = {rho}, tail rule needs more than {max_terms} terms")]
    NonConvergence { rho: f64, max_terms: usize },

    /// An integrand returned NaN or an infinity at a quadrature node.
    #[error("integrand is not finite at x = {x}")]
    NonFinite { x: f64 },

    /// Adaptive quadrature exhausted its depth budget.
    #[error("tolerance not met: estimate {estimate}, error bound {error_bound}")]
    ToleranceNotMet { estimate: f64, error_bound: f64 },

    /// Newton iteration for Gauss-Legendre nodes failed to settle.
    #[error("Newton iteration for the {order}-point Gauss-Legendre rule did not converge")]
    NewtonFailed { order: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        reason,
    }
}
