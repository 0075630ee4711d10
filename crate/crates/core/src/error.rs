use thiserror::Error;

use crate::transmission::TransmissionResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e} after {evaluations} evaluations")]
    Quadrature {
        estimate: f64,
        error: f64,
        evaluations: usize,
    },

    /// The scattering solve stayed above its unitarity threshold after every refinement.
    #[error("transmission solve did not converge: unitarity defect {:e} at k = {}", best.unitarity_defect, best.k)]
    Unitarity { best: Box<TransmissionResult> },

    /// A power series or ODE integration failed to reach its tolerance.
    #[error("series did not converge: {0}")]
    Series(String),

    #[error("ODE integration failed: {0}")]
    Ode(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
