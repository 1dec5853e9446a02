//! Error type shared by all modules.

use thiserror::Error;

/// Errors reported by the numerical and exact layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Argument at (or too close to) a pole.
    #[error("pole error: {0}")]
    Pole(String),
    /// Quadrature or series refinement failed to converge.
    #[error("quadrature/series did not converge: {0}")]
    NonConvergent(String),
    /// Branch of a multivalued function could not be resolved.
    #[error("branch error: {0}")]
    Branch(String),
    /// Point not reachable along a supported integration path.
    #[error("path error: {0}")]
    Path(String),
    /// Point fails the image-equation residual test.
    #[error("not on the image: residual {residual:.3e} exceeds {threshold:.3e}")]
    NotOnImage { residual: f64, threshold: f64 },
    /// Matrix is not a member of the monodromy group.
    #[error("not a member of the monodromy group")]
    NotMember,
    /// Enumeration exceeded its configured capacity.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),
    /// Integer overflow in exact arithmetic.
    #[error("integer overflow in exact arithmetic")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Pole(_) | Error::Branch(_) | Error::Path(_) => 2,
            Error::NonConvergent(_) => 3,
            Error::NotOnImage { .. } => 4,
            Error::Parse(_) => 5,
            Error::NotMember | Error::Capacity(_) | Error::Overflow => 2,
        }
    }
}
