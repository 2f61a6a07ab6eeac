use thiserror::Error;

/// Library-wide error type.
///
/// The variants map onto the process exit codes used by the CLI: input
/// problems exit 1, numerical failures exit 2, resource-cap breaches exit 3.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-contract input (non-finite entries, singular
    /// matrices where invertibility is required, parameters out of range).
    #[error("input error: {0}")]
    Input(String),

    /// A computation left the representable range or failed to converge.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A work or memory cap was exceeded (e.g. too many words at level n).
    #[error("resource cap exceeded: {0}")]
    Resource(String),

    /// The operation is only implemented for a specific ambient dimension.
    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),

    /// A certified operation's precondition could not be verified, so the
    /// resulting bound would be unsound.
    #[error("precondition not verified: {0}")]
    Precondition(String),
}

impl Error {
    /// Process exit code for the CLI contract.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numerical(_) => 2,
            Error::Resource(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
