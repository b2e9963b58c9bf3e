use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("invalid system: {0}")]
    Spec(String),
    #[error("reversibility violated: {0}")]
    Reversibility(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("singular jacobian")]
    Singular,
    #[error(transparent)]
    Core(#[from] eqdeg::EqError),
}

pub type Result<T> = std::result::Result<T, VerifyError>;
