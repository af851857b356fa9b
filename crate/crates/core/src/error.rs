use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("series has zero constant term")]
    NonUnit,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("quadratic form is singular (rank {rank} of {dim})")]
    Rank { rank: usize, dim: usize },
    #[error("signature ({pos} positive, {neg} negative) is not Lorentzian")]
    Signature { pos: usize, neg: usize },
    #[error("form is not real after phase removal: {0}")]
    Reality(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("spec not normalized: {0}")]
    NotNormalized(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("gamma pole at {0}")]
    GammaPole(f64),
    #[error("singular evaluation: {0}")]
    Singularity(String),
    #[error("refused: {class} ({detail})")]
    Refusal { class: String, detail: String },
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
