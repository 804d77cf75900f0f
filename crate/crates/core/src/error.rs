use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A brute-force search would exceed its configured bound.
    #[error("guard exceeded: {what} needs {needed} > limit {limit}")]
    GuardExceeded { what: String, needed: u128, limit: u128 },

    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("field F_{q} has only {available} rational homogeneous parameters, {requested} requested")]
    FieldTooSmall { q: u32, available: usize, requested: usize },

    #[error("classification violation: {0}")]
    Classification(String),

    #[error("generic extension is not unique: {count} targets share the maximal orbit dimension {dim}")]
    NonUniqueGeneric { count: usize, dim: i64 },

    #[error("validation failure: {0}")]
    Validation(String),

    #[error("integrality violation: {0}")]
    Integrality(String),

    #[error("incomplete catalog: {0}")]
    Catalog(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn guard(what: impl Into<String>, needed: u128, limit: u128) -> Self {
        Error::GuardExceeded { what: what.into(), needed, limit }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::GuardExceeded { .. } => 2,
            Error::Validation(_)
            | Error::Integrality(_)
            | Error::NonUniqueGeneric { .. }
            | Error::Classification(_)
            | Error::Catalog(_) => 3,
            Error::Mismatch(_)
            | Error::Input(_)
            | Error::FieldTooSmall { .. }
            | Error::Io(_)
            | Error::Json(_) => 4,
        }
    }

    /// Short machine-readable tag for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::GuardExceeded { .. } => "guard_exceeded",
            Error::Mismatch(_) => "mismatch",
            Error::Input(_) => "input",
            Error::FieldTooSmall { .. } => "field_too_small",
            Error::Classification(_) => "classification",
            Error::NonUniqueGeneric { .. } => "non_unique_generic_extension",
            Error::Validation(_) => "validation",
            Error::Integrality(_) => "integrality",
            Error::Catalog(_) => "catalog",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
