use thiserror::Error;

use crate::report::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid stratified space `{name}`: {}", .report.failure_summary())]
    InvalidSpace { name: String, report: ValidationReport },

    #[error("corner complex `{name}` violates the iterated fibration conditions: {}", .report.failure_summary())]
    InvalidCornerComplex { name: String, report: ValidationReport },

    #[error("malformed simplicial complex: {0}")]
    MalformedComplex(String),

    #[error("filtration does not match the complex: {0}")]
    FiltrationMismatch(String),

    #[error("invalid perversity: {0}")]
    InvalidPerversity(String),

    #[error("no triangulation supplied for the even-dimensional link of stratum `{0}`")]
    MissingTriangulation(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("value out of the supported range: {0}")]
    Range(String),

    #[error("grid error: {0}")]
    Grid(String),

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("Mellin quadrature diverges: {0}")]
    QuadratureDivergence(String),

    #[error("schema violation in {location}: {message}")]
    Schema { location: String, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn schema(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            location: location.into(),
            message: message.into(),
        }
    }
}
