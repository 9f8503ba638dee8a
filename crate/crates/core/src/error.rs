use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("linear solver error: {0}")]
    Solver(String),
    #[error("integration error: {0}")]
    Integration(String),
    #[error("accuracy error: {0}")]
    Accuracy(String),
    #[error("contour error: {0}")]
    Contour(String),
    #[error("fit error: {0}")]
    Fit(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
