use crate::arith::ArithError;
use crate::nichols::HilbertReport;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("resource limit: {0}")]
    Resource(String),
    /// The row budget was hit; carries everything computed before that.
    #[error("budget exceeded at degree {degree}: {rows} rows > budget {budget}")]
    Budget { degree: usize, rows: u128, budget: u128, partial: Box<HilbertReport> },
}

pub type Result<T> = std::result::Result<T, Error>;
