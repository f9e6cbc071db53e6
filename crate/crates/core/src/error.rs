use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("operator is not unitary (residual {0:e})")]
    NotUnitary(f64),
    #[error("operator is not Hermitian (residual {0:e})")]
    NotHermitian(f64),
    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),
    #[error("only the |00>,|11> ansatz branch has a closed form")]
    UnsupportedBranch,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    range: &'static str,
) -> Result<f64> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(value)
    } else {
        Err(Error::OutOfRange { name, value, range })
    }
}
