use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is singular or too ill-conditioned (condition estimate {condition:.3e})")]
    Singular { condition: f64 },

    #[error("linear solve residual {residual:.3e} exceeds tolerance (condition estimate {condition:.3e})")]
    IllConditioned { residual: f64, condition: f64 },

    #[error("matrix exponential overflowed")]
    Overflow,

    #[error("Krylov approximation did not converge within {dimension} vectors (estimated error {estimate:.3e})")]
    KrylovNotConverged { dimension: usize, estimate: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("step {step} failed at t = {time}: {source}")]
    Step {
        step: usize,
        time: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
