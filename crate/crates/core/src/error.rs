use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Inputs outside the admissible domain (material, thickness, ζ range).
    #[error("domain error: {0}")]
    Domain(String),
    /// Mismatched shapes or malformed arguments.
    #[error("argument error: {0}")]
    Argument(String),
    /// Invalid model configuration.
    #[error("config error: {0}")]
    Config(String),
    /// Linear solver failure or ill-posed system.
    #[error("solver error: {0}")]
    Solver(String),
    /// A symbol produced a clearly negative ω², i.e. the operator is not conservative.
    #[error("non-conservative symbol: eigenvalue {eigenvalue:.3e} at xi = ({xi1}, {xi2})")]
    NonConservative { eigenvalue: f64, xi1: f64, xi2: f64 },
    /// Time integration blew up.
    #[error("instability at t = {time}: {detail}")]
    Unstable { time: f64, detail: String },
}

impl Error {
    /// Config/validation failures map to exit code 2, everything else to 1.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Config(_) | Error::Argument(_))
    }
}
