use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the mathematical domain (non-finite input, unsupported system).
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid state or zero index.
    #[error("index error: {0}")]
    Index(String),

    /// Inconsistent or out-of-range configuration.
    #[error("argument error: {0}")]
    Argument(String),

    /// The requested series does not converge.
    #[error("divergent sum: {family} with p = {p} (needs p >= {min_p})")]
    Divergence {
        family: String,
        p: i32,
        min_p: i32,
    },

    /// A numerical procedure stopped short of its target accuracy.
    #[error("accuracy error: achieved {achieved:e}, requested {requested:e}")]
    Accuracy { achieved: f64, requested: f64 },

    #[error("unknown identity id `{0}`")]
    UnknownIdentity(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
