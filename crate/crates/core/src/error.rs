use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: data has {data} coordinates but the model expects {model}")]
    DimensionMismatch { data: usize, model: usize },

    #[error("partition ({n_train} train + {n_gen} generalization) does not match {n} observations")]
    PartitionMismatch { n_train: usize, n_gen: usize, n: usize },

    #[error("generalization set is empty")]
    EmptyGeneralizationSet,

    #[error("cannot compare reports of different criteria ({first} vs {second})")]
    MixedCriteria { first: String, second: String },

    /// An operation that is undefined under the improper flat prior.
    #[error("{quantity} is undefined under an improper flat prior (Bartlett limit)")]
    ImproperPrior { quantity: &'static str },

    #[error("numeric domain error in {quantity}: {reason}")]
    Domain { quantity: &'static str, reason: String },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(quantity: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            quantity,
            reason: reason.into(),
        }
    }

    /// True for errors raised because a quantity is mathematically undefined
    /// (as opposed to malformed input).
    pub fn is_numeric_domain(&self) -> bool {
        matches!(self, Error::ImproperPrior { .. } | Error::Domain { .. })
    }
}
