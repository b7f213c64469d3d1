use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A configured size, memory or search budget would be exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// A search ran out of budget. `best` holds the best value seen so far,
    /// rendered for diagnostics.
    #[error("search budget of {budget} nodes exhausted (best found: {best})")]
    SearchBudget { budget: u64, best: String },

    /// Only part of a multi-modulus computation could be completed.
    #[error("partial result: computed moduli {computed:?}; {reason}")]
    Partial { computed: Vec<u64>, reason: String },

    #[error("sieve cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    /// True for errors caused by budgets or caps rather than bad input.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::Resource(_) | Error::SearchBudget { .. } | Error::Partial { .. }
        )
    }
}
