use thiserror::Error;

use crate::perm::Permutation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Malformed or inconsistent caller input.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A generator assignment failed the graph-of-homomorphism test. The
    /// witness is a non-identity codomain element paired with the identity
    /// of the domain inside the graph subgroup.
    #[error("not a homomorphism: graph subgroup has order {graph_order}, domain has order {domain_order}; identity is forced onto {witness}")]
    NotAHomomorphism {
        domain_order: u64,
        graph_order: u64,
        witness: Permutation,
    },

    /// A configured bound was exceeded.
    #[error("capacity exceeded: {what} (bound {bound})")]
    Capacity { what: String, bound: u64 },

    /// A checker was applied to an instance outside its hypotheses.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A construction produced an object violating its own invariants.
    #[error("internal consistency violated: {0}")]
    Inconsistent(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn capacity(what: impl Into<String>, bound: u64) -> Self {
        Error::Capacity {
            what: what.into(),
            bound,
        }
    }

    pub fn inconsistent(msg: impl Into<String>) -> Self {
        Error::Inconsistent(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// Prefixes the message with context, keeping the variant.
    pub fn context(self, ctx: &str) -> Self {
        match self {
            Error::InvalidInput(m) => Error::InvalidInput(format!("{ctx}: {m}")),
            Error::Capacity { what, bound } => Error::Capacity {
                what: format!("{ctx}: {what}"),
                bound,
            },
            Error::Precondition(m) => Error::Precondition(format!("{ctx}: {m}")),
            Error::Inconsistent(m) => Error::Inconsistent(format!("{ctx}: {m}")),
            e @ Error::NotAHomomorphism { .. } => e,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::NotAHomomorphism { .. } => "not_a_homomorphism",
            Error::Capacity { .. } => "capacity",
            Error::Precondition(_) => "precondition",
            Error::Inconsistent(_) => "inconsistent",
        }
    }
}
