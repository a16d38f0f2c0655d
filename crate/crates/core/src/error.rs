use thiserror::Error;

use crate::lattice::DivisorClass;

/// Errors raised by lattice, enumeration, cone and verdict operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: expected {expected} exceptional coefficients, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("cannot parse divisor class {input:?}: {reason}")]
    ClassParse { input: String, reason: String },

    #[error("unsupported class query (self-intersection {self_int}, K-degree {k_degree})")]
    UnsupportedQuery { self_int: i64, k_degree: i64 },

    #[error("enumeration over r = {r} points is unbounded; a degree bound is required")]
    UnboundedSearch { r: usize },

    #[error("root closure left the degree window |d0| <= {window} ({} roots found so far)", partial.len())]
    WindowExceeded {
        window: i64,
        partial: Vec<DivisorClass>,
    },

    #[error("{0} is not a root (needs square -2 and K-degree 0)")]
    InvalidRoot(DivisorClass),

    #[error("(-1)-curves are not known to be finite here: {0}")]
    InfiniteOrUndecided(String),

    #[error("not an infinite case: {0}")]
    NotAnInfiniteCase(String),

    #[error("effective monoid is not finitely generated: {0}")]
    NotFinitelyGenerated(String),

    #[error("cone is not pointed; its Hilbert basis is not defined")]
    NotPointed,

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("internal invariant violated: {0}")]
    InvariantBreach(String),
}

impl Error {
    /// Malformed input: a bad configuration, class string or reflector.
    ///
    /// Requests that are well formed but cannot be answered for the given
    /// surface (an infinite case, say) are not input errors.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::RankMismatch { .. }
                | Error::InvalidConfig(_)
                | Error::ClassParse { .. }
                | Error::UnsupportedQuery { .. }
                | Error::InvalidRoot(_)
        )
    }

    /// Resource limits: search windows, unbounded searches, integer width.
    pub fn is_capacity_error(&self) -> bool {
        matches!(
            self,
            Error::UnboundedSearch { .. }
                | Error::WindowExceeded { .. }
                | Error::Capacity(_)
                | Error::Overflow(_)
                | Error::NotPointed
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
