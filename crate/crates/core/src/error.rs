use thiserror::Error;

use crate::report::Report;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Inputs that live over the wrong fibres or objects, e.g. dividing
    /// points of two different fibres or composing non-composable arrows.
    #[error("book-keeping error: {0}")]
    BookKeeping(String),

    #[error("unknown name `{name}` in {context}")]
    UnknownName { name: String, context: String },

    #[error("duplicate name `{0}`")]
    DuplicateName(String),

    #[error("malformed table: {0}")]
    Shape(String),

    /// A structure failed its own validator.
    #[error("invalid {what}: {report}")]
    Invalid { what: &'static str, report: Report },

    #[error("empty fibre over `{0}`")]
    EmptyFibre(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The operation only makes sense for a commutative structure group.
    #[error("{0} requires a commutative group")]
    NonCommutative(&'static str),

    /// A value that should not depend on a choice of lift did.
    #[error("consistency failure: {0}")]
    Inconsistent(String),

    #[error("enumeration of {count} items exceeds ceiling {ceiling}")]
    CeilingExceeded { count: u128, ceiling: u128 },

    #[error("parse error: {0}")]
    Parse(String),
}
