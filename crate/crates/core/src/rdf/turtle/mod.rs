//! Turtle reading and writing.

mod iri;
mod parser;
mod serializer;

use thiserror::Error;

pub use iri::resolve as resolve_iri;
pub use parser::parse_turtle;
pub use serializer::serialize_turtle;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TurtleError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unresolved prefix '{prefix}:' at line {line}, column {column}")]
    UnresolvedPrefix {
        prefix: String,
        line: usize,
        column: usize,
    },
}
