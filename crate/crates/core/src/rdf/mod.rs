//! RDF data model: terms, triples, an indexed graph, Turtle I/O and isomorphism.

mod graph;
mod iso;
mod term;
pub mod turtle;
pub mod vocab;

pub use graph::Graph;
pub use iso::is_isomorphic;
pub use term::{escape_string, Literal, Term, Triple};
pub use turtle::{parse_turtle, serialize_turtle, TurtleError};
