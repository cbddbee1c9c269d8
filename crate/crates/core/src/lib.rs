//! SHACL validation with justified, human-readable violation reports.
//!
//! Validates RDF data against a core subset of SHACL, builds a justification
//! tree for each violation, retrieves the surrounding graph context, and
//! produces natural-language explanations that are cached per violation
//! signature and language in a violation knowledge graph.

pub mod context;
pub mod explain;
pub mod justification;
pub mod kg;
pub mod rdf;
pub mod shacl;
