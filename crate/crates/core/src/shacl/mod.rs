//! A core subset of SHACL: shape parsing and validation.

mod model;
mod validate;
pub mod xsd;

pub use model::{
    component_parameter_name, parse_shapes, Constraint, ConstraintDescriptor, NodeKind, ParamValue,
    PropertyPath, Shape, ShapeKind, ShapeModel, ShapeParseError, Target,
};
pub use validate::{
    classify_violation_type, validate, ConstraintViolation, Validator, ViolationType,
};
