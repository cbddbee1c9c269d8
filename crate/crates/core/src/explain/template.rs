//! Offline backend filling fixed sentence templates per violation type.

use std::thread;
use std::time::Duration;

use super::{Generated, GenerationError, GenerationRequest, Generator};
use crate::justification::show;
use crate::rdf::vocab::{local_name, sh};
use crate::shacl::{ConstraintViolation, ParamValue, ViolationType};

pub const TEMPLATE_MODEL: &str = "template-v1";

/// Deterministic generator. Output depends only on the violation type,
/// component, path and constraint parameters, never on the focus node or
/// the offending value.
#[derive(Debug, Default)]
pub struct TemplateGenerator {
    latency: Duration,
    invocations: usize,
}

impl TemplateGenerator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sleeps for `latency` on every call, standing in for a remote model.
    pub fn with_latency(latency: Duration) -> Self {
        TemplateGenerator {
            latency,
            invocations: 0,
        }
    }
}

impl Generator for TemplateGenerator {
    fn model(&self) -> &str {
        TEMPLATE_MODEL
    }

    fn invocations(&self) -> usize {
        self.invocations
    }

    fn generate(&mut self, request: &GenerationRequest<'_>) -> Result<Generated, GenerationError> {
        self.invocations += 1;
        if !self.latency.is_zero() {
            thread::sleep(self.latency);
        }
        let v = &request.tree.violation;
        Ok(Generated {
            text: template_text(v),
            suggestions: template_suggestions(v.violation_type),
            model: TEMPLATE_MODEL.to_string(),
        })
    }
}

fn param(v: &ConstraintViolation, iri: &str) -> String {
    match v.constraint_parameters.get(iri) {
        Some(ParamValue::Term(t)) => show(t),
        Some(ParamValue::List(items)) => items.iter().map(show).collect::<Vec<_>>().join(", "),
        None => "?".to_string(),
    }
}

/// The English explanation sentence for `v`.
pub fn template_text(v: &ConstraintViolation) -> String {
    let subject = match &v.result_path {
        Some(path) => format!("property <{}>", path.predicate()),
        None => "the focus node".to_string(),
    };
    let values_of = match &v.result_path {
        Some(path) if path.is_inverse() => format!("incoming <{}> links", path.predicate()),
        Some(path) => format!("values for <{}>", path.predicate()),
        None => "values".to_string(),
    };
    let a_value = match &v.result_path {
        Some(_) => format!("A value of {subject}"),
        None => "The focus node".to_string(),
    };
    match v.constraint_component.as_str() {
        sh::MIN_COUNT_COMPONENT => format!(
            "The node has too few {values_of}, but the shape requires at least {}.",
            param(v, sh::MIN_COUNT)
        ),
        sh::MAX_COUNT_COMPONENT => format!(
            "The node has too many {values_of}, but the shape requires at most {}.",
            param(v, sh::MAX_COUNT)
        ),
        sh::DATATYPE_COMPONENT => format!(
            "{a_value} has the wrong datatype: the shape requires literals of datatype {}.",
            param(v, sh::DATATYPE)
        ),
        sh::CLASS_COMPONENT => format!(
            "{a_value} has the wrong type: the shape requires instances of {}.",
            param(v, sh::CLASS)
        ),
        sh::NODE_KIND_COMPONENT => format!(
            "{a_value} is the wrong kind of node: the shape requires node kind {}.",
            param(v, sh::NODE_KIND)
        ),
        sh::MIN_INCLUSIVE_COMPONENT => format!(
            "{a_value} is out of range: the shape requires values of at least {}.",
            param(v, sh::MIN_INCLUSIVE)
        ),
        sh::MAX_INCLUSIVE_COMPONENT => format!(
            "{a_value} is out of range: the shape requires values of at most {}.",
            param(v, sh::MAX_INCLUSIVE)
        ),
        sh::MIN_EXCLUSIVE_COMPONENT => format!(
            "{a_value} is out of range: the shape requires values greater than {}.",
            param(v, sh::MIN_EXCLUSIVE)
        ),
        sh::MAX_EXCLUSIVE_COMPONENT => format!(
            "{a_value} is out of range: the shape requires values less than {}.",
            param(v, sh::MAX_EXCLUSIVE)
        ),
        sh::MIN_LENGTH_COMPONENT => format!(
            "{a_value} is too short: the shape requires at least {} characters.",
            param(v, sh::MIN_LENGTH)
        ),
        sh::MAX_LENGTH_COMPONENT => format!(
            "{a_value} is too long: the shape requires at most {} characters.",
            param(v, sh::MAX_LENGTH)
        ),
        sh::PATTERN_COMPONENT => format!(
            "{a_value} has the wrong format: the shape requires it to match the pattern {}.",
            param(v, sh::PATTERN)
        ),
        sh::HAS_VALUE_COMPONENT => format!(
            "A required value is missing from {subject}: the shape requires the value {}.",
            param(v, sh::HAS_VALUE)
        ),
        sh::IN_COMPONENT => format!(
            "{a_value} is not an allowed value: the shape requires one of {}.",
            param(v, sh::IN)
        ),
        other => format!(
            "The data violates the {} constraint on {subject}.",
            local_name(other)
        ),
    }
}

/// Two fixed suggestions per violation type.
pub fn template_suggestions(ty: ViolationType) -> Vec<String> {
    let pair: [&str; 2] = match ty {
        ViolationType::Cardinality => [
            "Add or remove values of the property so that each node has the number of values the shape allows.",
            "Check whether the cardinality declared in the shape matches the intended data model.",
        ],
        ViolationType::ValueType => [
            "Replace the offending values with values of the required datatype, class or node kind.",
            "Check how the data is produced so that values are typed correctly at the source.",
        ],
        ViolationType::ValueRange => [
            "Correct the offending values so that they fall inside the allowed range.",
            "Check whether the values are recorded in the unit and scale the shape expects.",
        ],
        ViolationType::StringBased => [
            "Edit the offending strings so that they meet the required length or format.",
            "Normalize strings when the data is produced, for example by trimming or reformatting them.",
        ],
        ViolationType::ValueConstraint => [
            "Use only the values the shape allows, adding the required value where it is missing.",
            "Check whether the list of allowed values in the shape is complete.",
        ],
        ViolationType::Other => [
            "Review the constraint in the shape and change the data so that it is satisfied.",
            "Check whether the shape expresses the intended rule.",
        ],
    };
    pair.iter().map(|s| s.to_string()).collect()
}
