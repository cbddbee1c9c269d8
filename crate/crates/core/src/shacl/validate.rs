//! Evaluation of a shape model against a data graph.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::model::{
    Constraint, ConstraintDescriptor, ParamValue, PropertyPath, Shape, ShapeKind, ShapeModel,
    Target,
};
use super::xsd::{is_valid_lexical, Numeric};
use crate::rdf::vocab::{local_name, rdf, rdfs, sh};
use crate::rdf::{Graph, Term};

/// Coarse category of a violation, derived from its constraint component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationType {
    Cardinality,
    ValueType,
    ValueRange,
    StringBased,
    ValueConstraint,
    Other,
}

impl ViolationType {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationType::Cardinality => "CARDINALITY",
            ViolationType::ValueType => "VALUE_TYPE",
            ViolationType::ValueRange => "VALUE_RANGE",
            ViolationType::StringBased => "STRING_BASED",
            ViolationType::ValueConstraint => "VALUE_CONSTRAINT",
            ViolationType::Other => "OTHER",
        }
    }

    pub fn parse(s: &str) -> Option<ViolationType> {
        Some(match s {
            "CARDINALITY" => ViolationType::Cardinality,
            "VALUE_TYPE" => ViolationType::ValueType,
            "VALUE_RANGE" => ViolationType::ValueRange,
            "STRING_BASED" => ViolationType::StringBased,
            "VALUE_CONSTRAINT" => ViolationType::ValueConstraint,
            "OTHER" => ViolationType::Other,
            _ => return None,
        })
    }
}

impl std::fmt::Display for ViolationType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn classify_violation_type(component: &str) -> ViolationType {
    match component {
        sh::MIN_COUNT_COMPONENT | sh::MAX_COUNT_COMPONENT => ViolationType::Cardinality,
        sh::DATATYPE_COMPONENT | sh::CLASS_COMPONENT | sh::NODE_KIND_COMPONENT => {
            ViolationType::ValueType
        }
        sh::MIN_INCLUSIVE_COMPONENT
        | sh::MAX_INCLUSIVE_COMPONENT
        | sh::MIN_EXCLUSIVE_COMPONENT
        | sh::MAX_EXCLUSIVE_COMPONENT => ViolationType::ValueRange,
        sh::MIN_LENGTH_COMPONENT | sh::MAX_LENGTH_COMPONENT | sh::PATTERN_COMPONENT => {
            ViolationType::StringBased
        }
        sh::HAS_VALUE_COMPONENT | sh::IN_COMPONENT => ViolationType::ValueConstraint,
        _ => ViolationType::Other,
    }
}

/// A single validation result with everything needed to explain it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintViolation {
    pub focus_node: Term,
    pub source_shape: Term,
    pub constraint_component: String,
    #[serde(default)]
    pub result_path: Option<PropertyPath>,
    #[serde(default)]
    pub value: Option<Term>,
    pub severity: String,
    pub message: String,
    pub violation_type: ViolationType,
    pub constraint_parameters: BTreeMap<String, ParamValue>,
    pub focus_node_types: Vec<String>,
    /// Number of value nodes the focus node has along the path (1 for node shapes).
    pub value_count: usize,
}

impl ConstraintViolation {
    fn sort_key(&self) -> (&Term, &Term, &str, Option<&Term>) {
        (
            &self.focus_node,
            &self.source_shape,
            &self.constraint_component,
            self.value.as_ref(),
        )
    }

    /// Local name of the constraint component, e.g. `MinCountConstraintComponent`.
    pub fn component_name(&self) -> &str {
        local_name(&self.constraint_component)
    }
}

/// A failed check before it is dressed up as a [`ConstraintViolation`].
struct Failure {
    value: Option<Term>,
    note: Option<&'static str>,
}

/// Validates `data` against every active shape in `model`.
pub fn validate(data: &Graph, model: &ShapeModel) -> Vec<ConstraintViolation> {
    Validator::new(data, model).run()
}

/// Validation over one data graph and shape model.
pub struct Validator<'a> {
    data: &'a Graph,
    model: &'a ShapeModel,
}

impl<'a> Validator<'a> {
    pub fn new(data: &'a Graph, model: &'a ShapeModel) -> Self {
        Validator { data, model }
    }

    pub fn run(&self) -> Vec<ConstraintViolation> {
        let mut out = Vec::new();
        for shape in &self.model.shapes {
            if shape.deactivated || shape.targets.is_empty() {
                continue;
            }
            for focus in self.focus_nodes(shape) {
                self.validate_shape(shape, &focus, &mut out);
                for pid in &shape.property_shapes {
                    if let Some(ps) = self.model.shape(pid).filter(|s| !s.deactivated) {
                        self.validate_shape(ps, &focus, &mut out);
                    }
                }
            }
        }
        out.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        out.dedup();
        out
    }

    /// Focus nodes selected by the shape's targets, in term order.
    pub fn focus_nodes(&self, shape: &Shape) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        for target in &shape.targets {
            match target {
                Target::Node(n) => {
                    out.insert(n.clone());
                }
                Target::Class(c) => out.extend(self.instances_of(c)),
                Target::SubjectsOf(p) => out.extend(
                    self.data
                        .matching(None, Some(p), None)
                        .into_iter()
                        .map(|t| t.subject),
                ),
                Target::ObjectsOf(p) => out.extend(
                    self.data
                        .matching(None, Some(p), None)
                        .into_iter()
                        .map(|t| t.object),
                ),
            }
        }
        out
    }

    /// Classes equal to or transitively below `class` via `rdfs:subClassOf`.
    fn subclasses(&self, class: &Term) -> BTreeSet<Term> {
        let sub = Term::iri(rdfs::SUB_CLASS_OF);
        let mut seen = BTreeSet::from([class.clone()]);
        let mut stack = vec![class.clone()];
        while let Some(c) = stack.pop() {
            for s in self.data.subjects(&sub, &c) {
                if seen.insert(s.clone()) {
                    stack.push(s);
                }
            }
        }
        seen
    }

    fn instances_of(&self, class: &Term) -> BTreeSet<Term> {
        let ty = Term::iri(rdf::TYPE);
        self.subclasses(class)
            .iter()
            .flat_map(|c| self.data.subjects(&ty, c))
            .collect()
    }

    fn is_instance_of(&self, node: &Term, class: &Term) -> bool {
        let ty = Term::iri(rdf::TYPE);
        let classes = self.subclasses(class);
        self.data
            .objects(node, &ty)
            .iter()
            .any(|t| classes.contains(t))
    }

    /// Value nodes reached from `focus` along `path`.
    pub fn value_nodes(&self, focus: &Term, path: &PropertyPath) -> Vec<Term> {
        let p = Term::iri(path.predicate());
        match path {
            PropertyPath::Predicate(_) => self.data.objects(focus, &p),
            PropertyPath::Inverse(_) => self.data.subjects(&p, focus),
        }
    }

    fn values_for(&self, shape: &Shape, focus: &Term) -> Vec<Term> {
        match (&shape.kind, &shape.path) {
            (ShapeKind::Property, Some(path)) => self.value_nodes(focus, path),
            _ => vec![focus.clone()],
        }
    }

    fn validate_shape(&self, shape: &Shape, focus: &Term, out: &mut Vec<ConstraintViolation>) {
        let values = self.values_for(shape, focus);
        for descriptor in &shape.constraints {
            for failure in self.evaluate(&descriptor.constraint, &values) {
                out.push(self.violation(shape, descriptor, focus, &values, failure));
            }
        }
    }

    /// Re-evaluates every constraint of `shape` with the given component on
    /// `focus`, returning the resulting violations.
    pub fn check(&self, shape: &Shape, component: &str, focus: &Term) -> Vec<ConstraintViolation> {
        let values = self.values_for(shape, focus);
        let mut out = Vec::new();
        for descriptor in shape
            .constraints
            .iter()
            .filter(|c| c.component() == component)
        {
            for failure in self.evaluate(&descriptor.constraint, &values) {
                out.push(self.violation(shape, descriptor, focus, &values, failure));
            }
        }
        out
    }

    fn violation(
        &self,
        shape: &Shape,
        descriptor: &ConstraintDescriptor,
        focus: &Term,
        values: &[Term],
        failure: Failure,
    ) -> ConstraintViolation {
        let component = descriptor.component();
        let message = match &shape.message {
            Some(m) => m.clone(),
            None => {
                let target = shape
                    .path
                    .as_ref()
                    .map(PropertyPath::canonical)
                    .unwrap_or_else(|| "focus node".to_string());
                let base = format!("Constraint {} violated on {target}", local_name(component));
                match failure.note {
                    Some(note) => format!("{base}: {note}"),
                    None => base,
                }
            }
        };
        let focus_node_types = self
            .data
            .objects(focus, &Term::iri(rdf::TYPE))
            .into_iter()
            .filter_map(|t| t.as_iri().map(str::to_string))
            .collect();
        ConstraintViolation {
            focus_node: focus.clone(),
            source_shape: shape.id.clone(),
            constraint_component: component.to_string(),
            result_path: shape.path.clone(),
            value: failure.value,
            severity: shape.severity.clone(),
            message,
            violation_type: classify_violation_type(component),
            constraint_parameters: descriptor.parameters.clone(),
            focus_node_types,
            value_count: values.len(),
        }
    }

    fn evaluate(&self, constraint: &Constraint, values: &[Term]) -> Vec<Failure> {
        let each = |pred: &dyn Fn(&Term) -> bool| -> Vec<Failure> {
            values
                .iter()
                .filter(|v| !pred(v))
                .map(|v| Failure {
                    value: Some(v.clone()),
                    note: None,
                })
                .collect()
        };
        let whole = |ok: bool| -> Vec<Failure> {
            if ok {
                Vec::new()
            } else {
                vec![Failure {
                    value: None,
                    note: None,
                }]
            }
        };
        match constraint {
            Constraint::MinCount(k) => whole(values.len() as u64 >= *k),
            Constraint::MaxCount(k) => whole(values.len() as u64 <= *k),
            Constraint::HasValue(v) => whole(values.contains(v)),
            Constraint::Datatype(dt) => each(&|v| {
                v.as_literal()
                    .is_some_and(|l| l.datatype() == dt && is_valid_lexical(l))
            }),
            Constraint::Class(c) => each(&|v| !v.is_literal() && self.is_instance_of(v, c)),
            Constraint::NodeKind(kind) => each(&|v| kind.matches(v)),
            Constraint::MinLength(n) => each(&|v| string_length(v).is_some_and(|len| len >= *n)),
            Constraint::MaxLength(n) => each(&|v| string_length(v).is_some_and(|len| len <= *n)),
            Constraint::Pattern(re) => each(&|v| match v {
                Term::BlankNode { .. } => false,
                Term::Iri { value } => re.is_match(value),
                Term::Literal(l) => re.is_match(l.lexical()),
            }),
            Constraint::In(items) => each(&|v| items.contains(v)),
            Constraint::MinInclusive(bound) => self.range(values, bound, |o| o.is_ge()),
            Constraint::MaxInclusive(bound) => self.range(values, bound, |o| o.is_le()),
            Constraint::MinExclusive(bound) => self.range(values, bound, |o| o.is_gt()),
            Constraint::MaxExclusive(bound) => self.range(values, bound, |o| o.is_lt()),
        }
    }

    /// `accept` is applied to `value.cmp(bound)`.
    fn range(&self, values: &[Term], bound: &Term, accept: fn(Ordering) -> bool) -> Vec<Failure> {
        let bound = bound.as_literal().and_then(Numeric::from_literal);
        values
            .iter()
            .filter_map(|v| {
                let ord = v
                    .as_literal()
                    .and_then(Numeric::from_literal)
                    .zip(bound)
                    .and_then(|(a, b)| a.partial_cmp(&b));
                match ord {
                    Some(o) if accept(o) => None,
                    Some(_) => Some(Failure {
                        value: Some(v.clone()),
                        note: None,
                    }),
                    None => Some(Failure {
                        value: Some(v.clone()),
                        note: Some("non-comparable value"),
                    }),
                }
            })
            .collect()
    }
}

fn string_length(term: &Term) -> Option<u64> {
    match term {
        Term::BlankNode { .. } => None,
        Term::Iri { value } => Some(value.chars().count() as u64),
        Term::Literal(l) => Some(l.lexical().chars().count() as u64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::parse_turtle;
    use crate::rdf::vocab::xsd;
    use crate::shacl::parse_shapes;

    const PREFIXES: &str = "@prefix ex: <http://ex.org/> .\n";

    fn run(data: &str, shapes: &str) -> Vec<ConstraintViolation> {
        let data = parse_turtle(&format!("{PREFIXES}{data}"), None).unwrap();
        let shapes = parse_turtle(&format!("{PREFIXES}{shapes}"), None).unwrap();
        validate(&data, &parse_shapes(&shapes).unwrap())
    }

    fn ex(local: &str) -> Term {
        Term::iri(format!("http://ex.org/{local}"))
    }

    const NAME_SHAPE: &str = "ex:PersonShape a sh:NodeShape ; sh:targetClass ex:Person ;
        sh:property ex:NameShape .
        ex:NameShape sh:path ex:hasName ; sh:minCount 1 .";

    #[test]
    fn missing_name_is_a_cardinality_violation() {
        let v = run("ex:alice a ex:Person .", NAME_SHAPE);
        assert_eq!(v.len(), 1);
        let v = &v[0];
        assert_eq!(v.focus_node, ex("alice"));
        assert_eq!(v.source_shape, ex("NameShape"));
        assert_eq!(v.constraint_component, sh::MIN_COUNT_COMPONENT);
        assert_eq!(
            v.result_path,
            Some(PropertyPath::Predicate("http://ex.org/hasName".into()))
        );
        assert_eq!(v.violation_type, ViolationType::Cardinality);
        assert_eq!(v.value, None);
        assert_eq!(v.value_count, 0);
        assert_eq!(v.focus_node_types, vec!["http://ex.org/Person".to_string()]);
        assert_eq!(
            v.message,
            "Constraint MinCountConstraintComponent violated on http://ex.org/hasName"
        );
        assert_eq!(v.severity, sh::VIOLATION);
    }

    #[test]
    fn conforming_data() {
        assert!(run("ex:alice a ex:Person ; ex:hasName \"Alice\" .", NAME_SHAPE).is_empty());
    }

    #[test]
    fn negative_age_below_min_inclusive() {
        let v = run(
            "ex:alice ex:hasAge \"-3\"^^xsd:integer .",
            "ex:AgeShape a sh:PropertyShape ; sh:targetSubjectsOf ex:hasAge ;
               sh:path ex:hasAge ; sh:minInclusive 0 .",
        );
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].violation_type, ViolationType::ValueRange);
        assert_eq!(v[0].value, Some(Term::typed("-3", xsd::INTEGER)));
        assert!(v[0].result_path.is_some());
    }

    #[test]
    fn non_numeric_value_under_range() {
        let v = run(
            "ex:alice ex:hasAge \"old\" .",
            "ex:AgeShape a sh:PropertyShape ; sh:targetSubjectsOf ex:hasAge ;
               sh:path ex:hasAge ; sh:maxInclusive 150 .",
        );
        assert_eq!(v.len(), 1);
        assert!(
            v[0].message.ends_with("non-comparable value"),
            "{}",
            v[0].message
        );
    }

    #[test]
    fn node_shape_constraint_has_no_path() {
        let v = run(
            "ex:a ex:p \"x\" .",
            "ex:S a sh:NodeShape ; sh:targetSubjectsOf ex:p ; sh:nodeKind sh:BlankNode .",
        );
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].result_path, None);
        assert_eq!(v[0].value, Some(ex("a")));
        assert_eq!(
            v[0].message,
            "Constraint NodeKindConstraintComponent violated on focus node"
        );
    }

    #[test]
    fn inverse_path_walks_subjectward() {
        let shapes = "ex:S a sh:NodeShape ; sh:targetClass ex:Org ;
            sh:property [ sh:path [ sh:inversePath ex:memberOf ] ; sh:minCount 1 ] .";
        let v = run(
            "ex:acme a ex:Org . ex:bob ex:memberOf ex:acme . ex:empty a ex:Org .",
            shapes,
        );
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].focus_node, ex("empty"));
    }

    #[test]
    fn class_target_includes_subclass_instances() {
        let v = run(
            "ex:Student rdfs:subClassOf ex:Person . ex:sam a ex:Student .",
            NAME_SHAPE,
        );
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].focus_node, ex("sam"));
    }

    #[test]
    fn custom_message_and_severity() {
        let v = run(
            "ex:a a ex:Person .",
            "ex:S a sh:NodeShape ; sh:targetClass ex:Person ; sh:property [
               sh:path ex:hasName ; sh:minCount 1 ; sh:message \"Name required\" ; sh:severity sh:Warning ] .",
        );
        assert_eq!(v[0].message, "Name required");
        assert_eq!(v[0].severity, format!("{}Warning", crate::rdf::vocab::SH));
    }

    #[test]
    fn deterministic_ordering() {
        let data = "ex:b a ex:Person . ex:a a ex:Person . ex:c a ex:Person ; ex:hasName 1, 2 .";
        let shapes = "ex:S a sh:NodeShape ; sh:targetClass ex:Person ; sh:property [
            sh:path ex:hasName ; sh:minCount 1 ; sh:datatype xsd:string ] .";
        let v1 = run(data, shapes);
        let v2 = run(data, shapes);
        assert_eq!(v1, v2);
        let foci: Vec<_> = v1.iter().map(|v| v.focus_node.clone()).collect();
        assert_eq!(foci, vec![ex("a"), ex("b"), ex("c"), ex("c")]);
    }

    #[test]
    fn deactivated_shapes_are_skipped() {
        let v = run(
            "ex:alice a ex:Person .",
            "ex:S a sh:NodeShape ; sh:targetClass ex:Person ; sh:deactivated true ;
               sh:property [ sh:path ex:hasName ; sh:minCount 1 ] .",
        );
        assert!(v.is_empty());
    }

    #[test]
    fn classification() {
        use ViolationType::*;
        for (c, t) in [
            (sh::MIN_COUNT_COMPONENT, Cardinality),
            (sh::MAX_COUNT_COMPONENT, Cardinality),
            (sh::DATATYPE_COMPONENT, ValueType),
            (sh::CLASS_COMPONENT, ValueType),
            (sh::NODE_KIND_COMPONENT, ValueType),
            (sh::MIN_INCLUSIVE_COMPONENT, ValueRange),
            (sh::MAX_EXCLUSIVE_COMPONENT, ValueRange),
            (sh::MIN_LENGTH_COMPONENT, StringBased),
            (sh::PATTERN_COMPONENT, StringBased),
            (sh::HAS_VALUE_COMPONENT, ValueConstraint),
            (sh::IN_COMPONENT, ValueConstraint),
            ("http://ex.org/Unknown", Other),
        ] {
            assert_eq!(classify_violation_type(c), t, "{c}");
        }
        assert_eq!(ViolationType::parse("VALUE_TYPE"), Some(ValueType));
        assert_eq!(
            serde_json::to_string(&ValueRange).unwrap(),
            "\"VALUE_RANGE\""
        );
    }
}
