//! Shape model and its construction from a shapes graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rdf::vocab::{local_name, rdf, rdfs, sh, xsd};
use crate::rdf::{Graph, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeParseError {
    #[error("property shape {shape} has no sh:path")]
    MissingPath { shape: String },
    #[error("shape {shape} has more than one sh:path")]
    MultiplePaths { shape: String },
    #[error("shape {shape} uses an unsupported path expression ({kind})")]
    UnsupportedPath { shape: String, kind: String },
    #[error("shape {shape}: invalid value for {parameter}: {reason}")]
    InvalidParameter {
        shape: String,
        parameter: String,
        reason: String,
    },
}

/// A predicate path or the inverse of one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum PropertyPath {
    Predicate(String),
    Inverse(String),
}

impl PropertyPath {
    /// The IRI or `^` followed by the IRI for inverse paths.
    pub fn canonical(&self) -> String {
        match self {
            PropertyPath::Predicate(iri) => iri.clone(),
            PropertyPath::Inverse(iri) => format!("^{iri}"),
        }
    }

    /// The predicate IRI the path walks, regardless of direction.
    pub fn predicate(&self) -> &str {
        match self {
            PropertyPath::Predicate(iri) | PropertyPath::Inverse(iri) => iri,
        }
    }

    pub fn is_inverse(&self) -> bool {
        matches!(self, PropertyPath::Inverse(_))
    }
}

impl fmt::Display for PropertyPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl From<PropertyPath> for String {
    fn from(p: PropertyPath) -> String {
        p.canonical()
    }
}

impl TryFrom<String> for PropertyPath {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        let (inverse, iri) = match s.strip_prefix('^') {
            Some(rest) => (true, rest),
            None => (false, s.as_str()),
        };
        if iri.is_empty() || iri.chars().any(char::is_whitespace) {
            return Err(format!("invalid property path {s:?}"));
        }
        Ok(if inverse {
            PropertyPath::Inverse(iri.to_string())
        } else {
            PropertyPath::Predicate(iri.to_string())
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeKind {
    Node,
    Property,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    Class(Term),
    Node(Term),
    SubjectsOf(Term),
    ObjectsOf(Term),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Iri,
    BlankNode,
    Literal,
    BlankNodeOrIri,
    BlankNodeOrLiteral,
    IriOrLiteral,
}

impl NodeKind {
    fn from_iri(iri: &str) -> Option<NodeKind> {
        Some(match iri {
            sh::IRI => NodeKind::Iri,
            sh::BLANK_NODE => NodeKind::BlankNode,
            sh::LITERAL => NodeKind::Literal,
            sh::BLANK_NODE_OR_IRI => NodeKind::BlankNodeOrIri,
            sh::BLANK_NODE_OR_LITERAL => NodeKind::BlankNodeOrLiteral,
            sh::IRI_OR_LITERAL => NodeKind::IriOrLiteral,
            _ => return None,
        })
    }

    pub fn matches(self, term: &Term) -> bool {
        match self {
            NodeKind::Iri => term.is_iri(),
            NodeKind::BlankNode => term.is_blank(),
            NodeKind::Literal => term.is_literal(),
            NodeKind::BlankNodeOrIri => !term.is_literal(),
            NodeKind::BlankNodeOrLiteral => !term.is_iri(),
            NodeKind::IriOrLiteral => !term.is_blank(),
        }
    }
}

/// A constraint parameter value: a single term or an RDF list of terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Term(Term),
    List(Vec<Term>),
}

impl ParamValue {
    pub fn as_term(&self) -> Option<&Term> {
        match self {
            ParamValue::Term(t) => Some(t),
            ParamValue::List(_) => None,
        }
    }
}

/// A typed, ready-to-evaluate constraint.
#[derive(Debug, Clone)]
pub enum Constraint {
    MinCount(u64),
    MaxCount(u64),
    Datatype(String),
    Class(Term),
    NodeKind(NodeKind),
    MinLength(u64),
    MaxLength(u64),
    Pattern(Regex),
    MinInclusive(Term),
    MaxInclusive(Term),
    MinExclusive(Term),
    MaxExclusive(Term),
    HasValue(Term),
    In(Vec<Term>),
}

impl Constraint {
    /// IRI of the SHACL constraint component this constraint belongs to.
    pub fn component(&self) -> &'static str {
        match self {
            Constraint::MinCount(_) => sh::MIN_COUNT_COMPONENT,
            Constraint::MaxCount(_) => sh::MAX_COUNT_COMPONENT,
            Constraint::Datatype(_) => sh::DATATYPE_COMPONENT,
            Constraint::Class(_) => sh::CLASS_COMPONENT,
            Constraint::NodeKind(_) => sh::NODE_KIND_COMPONENT,
            Constraint::MinLength(_) => sh::MIN_LENGTH_COMPONENT,
            Constraint::MaxLength(_) => sh::MAX_LENGTH_COMPONENT,
            Constraint::Pattern(_) => sh::PATTERN_COMPONENT,
            Constraint::MinInclusive(_) => sh::MIN_INCLUSIVE_COMPONENT,
            Constraint::MaxInclusive(_) => sh::MAX_INCLUSIVE_COMPONENT,
            Constraint::MinExclusive(_) => sh::MIN_EXCLUSIVE_COMPONENT,
            Constraint::MaxExclusive(_) => sh::MAX_EXCLUSIVE_COMPONENT,
            Constraint::HasValue(_) => sh::HAS_VALUE_COMPONENT,
            Constraint::In(_) => sh::IN_COMPONENT,
        }
    }
}

/// One constraint of a shape: the component it instantiates and the
/// parameter values as written in the shapes graph.
#[derive(Debug, Clone)]
pub struct ConstraintDescriptor {
    pub constraint: Constraint,
    pub parameters: BTreeMap<String, ParamValue>,
}

impl ConstraintDescriptor {
    pub fn component(&self) -> &'static str {
        self.constraint.component()
    }
}

#[derive(Debug, Clone)]
pub struct Shape {
    pub id: Term,
    pub kind: ShapeKind,
    pub targets: Vec<Target>,
    pub constraints: Vec<ConstraintDescriptor>,
    /// Ids of the property shapes attached with `sh:property`.
    pub property_shapes: Vec<Term>,
    pub path: Option<PropertyPath>,
    pub name: Option<String>,
    pub description: Option<String>,
    pub comment: Option<String>,
    pub message: Option<String>,
    pub severity: String,
    pub deactivated: bool,
}

/// All shapes found in a shapes graph, plus warnings for constructs that
/// were recognised but are not evaluated.
#[derive(Debug, Clone, Default)]
pub struct ShapeModel {
    pub shapes: Vec<Shape>,
    pub warnings: Vec<String>,
    index: BTreeMap<Term, usize>,
}

impl ShapeModel {
    pub fn shape(&self, id: &Term) -> Option<&Shape> {
        self.index.get(id).map(|&i| &self.shapes[i])
    }

    /// Node shapes that attach `property_shape` via `sh:property`.
    pub fn parents_of(&self, property_shape: &Term) -> impl Iterator<Item = &Shape> {
        let id = property_shape.clone();
        self.shapes
            .iter()
            .filter(move |s| s.property_shapes.contains(&id))
    }

    pub fn node_shapes(&self) -> impl Iterator<Item = &Shape> {
        self.shapes.iter().filter(|s| s.kind == ShapeKind::Node)
    }

    pub fn property_shapes(&self) -> impl Iterator<Item = &Shape> {
        self.shapes.iter().filter(|s| s.kind == ShapeKind::Property)
    }
}

/// Constraint parameters that are recognised but not evaluated.
const UNSUPPORTED: [&str; 16] = [
    "sparql",
    "and",
    "or",
    "not",
    "xone",
    "node",
    "qualifiedValueShape",
    "closed",
    "equals",
    "disjoint",
    "lessThan",
    "lessThanOrEquals",
    "languageIn",
    "uniqueLang",
    "targetShape",
    "target",
];

fn iri(s: &str) -> Term {
    Term::iri(s)
}

/// Builds the shape model from a shapes graph.
pub fn parse_shapes(graph: &Graph) -> Result<ShapeModel, ShapeParseError> {
    let ty = iri(rdf::TYPE);
    let mut ids: BTreeSet<Term> = BTreeSet::new();
    let mut property_ids: BTreeSet<Term> = BTreeSet::new();

    for class in [sh::NODE_SHAPE, sh::PROPERTY_SHAPE] {
        ids.extend(graph.subjects(&ty, &iri(class)));
    }
    for t in graph.matching(None, Some(&iri(sh::PROPERTY)), None) {
        property_ids.insert(t.object.clone());
        ids.insert(t.object);
    }
    property_ids.extend(graph.subjects(&ty, &iri(sh::PROPERTY_SHAPE)));
    for target in [
        sh::TARGET_CLASS,
        sh::TARGET_NODE,
        sh::TARGET_SUBJECTS_OF,
        sh::TARGET_OBJECTS_OF,
    ] {
        ids.extend(
            graph
                .matching(None, Some(&iri(target)), None)
                .into_iter()
                .map(|t| t.subject),
        );
    }

    let mut model = ShapeModel::default();
    for id in ids {
        let is_property = property_ids.contains(&id) || graph.object(&id, &iri(sh::PATH)).is_some();
        let shape = parse_shape(graph, &id, is_property, &mut model.warnings)?;
        model.index.insert(id, model.shapes.len());
        model.shapes.push(shape);
    }
    Ok(model)
}

fn shape_label(id: &Term) -> String {
    id.to_string()
}

fn first_string(graph: &Graph, id: &Term, predicate: &str) -> Option<String> {
    let values = graph.objects(id, &iri(predicate));
    // prefer untagged or English text for display fields
    values
        .iter()
        .filter_map(Term::as_literal)
        .min_by_key(|l| match l.language() {
            None => 0,
            Some(l) if l.eq_ignore_ascii_case("en") => 1,
            Some(_) => 2,
        })
        .map(|l| l.lexical().to_string())
}

fn parse_shape(
    graph: &Graph,
    id: &Term,
    is_property: bool,
    warnings: &mut Vec<String>,
) -> Result<Shape, ShapeParseError> {
    let label = shape_label(id);
    let path = if is_property {
        let paths = graph.objects(id, &iri(sh::PATH));
        match paths.as_slice() {
            [] => return Err(ShapeParseError::MissingPath { shape: label }),
            [p] => Some(parse_path(graph, &label, p)?),
            _ => return Err(ShapeParseError::MultiplePaths { shape: label }),
        }
    } else {
        None
    };

    let mut targets = Vec::new();
    for (pred, make) in [
        (sh::TARGET_CLASS, Target::Class as fn(Term) -> Target),
        (sh::TARGET_NODE, Target::Node),
        (sh::TARGET_SUBJECTS_OF, Target::SubjectsOf),
        (sh::TARGET_OBJECTS_OF, Target::ObjectsOf),
    ] {
        targets.extend(graph.objects(id, &iri(pred)).into_iter().map(make));
    }
    // implicit class target
    let types = graph.objects(id, &iri(rdf::TYPE));
    if types.contains(&iri(rdfs::CLASS)) && !is_property {
        targets.push(Target::Class(id.clone()));
    }

    let mut constraints = Vec::new();
    for t in graph.matching(Some(id), None, None) {
        let Some(p) = t.predicate.as_iri() else {
            continue;
        };
        let Some(local) = p.strip_prefix(crate::rdf::vocab::SH) else {
            continue;
        };
        if UNSUPPORTED.contains(&local) {
            warnings.push(format!(
                "shape {label}: unsupported constraint sh:{local} ignored"
            ));
            continue;
        }
        if let Some(c) = parse_constraint(graph, id, &label, local, &t.object)? {
            constraints.push(c);
        }
    }
    if !is_property
        && constraints.iter().any(|c| {
            matches!(
                c.constraint,
                Constraint::MinCount(_) | Constraint::MaxCount(_)
            )
        })
    {
        return Err(ShapeParseError::InvalidParameter {
            shape: label,
            parameter: "sh:minCount/sh:maxCount".into(),
            reason: "cardinality constraints require a property shape".into(),
        });
    }

    let severity = match graph.objects(id, &iri(sh::SEVERITY)).as_slice() {
        [] => sh::VIOLATION.to_string(),
        [Term::Iri { value }] => value.clone(),
        _ => {
            return Err(ShapeParseError::InvalidParameter {
                shape: label,
                parameter: "sh:severity".into(),
                reason: "expected a single IRI".into(),
            })
        }
    };

    let deactivated = graph
        .objects(id, &iri(sh::DEACTIVATED))
        .iter()
        .any(|t| t.as_literal().is_some_and(|l| l.lexical() == "true"));

    Ok(Shape {
        id: id.clone(),
        kind: if is_property {
            ShapeKind::Property
        } else {
            ShapeKind::Node
        },
        targets,
        constraints,
        property_shapes: graph.objects(id, &iri(sh::PROPERTY)),
        path,
        name: first_string(graph, id, sh::NAME),
        description: first_string(graph, id, sh::DESCRIPTION),
        comment: first_string(graph, id, rdfs::COMMENT),
        message: first_string(graph, id, sh::MESSAGE),
        severity,
        deactivated,
    })
}

fn parse_path(graph: &Graph, label: &str, path: &Term) -> Result<PropertyPath, ShapeParseError> {
    let unsupported = |kind: &str| ShapeParseError::UnsupportedPath {
        shape: label.to_string(),
        kind: kind.to_string(),
    };
    match path {
        Term::Iri { value } => Ok(PropertyPath::Predicate(value.clone())),
        Term::Literal(_) => Err(unsupported("literal")),
        Term::BlankNode { .. } => {
            let inverse = graph.objects(path, &iri(sh::INVERSE_PATH));
            match inverse.as_slice() {
                [Term::Iri { value }] => return Ok(PropertyPath::Inverse(value.clone())),
                [_] => return Err(unsupported("inverse of a complex path")),
                _ => {}
            }
            for (pred, kind) in [
                (sh::ALTERNATIVE_PATH, "alternative path"),
                (sh::ZERO_OR_MORE_PATH, "zero-or-more path"),
                (sh::ONE_OR_MORE_PATH, "one-or-more path"),
                (sh::ZERO_OR_ONE_PATH, "zero-or-one path"),
            ] {
                if graph.object(path, &iri(pred)).is_some() {
                    return Err(unsupported(kind));
                }
            }
            if graph.object(path, &iri(rdf::FIRST)).is_some() {
                return Err(unsupported("sequence path"));
            }
            Err(unsupported("unrecognised path node"))
        }
    }
}

fn non_negative_integer(
    label: &str,
    parameter: &str,
    value: &Term,
) -> Result<u64, ShapeParseError> {
    value
        .as_literal()
        .filter(|l| crate::shacl::xsd::is_valid_lexical(l) && l.datatype() != xsd::STRING)
        .and_then(|l| l.lexical().trim_start_matches('+').parse::<u64>().ok())
        .ok_or_else(|| ShapeParseError::InvalidParameter {
            shape: label.to_string(),
            parameter: parameter.to_string(),
            reason: format!("expected a non-negative integer, found {value}"),
        })
}

fn parse_constraint(
    graph: &Graph,
    id: &Term,
    label: &str,
    local: &str,
    value: &Term,
) -> Result<Option<ConstraintDescriptor>, ShapeParseError> {
    let invalid = |reason: &str| ShapeParseError::InvalidParameter {
        shape: label.to_string(),
        parameter: format!("sh:{local}"),
        reason: reason.to_string(),
    };
    let mut parameters = BTreeMap::new();
    let key = format!("{}{local}", crate::rdf::vocab::SH);
    parameters.insert(key, ParamValue::Term(value.clone()));
    let constraint = match local {
        "minCount" => Constraint::MinCount(non_negative_integer(label, "sh:minCount", value)?),
        "maxCount" => Constraint::MaxCount(non_negative_integer(label, "sh:maxCount", value)?),
        "minLength" => Constraint::MinLength(non_negative_integer(label, "sh:minLength", value)?),
        "maxLength" => Constraint::MaxLength(non_negative_integer(label, "sh:maxLength", value)?),
        "datatype" => Constraint::Datatype(
            value
                .as_iri()
                .ok_or_else(|| invalid("expected a datatype IRI"))?
                .to_string(),
        ),
        "class" => {
            if value.is_literal() {
                return Err(invalid("expected a class IRI"));
            }
            Constraint::Class(value.clone())
        }
        "nodeKind" => Constraint::NodeKind(
            value
                .as_iri()
                .and_then(NodeKind::from_iri)
                .ok_or_else(|| invalid("expected one of the sh:nodeKind values"))?,
        ),
        "pattern" => {
            let source = value
                .as_literal()
                .ok_or_else(|| invalid("expected a string literal"))?
                .lexical()
                .to_string();
            let flags = match graph.objects(id, &iri(sh::FLAGS)).as_slice() {
                [] => String::new(),
                [Term::Literal(l)] => {
                    parameters.insert(
                        sh::FLAGS.to_string(),
                        ParamValue::Term(Term::Literal(l.clone())),
                    );
                    l.lexical().to_string()
                }
                _ => return Err(invalid("sh:flags must be a single string")),
            };
            if let Some(bad) = flags.chars().find(|c| !matches!(c, 'i' | 'm' | 's')) {
                return Err(invalid(&format!("unsupported regex flag '{bad}'")));
            }
            let full = if flags.is_empty() {
                source
            } else {
                format!("(?{flags}){source}")
            };
            Constraint::Pattern(Regex::new(&full).map_err(|e| invalid(&e.to_string()))?)
        }
        "minInclusive" | "maxInclusive" | "minExclusive" | "maxExclusive" => {
            if !value.is_literal() {
                return Err(invalid("expected a literal bound"));
            }
            let v = value.clone();
            match local {
                "minInclusive" => Constraint::MinInclusive(v),
                "maxInclusive" => Constraint::MaxInclusive(v),
                "minExclusive" => Constraint::MinExclusive(v),
                _ => Constraint::MaxExclusive(v),
            }
        }
        "hasValue" => Constraint::HasValue(value.clone()),
        "in" => {
            let items = graph
                .list(value)
                .ok_or_else(|| invalid("expected a well-formed RDF list"))?;
            if items.is_empty() {
                return Err(invalid("the list must not be empty"));
            }
            parameters.insert(
                format!("{}in", crate::rdf::vocab::SH),
                ParamValue::List(items.clone()),
            );
            Constraint::In(items)
        }
        _ => return Ok(None),
    };
    Ok(Some(ConstraintDescriptor {
        constraint,
        parameters,
    }))
}

/// Short human-readable name of a component IRI, e.g. `minCount`.
pub fn component_parameter_name(component: &str) -> String {
    let local = local_name(component);
    let stem = local.strip_suffix("ConstraintComponent").unwrap_or(local);
    let mut chars = stem.chars();
    match chars.next() {
        Some(c) => c.to_ascii_lowercase().to_string() + chars.as_str(),
        None => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::parse_turtle;

    const PREFIXES: &str = "@prefix ex: <http://ex.org/> .\n";

    fn model(body: &str) -> Result<ShapeModel, ShapeParseError> {
        parse_shapes(&parse_turtle(&format!("{PREFIXES}{body}"), None).unwrap())
    }

    #[test]
    fn minimal_person_shape() {
        let m = model(
            "ex:PersonShape a sh:NodeShape ; sh:targetClass ex:Person ;
               sh:property [ sh:path ex:hasName ; sh:minCount 1 ] .",
        )
        .unwrap();
        assert_eq!(m.node_shapes().count(), 1);
        assert_eq!(m.property_shapes().count(), 1);
        let node = m.node_shapes().next().unwrap();
        assert_eq!(
            node.targets,
            vec![Target::Class(Term::iri("http://ex.org/Person"))]
        );
        let prop = m.shape(&node.property_shapes[0]).unwrap();
        assert_eq!(
            prop.path,
            Some(PropertyPath::Predicate("http://ex.org/hasName".into()))
        );
        assert!(matches!(
            prop.constraints[0].constraint,
            Constraint::MinCount(1)
        ));
        assert_eq!(prop.severity, sh::VIOLATION);
    }

    #[test]
    fn inverse_path() {
        let m = model(
            "ex:S a sh:PropertyShape ; sh:path [ sh:inversePath ex:memberOf ] ; sh:minCount 1 .",
        )
        .unwrap();
        let s = &m.shapes[0];
        assert_eq!(
            s.path,
            Some(PropertyPath::Inverse("http://ex.org/memberOf".into()))
        );
        assert_eq!(
            s.path.as_ref().unwrap().canonical(),
            "^http://ex.org/memberOf"
        );
    }

    #[test]
    fn missing_path_is_an_error() {
        let err =
            model("ex:N a sh:NodeShape ; sh:property ex:P . ex:P sh:minCount 1 .").unwrap_err();
        assert_eq!(
            err,
            ShapeParseError::MissingPath {
                shape: "<http://ex.org/P>".into()
            }
        );
    }

    #[test]
    fn complex_paths_are_rejected_by_name() {
        for (path, kind) in [
            ("( ex:a ex:b )", "sequence path"),
            ("[ sh:alternativePath ( ex:a ex:b ) ]", "alternative path"),
            ("[ sh:zeroOrMorePath ex:a ]", "zero-or-more path"),
        ] {
            let err = model(&format!("ex:P a sh:PropertyShape ; sh:path {path} .")).unwrap_err();
            assert_eq!(
                err,
                ShapeParseError::UnsupportedPath {
                    shape: "<http://ex.org/P>".into(),
                    kind: kind.into()
                }
            );
        }
    }

    #[test]
    fn malformed_parameters() {
        for body in [
            "sh:minCount -1",
            "sh:maxCount \"two\"",
            "sh:datatype \"xsd:string\"",
            "sh:nodeKind ex:Thing",
            "sh:in ()",
            "sh:pattern \"(\"",
            "sh:pattern \"a\" ; sh:flags \"q\"",
            "sh:minInclusive ex:zero",
        ] {
            let r = model(&format!(
                "ex:P a sh:PropertyShape ; sh:path ex:p ; {body} ."
            ));
            assert!(
                matches!(r, Err(ShapeParseError::InvalidParameter { .. })),
                "{body}: {r:?}"
            );
        }
    }

    #[test]
    fn unsupported_constraints_warn() {
        let m = model(
            "ex:N a sh:NodeShape ; sh:targetNode ex:x ;
               sh:sparql [ sh:select \"SELECT $this WHERE {}\" ] ;
               sh:or ( ex:A ex:B ) .",
        )
        .unwrap();
        assert_eq!(m.warnings.len(), 2);
        assert!(m.warnings.iter().any(|w| w.contains("sh:sparql")));
        assert!(m.shapes[0].constraints.is_empty());
    }

    #[test]
    fn all_components_parse() {
        let m = model(
            "ex:P a sh:PropertyShape ; sh:path ex:p ;
               sh:minCount 1 ; sh:maxCount 2 ; sh:datatype xsd:string ; sh:class ex:C ;
               sh:nodeKind sh:IRI ; sh:minLength 1 ; sh:maxLength 5 ; sh:pattern \"^a\" ; sh:flags \"i\" ;
               sh:minInclusive 0 ; sh:maxInclusive 9 ; sh:minExclusive -1 ; sh:maxExclusive 10 ;
               sh:hasValue \"a\" ; sh:in ( \"a\" \"b\" ) ;
               sh:name \"P\" ; sh:description \"d\" ; rdfs:comment \"c\" ;
               sh:severity sh:Warning ; sh:message \"m\" .",
        )
        .unwrap();
        let s = &m.shapes[0];
        let comps: BTreeSet<&str> = s.constraints.iter().map(|c| c.component()).collect();
        assert_eq!(comps.len(), 14);
        assert_eq!(s.name.as_deref(), Some("P"));
        assert_eq!(s.severity, format!("{}Warning", crate::rdf::vocab::SH));
        let pattern = s
            .constraints
            .iter()
            .find(|c| c.component() == sh::PATTERN_COMPONENT)
            .unwrap();
        assert!(pattern.parameters.contains_key(sh::FLAGS));
        let in_c = s
            .constraints
            .iter()
            .find(|c| c.component() == sh::IN_COMPONENT)
            .unwrap();
        assert_eq!(
            in_c.parameters[&format!("{}in", crate::rdf::vocab::SH)],
            ParamValue::List(vec![Term::string("a"), Term::string("b")])
        );
    }

    #[test]
    fn cardinality_on_node_shape_rejected() {
        assert!(model("ex:N a sh:NodeShape ; sh:minCount 1 .").is_err());
    }

    #[test]
    fn component_names() {
        assert_eq!(
            component_parameter_name(sh::MIN_COUNT_COMPONENT),
            "minCount"
        );
        assert_eq!(component_parameter_name(sh::IN_COMPONENT), "in");
    }

    #[test]
    fn path_serde() {
        let p = PropertyPath::Inverse("http://ex.org/p".into());
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, "\"^http://ex.org/p\"");
        assert_eq!(serde_json::from_str::<PropertyPath>(&json).unwrap(), p);
    }
}
