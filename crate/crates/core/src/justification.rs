//! Justification trees: why a violation holds, as premises from the shapes
//! graph, observations from the data graph and the inference joining them.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::rdf::vocab::{local_name, rdf, sh, xsd};
use crate::rdf::{Graph, Term, Triple};
use crate::shacl::xsd::{is_valid_lexical, Numeric};
use crate::shacl::{component_parameter_name, ConstraintViolation, ParamValue, PropertyPath};

/// Maximum number of evidence triples kept on a single node.
pub const EVIDENCE_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NodeKind {
    Conclusion,
    Premise,
    Observation,
    Inference,
}

impl NodeKind {
    pub fn tag(self) -> &'static str {
        match self {
            NodeKind::Conclusion => "CONCLUSION",
            NodeKind::Premise => "PREMISE",
            NodeKind::Observation => "OBSERVATION",
            NodeKind::Inference => "INFERENCE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JustificationNode {
    pub kind: NodeKind,
    pub statement: String,
    pub evidence: Vec<Triple>,
    pub children: Vec<JustificationNode>,
}

impl JustificationNode {
    fn leaf(kind: NodeKind, statement: String, evidence: Vec<Triple>) -> Self {
        let (evidence, statement) = cap_evidence(evidence, statement);
        JustificationNode {
            kind,
            statement,
            evidence,
            children: Vec::new(),
        }
    }

    /// Pre-order traversal including `self`.
    pub fn walk(&self) -> Vec<&JustificationNode> {
        let mut out = vec![self];
        for c in &self.children {
            out.extend(c.walk());
        }
        out
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(|c| c.depth()).max().unwrap_or(0)
    }
}

fn cap_evidence(mut evidence: Vec<Triple>, statement: String) -> (Vec<Triple>, String) {
    if evidence.len() <= EVIDENCE_CAP {
        return (evidence, statement);
    }
    let total = evidence.len();
    evidence.truncate(EVIDENCE_CAP);
    let statement =
        format!("{statement} (evidence truncated: showing {EVIDENCE_CAP} of {total} triples)");
    (evidence, statement)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JustificationTree {
    pub root: JustificationNode,
    pub violation: ConstraintViolation,
}

impl JustificationTree {
    pub fn nodes(&self) -> Vec<&JustificationNode> {
        self.root.walk()
    }

    /// All evidence triples of nodes of the given kind.
    pub fn evidence_of(&self, kind: NodeKind) -> Vec<&Triple> {
        self.nodes()
            .into_iter()
            .filter(|n| n.kind == kind)
            .flat_map(|n| &n.evidence)
            .collect()
    }
}

/// Short display of a term: bare lexical form for numbers and booleans,
/// N-Triples otherwise.
pub fn show(term: &Term) -> String {
    match term {
        Term::Literal(l) if Numeric::from_literal(l).is_some() || l.datatype() == xsd::BOOLEAN => {
            l.lexical().to_string()
        }
        other => other.to_string(),
    }
}

fn show_param(value: &ParamValue) -> String {
    match value {
        ParamValue::Term(t) => show(t),
        ParamValue::List(items) => {
            let items: Vec<String> = items.iter().map(show).collect();
            format!("({})", items.join(" "))
        }
    }
}

fn show_path(path: &PropertyPath) -> String {
    match path {
        PropertyPath::Predicate(p) => format!("<{p}>"),
        PropertyPath::Inverse(p) => format!("^<{p}>"),
    }
}

/// Builds the justification tree of `violation`.
pub fn build_tree(
    violation: &ConstraintViolation,
    data: &Graph,
    shapes: &Graph,
) -> JustificationTree {
    let v = violation;
    let component = local_name(&v.constraint_component);
    let root_statement = format!(
        "{} fails conformance to {} on {component}",
        v.focus_node, v.source_shape
    );
    let children = vec![premise(v, shapes), observation(v, data), inference(v)];
    JustificationTree {
        root: JustificationNode {
            kind: NodeKind::Conclusion,
            statement: root_statement,
            evidence: Vec::new(),
            children,
        },
        violation: v.clone(),
    }
}

fn premise(v: &ConstraintViolation, shapes: &Graph) -> JustificationNode {
    let requirement: Vec<String> = v
        .constraint_parameters
        .iter()
        .map(|(iri, value)| format!("{} {}", local_name(iri), show_param(value)))
        .collect();
    let requirement = if requirement.is_empty() {
        component_parameter_name(&v.constraint_component)
    } else {
        requirement.join(", ")
    };
    let statement = match &v.result_path {
        Some(path) => format!(
            "Shape {} requires property {} with {requirement}",
            v.source_shape,
            show_path(path)
        ),
        None => format!(
            "Shape {} requires the focus node to satisfy {requirement}",
            v.source_shape
        ),
    };

    let shape = &v.source_shape;
    let mut evidence = Vec::new();
    let sh_path = Term::iri(sh::PATH);
    for t in shapes.matching(Some(shape), Some(&sh_path), None) {
        if t.object.is_blank() {
            evidence.extend(shapes.matching(Some(&t.object), None, None));
        }
        evidence.insert(0, t);
    }
    for iri in v.constraint_parameters.keys() {
        for t in shapes.matching(Some(shape), Some(&Term::iri(iri.as_str())), None) {
            let list = shapes.list_triples(&t.object);
            evidence.push(t);
            evidence.extend(list);
        }
    }
    JustificationNode::leaf(NodeKind::Premise, statement, evidence)
}

/// Triples linking `focus` to its value nodes along `path`.
fn path_triples(data: &Graph, focus: &Term, path: &PropertyPath) -> Vec<Triple> {
    let p = Term::iri(path.predicate());
    match path {
        PropertyPath::Predicate(_) => data.matching(Some(focus), Some(&p), None),
        PropertyPath::Inverse(_) => data.matching(None, Some(&p), Some(focus)),
    }
}

fn describe_value(value: &Term) -> String {
    match value {
        Term::Iri { .. } => format!("IRI {value}"),
        Term::BlankNode { .. } => format!("blank node {value}"),
        Term::Literal(l) if l.language().is_none() && l.datatype() == xsd::STRING => {
            format!("literal {value} with datatype <{}>", xsd::STRING)
        }
        Term::Literal(_) => format!("literal {value}"),
    }
}

fn observation(v: &ConstraintViolation, data: &Graph) -> JustificationNode {
    let focus = &v.focus_node;
    let (statement, evidence) = match (&v.result_path, &v.value) {
        (Some(path), None) => {
            let evidence = path_triples(data, focus, path);
            (
                format!(
                    "{focus} has {} values for {}",
                    v.value_count,
                    show_path(path)
                ),
                evidence,
            )
        }
        (Some(path), Some(value)) => {
            let evidence = path_triples(data, focus, path)
                .into_iter()
                .filter(|t| match path {
                    PropertyPath::Predicate(_) => &t.object == value,
                    PropertyPath::Inverse(_) => &t.subject == value,
                })
                .collect();
            (
                format!(
                    "{focus} has value {} for {}",
                    describe_value(value),
                    show_path(path)
                ),
                evidence,
            )
        }
        (None, _) => {
            let evidence = data.matching(Some(focus), Some(&Term::iri(rdf::TYPE)), None);
            (
                format!("The focus node is the {}", describe_value(focus)),
                evidence,
            )
        }
    };
    JustificationNode::leaf(NodeKind::Observation, statement, evidence)
}

fn param<'a>(v: &'a ConstraintViolation, iri: &str) -> Option<&'a ParamValue> {
    v.constraint_parameters.get(iri)
}

fn param_str(v: &ConstraintViolation, iri: &str) -> String {
    param(v, iri).map(show_param).unwrap_or_else(|| "?".into())
}

fn node_kind_name(term: &Term) -> &'static str {
    match term {
        Term::Iri { .. } => "an IRI",
        Term::BlankNode { .. } => "a blank node",
        Term::Literal(_) => "a literal",
    }
}

fn inference(v: &ConstraintViolation) -> JustificationNode {
    let name = component_parameter_name(&v.constraint_component);
    let conclusion = format!("the {name} constraint is violated");
    let n = v.value_count;
    let value = v.value.as_ref().unwrap_or(&v.focus_node);
    let shown = show(value);
    let premise = match v.constraint_component.as_str() {
        sh::MIN_COUNT_COMPONENT => format!("{n} < {}", param_str(v, sh::MIN_COUNT)),
        sh::MAX_COUNT_COMPONENT => format!("{n} > {}", param_str(v, sh::MAX_COUNT)),
        sh::DATATYPE_COMPONENT => {
            let expected = param_str(v, sh::DATATYPE);
            match value.as_literal() {
                Some(l) if l.datatype() != datatype_of(v) => {
                    format!("<{}> is not {expected}", l.datatype())
                }
                Some(l) if !is_valid_lexical(l) => {
                    format!(
                        "\"{}\" is not a valid lexical form of {expected}",
                        l.lexical()
                    )
                }
                Some(_) => format!("{shown} does not match {expected}"),
                None => format!(
                    "{shown} is {} and not a literal of {expected}",
                    node_kind_name(value)
                ),
            }
        }
        sh::CLASS_COMPONENT => format!("{shown} is not an instance of {}", param_str(v, sh::CLASS)),
        sh::NODE_KIND_COMPONENT => format!(
            "{shown} is {} and not of kind {}",
            node_kind_name(value),
            param_str(v, sh::NODE_KIND)
        ),
        sh::MIN_LENGTH_COMPONENT => match length(value) {
            Some(len) => format!("length {len} < {}", param_str(v, sh::MIN_LENGTH)),
            None => format!("{shown} is a blank node and has no string length"),
        },
        sh::MAX_LENGTH_COMPONENT => match length(value) {
            Some(len) => format!("length {len} > {}", param_str(v, sh::MAX_LENGTH)),
            None => format!("{shown} is a blank node and has no string length"),
        },
        sh::PATTERN_COMPONENT => format!(
            "{shown} does not match the pattern {}",
            param_str(v, sh::PATTERN)
        ),
        sh::MIN_INCLUSIVE_COMPONENT => range(value, v, sh::MIN_INCLUSIVE, "<"),
        sh::MAX_INCLUSIVE_COMPONENT => range(value, v, sh::MAX_INCLUSIVE, ">"),
        sh::MIN_EXCLUSIVE_COMPONENT => range(value, v, sh::MIN_EXCLUSIVE, "<="),
        sh::MAX_EXCLUSIVE_COMPONENT => range(value, v, sh::MAX_EXCLUSIVE, ">="),
        sh::HAS_VALUE_COMPONENT => format!(
            "none of the {n} values equals {}",
            param_str(v, sh::HAS_VALUE)
        ),
        sh::IN_COMPONENT => format!("{shown} is not in {}", param_str(v, sh::IN)),
        _ => "the data does not satisfy the constraint".to_string(),
    };
    JustificationNode::leaf(
        NodeKind::Inference,
        format!("Since {premise}, {conclusion}"),
        Vec::new(),
    )
}

fn datatype_of(v: &ConstraintViolation) -> &str {
    param(v, sh::DATATYPE)
        .and_then(ParamValue::as_term)
        .and_then(Term::as_iri)
        .unwrap_or_default()
}

fn length(term: &Term) -> Option<usize> {
    match term {
        Term::BlankNode { .. } => None,
        Term::Iri { value } => Some(value.chars().count()),
        Term::Literal(l) => Some(l.lexical().chars().count()),
    }
}

fn range(value: &Term, v: &ConstraintViolation, iri: &str, op: &str) -> String {
    let bound = param_str(v, iri);
    match value.as_literal().and_then(Numeric::from_literal) {
        Some(_) => format!("{} {op} {bound}", show(value)),
        None => format!("{} is not comparable with {bound}", show(value)),
    }
}

/// One line per node, kind tag first, children indented two spaces per level.
pub fn tree_to_text(tree: &JustificationTree) -> String {
    fn go(node: &JustificationNode, depth: usize, out: &mut String) {
        let _ = writeln!(
            out,
            "{}[{}] {}",
            "  ".repeat(depth),
            node.kind.tag(),
            node.statement
        );
        for c in &node.children {
            go(c, depth + 1, out);
        }
    }
    let mut out = String::new();
    go(&tree.root, 0, &mut out);
    out
}

/// Tree rendered as nested `{kind, statement, evidence, children}` objects.
pub fn tree_to_json(tree: &JustificationTree) -> serde_json::Value {
    serde_json::to_value(&tree.root).expect("justification nodes serialize")
}

/// Parses the output of [`tree_to_json`] back into a root node.
pub fn node_from_json(value: serde_json::Value) -> serde_json::Result<JustificationNode> {
    serde_json::from_value(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::parse_turtle;
    use crate::shacl::{parse_shapes, validate};

    const PREFIXES: &str = "@prefix ex: <http://ex.org/> .\n";

    fn trees(data: &str, shapes: &str) -> (Vec<JustificationTree>, Graph, Graph) {
        let data = parse_turtle(&format!("{PREFIXES}{data}"), None).unwrap();
        let shapes = parse_turtle(&format!("{PREFIXES}{shapes}"), None).unwrap();
        let model = parse_shapes(&shapes).unwrap();
        let trees = validate(&data, &model)
            .iter()
            .map(|v| build_tree(v, &data, &shapes))
            .collect();
        (trees, data, shapes)
    }

    const NAME_SHAPE: &str = "ex:PersonShape a sh:NodeShape ; sh:targetClass ex:Person ;
        sh:property ex:NameShape .
        ex:NameShape sh:path ex:hasName ; sh:minCount 1 .";

    #[test]
    fn min_count_tree() {
        let (trees, _, shapes) = trees("ex:alice a ex:Person .", NAME_SHAPE);
        let tree = &trees[0];
        assert_eq!(tree.root.kind, NodeKind::Conclusion);
        assert!(tree.root.statement.contains("<http://ex.org/alice>"));
        assert!(tree.root.statement.contains("MinCountConstraintComponent"));
        let kids = &tree.root.children;
        assert_eq!(
            kids[0].statement,
            "Shape <http://ex.org/NameShape> requires property <http://ex.org/hasName> with minCount 1"
        );
        assert_eq!(kids[0].evidence.len(), 2);
        assert!(kids[0].evidence.iter().all(|t| shapes.contains(t)));
        assert_eq!(
            kids[1].statement,
            "<http://ex.org/alice> has 0 values for <http://ex.org/hasName>"
        );
        assert!(kids[1].evidence.is_empty());
        assert_eq!(
            kids[2].statement,
            "Since 0 < 1, the minCount constraint is violated"
        );
        let text = tree_to_text(tree);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("[CONCLUSION] "));
        assert!(lines[1].starts_with("  [PREMISE] "));
        assert!(lines[3].starts_with("  [INFERENCE] "));
    }

    #[test]
    fn datatype_observation_carries_offending_triple() {
        let (trees, data, _) = trees(
            "ex:a ex:age \"abc\" .",
            "ex:S a sh:PropertyShape ; sh:targetSubjectsOf ex:age ; sh:path ex:age ; sh:datatype xsd:integer .",
        );
        let obs = &trees[0].root.children[1];
        assert_eq!(obs.kind, NodeKind::Observation);
        assert_eq!(obs.evidence.len(), 1);
        assert!(data.contains(&obs.evidence[0]));
        assert!(trees[0].root.children[2]
            .statement
            .contains("is not <http://www.w3.org/2001/XMLSchema#integer>"));
    }

    #[test]
    fn symmetric_up_to_focus_substitution() {
        let (trees, _, _) = trees("ex:a a ex:Person . ex:b a ex:Person .", NAME_SHAPE);
        let render = |t: &JustificationTree, focus: &str| tree_to_text(t).replace(focus, "FOCUS");
        assert_eq!(
            render(&trees[0], "http://ex.org/a>"),
            render(&trees[1], "http://ex.org/b>")
        );
    }

    #[test]
    fn json_round_trip_keeps_empty_evidence() {
        let (trees, _, _) = trees("ex:alice a ex:Person .", NAME_SHAPE);
        let json = tree_to_json(&trees[0]);
        assert_eq!(json["children"][1]["evidence"], serde_json::json!([]));
        assert_eq!(json["kind"], "CONCLUSION");
        assert_eq!(node_from_json(json).unwrap(), trees[0].root);
    }

    #[test]
    fn evidence_is_capped() {
        let values: Vec<String> = (0..25).map(|i| format!("\"v{i}\"")).collect();
        let (trees, _, _) = trees(
            &format!("ex:a ex:p {} .", values.join(", ")),
            "ex:S a sh:PropertyShape ; sh:targetSubjectsOf ex:p ; sh:path ex:p ; sh:maxCount 2 .",
        );
        let obs = &trees[0].root.children[1];
        assert_eq!(obs.evidence.len(), EVIDENCE_CAP);
        assert!(obs
            .statement
            .ends_with("(evidence truncated: showing 20 of 25 triples)"));
        assert_eq!(
            trees[0].root.children[2].statement,
            "Since 25 > 2, the maxCount constraint is violated"
        );
    }

    #[test]
    fn range_and_in_inferences() {
        let (trees, _, _) = trees(
            "ex:a ex:age -3 ; ex:color ex:Pink .",
            "ex:S a sh:NodeShape ; sh:targetSubjectsOf ex:age ;
               sh:property [ sh:path ex:age ; sh:minInclusive 0 ] ;
               sh:property [ sh:path ex:color ; sh:in ( ex:Red ex:Blue ) ] .",
        );
        let inferences: Vec<&str> = trees
            .iter()
            .map(|t| t.root.children[2].statement.as_str())
            .collect();
        assert!(inferences.contains(&"Since -3 < 0, the minInclusive constraint is violated"));
        assert!(inferences.contains(
            &"Since <http://ex.org/Pink> is not in (<http://ex.org/Red> <http://ex.org/Blue>), the in constraint is violated"
        ));
        for t in &trees {
            assert!(t.root.depth() >= 2);
        }
    }
}
