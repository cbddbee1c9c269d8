//! Retrieval of the graph context around a violation: ontology fragments,
//! shape documentation, similar cases and domain rules.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::rdf::vocab::{rdf, rdfs, sh, xsh};
use crate::rdf::{Graph, Term, Triple};
use crate::shacl::{ConstraintViolation, PropertyPath, ShapeModel, Validator};

/// Retrieval caps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextConfig {
    pub max_fragments: usize,
    pub max_similar_cases: usize,
    pub max_domain_rules: usize,
    /// Number of similar-case identifiers quoted in prompts.
    pub prompt_exemplars: usize,
}

impl Default for ContextConfig {
    fn default() -> Self {
        ContextConfig {
            max_fragments: 50,
            max_similar_cases: 10,
            max_domain_rules: 5,
            prompt_exemplars: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainRule {
    pub rule: Term,
    /// Empty when the rule has no `rdfs:comment`.
    pub comment: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DomainContext {
    pub ontology_fragments: Vec<Triple>,
    pub fragments_truncated: bool,
    pub shape_documentation: Vec<String>,
    pub similar_cases: Vec<Term>,
    /// Number of similar cases found before the cap was applied.
    pub similar_case_count: usize,
    pub domain_rules: Vec<DomainRule>,
}

/// Triples with `focus` as subject, then those with `focus` as object.
/// Returns the capped list and whether anything was cut.
pub fn retrieve_ontology_fragments(data: &Graph, focus: &Term, cap: usize) -> (Vec<Triple>, bool) {
    let mut out = data.matching(Some(focus), None, None);
    out.extend(
        data.matching(None, None, Some(focus))
            .into_iter()
            .filter(|t| &t.subject != focus),
    );
    let truncated = out.len() > cap;
    out.truncate(cap);
    (out, truncated)
}

/// `sh:name`, `sh:description` and `rdfs:comment` values of the shape, then
/// of the node shapes that attach it.
pub fn retrieve_shape_documentation(
    shapes: &Graph,
    model: &ShapeModel,
    shape: &Term,
) -> Vec<String> {
    let mut owners = vec![shape.clone()];
    owners.extend(model.parents_of(shape).map(|s| s.id.clone()));
    let mut out = Vec::new();
    for owner in &owners {
        for p in [sh::NAME, sh::DESCRIPTION, rdfs::COMMENT] {
            for o in shapes.objects(owner, &Term::iri(p)) {
                if let Some(l) = o.as_literal() {
                    out.push(l.lexical().to_string());
                }
            }
        }
    }
    out
}

/// Other nodes that fail the same constraint of the same shape.
///
/// Candidates share an `rdf:type` with the focus node, or are all subjects
/// of the data graph when the focus node is untyped. Returns the capped list
/// and the count before capping.
pub fn retrieve_similar_cases(
    data: &Graph,
    violation: &ConstraintViolation,
    model: &ShapeModel,
    cap: usize,
) -> (Vec<Term>, usize) {
    let Some(shape) = model.shape(&violation.source_shape) else {
        return (Vec::new(), 0);
    };
    let candidates: BTreeSet<Term> = if violation.focus_node_types.is_empty() {
        data.all_subjects().cloned().collect()
    } else {
        let ty = Term::iri(rdf::TYPE);
        violation
            .focus_node_types
            .iter()
            .flat_map(|t| data.subjects(&ty, &Term::iri(t.as_str())))
            .collect()
    };
    let validator = Validator::new(data, model);
    let mut found: Vec<Term> = candidates
        .into_iter()
        .filter(|c| c != &violation.focus_node)
        .filter(|c| {
            validator
                .check(shape, &violation.constraint_component, c)
                .iter()
                .any(|v| v.result_path == violation.result_path)
        })
        .collect();
    let count = found.len();
    found.truncate(cap);
    (found, count)
}

/// Rules declared with `xsh:appliesToProperty` on the path's predicate.
pub fn retrieve_domain_rules(
    shapes: &Graph,
    path: Option<&PropertyPath>,
    cap: usize,
) -> Vec<DomainRule> {
    let Some(path) = path else {
        return Vec::new();
    };
    let applies = Term::iri(xsh::APPLIES_TO_PROPERTY);
    let comment = Term::iri(rdfs::COMMENT);
    shapes
        .subjects(&applies, &Term::iri(path.predicate()))
        .into_iter()
        .take(cap)
        .map(|rule| DomainRule {
            comment: shapes
                .object(&rule, &comment)
                .and_then(|c| c.as_literal().map(|l| l.lexical().to_string()))
                .unwrap_or_default(),
            rule,
        })
        .collect()
}

pub fn assemble_context(
    data: &Graph,
    shapes: &Graph,
    model: &ShapeModel,
    violation: &ConstraintViolation,
    config: &ContextConfig,
) -> DomainContext {
    let (ontology_fragments, fragments_truncated) =
        retrieve_ontology_fragments(data, &violation.focus_node, config.max_fragments);
    let (similar_cases, similar_case_count) =
        retrieve_similar_cases(data, violation, model, config.max_similar_cases);
    DomainContext {
        ontology_fragments,
        fragments_truncated,
        shape_documentation: retrieve_shape_documentation(shapes, model, &violation.source_shape),
        similar_cases,
        similar_case_count,
        domain_rules: retrieve_domain_rules(
            shapes,
            violation.result_path.as_ref(),
            config.max_domain_rules,
        ),
    }
}

/// Labelled context blocks in fixed order: fragments, documentation, domain
/// rules, similar cases.
pub fn render_context(context: &DomainContext, exemplars: usize) -> String {
    let mut out = String::new();
    out.push_str("## Ontology fragments\n");
    if context.ontology_fragments.is_empty() {
        out.push_str("(none)\n");
    }
    for t in &context.ontology_fragments {
        let _ = writeln!(out, "{t}");
    }
    if context.fragments_truncated {
        out.push_str("(fragments truncated)\n");
    }
    out.push_str("\n## Shape documentation\n");
    if context.shape_documentation.is_empty() {
        out.push_str("(none)\n");
    }
    for doc in &context.shape_documentation {
        let _ = writeln!(out, "- {doc}");
    }
    out.push_str("\n## Domain rules\n");
    if context.domain_rules.is_empty() {
        out.push_str("(none)\n");
    }
    for r in &context.domain_rules {
        if r.comment.is_empty() {
            let _ = writeln!(out, "- {}", r.rule);
        } else {
            let _ = writeln!(out, "- {}: {}", r.rule, r.comment);
        }
    }
    out.push_str("\n## Similar cases\n");
    let _ = writeln!(
        out,
        "{} other node(s) show the same violation.",
        context.similar_case_count
    );
    for node in context.similar_cases.iter().take(exemplars) {
        let _ = writeln!(out, "- {node}");
    }
    out
}
