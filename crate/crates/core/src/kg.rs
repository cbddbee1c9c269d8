//! The violation knowledge graph: explanations cached per violation
//! signature and language, persisted as Turtle.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use chrono::{DateTime, SecondsFormat, SubsecRound, Utc};
use md5::{Digest, Md5};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rdf::vocab::{rdf, xsd, xsh, XSH};
use crate::rdf::{parse_turtle, serialize_turtle, Graph, Term, TurtleError};
use crate::shacl::{ConstraintViolation, ViolationType};

/// Turtle definition of the classes and properties used in the KG file.
pub const ONTOLOGY: &str = include_str!("../data/xsh.ttl");

/// Instance-independent key of a violation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ViolationSignature {
    pub constraint_component: String,
    /// Canonical path string, empty for node-shape constraints.
    pub property_path: String,
    pub violation_type: ViolationType,
    pub hash: String,
}

impl ViolationSignature {
    pub fn new(
        constraint_component: impl Into<String>,
        property_path: impl Into<String>,
        violation_type: ViolationType,
    ) -> Self {
        let constraint_component = constraint_component.into();
        let property_path = property_path.into();
        let canonical = canonical_string(&constraint_component, &property_path, violation_type);
        ViolationSignature {
            hash: md5_hex(&canonical),
            constraint_component,
            property_path,
            violation_type,
        }
    }

    pub fn canonical_string(&self) -> String {
        canonical_string(
            &self.constraint_component,
            &self.property_path,
            self.violation_type,
        )
    }
}

fn canonical_string(component: &str, path: &str, ty: ViolationType) -> String {
    format!("{component}|{path}|{}", ty.as_str())
}

fn md5_hex(s: &str) -> String {
    Md5::digest(s.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn make_signature(violation: &ConstraintViolation) -> ViolationSignature {
    ViolationSignature::new(
        violation.constraint_component.clone(),
        violation
            .result_path
            .as_ref()
            .map(|p| p.canonical())
            .unwrap_or_default(),
        violation.violation_type,
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplanationRecord {
    pub signature: ViolationSignature,
    pub language: String,
    pub natural_language_text: String,
    pub correction_suggestions: Vec<String>,
    pub provided_by_model: String,
    /// JSON of the violation, tree and context the first explanation for
    /// this signature was generated from.
    pub input_payload: String,
    pub created_at: DateTime<Utc>,
}

/// Lookup counters. `lookups` is derived, so it always equals hits plus misses.
#[derive(Debug, Default)]
pub struct KgStats {
    hits: AtomicU64,
    misses: AtomicU64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatsSnapshot {
    pub lookups: u64,
    pub hits: u64,
    pub misses: u64,
    pub hit_rate: f64,
}

impl KgStats {
    pub fn snapshot(&self) -> StatsSnapshot {
        let hits = self.hits.load(Ordering::Relaxed);
        let misses = self.misses.load(Ordering::Relaxed);
        let lookups = hits + misses;
        StatsSnapshot {
            lookups,
            hits,
            misses,
            hit_rate: hits as f64 / lookups.max(1) as f64,
        }
    }

    pub fn reset(&self) {
        self.hits.store(0, Ordering::Relaxed);
        self.misses.store(0, Ordering::Relaxed);
    }
}

#[derive(Debug, Error)]
pub enum KgError {
    #[error("cannot access knowledge graph file: {0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Syntax(#[from] TurtleError),
    #[error("resource {resource}: {message}")]
    Schema { resource: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Stored {
    text: String,
    suggestions: Vec<String>,
    model: String,
    created_at: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Entry {
    signature: ViolationSignature,
    payload: String,
    explanations: BTreeMap<String, Stored>,
}

/// Explanation cache keyed by (signature hash, language).
///
/// Lookups take `&self` and may run concurrently; `store` needs `&mut self`.
#[derive(Debug, Default)]
pub struct ViolationKg {
    entries: BTreeMap<String, Entry>,
    stats: KgStats,
}

impl ViolationKg {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn stats(&self) -> StatsSnapshot {
        self.stats.snapshot()
    }

    pub fn reset_stats(&self) {
        self.stats.reset();
    }

    /// Number of stored (signature, language) records.
    pub fn record_count(&self) -> usize {
        self.entries.values().map(|e| e.explanations.len()).sum()
    }

    pub fn signature_count(&self) -> usize {
        self.entries.len()
    }

    pub fn languages(&self, hash: &str) -> Vec<String> {
        self.entries
            .get(hash)
            .map(|e| e.explanations.keys().cloned().collect())
            .unwrap_or_default()
    }

    /// Like [`lookup`](Self::lookup) but leaves the counters alone.
    pub fn get(&self, signature: &ViolationSignature, language: &str) -> Option<ExplanationRecord> {
        let entry = self.entries.get(&signature.hash)?;
        let s = entry.explanations.get(language)?;
        Some(ExplanationRecord {
            signature: entry.signature.clone(),
            language: language.to_string(),
            natural_language_text: s.text.clone(),
            correction_suggestions: s.suggestions.clone(),
            provided_by_model: s.model.clone(),
            input_payload: entry.payload.clone(),
            created_at: s.created_at,
        })
    }

    pub fn lookup(
        &self,
        signature: &ViolationSignature,
        language: &str,
    ) -> Option<ExplanationRecord> {
        let found = self.get(signature, language);
        let counter = if found.is_some() {
            &self.stats.hits
        } else {
            &self.stats.misses
        };
        counter.fetch_add(1, Ordering::Relaxed);
        found
    }

    /// Inserts or replaces the record for its (signature, language). The
    /// input payload of an already known signature is kept.
    pub fn store(&mut self, record: ExplanationRecord) {
        let entry = self
            .entries
            .entry(record.signature.hash.clone())
            .or_insert_with(|| Entry {
                signature: record.signature.clone(),
                payload: record.input_payload.clone(),
                explanations: BTreeMap::new(),
            });
        entry.explanations.insert(
            record.language,
            Stored {
                text: record.natural_language_text,
                suggestions: record.correction_suggestions,
                model: record.provided_by_model,
                created_at: record.created_at.trunc_subsecs(3),
            },
        );
    }

    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::with_default_prefixes();
        let mut fresh = 0usize;
        let ty = Term::iri(rdf::TYPE);
        let p = |local: &str| Term::iri(local);
        for (hash, entry) in &self.entries {
            let sig = signature_iri(hash);
            let s = &entry.signature;
            g.add(sig.clone(), ty.clone(), p(xsh::VIOLATION_SIGNATURE));
            g.add(
                sig.clone(),
                p(xsh::SIGNATURE_HASH),
                Term::string(hash.as_str()),
            );
            g.add(
                sig.clone(),
                p(xsh::CONSTRAINT_COMPONENT),
                Term::iri(s.constraint_component.as_str()),
            );
            g.add(
                sig.clone(),
                p(xsh::PROPERTY_PATH),
                Term::string(s.property_path.as_str()),
            );
            g.add(
                sig.clone(),
                p(xsh::VIOLATION_TYPE),
                Term::string(s.violation_type.as_str()),
            );
            for (lang, stored) in &entry.explanations {
                let exp = Term::iri(format!("{XSH}exp-{hash}-{lang}"));
                g.add(sig.clone(), p(xsh::HAS_EXPLANATION), exp.clone());
                g.add(exp.clone(), ty.clone(), p(xsh::EXPLANATION));
                g.add(
                    exp.clone(),
                    p(xsh::NATURAL_LANGUAGE_TEXT),
                    Term::lang(stored.text.as_str(), lang.as_str()),
                );
                let items: Vec<Term> = stored
                    .suggestions
                    .iter()
                    .map(|s| Term::string(s.as_str()))
                    .collect();
                for item in &items {
                    g.add(exp.clone(), p(xsh::CORRECTION_SUGGESTION), item.clone());
                }
                let head = g.insert_list(&items, || {
                    fresh += 1;
                    Term::blank(format!("l{fresh}"))
                });
                g.add(exp.clone(), p(xsh::CORRECTION_SUGGESTIONS), head);
                g.add(
                    exp.clone(),
                    p(xsh::PROVIDED_BY_MODEL),
                    Term::string(stored.model.as_str()),
                );
                g.add(
                    exp.clone(),
                    p(xsh::INPUT_PAYLOAD),
                    Term::string(entry.payload.as_str()),
                );
                g.add(
                    exp,
                    p(xsh::CREATED_AT),
                    Term::typed(
                        stored
                            .created_at
                            .to_rfc3339_opts(SecondsFormat::Millis, true),
                        xsd::DATE_TIME,
                    ),
                );
            }
        }
        g
    }

    pub fn from_graph(g: &Graph) -> Result<Self, KgError> {
        let ty = Term::iri(rdf::TYPE);
        let mut entries = BTreeMap::new();
        for sig in g.subjects(&ty, &Term::iri(xsh::VIOLATION_SIGNATURE)) {
            let hash = required_lexical(g, &sig, xsh::SIGNATURE_HASH)?;
            let component = required(g, &sig, xsh::CONSTRAINT_COMPONENT)?;
            let component = match component {
                Term::Iri { value } => value,
                other => other
                    .as_literal()
                    .map(|l| l.lexical().to_string())
                    .unwrap_or_default(),
            };
            let path = optional_lexical(g, &sig, xsh::PROPERTY_PATH).unwrap_or_default();
            let vt = required_lexical(g, &sig, xsh::VIOLATION_TYPE)?;
            let violation_type = ViolationType::parse(&vt)
                .ok_or_else(|| schema(&sig, format!("unknown violation type {vt:?}")))?;
            let signature = ViolationSignature {
                constraint_component: component,
                property_path: path,
                violation_type,
                hash: hash.clone(),
            };
            let mut payload = None;
            let mut explanations = BTreeMap::new();
            for exp in g.objects(&sig, &Term::iri(xsh::HAS_EXPLANATION)) {
                let text = required(g, &exp, xsh::NATURAL_LANGUAGE_TEXT)?;
                let text = text
                    .as_literal()
                    .filter(|l| l.language().is_some())
                    .ok_or_else(|| {
                        schema(&exp, "naturalLanguageText must be language-tagged".into())
                    })?;
                let language = text.language().unwrap_or_default().to_string();
                let suggestions = match g.object(&exp, &Term::iri(xsh::CORRECTION_SUGGESTIONS)) {
                    Some(head) => g
                        .list(&head)
                        .ok_or_else(|| schema(&exp, "malformed correctionSuggestions list".into()))?
                        .iter()
                        .map(lexical)
                        .collect(),
                    None => g
                        .objects(&exp, &Term::iri(xsh::CORRECTION_SUGGESTION))
                        .iter()
                        .map(lexical)
                        .collect(),
                };
                let created = required_lexical(g, &exp, xsh::CREATED_AT)?;
                let created_at = DateTime::parse_from_rfc3339(&created)
                    .map_err(|e| schema(&exp, format!("invalid createdAt {created:?}: {e}")))?
                    .with_timezone(&Utc);
                if payload.is_none() {
                    payload = optional_lexical(g, &exp, xsh::INPUT_PAYLOAD);
                }
                explanations.insert(
                    language,
                    Stored {
                        text: text.lexical().to_string(),
                        suggestions,
                        model: required_lexical(g, &exp, xsh::PROVIDED_BY_MODEL)?,
                        created_at,
                    },
                );
            }
            entries.insert(
                hash,
                Entry {
                    signature,
                    payload: payload.unwrap_or_default(),
                    explanations,
                },
            );
        }
        Ok(ViolationKg {
            entries,
            stats: KgStats::default(),
        })
    }

    /// Writes the KG as Turtle, replacing `path` atomically.
    pub fn save(&self, path: &Path) -> Result<(), KgError> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let tmp = path.with_extension("ttl.tmp");
        fs::write(&tmp, serialize_turtle(&self.to_graph()))?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, KgError> {
        let text = fs::read_to_string(path)?;
        Self::from_graph(&parse_turtle(&text, None)?)
    }

    /// Loads `path` if it exists, otherwise starts empty.
    pub fn open(path: &Path) -> Result<Self, KgError> {
        if path.exists() {
            Self::load(path)
        } else {
            Ok(Self::new())
        }
    }
}

fn signature_iri(hash: &str) -> Term {
    Term::iri(format!("{XSH}sig-{hash}"))
}

fn schema(resource: &Term, message: String) -> KgError {
    KgError::Schema {
        resource: resource.to_string(),
        message,
    }
}

fn required(g: &Graph, s: &Term, p: &str) -> Result<Term, KgError> {
    g.object(s, &Term::iri(p))
        .ok_or_else(|| schema(s, format!("missing required property <{p}>")))
}

fn lexical(t: &Term) -> String {
    match t {
        Term::Literal(l) => l.lexical().to_string(),
        Term::Iri { value } => value.clone(),
        Term::BlankNode { label } => label.clone(),
    }
}

fn required_lexical(g: &Graph, s: &Term, p: &str) -> Result<String, KgError> {
    required(g, s, p).map(|t| lexical(&t))
}

fn optional_lexical(g: &Graph, s: &Term, p: &str) -> Option<String> {
    g.object(s, &Term::iri(p)).map(|t| lexical(&t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::vocab::sh;
    use crate::shacl::{ParamValue, PropertyPath};

    const HAS_NAME: &str = "http://ex.org/hasName";

    fn violation(focus: &str, component: &str) -> ConstraintViolation {
        ConstraintViolation {
            focus_node: Term::iri(focus),
            source_shape: Term::iri("http://ex.org/NameShape"),
            constraint_component: component.to_string(),
            result_path: Some(PropertyPath::Predicate(HAS_NAME.into())),
            value: None,
            severity: sh::VIOLATION.into(),
            message: String::new(),
            violation_type: crate::shacl::classify_violation_type(component),
            constraint_parameters: BTreeMap::from([(
                sh::MIN_COUNT.to_string(),
                ParamValue::Term(Term::integer(1)),
            )]),
            focus_node_types: vec![],
            value_count: 0,
        }
    }

    fn record(sig: &ViolationSignature, lang: &str, text: &str) -> ExplanationRecord {
        ExplanationRecord {
            signature: sig.clone(),
            language: lang.into(),
            natural_language_text: text.into(),
            correction_suggestions: vec!["Add a name.".into(), "Check \"names\"\n twice.".into()],
            provided_by_model: "template-v1".into(),
            input_payload: "{\"k\": 1}".into(),
            created_at: Utc::now(),
        }
    }

    #[test]
    fn signature_matches_reference_md5() {
        let s = make_signature(&violation("http://ex.org/alice", sh::MIN_COUNT_COMPONENT));
        assert_eq!(
            s.canonical_string(),
            "http://www.w3.org/ns/shacl#MinCountConstraintComponent|http://ex.org/hasName|CARDINALITY"
        );
        // Reference value from an independent MD5 implementation.
        assert_eq!(s.hash, "fa8484fa7a674c991c0c75f011934666");
        let node = ViolationSignature::new(sh::NODE_KIND_COMPONENT, "", ViolationType::ValueType);
        assert_eq!(node.hash, "940a7b24ca5bbe3fbd1eb53a38526548");
    }

    #[test]
    fn signature_ignores_instance() {
        let a = make_signature(&violation("http://ex.org/alice", sh::MIN_COUNT_COMPONENT));
        let b = make_signature(&violation("http://ex.org/bob", sh::MIN_COUNT_COMPONENT));
        let c = make_signature(&violation("http://ex.org/alice", sh::MAX_COUNT_COMPONENT));
        assert_eq!(a, b);
        assert_ne!(a.hash, c.hash);
        assert_eq!(c.hash, "4585e2af2339111a8d793f0772487291");
    }

    #[test]
    fn lookup_counts_and_languages() {
        let sig = make_signature(&violation("http://ex.org/a", sh::MIN_COUNT_COMPONENT));
        let mut kg = ViolationKg::new();
        assert!(kg.lookup(&sig, "en").is_none());
        kg.store(record(&sig, "en", "english"));
        assert!(kg.lookup(&sig, "de").is_none());
        assert_eq!(
            kg.lookup(&sig, "en").unwrap().natural_language_text,
            "english"
        );
        let s = kg.stats();
        assert_eq!((s.lookups, s.hits, s.misses), (3, 1, 2));
        assert!((s.hit_rate - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn store_replaces_same_language_only() {
        let sig = make_signature(&violation("http://ex.org/a", sh::MIN_COUNT_COMPONENT));
        let mut kg = ViolationKg::new();
        kg.store(record(&sig, "en", "first"));
        kg.store(record(&sig, "de", "deutsch"));
        let mut second = record(&sig, "en", "second");
        second.input_payload = "other".into();
        kg.store(second);
        assert_eq!(kg.record_count(), 2);
        let en = kg.get(&sig, "en").unwrap();
        assert_eq!(en.natural_language_text, "second");
        assert_eq!(en.input_payload, "{\"k\": 1}");
        assert_eq!(kg.get(&sig, "de").unwrap().natural_language_text, "deutsch");
        let mut empty = record(&sig, "fr", "x");
        empty.correction_suggestions.clear();
        kg.store(empty);
        assert!(kg
            .get(&sig, "fr")
            .unwrap()
            .correction_suggestions
            .is_empty());
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("kg/validation_kg.ttl");
        let mut kg = ViolationKg::new();
        let sigs = [
            make_signature(&violation("http://ex.org/a", sh::MIN_COUNT_COMPONENT)),
            make_signature(&violation("http://ex.org/a", sh::MAX_COUNT_COMPONENT)),
            ViolationSignature::new(sh::NODE_KIND_COMPONENT, "", ViolationType::ValueType),
        ];
        for s in &sigs {
            kg.store(record(s, "en", "Text with \"quotes\"\nand a newline."));
            kg.store(record(s, "de", "Deutscher Text"));
        }
        kg.save(&path).unwrap();
        let loaded = ViolationKg::load(&path).unwrap();
        assert_eq!(loaded.record_count(), 6);
        for s in &sigs {
            for lang in ["en", "de"] {
                assert_eq!(loaded.get(s, lang), kg.get(s, lang));
            }
        }
    }

    #[test]
    fn missing_hash_is_a_schema_error() {
        let g = parse_turtle(
            "<http://xpshacl.org/#sig-x> a xsh:ViolationSignature ;
               xsh:constraintComponent sh:MinCountConstraintComponent ;
               xsh:violationType \"CARDINALITY\" .",
            None,
        )
        .unwrap();
        match ViolationKg::from_graph(&g) {
            Err(KgError::Schema { resource, message }) => {
                assert_eq!(resource, "<http://xpshacl.org/#sig-x>");
                assert!(message.contains("signatureHash"));
            }
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn ontology_declares_every_property() {
        let g = parse_turtle(ONTOLOGY, None).unwrap();
        for p in [
            xsh::SIGNATURE_HASH,
            xsh::CONSTRAINT_COMPONENT,
            xsh::PROPERTY_PATH,
            xsh::VIOLATION_TYPE,
            xsh::HAS_EXPLANATION,
            xsh::NATURAL_LANGUAGE_TEXT,
            xsh::CORRECTION_SUGGESTION,
            xsh::CORRECTION_SUGGESTIONS,
            xsh::PROVIDED_BY_MODEL,
            xsh::INPUT_PAYLOAD,
            xsh::CREATED_AT,
        ] {
            assert!(
                g.contains(&crate::rdf::Triple::new(
                    Term::iri(p),
                    Term::iri(rdf::TYPE),
                    Term::iri(format!("{}Property", crate::rdf::vocab::RDF))
                )),
                "{p}"
            );
        }
    }
}
