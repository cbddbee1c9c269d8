use std::fmt;

use serde::{Deserialize, Serialize};

use super::vocab::{rdf, xsd};

/// A literal value: lexical form, datatype IRI and optional language tag.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    lexical: String,
    datatype: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    language: Option<String>,
}

impl Literal {
    /// A plain `xsd:string` literal.
    pub fn string(lexical: impl Into<String>) -> Self {
        Self::typed(lexical, xsd::STRING)
    }

    pub fn typed(lexical: impl Into<String>, datatype: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: datatype.into(),
            language: None,
        }
    }

    /// A language-tagged string; the datatype is always `rdf:langString`.
    pub fn lang(lexical: impl Into<String>, language: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: rdf::LANG_STRING.to_string(),
            language: Some(language.into()),
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &str {
        &self.datatype
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }
}

/// An RDF term.
///
/// Variants are declared literal-first so that the derived order sorts
/// literals, then IRIs, then blank nodes, matching the first character of
/// their N-Triples forms (`"` < `<` < `_`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Term {
    Literal(Literal),
    Iri { value: String },
    BlankNode { label: String },
}

impl Term {
    pub fn iri(value: impl Into<String>) -> Self {
        let value = value.into();
        debug_assert!(
            !value.is_empty() && !value.chars().any(char::is_whitespace),
            "invalid IRI {value:?}"
        );
        Term::Iri { value }
    }

    pub fn blank(label: impl Into<String>) -> Self {
        Term::BlankNode {
            label: label.into(),
        }
    }

    pub fn literal(literal: Literal) -> Self {
        Term::Literal(literal)
    }

    pub fn string(lexical: impl Into<String>) -> Self {
        Term::Literal(Literal::string(lexical))
    }

    pub fn typed(lexical: impl Into<String>, datatype: impl Into<String>) -> Self {
        Term::Literal(Literal::typed(lexical, datatype))
    }

    pub fn integer(value: i64) -> Self {
        Term::typed(value.to_string(), xsd::INTEGER)
    }

    pub fn lang(lexical: impl Into<String>, language: impl Into<String>) -> Self {
        Term::Literal(Literal::lang(lexical, language))
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri { value } => Some(value),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    pub fn is_iri(&self) -> bool {
        matches!(self, Term::Iri { .. })
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::BlankNode { .. })
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    /// True for the IRI `iri`.
    pub fn is(&self, iri: &str) -> bool {
        self.as_iri() == Some(iri)
    }

    /// The N-Triples form of this term.
    pub fn to_ntriples(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri { value } => write!(f, "<{value}>"),
            Term::BlankNode { label } => write!(f, "_:{label}"),
            Term::Literal(lit) => {
                f.write_str("\"")?;
                f.write_str(&escape_string(&lit.lexical))?;
                f.write_str("\"")?;
                match (&lit.language, lit.datatype.as_str()) {
                    (Some(lang), _) => write!(f, "@{lang}"),
                    (None, xsd::STRING) => Ok(()),
                    (None, dt) => write!(f, "^^<{dt}>"),
                }
            }
        }
    }
}

/// Escapes a string for use between double quotes in Turtle or N-Triples.
pub fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            '\u{8}' => out.push_str("\\b"),
            '\u{c}' => out.push_str("\\f"),
            c if (c as u32) < 0x20 || c == '\u{7f}' => {
                out.push_str(&format!("\\u{:04X}", c as u32));
            }
            c => out.push(c),
        }
    }
    out
}

/// An RDF statement. The subject is never a literal and the predicate is an IRI.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Self {
        debug_assert!(!subject.is_literal(), "literal subject");
        debug_assert!(predicate.is_iri(), "non-IRI predicate");
        Triple {
            subject,
            predicate,
            object,
        }
    }

    /// True when `term` occurs as subject or object.
    pub fn mentions(&self, term: &Term) -> bool {
        &self.subject == term || &self.object == term
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ntriples_forms() {
        assert_eq!(
            Term::iri("http://ex.org/a").to_string(),
            "<http://ex.org/a>"
        );
        assert_eq!(Term::blank("b0").to_string(), "_:b0");
        assert_eq!(Term::string("a\"b\n").to_string(), r#""a\"b\n""#);
        assert_eq!(Term::lang("hi", "en").to_string(), "\"hi\"@en");
        assert_eq!(
            Term::integer(-3).to_string(),
            "\"-3\"^^<http://www.w3.org/2001/XMLSchema#integer>"
        );
    }

    #[test]
    fn lang_literal_has_lang_string_datatype() {
        let lit = Literal::lang("x", "de");
        assert_eq!(lit.datatype(), rdf::LANG_STRING);
        assert_eq!(lit.language(), Some("de"));
        assert_eq!(Literal::string("x").datatype(), xsd::STRING);
    }

    #[test]
    fn ordering_follows_kind_then_value() {
        let mut terms = [
            Term::blank("a"),
            Term::iri("http://ex.org/b"),
            Term::string("z"),
            Term::iri("http://ex.org/a"),
        ];
        terms.sort();
        assert!(terms[0].is_literal());
        assert_eq!(terms[1], Term::iri("http://ex.org/a"));
        assert!(terms[3].is_blank());
    }

    #[test]
    fn control_characters_escaped() {
        assert_eq!(escape_string("\u{1}"), "\\u0001");
    }
}
