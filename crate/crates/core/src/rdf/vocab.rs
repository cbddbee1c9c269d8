//! Namespace IRIs and the handful of vocabulary terms the engine refers to by name.

pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const SH: &str = "http://www.w3.org/ns/shacl#";
/// Namespace of the violation knowledge graph ontology.
pub const XSH: &str = "http://xpshacl.org/#";

/// Prefixes bound by default when parsing and serializing.
pub const DEFAULT_PREFIXES: [(&str, &str); 5] = [
    ("rdf", RDF),
    ("rdfs", RDFS),
    ("xsd", XSD),
    ("sh", SH),
    ("xsh", XSH),
];

pub mod rdf {
    pub const TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const FIRST: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#first";
    pub const REST: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#rest";
    pub const NIL: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#nil";
    pub const LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
}

pub mod rdfs {
    pub const COMMENT: &str = "http://www.w3.org/2000/01/rdf-schema#comment";
    pub const LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
    pub const CLASS: &str = "http://www.w3.org/2000/01/rdf-schema#Class";
    pub const SUB_CLASS_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
}

pub mod xsd {
    pub const STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
    pub const BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
    pub const INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
    pub const DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
    pub const DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
    pub const FLOAT: &str = "http://www.w3.org/2001/XMLSchema#float";
    pub const DATE: &str = "http://www.w3.org/2001/XMLSchema#date";
    pub const DATE_TIME: &str = "http://www.w3.org/2001/XMLSchema#dateTime";
}

pub mod sh {
    macro_rules! sh_terms {
        ($($name:ident = $local:literal),* $(,)?) => {
            $(pub const $name: &str = concat!("http://www.w3.org/ns/shacl#", $local);)*
        };
    }

    sh_terms! {
        NODE_SHAPE = "NodeShape",
        PROPERTY_SHAPE = "PropertyShape",
        PROPERTY = "property",
        PATH = "path",
        INVERSE_PATH = "inversePath",
        ALTERNATIVE_PATH = "alternativePath",
        ZERO_OR_MORE_PATH = "zeroOrMorePath",
        ONE_OR_MORE_PATH = "oneOrMorePath",
        ZERO_OR_ONE_PATH = "zeroOrOnePath",
        TARGET_CLASS = "targetClass",
        TARGET_NODE = "targetNode",
        TARGET_SUBJECTS_OF = "targetSubjectsOf",
        TARGET_OBJECTS_OF = "targetObjectsOf",
        NAME = "name",
        DESCRIPTION = "description",
        MESSAGE = "message",
        SEVERITY = "severity",
        VIOLATION = "Violation",
        DEACTIVATED = "deactivated",
        MIN_COUNT = "minCount",
        MAX_COUNT = "maxCount",
        DATATYPE = "datatype",
        CLASS = "class",
        NODE_KIND = "nodeKind",
        MIN_LENGTH = "minLength",
        MAX_LENGTH = "maxLength",
        PATTERN = "pattern",
        FLAGS = "flags",
        MIN_INCLUSIVE = "minInclusive",
        MAX_INCLUSIVE = "maxInclusive",
        MIN_EXCLUSIVE = "minExclusive",
        MAX_EXCLUSIVE = "maxExclusive",
        HAS_VALUE = "hasValue",
        IN = "in",
        IRI = "IRI",
        BLANK_NODE = "BlankNode",
        LITERAL = "Literal",
        BLANK_NODE_OR_IRI = "BlankNodeOrIRI",
        BLANK_NODE_OR_LITERAL = "BlankNodeOrLiteral",
        IRI_OR_LITERAL = "IRIOrLiteral",
        MIN_COUNT_COMPONENT = "MinCountConstraintComponent",
        MAX_COUNT_COMPONENT = "MaxCountConstraintComponent",
        DATATYPE_COMPONENT = "DatatypeConstraintComponent",
        CLASS_COMPONENT = "ClassConstraintComponent",
        NODE_KIND_COMPONENT = "NodeKindConstraintComponent",
        MIN_LENGTH_COMPONENT = "MinLengthConstraintComponent",
        MAX_LENGTH_COMPONENT = "MaxLengthConstraintComponent",
        PATTERN_COMPONENT = "PatternConstraintComponent",
        MIN_INCLUSIVE_COMPONENT = "MinInclusiveConstraintComponent",
        MAX_INCLUSIVE_COMPONENT = "MaxInclusiveConstraintComponent",
        MIN_EXCLUSIVE_COMPONENT = "MinExclusiveConstraintComponent",
        MAX_EXCLUSIVE_COMPONENT = "MaxExclusiveConstraintComponent",
        HAS_VALUE_COMPONENT = "HasValueConstraintComponent",
        IN_COMPONENT = "InConstraintComponent",
    }
}

pub mod xsh {
    macro_rules! xsh_terms {
        ($($name:ident = $local:literal),* $(,)?) => {
            $(pub const $name: &str = concat!("http://xpshacl.org/#", $local);)*
        };
    }

    xsh_terms! {
        VIOLATION_SIGNATURE = "ViolationSignature",
        EXPLANATION = "Explanation",
        SIGNATURE_HASH = "signatureHash",
        CONSTRAINT_COMPONENT = "constraintComponent",
        PROPERTY_PATH = "propertyPath",
        VIOLATION_TYPE = "violationType",
        HAS_EXPLANATION = "hasExplanation",
        NATURAL_LANGUAGE_TEXT = "naturalLanguageText",
        CORRECTION_SUGGESTION = "correctionSuggestion",
        CORRECTION_SUGGESTIONS = "correctionSuggestions",
        PROVIDED_BY_MODEL = "providedByModel",
        INPUT_PAYLOAD = "inputPayload",
        CREATED_AT = "createdAt",
        APPLIES_TO_PROPERTY = "appliesToProperty",
    }
}

/// Returns the part of an IRI after the last `#` or `/`.
pub fn local_name(iri: &str) -> &str {
    iri.rsplit(['#', '/']).next().unwrap_or(iri)
}
