//! Lexical validation and numeric value space for the XSD datatypes the
//! validator understands.

use std::cmp::Ordering;
use std::sync::LazyLock;

use regex::Regex;

use crate::rdf::vocab::{xsd, XSD};
use crate::rdf::Literal;

static DECIMAL: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^[+-]?(\d+(\.\d*)?|\.\d+)$").unwrap());
static INTEGER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^[+-]?\d+$").unwrap());
static DOUBLE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^([+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?|[+-]?INF|NaN)$").unwrap()
});
static DATE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^-?\d{4,}-(0[1-9]|1[0-2])-(0[1-9]|[12]\d|3[01])(Z|[+-]\d{2}:\d{2})?$").unwrap()
});
static DATE_TIME: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"^-?\d{4,}-(0[1-9]|1[0-2])-(0[1-9]|[12]\d|3[01])T([01]\d|2[0-4]):[0-5]\d:[0-5]\d(\.\d+)?(Z|[+-]\d{2}:\d{2})?$",
    )
    .unwrap()
});

/// Inclusive bounds of the integer-derived datatypes.
fn integer_bounds(datatype: &str) -> Option<(i128, i128)> {
    let local = datatype.strip_prefix(XSD)?;
    Some(match local {
        "integer" => (i128::MIN, i128::MAX),
        "long" => (i64::MIN as i128, i64::MAX as i128),
        "int" => (i32::MIN as i128, i32::MAX as i128),
        "short" => (i16::MIN as i128, i16::MAX as i128),
        "byte" => (i8::MIN as i128, i8::MAX as i128),
        "nonNegativeInteger" => (0, i128::MAX),
        "positiveInteger" => (1, i128::MAX),
        "nonPositiveInteger" => (i128::MIN, 0),
        "negativeInteger" => (i128::MIN, -1),
        "unsignedLong" => (0, u64::MAX as i128),
        "unsignedInt" => (0, u32::MAX as i128),
        "unsignedShort" => (0, u16::MAX as i128),
        "unsignedByte" => (0, u8::MAX as i128),
        _ => return None,
    })
}

/// True when the literal's lexical form is valid for its datatype.
/// Unknown datatypes are accepted.
pub fn is_valid_lexical(lit: &Literal) -> bool {
    let lex = lit.lexical();
    let dt = lit.datatype();
    if let Some((lo, hi)) = integer_bounds(dt) {
        return INTEGER.is_match(lex) && lex.parse::<i128>().is_ok_and(|v| v >= lo && v <= hi);
    }
    match dt {
        xsd::DECIMAL => DECIMAL.is_match(lex),
        xsd::DOUBLE | xsd::FLOAT => DOUBLE.is_match(lex),
        xsd::BOOLEAN => matches!(lex, "true" | "false" | "1" | "0"),
        xsd::DATE => DATE.is_match(lex),
        xsd::DATE_TIME => DATE_TIME.is_match(lex),
        _ => true,
    }
}

/// A value in the XSD numeric value space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Numeric {
    Integer(i128),
    Float(f64),
}

impl Numeric {
    /// Maps a numeric literal into value space; `None` for non-numeric
    /// datatypes or invalid lexical forms.
    pub fn from_literal(lit: &Literal) -> Option<Numeric> {
        if !is_valid_lexical(lit) {
            return None;
        }
        let lex = lit.lexical();
        if integer_bounds(lit.datatype()).is_some() {
            return lex.parse().ok().map(Numeric::Integer);
        }
        match lit.datatype() {
            xsd::DECIMAL | xsd::DOUBLE | xsd::FLOAT => {
                let normalized = match lex.trim_start_matches('+') {
                    "INF" => "inf",
                    "-INF" => "-inf",
                    other => other,
                };
                normalized.parse::<f64>().ok().map(Numeric::Float)
            }
            _ => None,
        }
    }

    fn as_f64(self) -> f64 {
        match self {
            Numeric::Integer(i) => i as f64,
            Numeric::Float(f) => f,
        }
    }
}

impl PartialOrd for Numeric {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Numeric::Integer(a), Numeric::Integer(b)) => Some(a.cmp(b)),
            (a, b) => a.as_f64().partial_cmp(&b.as_f64()),
        }
    }
}
