use std::collections::HashMap;

use super::super::graph::Graph;
use super::super::term::{Term, Triple};
use super::super::vocab::{self, rdf, xsd};
use super::iri::{has_scheme, resolve};
use super::TurtleError;

/// Parses a Turtle document into a graph.
///
/// `base` is used to resolve relative IRIs until the document declares its
/// own base. The standard prefixes (`rdf`, `rdfs`, `xsd`, `sh`, `xsh`) are
/// pre-bound; a document may rebind them.
pub fn parse_turtle(document: &str, base: Option<&str>) -> Result<Graph, TurtleError> {
    let mut parser = Parser::new(document, base);
    parser.document()?;
    Ok(parser.graph)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    base: Option<String>,
    prefixes: HashMap<String, String>,
    bnode_labels: HashMap<String, Term>,
    next_bnode: usize,
    graph: Graph,
}

fn is_pn_chars_base(c: char) -> bool {
    c.is_ascii_alphabetic()
        || (c as u32 > 0x7f && c != '\u{d7}' && c != '\u{f7}' && !c.is_whitespace())
}

fn is_pn_chars_u(c: char) -> bool {
    is_pn_chars_base(c) || c == '_'
}

fn is_pn_chars(c: char) -> bool {
    is_pn_chars_u(c) || c == '-' || c.is_ascii_digit() || c == '\u{b7}'
}

fn is_delimiter(c: Option<char>) -> bool {
    match c {
        None => true,
        Some(c) => {
            c.is_whitespace()
                || matches!(
                    c,
                    '.' | ';' | ',' | ')' | ']' | '#' | '<' | '[' | '(' | '"' | '\''
                )
        }
    }
}

impl Parser {
    fn new(document: &str, base: Option<&str>) -> Self {
        let mut graph = Graph::new();
        let mut prefixes = HashMap::new();
        for (prefix, ns) in vocab::DEFAULT_PREFIXES {
            prefixes.insert(prefix.to_string(), ns.to_string());
            graph.bind_prefix(prefix, ns);
        }
        Parser {
            chars: document.chars().collect(),
            pos: 0,
            base: base.map(str::to_string),
            prefixes,
            bnode_labels: HashMap::new(),
            next_bnode: 0,
            graph,
        }
    }

    fn location(&self, pos: usize) -> (usize, usize) {
        let mut line = 1;
        let mut column = 1;
        for &c in &self.chars[..pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        (line, column)
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> TurtleError {
        let (line, column) = self.location(pos);
        TurtleError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn error(&self, message: impl Into<String>) -> TurtleError {
        self.error_at(self.pos, message)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars()
            .enumerate()
            .all(|(i, c)| self.peek_at(i) == Some(c))
    }

    fn starts_with_keyword_ci(&self, kw: &str) -> bool {
        let n = kw.chars().count();
        kw.chars()
            .enumerate()
            .all(|(i, c)| self.peek_at(i).is_some_and(|d| d.eq_ignore_ascii_case(&c)))
            && self.peek_at(n).is_some_and(char::is_whitespace)
    }

    fn expect(&mut self, c: char) -> Result<(), TurtleError> {
        self.skip_ws();
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => Err(self.error(format!("expected '{c}', found '{d}'"))),
            None => Err(self.error(format!("expected '{c}', found end of input"))),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += 1;
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn fresh_bnode(&mut self) -> Term {
        let t = Term::blank(format!("b{}", self.next_bnode));
        self.next_bnode += 1;
        t
    }

    fn emit(&mut self, s: Term, p: Term, o: Term) {
        self.graph.insert(Triple::new(s, p, o));
    }

    fn document(&mut self) -> Result<(), TurtleError> {
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                return Ok(());
            }
            self.statement()?;
        }
    }

    fn statement(&mut self) -> Result<(), TurtleError> {
        if self.starts_with("@prefix") {
            self.pos += "@prefix".len();
            self.prefix_decl()?;
            self.expect('.')
        } else if self.starts_with("@base") {
            self.pos += "@base".len();
            self.base_decl()?;
            self.expect('.')
        } else if self.starts_with_keyword_ci("PREFIX") {
            self.pos += "PREFIX".len();
            self.prefix_decl()
        } else if self.starts_with_keyword_ci("BASE") {
            self.pos += "BASE".len();
            self.base_decl()
        } else {
            self.triples()?;
            self.expect('.')
        }
    }

    fn prefix_decl(&mut self) -> Result<(), TurtleError> {
        self.skip_ws();
        let start = self.pos;
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if !(is_pn_chars(c) || c == '.') {
                return Err(self.error(format!("invalid character '{c}' in prefix name")));
            }
            prefix.push(c);
            self.pos += 1;
        }
        if self.bump() != Some(':') {
            return Err(self.error_at(start, "expected prefix name ending in ':'"));
        }
        self.skip_ws();
        let iri = self.iri_ref()?;
        self.prefixes.insert(prefix.clone(), iri.clone());
        self.graph.bind_prefix(prefix, iri);
        Ok(())
    }

    fn base_decl(&mut self) -> Result<(), TurtleError> {
        self.skip_ws();
        let iri = self.iri_ref()?;
        self.base = Some(iri);
        Ok(())
    }

    fn triples(&mut self) -> Result<(), TurtleError> {
        self.skip_ws();
        if self.peek() == Some('[') {
            let subject = self.blank_node_property_list()?;
            self.skip_ws();
            if self.peek() != Some('.') {
                self.predicate_object_list(&subject)?;
            }
            Ok(())
        } else {
            let subject = self.subject()?;
            self.predicate_object_list(&subject)
        }
    }

    fn subject(&mut self) -> Result<Term, TurtleError> {
        self.skip_ws();
        match self.peek() {
            Some('<') => Ok(Term::iri(self.iri_ref()?)),
            Some('_') if self.peek_at(1) == Some(':') => self.blank_node_label(),
            Some('(') => self.collection(),
            Some('"') | Some('\'') => Err(self.error("a literal cannot be a subject")),
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' => {
                Err(self.error("a literal cannot be a subject"))
            }
            Some(_) => Ok(Term::iri(self.prefixed_name()?)),
            None => Err(self.error("unexpected end of input, expected subject")),
        }
    }

    fn predicate_object_list(&mut self, subject: &Term) -> Result<(), TurtleError> {
        self.verb_object_list(subject)?;
        loop {
            self.skip_ws();
            if self.peek() != Some(';') {
                return Ok(());
            }
            while self.peek() == Some(';') {
                self.pos += 1;
                self.skip_ws();
            }
            if matches!(self.peek(), Some('.') | Some(']') | None) {
                return Ok(());
            }
            self.verb_object_list(subject)?;
        }
    }

    fn verb_object_list(&mut self, subject: &Term) -> Result<(), TurtleError> {
        let predicate = self.verb()?;
        loop {
            let object = self.object()?;
            self.emit(subject.clone(), predicate.clone(), object);
            self.skip_ws();
            if self.peek() == Some(',') {
                self.pos += 1;
            } else {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> Result<Term, TurtleError> {
        self.skip_ws();
        match self.peek() {
            Some('a') if is_delimiter(self.peek_at(1)) => {
                self.pos += 1;
                Ok(Term::iri(rdf::TYPE))
            }
            Some('<') => Ok(Term::iri(self.iri_ref()?)),
            Some(c) if c == ':' || is_pn_chars_base(c) => Ok(Term::iri(self.prefixed_name()?)),
            Some(c) => Err(self.error(format!("expected predicate, found '{c}'"))),
            None => Err(self.error("unexpected end of input, expected predicate")),
        }
    }

    fn object(&mut self) -> Result<Term, TurtleError> {
        self.skip_ws();
        match self.peek() {
            Some('<') => Ok(Term::iri(self.iri_ref()?)),
            Some('_') if self.peek_at(1) == Some(':') => self.blank_node_label(),
            Some('[') => self.blank_node_property_list(),
            Some('(') => self.collection(),
            Some('"') | Some('\'') => self.rdf_literal(),
            Some(c) if c.is_ascii_digit() || matches!(c, '+' | '-' | '.') => self.numeric_literal(),
            Some(_) if self.starts_with("true") && is_delimiter(self.peek_at(4)) => {
                self.pos += 4;
                Ok(Term::typed("true", xsd::BOOLEAN))
            }
            Some(_) if self.starts_with("false") && is_delimiter(self.peek_at(5)) => {
                self.pos += 5;
                Ok(Term::typed("false", xsd::BOOLEAN))
            }
            Some(c) if c == ':' || is_pn_chars_base(c) => Ok(Term::iri(self.prefixed_name()?)),
            Some(c) => Err(self.error(format!("expected object, found '{c}'"))),
            None => Err(self.error("unexpected end of input, expected object")),
        }
    }

    fn blank_node_property_list(&mut self) -> Result<Term, TurtleError> {
        self.expect('[')?;
        let node = self.fresh_bnode();
        self.skip_ws();
        if self.peek() == Some(']') {
            self.pos += 1;
            return Ok(node);
        }
        self.predicate_object_list(&node)?;
        self.expect(']')?;
        Ok(node)
    }

    fn collection(&mut self) -> Result<Term, TurtleError> {
        self.expect('(')?;
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(')') => {
                    self.pos += 1;
                    break;
                }
                None => return Err(self.error("unterminated collection")),
                _ => items.push(self.object()?),
            }
        }
        let mut head = Term::iri(rdf::NIL);
        let nodes: Vec<Term> = items.iter().map(|_| self.fresh_bnode()).collect();
        for (node, item) in nodes.into_iter().zip(items).rev() {
            self.emit(node.clone(), Term::iri(rdf::FIRST), item);
            self.emit(node.clone(), Term::iri(rdf::REST), head);
            head = node;
        }
        Ok(head)
    }

    fn blank_node_label(&mut self) -> Result<Term, TurtleError> {
        let start = self.pos;
        self.pos += 2;
        let mut label = String::new();
        match self.peek() {
            Some(c) if is_pn_chars_u(c) || c.is_ascii_digit() => {
                label.push(c);
                self.pos += 1;
            }
            _ => return Err(self.error_at(start, "invalid blank node label")),
        }
        while let Some(c) = self.peek() {
            if is_pn_chars(c) || c == '.' {
                label.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        while label.ends_with('.') {
            label.pop();
            self.pos -= 1;
        }
        if let Some(t) = self.bnode_labels.get(&label) {
            return Ok(t.clone());
        }
        let t = self.fresh_bnode();
        self.bnode_labels.insert(label, t.clone());
        Ok(t)
    }

    fn iri_ref(&mut self) -> Result<String, TurtleError> {
        let start = self.pos;
        if self.bump() != Some('<') {
            return Err(self.error_at(start, "expected '<'"));
        }
        let mut iri = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error_at(start, "unterminated IRI")),
                Some('>') => break,
                Some('\\') => {
                    let c = self.unicode_escape()?;
                    iri.push(c);
                }
                Some(c)
                    if c.is_whitespace()
                        || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`') =>
                {
                    return Err(
                        self.error_at(self.pos - 1, format!("invalid character {c:?} in IRI"))
                    );
                }
                Some(c) => iri.push(c),
            }
        }
        if has_scheme(&iri) {
            return Ok(iri);
        }
        match &self.base {
            Some(base) => Ok(resolve(base, &iri)),
            None => Err(self.error_at(start, format!("relative IRI <{iri}> without a base"))),
        }
    }

    fn unicode_escape(&mut self) -> Result<char, TurtleError> {
        let at = self.pos - 1;
        let len = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return Err(self.error_at(at, "invalid escape sequence")),
        };
        let mut code = 0u32;
        for _ in 0..len {
            let d = self
                .bump()
                .and_then(|c| c.to_digit(16))
                .ok_or_else(|| self.error_at(at, "invalid unicode escape"))?;
            code = code * 16 + d;
        }
        char::from_u32(code).ok_or_else(|| self.error_at(at, "invalid unicode code point"))
    }

    fn prefixed_name(&mut self) -> Result<String, TurtleError> {
        let start = self.pos;
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if is_pn_chars(c) || c == '.' {
                prefix.push(c);
                self.pos += 1;
            } else {
                let c = self.peek().unwrap();
                return Err(self.error(format!("unexpected character '{c}'")));
            }
        }
        if self.peek() != Some(':') {
            return Err(self.error_at(start, format!("expected prefixed name, found '{prefix}'")));
        }
        self.pos += 1;
        let mut local = String::new();
        // Trailing dots belong to the statement, so track the last position
        // that may legally end the name.
        let mut committed = (self.pos, 0usize);
        while let Some(c) = self.peek() {
            if is_pn_chars(c) || c == ':' {
                local.push(c);
                self.pos += 1;
            } else if c == '.' {
                local.push(c);
                self.pos += 1;
                continue;
            } else if c == '%' {
                let h1 = self.peek_at(1).filter(char::is_ascii_hexdigit);
                let h2 = self.peek_at(2).filter(char::is_ascii_hexdigit);
                match (h1, h2) {
                    (Some(a), Some(b)) => {
                        local.push('%');
                        local.push(a);
                        local.push(b);
                        self.pos += 3;
                    }
                    _ => return Err(self.error("invalid percent escape in local name")),
                }
            } else if c == '\\' {
                match self.peek_at(1) {
                    Some(e) if "_~.-!$&'()*+,;=/?#@%".contains(e) => {
                        local.push(e);
                        self.pos += 2;
                    }
                    _ => return Err(self.error("invalid escape in local name")),
                }
            } else {
                break;
            }
            committed = (self.pos, local.len());
        }
        self.pos = committed.0;
        local.truncate(committed.1);
        match self.prefixes.get(&prefix) {
            Some(ns) => Ok(format!("{ns}{local}")),
            None => {
                let (line, column) = self.location(start);
                Err(TurtleError::UnresolvedPrefix {
                    prefix,
                    line,
                    column,
                })
            }
        }
    }

    fn rdf_literal(&mut self) -> Result<Term, TurtleError> {
        let lexical = self.string()?;
        match self.peek() {
            Some('@') => {
                let at = self.pos;
                self.pos += 1;
                let mut tag = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphabetic() {
                        tag.push(c);
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                if tag.is_empty() {
                    return Err(self.error_at(at, "malformed language tag"));
                }
                while self.peek() == Some('-') {
                    let mut sub = String::new();
                    self.pos += 1;
                    while let Some(c) = self.peek() {
                        if c.is_ascii_alphanumeric() {
                            sub.push(c);
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                    if sub.is_empty() {
                        return Err(self.error_at(at, "malformed language tag"));
                    }
                    tag.push('-');
                    tag.push_str(&sub);
                }
                Ok(Term::lang(lexical, tag))
            }
            Some('^') if self.peek_at(1) == Some('^') => {
                self.pos += 2;
                let datatype = match self.peek() {
                    Some('<') => self.iri_ref()?,
                    Some(_) => self.prefixed_name()?,
                    None => return Err(self.error("expected datatype IRI")),
                };
                Ok(Term::typed(lexical, datatype))
            }
            _ => Ok(Term::string(lexical)),
        }
    }

    fn string(&mut self) -> Result<String, TurtleError> {
        let start = self.pos;
        let quote = self.bump().expect("caller checked quote");
        let long = self.peek() == Some(quote) && self.peek_at(1) == Some(quote);
        if long {
            self.pos += 2;
        }
        let mut out = String::new();
        loop {
            let Some(c) = self.bump() else {
                return Err(self.error_at(start, "unterminated string literal"));
            };
            if c == quote {
                if !long {
                    return Ok(out);
                }
                if self.peek() == Some(quote) && self.peek_at(1) == Some(quote) {
                    // A long string may end with up to two extra quote characters.
                    while self.peek_at(2) == Some(quote) {
                        out.push(quote);
                        self.pos += 1;
                    }
                    self.pos += 2;
                    return Ok(out);
                }
                out.push(c);
            } else if c == '\\' {
                let esc = self.peek();
                let simple = match esc {
                    Some('t') => Some('\t'),
                    Some('b') => Some('\u{8}'),
                    Some('n') => Some('\n'),
                    Some('r') => Some('\r'),
                    Some('f') => Some('\u{c}'),
                    Some('"') => Some('"'),
                    Some('\'') => Some('\''),
                    Some('\\') => Some('\\'),
                    _ => None,
                };
                match simple {
                    Some(ch) => {
                        self.pos += 1;
                        out.push(ch);
                    }
                    None => out.push(self.unicode_escape()?),
                }
            } else if !long && (c == '\n' || c == '\r') {
                return Err(self.error_at(self.pos - 1, "line break in short string literal"));
            } else {
                out.push(c);
            }
        }
    }

    fn numeric_literal(&mut self) -> Result<Term, TurtleError> {
        let start = self.pos;
        let mut text = String::new();
        if let Some(c @ ('+' | '-')) = self.peek() {
            text.push(c);
            self.pos += 1;
        }
        let int_digits = self.digits(&mut text);
        let mut frac_digits = 0;
        let mut is_decimal = false;
        if self.peek() == Some('.') {
            let next = self.peek_at(1);
            let exp_follows = matches!(next, Some('e' | 'E')) && int_digits > 0;
            if next.is_some_and(|c| c.is_ascii_digit()) || exp_follows {
                text.push('.');
                self.pos += 1;
                frac_digits = self.digits(&mut text);
                is_decimal = true;
            }
        }
        if int_digits == 0 && frac_digits == 0 {
            return Err(self.error_at(start, "malformed numeric literal"));
        }
        if let Some(e @ ('e' | 'E')) = self.peek() {
            text.push(e);
            self.pos += 1;
            if let Some(s @ ('+' | '-')) = self.peek() {
                text.push(s);
                self.pos += 1;
            }
            if self.digits(&mut text) == 0 {
                return Err(self.error_at(start, "malformed exponent"));
            }
            return Ok(Term::typed(text, xsd::DOUBLE));
        }
        if is_decimal {
            Ok(Term::typed(text, xsd::DECIMAL))
        } else {
            Ok(Term::typed(text, xsd::INTEGER))
        }
    }

    fn digits(&mut self, out: &mut String) -> usize {
        let mut n = 0;
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            out.push(c);
            self.pos += 1;
            n += 1;
        }
        n
    }
}
