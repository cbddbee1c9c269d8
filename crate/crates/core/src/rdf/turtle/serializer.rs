use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write;

use super::super::graph::Graph;
use super::super::term::{escape_string, Literal, Term};
use super::super::vocab::{rdf, xsd};

/// Serializes a graph as Turtle.
///
/// Blank nodes referenced exactly once are written inline, as `[ ... ]` or
/// as `( ... )` when they head a well-formed collection. Remaining blank
/// nodes get fresh `_:bN` labels in order of first use.
pub fn serialize_turtle(graph: &Graph) -> String {
    Writer::new(graph).write()
}

struct Writer<'g> {
    graph: &'g Graph,
    /// blank nodes written inline where they are referenced
    inline: BTreeSet<Term>,
    /// inline blank nodes that head a collection, with their items
    lists: HashMap<Term, Vec<Term>>,
    labels: HashMap<Term, String>,
}

fn is_simple_local(local: &str) -> bool {
    let mut chars = local.chars();
    match chars.next() {
        None => return true,
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {}
        Some(_) => return false,
    }
    !local.ends_with('.')
        && local
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

fn is_integer_lexical(s: &str) -> bool {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

fn is_decimal_lexical(s: &str) -> bool {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    match body.split_once('.') {
        Some((int, frac)) => {
            int.bytes().all(|b| b.is_ascii_digit())
                && !frac.is_empty()
                && frac.bytes().all(|b| b.is_ascii_digit())
        }
        None => false,
    }
}

fn is_double_lexical(s: &str) -> bool {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    let Some(i) = body.find(['e', 'E']) else {
        return false;
    };
    let (mantissa, exp) = (&body[..i], &body[i + 1..]);
    let exp = exp.strip_prefix(['+', '-']).unwrap_or(exp);
    let mantissa_ok = match mantissa.split_once('.') {
        Some((a, b)) => {
            (!a.is_empty() || !b.is_empty())
                && a.bytes().all(|c| c.is_ascii_digit())
                && b.bytes().all(|c| c.is_ascii_digit())
        }
        None => !mantissa.is_empty() && mantissa.bytes().all(|c| c.is_ascii_digit()),
    };
    mantissa_ok && !exp.is_empty() && exp.bytes().all(|c| c.is_ascii_digit())
}

impl<'g> Writer<'g> {
    fn new(graph: &'g Graph) -> Self {
        let mut w = Writer {
            graph,
            inline: BTreeSet::new(),
            lists: HashMap::new(),
            labels: HashMap::new(),
        };
        w.plan_inlining();
        w
    }

    fn plan_inlining(&mut self) {
        let g = self.graph;
        let mut refs: BTreeMap<Term, usize> = BTreeMap::new();
        for t in g.iter() {
            if t.object.is_blank() {
                *refs.entry(t.object.clone()).or_default() += 1;
            }
        }
        let mut candidates: BTreeSet<Term> = refs
            .iter()
            .filter(|(_, &n)| n == 1)
            .map(|(b, _)| b.clone())
            .collect();

        // Collections: every node an inline candidate holding only first/rest.
        let first = Term::iri(rdf::FIRST);
        let rest = Term::iri(rdf::REST);
        let mut list_members: BTreeSet<Term> = BTreeSet::new();
        for head in candidates.iter() {
            if list_members.contains(head) {
                continue;
            }
            let mut node = head.clone();
            let mut nodes = Vec::new();
            let mut ok = true;
            while !node.is(rdf::NIL) {
                let outgoing = g.matching(Some(&node), None, None);
                if !node.is_blank()
                    || !candidates.contains(&node)
                    || nodes.contains(&node)
                    || outgoing.len() != 2
                    || g.objects(&node, &first).len() != 1
                    || g.objects(&node, &rest).len() != 1
                {
                    ok = false;
                    break;
                }
                nodes.push(node.clone());
                node = g.object(&node, &rest).unwrap();
            }
            // only heads not themselves pointed at by rdf:rest start a list
            let pointed_by_rest = !g.matching(None, Some(&rest), Some(head)).is_empty();
            if ok && !pointed_by_rest {
                let items = g.list(head).unwrap_or_default();
                list_members.extend(nodes.iter().skip(1).cloned());
                self.lists.insert(head.clone(), items);
            }
        }

        // Drop candidates unreachable from a root (cycles among blank nodes).
        loop {
            let roots: Vec<Term> = g
                .all_subjects()
                .filter(|s| !candidates.contains(*s))
                .cloned()
                .collect();
            let mut reached = BTreeSet::new();
            let mut stack = roots;
            while let Some(s) = stack.pop() {
                for t in g.matching(Some(&s), None, None) {
                    if candidates.contains(&t.object) && reached.insert(t.object.clone()) {
                        stack.push(t.object);
                    }
                }
            }
            let unreached = candidates.iter().find(|c| !reached.contains(*c)).cloned();
            match unreached {
                Some(c) => {
                    candidates.remove(&c);
                    self.lists.remove(&c);
                }
                None => break,
            }
        }
        // A list whose tail nodes lost candidacy is written as nested nodes.
        self.lists.retain(|head, _| {
            let mut node = head.clone();
            while !node.is(rdf::NIL) {
                if !candidates.contains(&node) {
                    return false;
                }
                node = g.object(&node, &rest).unwrap();
            }
            true
        });
        self.inline = candidates;
    }

    fn label(&mut self, b: &Term) -> String {
        let n = self.labels.len();
        self.labels
            .entry(b.clone())
            .or_insert_with(|| format!("b{n}"))
            .clone()
    }

    fn iri(&self, iri: &str) -> String {
        let mut best: Option<(&str, &str)> = None;
        for (prefix, ns) in self.graph.prefixes() {
            if let Some(local) = iri.strip_prefix(ns.as_str()) {
                if is_simple_local(local) && best.is_none_or(|(_, n)| ns.len() > n.len()) {
                    best = Some((prefix, ns));
                }
            }
        }
        match best {
            Some((prefix, ns)) => format!("{prefix}:{}", &iri[ns.len()..]),
            None => format!("<{}>", escape_iri(iri)),
        }
    }

    fn literal(&self, lit: &Literal) -> String {
        let lex = lit.lexical();
        if let Some(lang) = lit.language() {
            return format!("\"{}\"@{lang}", escape_string(lex));
        }
        match lit.datatype() {
            xsd::STRING => format!("\"{}\"", escape_string(lex)),
            xsd::INTEGER if is_integer_lexical(lex) => lex.to_string(),
            xsd::DECIMAL if is_decimal_lexical(lex) => lex.to_string(),
            xsd::DOUBLE if is_double_lexical(lex) => lex.to_string(),
            xsd::BOOLEAN if lex == "true" || lex == "false" => lex.to_string(),
            dt => format!("\"{}\"^^{}", escape_string(lex), self.iri(dt)),
        }
    }

    fn term(&mut self, term: &Term, indent: usize) -> String {
        match term {
            Term::Iri { value } => self.iri(value),
            Term::Literal(lit) => self.literal(lit),
            Term::BlankNode { .. } if self.lists.contains_key(term) => {
                let items = self.lists[term].clone();
                let parts: Vec<String> = items.iter().map(|i| self.term(i, indent)).collect();
                format!("( {} )", parts.join(" "))
            }
            Term::BlankNode { .. } if self.inline.contains(term) => {
                let body = self.predicate_objects(term, indent + 1);
                if body.is_empty() {
                    "[]".to_string()
                } else {
                    let pad = "    ".repeat(indent);
                    format!("[\n{body}\n{pad}]")
                }
            }
            Term::BlankNode { .. } => format!("_:{}", self.label(term)),
        }
    }

    fn predicate_objects(&mut self, subject: &Term, indent: usize) -> String {
        let pad = "    ".repeat(indent);
        let triples = self.graph.matching(Some(subject), None, None);
        let mut by_pred: Vec<(Term, Vec<Term>)> = Vec::new();
        for t in triples {
            match by_pred.last_mut() {
                Some((p, objs)) if *p == t.predicate => objs.push(t.object),
                _ => by_pred.push((t.predicate, vec![t.object])),
            }
        }
        // rdf:type first, as `a`
        by_pred.sort_by_key(|(p, _)| !p.is(rdf::TYPE));
        let mut lines = Vec::new();
        for (p, objs) in by_pred {
            let pred = if p.is(rdf::TYPE) {
                "a".to_string()
            } else {
                self.term(&p, indent)
            };
            let objs: Vec<String> = objs.iter().map(|o| self.term(o, indent)).collect();
            lines.push(format!("{pad}{pred} {}", objs.join(", ")));
        }
        lines.join(" ;\n")
    }

    fn write(mut self) -> String {
        let mut out = String::new();
        for (prefix, ns) in self.graph.prefixes() {
            let _ = writeln!(out, "@prefix {prefix}: <{}> .", escape_iri(ns));
        }
        let subjects: Vec<Term> = self
            .graph
            .all_subjects()
            .filter(|s| !self.inline.contains(*s))
            .cloned()
            .collect();
        if !subjects.is_empty() && !out.is_empty() {
            out.push('\n');
        }
        for s in subjects {
            let head = self.term(&s, 0);
            let body = self.predicate_objects(&s, 1);
            let _ = writeln!(out, "{head}\n{body} .\n");
        }
        out
    }
}

fn escape_iri(iri: &str) -> String {
    let mut out = String::with_capacity(iri.len());
    for c in iri.chars() {
        if (c as u32) <= 0x20 || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\') {
            let _ = write!(out, "\\u{:04X}", c as u32);
        } else {
            out.push(c);
        }
    }
    out
}
