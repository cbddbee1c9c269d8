use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::term::{Term, Triple};
use super::vocab::{self, rdf};

/// An indexed set of triples plus a namespace-prefix map.
///
/// Every query returns triples ordered by subject, then predicate, then object.
#[derive(Clone, Debug, Default)]
pub struct Graph {
    spo: BTreeMap<Term, BTreeMap<Term, BTreeSet<Term>>>,
    pos: HashMap<Term, BTreeSet<(Term, Term)>>,
    osp: HashMap<Term, BTreeSet<(Term, Term)>>,
    len: usize,
    prefixes: BTreeMap<String, String>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// An empty graph with the standard prefixes bound.
    pub fn with_default_prefixes() -> Self {
        let mut g = Self::new();
        for (prefix, ns) in vocab::DEFAULT_PREFIXES {
            g.bind_prefix(prefix, ns);
        }
        g
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn prefixes(&self) -> &BTreeMap<String, String> {
        &self.prefixes
    }

    pub fn bind_prefix(&mut self, prefix: impl Into<String>, namespace: impl Into<String>) {
        self.prefixes.insert(prefix.into(), namespace.into());
    }

    /// Inserts a triple, returning `false` when it was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        let Triple {
            subject,
            predicate,
            object,
        } = triple;
        let inserted = self
            .spo
            .entry(subject.clone())
            .or_default()
            .entry(predicate.clone())
            .or_default()
            .insert(object.clone());
        if !inserted {
            return false;
        }
        self.pos
            .entry(predicate.clone())
            .or_default()
            .insert((subject.clone(), object.clone()));
        self.osp
            .entry(object)
            .or_default()
            .insert((subject, predicate));
        self.len += 1;
        true
    }

    pub fn add(&mut self, subject: Term, predicate: Term, object: Term) -> bool {
        self.insert(Triple::new(subject, predicate, object))
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        let Some(by_pred) = self.spo.get_mut(&triple.subject) else {
            return false;
        };
        let Some(objects) = by_pred.get_mut(&triple.predicate) else {
            return false;
        };
        if !objects.remove(&triple.object) {
            return false;
        }
        if objects.is_empty() {
            by_pred.remove(&triple.predicate);
        }
        if by_pred.is_empty() {
            self.spo.remove(&triple.subject);
        }
        let key = (triple.subject.clone(), triple.object.clone());
        if let Some(set) = self.pos.get_mut(&triple.predicate) {
            set.remove(&key);
            if set.is_empty() {
                self.pos.remove(&triple.predicate);
            }
        }
        let key = (triple.subject.clone(), triple.predicate.clone());
        if let Some(set) = self.osp.get_mut(&triple.object) {
            set.remove(&key);
            if set.is_empty() {
                self.osp.remove(&triple.object);
            }
        }
        self.len -= 1;
        true
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.spo
            .get(&triple.subject)
            .and_then(|m| m.get(&triple.predicate))
            .is_some_and(|o| o.contains(&triple.object))
    }

    /// Every triple, in subject/predicate/object order.
    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().flat_map(|(s, by_pred)| {
            by_pred.iter().flat_map(move |(p, objects)| {
                objects
                    .iter()
                    .map(move |o| Triple::new(s.clone(), p.clone(), o.clone()))
            })
        })
    }

    /// Triples agreeing with every bound position.
    pub fn matching(&self, s: Option<&Term>, p: Option<&Term>, o: Option<&Term>) -> Vec<Triple> {
        match (s, p, o) {
            (Some(s), _, _) => {
                let Some(by_pred) = self.spo.get(s) else {
                    return Vec::new();
                };
                let mut out = Vec::new();
                let preds: Box<dyn Iterator<Item = (&Term, &BTreeSet<Term>)>> = match p {
                    Some(p) => Box::new(by_pred.get_key_value(p).into_iter()),
                    None => Box::new(by_pred.iter()),
                };
                for (pred, objects) in preds {
                    match o {
                        Some(o) if objects.contains(o) => {
                            out.push(Triple::new(s.clone(), pred.clone(), o.clone()))
                        }
                        Some(_) => {}
                        None => out.extend(
                            objects
                                .iter()
                                .map(|obj| Triple::new(s.clone(), pred.clone(), obj.clone())),
                        ),
                    }
                }
                out
            }
            (None, p, Some(o)) => {
                // osp is ordered by (subject, predicate), which is already spo order
                self.osp
                    .get(o)
                    .into_iter()
                    .flatten()
                    .filter(|(_, pred)| p.is_none_or(|p| p == pred))
                    .map(|(subj, pred)| Triple::new(subj.clone(), pred.clone(), o.clone()))
                    .collect()
            }
            (None, Some(p), None) => self
                .pos
                .get(p)
                .into_iter()
                .flatten()
                .map(|(subj, obj)| Triple::new(subj.clone(), p.clone(), obj.clone()))
                .collect(),
            (None, None, None) => self.iter().collect(),
        }
    }

    /// Objects of `(subject, predicate, ?)` in term order.
    pub fn objects(&self, subject: &Term, predicate: &Term) -> Vec<Term> {
        self.spo
            .get(subject)
            .and_then(|m| m.get(predicate))
            .map(|set| set.iter().cloned().collect())
            .unwrap_or_default()
    }

    /// The first object of `(subject, predicate, ?)` in term order.
    pub fn object(&self, subject: &Term, predicate: &Term) -> Option<Term> {
        self.spo
            .get(subject)
            .and_then(|m| m.get(predicate))
            .and_then(|set| set.iter().next().cloned())
    }

    /// Subjects of `(?, predicate, object)` in term order.
    pub fn subjects(&self, predicate: &Term, object: &Term) -> Vec<Term> {
        self.osp
            .get(object)
            .into_iter()
            .flatten()
            .filter(|(_, p)| p == predicate)
            .map(|(s, _)| s.clone())
            .collect()
    }

    /// All distinct subjects in term order.
    pub fn all_subjects(&self) -> impl Iterator<Item = &Term> {
        self.spo.keys()
    }

    /// Number of triples in which `term` appears as subject or object.
    pub fn degree(&self, term: &Term) -> usize {
        let out: usize = self
            .spo
            .get(term)
            .map(|m| m.values().map(BTreeSet::len).sum())
            .unwrap_or(0);
        let inc = self.osp.get(term).map(BTreeSet::len).unwrap_or(0);
        out + inc
    }

    /// Reads the RDF collection starting at `head`. Returns `None` when the
    /// chain is malformed (missing `rdf:first`/`rdf:rest`, or cyclic).
    pub fn list(&self, head: &Term) -> Option<Vec<Term>> {
        let first = Term::iri(rdf::FIRST);
        let rest = Term::iri(rdf::REST);
        let mut items = Vec::new();
        let mut seen = BTreeSet::new();
        let mut node = head.clone();
        while !node.is(rdf::NIL) {
            if !seen.insert(node.clone()) {
                return None;
            }
            let mut firsts = self.objects(&node, &first);
            let mut rests = self.objects(&node, &rest);
            if firsts.len() != 1 || rests.len() != 1 {
                return None;
            }
            items.push(firsts.remove(0));
            node = rests.remove(0);
        }
        Some(items)
    }

    /// Triples forming the RDF collection at `head`, in list order.
    pub fn list_triples(&self, head: &Term) -> Vec<Triple> {
        let first = Term::iri(rdf::FIRST);
        let rest = Term::iri(rdf::REST);
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        let mut node = head.clone();
        while !node.is(rdf::NIL) && seen.insert(node.clone()) {
            out.extend(self.matching(Some(&node), Some(&first), None));
            let next = self.object(&node, &rest);
            out.extend(self.matching(Some(&node), Some(&rest), None));
            match next {
                Some(n) => node = n,
                None => break,
            }
        }
        out
    }

    /// Inserts an RDF collection and returns its head (`rdf:nil` when empty).
    pub fn insert_list(&mut self, items: &[Term], mut fresh: impl FnMut() -> Term) -> Term {
        let mut head = Term::iri(rdf::NIL);
        let nodes: Vec<Term> = items.iter().map(|_| fresh()).collect();
        for (i, item) in items.iter().enumerate().rev() {
            let node = nodes[i].clone();
            self.add(node.clone(), Term::iri(rdf::FIRST), item.clone());
            self.add(node.clone(), Term::iri(rdf::REST), head);
            head = node;
        }
        head
    }

    /// All blank nodes used in the graph, in term order.
    pub fn blank_nodes(&self) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        for t in self.iter() {
            if t.subject.is_blank() {
                out.insert(t.subject.clone());
            }
            if t.object.is_blank() {
                out.insert(t.object);
            }
        }
        out
    }
}

impl Extend<Triple> for Graph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        for t in iter {
            self.insert(t);
        }
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        g.extend(iter);
        g
    }
}

impl PartialEq for Graph {
    /// Triple-set equality; prefixes are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.spo == other.spo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(local: &str) -> Term {
        Term::iri(format!("http://ex.org/{local}"))
    }

    fn people() -> Graph {
        let ty = Term::iri(rdf::TYPE);
        let mut g = Graph::new();
        g.add(ex("alice"), ty.clone(), ex("Person"));
        g.add(ex("bob"), ty.clone(), ex("Person"));
        g.add(ex("acme"), ty.clone(), ex("Company"));
        g.add(ex("alice"), ex("worksFor"), ex("acme"));
        g.add(ex("alice"), ex("hasName"), Term::string("Alice"));
        g
    }

    #[test]
    fn duplicate_insert_is_noop() {
        let mut g = people();
        let n = g.len();
        assert!(!g.add(ex("alice"), ex("worksFor"), ex("acme")));
        assert_eq!(g.len(), n);
    }

    #[test]
    fn match_by_each_position() {
        let g = people();
        let persons = g.matching(None, Some(&Term::iri(rdf::TYPE)), Some(&ex("Person")));
        let subjects: Vec<_> = persons.iter().map(|t| t.subject.clone()).collect();
        assert_eq!(subjects, vec![ex("alice"), ex("bob")]);

        assert_eq!(g.matching(Some(&ex("alice")), None, None).len(), 3);
        assert_eq!(g.matching(None, None, Some(&ex("acme"))).len(), 1);
        assert_eq!(g.matching(None, Some(&ex("hasName")), None).len(), 1);
        assert_eq!(g.matching(None, None, None).len(), 5);
        assert!(Graph::new().matching(None, None, None).is_empty());
    }

    #[test]
    fn match_results_are_sorted() {
        let g = people();
        let all = g.matching(None, None, None);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        let by_type = g.matching(None, Some(&Term::iri(rdf::TYPE)), None);
        let mut sorted = by_type.clone();
        sorted.sort();
        assert_eq!(by_type, sorted);
    }

    #[test]
    fn remove_updates_all_indexes() {
        let mut g = people();
        let t = Triple::new(ex("alice"), ex("worksFor"), ex("acme"));
        assert!(g.remove(&t));
        assert!(!g.contains(&t));
        assert!(g.matching(None, None, Some(&ex("acme"))).is_empty());
        assert!(g.matching(None, Some(&ex("worksFor")), None).is_empty());
        assert_eq!(g.len(), 4);
        assert!(!g.remove(&t));
    }

    #[test]
    fn list_roundtrip() {
        let mut g = Graph::new();
        let mut n = 0;
        let head = g.insert_list(&[Term::integer(1), Term::integer(2)], || {
            n += 1;
            Term::blank(format!("l{n}"))
        });
        assert_eq!(g.len(), 4);
        assert_eq!(
            g.list(&head),
            Some(vec![Term::integer(1), Term::integer(2)])
        );
        assert_eq!(g.list_triples(&head).len(), 4);
        assert_eq!(g.list(&Term::iri(rdf::NIL)), Some(vec![]));
    }

    #[test]
    fn malformed_list_detected() {
        let mut g = Graph::new();
        g.add(Term::blank("a"), Term::iri(rdf::FIRST), Term::integer(1));
        assert_eq!(g.list(&Term::blank("a")), None);
        g.add(Term::blank("a"), Term::iri(rdf::REST), Term::blank("a"));
        assert_eq!(g.list(&Term::blank("a")), None);
    }
}
