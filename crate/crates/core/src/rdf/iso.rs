//! Graph isomorphism up to blank-node relabeling.
//!
//! Blank nodes are first partitioned by iterative color refinement over
//! their neighbourhoods; a backtracking search then tries bijections
//! between equally colored nodes. Worst case is exponential, which is fine
//! for fixture-sized graphs.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::{Hash, Hasher};

use super::graph::Graph;
use super::term::{Term, Triple};

pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let ground_a: BTreeSet<Triple> = a.iter().filter(is_ground).collect();
    let ground_b: BTreeSet<Triple> = b.iter().filter(is_ground).collect();
    if ground_a != ground_b {
        return false;
    }
    let blank_a: Vec<Triple> = a.iter().filter(|t| !is_ground(t)).collect();
    let blank_b: Vec<Triple> = b.iter().filter(|t| !is_ground(t)).collect();
    let nodes_a = a.blank_nodes();
    let nodes_b = b.blank_nodes();
    if nodes_a.len() != nodes_b.len() {
        return false;
    }
    let colors_a = refine(&nodes_a, &blank_a);
    let colors_b = refine(&nodes_b, &blank_b);
    let histogram = |c: &HashMap<Term, u64>| {
        let mut h: BTreeMap<u64, usize> = BTreeMap::new();
        for v in c.values() {
            *h.entry(*v).or_default() += 1;
        }
        h
    };
    if histogram(&colors_a) != histogram(&colors_b) {
        return false;
    }

    let target: BTreeSet<Triple> = blank_b.iter().cloned().collect();
    // Most constrained nodes (smallest color classes) first.
    let class_size = histogram(&colors_a);
    let mut order: Vec<Term> = nodes_a.into_iter().collect();
    order.sort_by_key(|n| (class_size[&colors_a[n]], colors_a[n]));

    let mut by_node: HashMap<Term, Vec<Triple>> = HashMap::new();
    for t in &blank_a {
        for n in [&t.subject, &t.object] {
            if n.is_blank() {
                by_node.entry(n.clone()).or_default().push(t.clone());
            }
        }
    }

    let mut search = Search {
        order: &order,
        colors_a: &colors_a,
        colors_b: &colors_b,
        candidates_b: nodes_b.iter().cloned().collect(),
        by_node: &by_node,
        target: &target,
        mapping: HashMap::new(),
        used: BTreeSet::new(),
    };
    search.extend(0)
}

fn is_ground(t: &Triple) -> bool {
    !t.subject.is_blank() && !t.object.is_blank()
}

fn hash_of<T: Hash>(value: &T) -> u64 {
    let mut h = DefaultHasher::new();
    value.hash(&mut h);
    h.finish()
}

/// Weisfeiler-Lehman style refinement: a node's color combines its previous
/// color with the multiset of (direction, predicate, neighbour color).
fn refine(nodes: &BTreeSet<Term>, triples: &[Triple]) -> HashMap<Term, u64> {
    let mut colors: HashMap<Term, u64> = nodes.iter().map(|n| (n.clone(), 0)).collect();
    let neighbour = |colors: &HashMap<Term, u64>, t: &Term| -> u64 {
        match t {
            Term::BlankNode { .. } => colors[t],
            other => hash_of(other),
        }
    };
    let mut classes = 1;
    for _ in 0..=nodes.len() {
        let mut sig: HashMap<Term, Vec<(u8, u64, u64)>> = HashMap::new();
        for t in triples {
            let p = hash_of(&t.predicate);
            if t.subject.is_blank() {
                sig.entry(t.subject.clone()).or_default().push((
                    0,
                    p,
                    neighbour(&colors, &t.object),
                ));
            }
            if t.object.is_blank() {
                sig.entry(t.object.clone()).or_default().push((
                    1,
                    p,
                    neighbour(&colors, &t.subject),
                ));
            }
        }
        let next: HashMap<Term, u64> = nodes
            .iter()
            .map(|n| {
                let mut s = sig.remove(n).unwrap_or_default();
                s.sort_unstable();
                (n.clone(), hash_of(&(colors[n], s)))
            })
            .collect();
        let count = next.values().collect::<BTreeSet<_>>().len();
        colors = next;
        if count == classes {
            break;
        }
        classes = count;
    }
    colors
}

struct Search<'a> {
    order: &'a [Term],
    colors_a: &'a HashMap<Term, u64>,
    colors_b: &'a HashMap<Term, u64>,
    candidates_b: Vec<Term>,
    by_node: &'a HashMap<Term, Vec<Triple>>,
    target: &'a BTreeSet<Triple>,
    mapping: HashMap<Term, Term>,
    used: BTreeSet<Term>,
}

impl Search<'_> {
    fn map(&self, t: &Term) -> Option<Term> {
        if t.is_blank() {
            self.mapping.get(t).cloned()
        } else {
            Some(t.clone())
        }
    }

    /// Every triple touching `node` whose endpoints are all mapped must exist in the target.
    fn consistent(&self, node: &Term) -> bool {
        self.by_node.get(node).into_iter().flatten().all(|t| {
            match (self.map(&t.subject), self.map(&t.object)) {
                (Some(s), Some(o)) => self
                    .target
                    .contains(&Triple::new(s, t.predicate.clone(), o)),
                _ => true,
            }
        })
    }

    fn extend(&mut self, depth: usize) -> bool {
        let Some(node) = self.order.get(depth) else {
            return true;
        };
        let color = self.colors_a[node];
        for i in 0..self.candidates_b.len() {
            let cand = self.candidates_b[i].clone();
            if self.colors_b[&cand] != color || self.used.contains(&cand) {
                continue;
            }
            self.mapping.insert(node.clone(), cand.clone());
            self.used.insert(cand.clone());
            if self.consistent(node) && self.extend(depth + 1) {
                return true;
            }
            self.mapping.remove(node);
            self.used.remove(&cand);
        }
        false
    }
}
