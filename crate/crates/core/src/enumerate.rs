//! Exhaustive generators of small complexes and graphs, one representative
//! per isomorphism class. Vertices are labelled `0..n`.

use std::collections::{BTreeSet, HashSet};

use crate::canon::{self, CanonicalKey, Structure};
use crate::complex::{Complex2, Face, Vertex};
use crate::family::FamilySpec;
use crate::graph::Graph;

/// Largest vertex count the bitmask representation supports.
pub const MAX_VERTICES: usize = 8;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Small {
    n: usize,
    edges: u64,
    tris: u64,
}

struct Index {
    pairs: Vec<(usize, usize)>,
    triples: Vec<(usize, usize, usize)>,
}

impl Index {
    fn new(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "at most {MAX_VERTICES} vertices");
        let mut pairs = Vec::new();
        let mut triples = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                pairs.push((a, b));
                for c in b + 1..n {
                    triples.push((a, b, c));
                }
            }
        }
        Index { pairs, triples }
    }

    fn pair(&self, a: usize, b: usize) -> usize {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        self.pairs.iter().position(|&p| p == (a, b)).expect("pair in range")
    }

    fn key(&self, s: &Small) -> CanonicalKey {
        let edges = self
            .pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| s.edges >> i & 1 == 1)
            .map(|(_, &(a, b))| (a as u32, b as u32))
            .collect();
        let tris = self
            .triples
            .iter()
            .enumerate()
            .filter(|&(i, _)| s.tris >> i & 1 == 1)
            .map(|(_, &(a, b, c))| [a as u32, b as u32, c as u32])
            .collect();
        canon::canonical_key(&Structure::new(s.n, edges, tris, None), canon::DEFAULT_LEAF_LIMIT)
            .expect("small structures are canonised exactly")
    }

    fn complex(&self, s: &Small) -> Complex2 {
        let label = |i: usize| Vertex::from(i.to_string());
        let mut k = Complex2::new();
        for v in 0..s.n {
            k.add_face(&Face::new([label(v)]).expect("vertex"));
        }
        for (i, &(a, b)) in self.pairs.iter().enumerate() {
            if s.edges >> i & 1 == 1 {
                k.add_face(&Face::new([label(a), label(b)]).expect("edge"));
            }
        }
        for (i, &(a, b, c)) in self.triples.iter().enumerate() {
            if s.tris >> i & 1 == 1 {
                k.add_face(&Face::new([label(a), label(b), label(c)]).expect("triangle"));
            }
        }
        k
    }
}

fn closure(n: usize, with_triangles: bool) -> Vec<Complex2> {
    let idx = Index::new(n);
    let start = Small { n, edges: 0, tris: 0 };
    let mut seen: HashSet<CanonicalKey> = HashSet::from([idx.key(&start)]);
    let mut all = vec![start];
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in &frontier {
            let mut children = Vec::new();
            for i in 0..idx.pairs.len() {
                if s.edges >> i & 1 == 0 {
                    children.push(Small {
                        edges: s.edges | 1 << i,
                        ..*s
                    });
                }
            }
            if with_triangles {
                for (i, &(a, b, c)) in idx.triples.iter().enumerate() {
                    let sides = [idx.pair(a, b), idx.pair(a, c), idx.pair(b, c)];
                    if s.tris >> i & 1 == 0 && sides.iter().all(|&e| s.edges >> e & 1 == 1) {
                        children.push(Small {
                            tris: s.tris | 1 << i,
                            ..*s
                        });
                    }
                }
            }
            for child in children {
                if seen.insert(idx.key(&child)) {
                    next.push(child);
                }
            }
        }
        all.extend(next.iter().copied());
        frontier = next;
    }
    all.iter().map(|s| idx.complex(s)).collect()
}

/// All 2-complexes with vertex set exactly `0..n`, up to isomorphism.
pub fn complexes_on(n: usize) -> Vec<Complex2> {
    closure(n, true)
}

/// All 2-complexes with 1 to `n` vertices, up to isomorphism.
pub fn complexes_up_to(n: usize) -> Vec<Complex2> {
    (1..=n).flat_map(complexes_on).collect()
}

/// All graphs with vertex set exactly `0..n`, up to isomorphism.
pub fn graphs_on(n: usize) -> Vec<Graph> {
    closure(n, false)
        .into_iter()
        .map(|k| k.as_graph().expect("no triangles"))
        .collect()
}

pub fn graphs_up_to(n: usize) -> Vec<Graph> {
    (1..=n).flat_map(graphs_on).collect()
}

/// Subtrees of `g` with at most `max_vertices` vertices, as edge sets over
/// the given vertex; single vertices are included.
fn subtrees(g: &Graph, max_vertices: usize) -> Vec<Graph> {
    let mut seen: BTreeSet<(BTreeSet<Vertex>, BTreeSet<[Vertex; 2]>)> = BTreeSet::new();
    let mut frontier: Vec<Graph> = g
        .vertices()
        .iter()
        .map(|v| {
            let mut t = Graph::new();
            t.add_vertex(v.clone());
            t
        })
        .collect();
    let mut out = Vec::new();
    while let Some(t) = frontier.pop() {
        if !seen.insert((t.vertices().clone(), t.edges().clone())) {
            continue;
        }
        if t.num_vertices() < max_vertices {
            for u in t.vertices() {
                for w in g.neighbors(u) {
                    if !t.vertices().contains(&w) {
                        let mut bigger = t.clone();
                        bigger.add_edge(u.clone(), w);
                        frontier.push(bigger);
                    }
                }
            }
        }
        out.push(t);
    }
    out
}

/// Members of R(F) with at most `n` vertices, up to isomorphism, built by
/// attaching cones over embedded members of F to a point. F must consist
/// of trees.
pub fn reducible_complexes_up_to(f: &FamilySpec, n: usize) -> Vec<Complex2> {
    assert!(f.trees_only(), "reverse growth needs a tree family");
    let max_tree = f.members_up_to(n).iter().map(Graph::num_vertices).max().unwrap_or(0);
    let point = Complex2::point("0");
    let mut seen: HashSet<CanonicalKey> = HashSet::from([point.canonical_form().expect("small")]);
    let mut all = vec![point.clone()];
    let mut frontier = vec![point];
    for size in 2..=n {
        let mut next = Vec::new();
        let apex = Vertex::from((size - 1).to_string());
        for k in &frontier {
            for t in subtrees(&k.one_skeleton(), max_tree) {
                if !f.contains(&t) {
                    continue;
                }
                let grown = k.union(&Complex2::from(&t).cone(apex.clone()).expect("fresh apex"));
                if seen.insert(grown.canonical_form().expect("small")) {
                    next.push(grown);
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

/// 2-trees with 1 to `max_triangles` triangles, up to isomorphism, grown by
/// gluing a triangle with a fresh vertex onto an existing edge.
pub fn two_trees_up_to(max_triangles: usize) -> Vec<Complex2> {
    let start = Complex2::parse("0 1 2").expect("triangle");
    let mut seen: HashSet<CanonicalKey> = HashSet::from([start.canonical_form().expect("small")]);
    let mut all = vec![start.clone()];
    let mut frontier = vec![start];
    for t in 2..=max_triangles {
        let fresh = Vertex::from((t + 1).to_string());
        let mut next = Vec::new();
        for k in &frontier {
            for [a, b] in k.edges() {
                let mut grown = k.clone();
                grown.add_face(&Face::new([a.clone(), b.clone(), fresh.clone()]).expect("triangle"));
                if seen.insert(grown.canonical_form().expect("small")) {
                    next.push(grown);
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}
