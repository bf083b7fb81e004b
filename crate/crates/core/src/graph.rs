//! Finite simple undirected graphs. A graph doubles as a vertex link and as a
//! one-dimensional complex.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::canon::CanonicalKey;
use crate::complex::{parse_face_lines, sorted2, Complex2, Vertex};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Graph {
    vertices: BTreeSet<Vertex>,
    edges: BTreeSet<[Vertex; 2]>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses face-list text whose faces have at most two labels.
    pub fn parse(text: &str) -> Result<Self> {
        let mut g = Graph::new();
        for (line, face) in parse_face_lines(text)? {
            match face.as_slice() {
                [v] => g.add_vertex(v.clone()),
                [a, b] => g.add_edge(a.clone(), b.clone()),
                _ => return Err(Error::parse(line, "graphs only have faces of size one or two")),
            }
        }
        Ok(g)
    }

    pub fn from_edges<V: Into<Vertex>>(edges: impl IntoIterator<Item = (V, V)>) -> Self {
        let mut g = Graph::new();
        for (a, b) in edges {
            g.add_edge(a.into(), b.into());
        }
        g
    }

    /// The path on `n` vertices labelled `0..n`.
    pub fn path(n: usize) -> Self {
        let mut g = Graph::new();
        for i in 0..n {
            g.add_vertex(Vertex::from(i.to_string()));
            if i > 0 {
                g.add_edge(Vertex::from((i - 1).to_string()), Vertex::from(i.to_string()));
            }
        }
        g
    }

    /// The star with `leaves` leaves: centre `c`, leaves `0..leaves`.
    pub fn star(leaves: usize) -> Self {
        let mut g = Graph::new();
        g.add_vertex("c".into());
        for i in 0..leaves {
            g.add_edge("c".into(), Vertex::from(i.to_string()));
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.add_edge(Vertex::from("0"), Vertex::from((n - 1).to_string()));
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new();
        for i in 0..n {
            g.add_vertex(Vertex::from(i.to_string()));
            for j in 0..i {
                g.add_edge(Vertex::from(j.to_string()), Vertex::from(i.to_string()));
            }
        }
        g
    }

    pub fn add_vertex(&mut self, v: Vertex) {
        self.vertices.insert(v);
    }

    /// Adds an edge and its endpoints. Loops are ignored.
    pub fn add_edge(&mut self, a: Vertex, b: Vertex) {
        if a == b {
            return;
        }
        self.vertices.insert(a.clone());
        self.vertices.insert(b.clone());
        self.edges.insert(sorted2(a, b));
    }

    pub fn vertices(&self) -> &BTreeSet<Vertex> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<[Vertex; 2]> {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn has_edge(&self, a: &Vertex, b: &Vertex) -> bool {
        self.edges.contains(&sorted2(a.clone(), b.clone()))
    }

    pub fn neighbors(&self, v: &Vertex) -> BTreeSet<Vertex> {
        self.edges
            .iter()
            .filter_map(|[a, b]| {
                if a == v {
                    Some(b.clone())
                } else if b == v {
                    Some(a.clone())
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn degree(&self, v: &Vertex) -> usize {
        self.edges.iter().filter(|e| e.contains(v)).count()
    }

    pub fn degrees(&self) -> BTreeMap<Vertex, usize> {
        let mut d: BTreeMap<Vertex, usize> = self.vertices.iter().map(|v| (v.clone(), 0)).collect();
        for [a, b] in &self.edges {
            *d.get_mut(a).unwrap() += 1;
            *d.get_mut(b).unwrap() += 1;
        }
        d
    }

    pub fn delete_vertex(&self, v: &Vertex) -> Result<Graph> {
        if !self.vertices.contains(v) {
            return Err(Error::MissingVertex(v.clone()));
        }
        Ok(Graph {
            vertices: self.vertices.iter().filter(|x| *x != v).cloned().collect(),
            edges: self.edges.iter().filter(|e| !e.contains(v)).cloned().collect(),
        })
    }

    pub fn relabel(&self, map: &BTreeMap<Vertex, Vertex>) -> Graph {
        let f = |v: &Vertex| map.get(v).cloned().unwrap_or_else(|| v.clone());
        let mut g = Graph::new();
        for v in &self.vertices {
            g.add_vertex(f(v));
        }
        for [a, b] in &self.edges {
            g.add_edge(f(a), f(b));
        }
        g
    }

    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        Complex2::from(self)
            .disjoint_union(&Complex2::from(other))
            .as_graph()
            .expect("union of graphs has no triangles")
    }

    pub fn components(&self) -> Vec<BTreeSet<Vertex>> {
        let mut adj: BTreeMap<&Vertex, Vec<&Vertex>> = self.vertices.iter().map(|v| (v, Vec::new())).collect();
        for [a, b] in &self.edges {
            adj.get_mut(a).unwrap().push(b);
            adj.get_mut(b).unwrap().push(a);
        }
        let mut seen: BTreeSet<&Vertex> = BTreeSet::new();
        let mut out = Vec::new();
        for v in &self.vertices {
            if !seen.insert(v) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::from([v]);
            while let Some(u) = queue.pop_front() {
                comp.insert(u.clone());
                for w in &adj[u] {
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Connected and nonempty.
    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    pub fn is_forest(&self) -> bool {
        self.num_edges() + self.components().len() == self.num_vertices()
    }

    pub fn is_tree(&self) -> bool {
        !self.is_empty() && self.is_connected() && self.num_edges() + 1 == self.num_vertices()
    }

    pub fn canonical_form(&self) -> Result<CanonicalKey> {
        Complex2::from(self).canonical_form()
    }

    pub fn is_isomorphic(&self, other: &Graph) -> Result<bool> {
        Complex2::from(self).is_isomorphic(&Complex2::from(other))
    }

    pub fn to_face_list(&self) -> String {
        Complex2::from(self).to_face_list()
    }

    /// Maximal faces on one line, separated by commas.
    pub fn to_inline(&self) -> String {
        let text = self.to_face_list();
        text.lines().collect::<Vec<_>>().join(", ")
    }

    /// Inverse of [`Graph::to_inline`].
    pub fn parse_inline(text: &str) -> Result<Graph> {
        Graph::parse(&text.replace(',', "\n"))
    }
}

/// Serialized as its list of maximal faces.
impl serde::Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Complex2::from(self).serialize(s)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_face_list())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rejects_triangles() {
        assert!(Graph::parse("a b c").is_err());
        let g = Graph::parse("a b\nc").unwrap();
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.num_edges(), 1);
    }

    #[test]
    fn shapes() {
        assert!(Graph::path(4).is_tree());
        assert!(Graph::star(3).is_tree());
        assert!(!Graph::cycle(4).is_tree());
        assert!(Graph::parse("a b\nc").unwrap().is_forest());
        assert!(!Graph::new().is_tree());
        assert_eq!(Graph::complete(4).num_edges(), 6);
    }

    #[test]
    fn inline_round_trip() {
        let g = Graph::parse("a b\nb c\nd").unwrap();
        assert_eq!(g.to_inline(), "a b, b c, d");
        assert_eq!(Graph::parse_inline(&g.to_inline()).unwrap(), g);
        assert_eq!(Graph::parse_inline("").unwrap(), Graph::new());
    }

    #[test]
    fn isomorphism() {
        let p3 = Graph::parse("a b\nb c").unwrap();
        assert!(p3.is_isomorphic(&Graph::star(2)).unwrap());
        assert!(!Graph::path(4).is_isomorphic(&Graph::star(3)).unwrap());
    }
}
