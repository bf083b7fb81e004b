//! 2-trees, the edge–triangle adjacency graph and the block structure of
//! {point, edge}-reducible complexes.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::complex::{Complex2, Face, Vertex};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoTreeReport {
    /// Connected, A_{1,2} is a tree and V = T + 2 (or K is a point or an edge).
    pub is_2tree: bool,
    /// Bipartite edge–triangle adjacency graph; nodes `e<i>` and `t<j>`
    /// index the sorted edge and triangle lists of K.
    pub adjacency: Graph,
    /// Maximal sub-2-trees: components of A_{1,2}, bare edges and isolated
    /// vertices.
    pub blocks: Vec<Complex2>,
    pub blocks_are_2trees: bool,
    /// Incidence graph between blocks (`b<i>`) and the vertices they contain.
    pub block_graph: Graph,
    /// The block incidence graph is a tree.
    pub block_tree: bool,
}

impl TwoTreeReport {
    /// {point, edge}-reducibility read off the block structure.
    pub fn reducible(&self) -> bool {
        self.blocks_are_2trees && self.block_tree
    }
}

fn edge_node(i: usize) -> Vertex {
    Vertex::from(format!("e{i}"))
}

fn tri_node(j: usize) -> Vertex {
    Vertex::from(format!("t{j}"))
}

pub fn adjacency_graph(k: &Complex2) -> Graph {
    let edges: Vec<&[Vertex; 2]> = k.edges().iter().collect();
    let mut g = Graph::new();
    for i in 0..edges.len() {
        g.add_vertex(edge_node(i));
    }
    for (j, [a, b, c]) in k.triangles().iter().enumerate() {
        for pair in [[a, b], [a, c], [b, c]] {
            let i = edges
                .binary_search(&&[pair[0].clone(), pair[1].clone()])
                .expect("edge of a triangle");
            g.add_edge(edge_node(i), tri_node(j));
        }
    }
    g
}

fn is_2tree_with(k: &Complex2, adjacency: &Graph) -> bool {
    match (k.num_vertices(), k.num_edges(), k.num_triangles()) {
        (1, 0, 0) | (2, 1, 0) => true,
        (v, _, t) => t >= 1 && v == t + 2 && k.is_connected() && adjacency.is_tree(),
    }
}

pub fn is_2tree(k: &Complex2) -> TwoTreeReport {
    block_decomposition(k)
}

/// Splits K into maximal sub-2-trees and tests that they are glued along
/// single vertices in a tree-like fashion.
pub fn block_decomposition(k: &Complex2) -> TwoTreeReport {
    let adjacency = adjacency_graph(k);
    let edges: Vec<&[Vertex; 2]> = k.edges().iter().collect();
    let triangles: Vec<&[Vertex; 3]> = k.triangles().iter().collect();
    let mut blocks = Vec::new();
    for comp in adjacency.components() {
        let mut block = Complex2::new();
        for node in &comp {
            let (kind, idx) = node.as_str().split_at(1);
            let idx: usize = idx.parse().expect("node index");
            let face = if kind == "t" {
                Face::new(triangles[idx].iter().cloned())
            } else {
                Face::new(edges[idx].iter().cloned())
            };
            block.add_face(&face.expect("face of K"));
        }
        blocks.push(block);
    }
    let covered: BTreeSet<&Vertex> = k.edges().iter().flatten().collect();
    for v in k.vertices() {
        if !covered.contains(v) {
            blocks.push(Complex2::point(v.clone()));
        }
    }
    let blocks_are_2trees = blocks.iter().all(|b| is_2tree_with(b, &adjacency_graph(b)));

    let mut block_graph = Graph::new();
    for (i, b) in blocks.iter().enumerate() {
        let node = Vertex::from(format!("b{i}"));
        block_graph.add_vertex(node.clone());
        for v in b.vertices() {
            block_graph.add_edge(node.clone(), Vertex::from(format!("v_{v}")));
        }
    }
    let block_tree = k.num_vertices() > 0 && block_graph.is_tree();

    TwoTreeReport {
        is_2tree: is_2tree_with(k, &adjacency),
        adjacency,
        blocks,
        blocks_are_2trees,
        block_graph,
        block_tree,
    }
}
