//! Exact cover by d-sets and its reduction to {0,d}-reducibility of graphs.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::complex::Vertex;
use crate::degree_reduction::{self, DegreeSet, GraphReductionWitness};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// A ground set and a list of blocks, all of the same size d ≥ 3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct X3CInstance {
    elements: Vec<Vertex>,
    blocks: Vec<Vec<Vertex>>,
}

impl X3CInstance {
    pub fn new(elements: Vec<Vertex>, blocks: Vec<Vec<Vertex>>) -> Result<Self> {
        let ground: BTreeSet<&Vertex> = elements.iter().collect();
        if ground.len() != elements.len() {
            return Err(Error::Instance("repeated element".into()));
        }
        let d = blocks.first().map(Vec::len);
        for (i, b) in blocks.iter().enumerate() {
            let set: BTreeSet<&Vertex> = b.iter().collect();
            if set.len() != b.len() {
                return Err(Error::Instance(format!("block {} repeats an element", i + 1)));
            }
            if Some(b.len()) != d {
                return Err(Error::Instance("blocks have different sizes".into()));
            }
            if let Some(x) = b.iter().find(|x| !ground.contains(x)) {
                return Err(Error::Instance(format!("block {} uses unknown element {x}", i + 1)));
            }
        }
        if d.is_some_and(|d| d < 3) {
            return Err(Error::Instance("blocks need at least three elements".into()));
        }
        let inst = X3CInstance { elements, blocks };
        let mut labels = BTreeSet::new();
        for v in inst.labels() {
            if !labels.insert(v.clone()) {
                return Err(Error::Instance(format!("gadget label {v} is ambiguous")));
            }
        }
        Ok(inst)
    }

    /// `elements: x1 x2 ...` followed by `block: xi xj xk` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut elements: Option<Vec<Vertex>> = None;
        let mut blocks = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(i + 1, "expected `elements:` or `block:`"))?;
            let labels = rest
                .split_whitespace()
                .map(|t| Vertex::new(t).map_err(|_| Error::parse(i + 1, format!("bad label `{t}`"))))
                .collect::<Result<Vec<_>>>()?;
            match key.trim() {
                "elements" if elements.is_none() => elements = Some(labels),
                "elements" => return Err(Error::parse(i + 1, "second `elements:` line")),
                "block" => blocks.push(labels),
                other => return Err(Error::parse(i + 1, format!("unknown key `{other}`"))),
            }
        }
        let elements = elements.ok_or_else(|| Error::parse(0, "missing `elements:` line"))?;
        X3CInstance::new(elements, blocks)
    }

    /// Six elements and three blocks with the unique cover {B1, B3}.
    pub fn sample() -> Self {
        let v = |s: &str| Vertex::from(s);
        let block = |a: &str, b: &str, c: &str| vec![v(a), v(b), v(c)];
        X3CInstance::new(
            (1..=6).map(|i| Vertex::from(format!("x{i}"))).collect(),
            vec![
                block("x1", "x2", "x3"),
                block("x2", "x4", "x6"),
                block("x4", "x5", "x6"),
            ],
        )
        .expect("valid instance")
    }

    pub fn elements(&self) -> &[Vertex] {
        &self.elements
    }

    pub fn blocks(&self) -> &[Vec<Vertex>] {
        &self.blocks
    }

    /// Block size; `None` when there are no blocks.
    pub fn d(&self) -> Option<usize> {
        self.blocks.first().map(Vec::len)
    }

    /// Gadget vertex of the i-th block (0-based): `B1`, `B2`, ...
    pub fn block_vertex(&self, i: usize) -> Vertex {
        Vertex::from(format!("B{}", i + 1))
    }

    fn labels(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.elements
            .iter()
            .flat_map(|x| [x.clone(), x.primed(1), x.primed(2)])
            .chain((0..self.blocks.len()).map(|i| self.block_vertex(i)))
    }

    /// Each element x gets pendant vertices x', x''; each block vertex is
    /// joined to its elements.
    pub fn gadget(&self) -> Graph {
        let mut g = Graph::new();
        for x in &self.elements {
            g.add_edge(x.clone(), x.primed(1));
            g.add_edge(x.clone(), x.primed(2));
        }
        for (i, b) in self.blocks.iter().enumerate() {
            let bv = self.block_vertex(i);
            g.add_vertex(bv.clone());
            for x in b {
                g.add_edge(bv.clone(), x.clone());
            }
        }
        g
    }

    /// The degree set {0, d} matching this instance; d = 3 without blocks.
    pub fn degree_set(&self) -> DegreeSet {
        DegreeSet::new([0, self.d().unwrap_or(3)]).expect("nonempty")
    }

    pub fn is_exact_cover(&self, chosen: &[usize]) -> bool {
        let mut covered = BTreeSet::new();
        for &i in chosen {
            for x in &self.blocks[i] {
                if !covered.insert(x) {
                    return false;
                }
            }
        }
        covered.len() == self.elements.len()
    }

    /// The lexicographically first exact cover, as sorted block indices.
    pub fn brute_force(&self) -> Option<Vec<usize>> {
        fn extend(inst: &X3CInstance, start: usize, used: &mut BTreeSet<Vertex>, chosen: &mut Vec<usize>) -> bool {
            if used.len() == inst.elements.len() {
                return true;
            }
            for i in start..inst.blocks.len() {
                let b = &inst.blocks[i];
                if b.iter().any(|x| used.contains(x)) {
                    continue;
                }
                used.extend(b.iter().cloned());
                chosen.push(i);
                if extend(inst, i + 1, used, chosen) {
                    return true;
                }
                chosen.pop();
                for x in b {
                    used.remove(x);
                }
            }
            false
        }
        let mut chosen = Vec::new();
        extend(self, 0, &mut BTreeSet::new(), &mut chosen).then_some(chosen)
    }

    /// Reads the cover off a {0,d}-witness: the block vertices that end up
    /// as sinks of the induced orientation.
    pub fn cover_from_witness(&self, w: &GraphReductionWitness) -> Result<Vec<usize>> {
        let g = self.gadget();
        degree_reduction::validate_graph_witness(&g, &self.degree_set(), w)?;
        let o = degree_reduction::orientation_from_witness(&g, w)?;
        let out = o.out_degrees(&g);
        let cover: Vec<usize> = (0..self.blocks.len())
            .filter(|&i| out[&self.block_vertex(i)] == 0)
            .collect();
        if !self.is_exact_cover(&cover) {
            return Err(Error::Invariant(format!(
                "sink blocks {} do not form an exact cover",
                self.format_cover(&cover)
            )));
        }
        Ok(cover)
    }

    /// `{B1,B3}`
    pub fn format_cover(&self, cover: &[usize]) -> String {
        let names: Vec<String> = cover.iter().map(|&i| self.block_vertex(i).to_string()).collect();
        format!("{{{}}}", names.join(","))
    }
}

impl fmt::Display for X3CInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[Vertex]| xs.iter().map(Vertex::as_str).collect::<Vec<_>>().join(" ");
        writeln!(f, "elements: {}", join(&self.elements))?;
        for b in &self.blocks {
            writeln!(f, "block: {}", join(b))?;
        }
        Ok(())
    }
}

/// Outcome of running both sides of the reduction on one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct X3CCheck {
    pub gadget_vertices: usize,
    pub gadget_edges: usize,
    /// Cover found by exhaustive search.
    pub brute_force: Option<Vec<usize>>,
    /// Witness of {0,d}-reducibility of the gadget.
    pub witness: Option<GraphReductionWitness>,
    /// Cover read off the witness.
    pub extracted: Option<Vec<usize>>,
}

impl X3CCheck {
    pub fn agrees(&self) -> bool {
        self.brute_force.is_some() == self.witness.is_some()
    }
}

/// Decides both sides. An empty gadget counts as a trivially reducible
/// graph with the empty cover.
pub fn x3c_check(inst: &X3CInstance) -> Result<X3CCheck> {
    let g = inst.gadget();
    let witness = if g.is_empty() {
        Some(GraphReductionWitness {
            steps: Vec::new(),
            survivor: None,
        })
    } else {
        degree_reduction::a_reducible(&g, &inst.degree_set())?
    };
    let extracted = match &witness {
        Some(w) if !g.is_empty() => Some(inst.cover_from_witness(w)?),
        Some(_) => Some(Vec::new()),
        None => None,
    };
    Ok(X3CCheck {
        gadget_vertices: g.num_vertices(),
        gadget_edges: g.num_edges(),
        brute_force: inst.brute_force(),
        witness,
        extracted,
    })
}
