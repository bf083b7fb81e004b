//! F-reducibility of 2-complexes: initial vertices, the greedy reduction,
//! exhaustive search with memoisation, reduction to a target vertex and the
//! swap automorphism of a star link.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use dashmap::DashSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::VertexSet;
use crate::canon::{self, CanonicalKey, Structure};
use crate::complex::{Complex2, Vertex};
use crate::error::{Error, Result};
use crate::family::{self, FamilySpec, StarCenter, TreeCode};
use crate::graph::Graph;

/// A small graph on local indices, used for links inside the search.
#[derive(Clone, Debug, Default)]
pub(crate) struct LocalGraph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl LocalGraph {
    pub fn from_graph(g: &Graph) -> Self {
        let index: BTreeMap<&Vertex, usize> = g.vertices().iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut lg = LocalGraph {
            adj: vec![Vec::new(); g.num_vertices()],
            m: 0,
        };
        for [a, b] in g.edges() {
            lg.add_edge(index[a], index[b]);
        }
        lg
    }

    fn with_vertices(n: usize) -> Self {
        LocalGraph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    fn add_edge(&mut self, a: usize, b: usize) {
        self.adj[a].push(b);
        self.adj[b].push(a);
        self.m += 1;
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.m
    }

    fn is_connected(&self) -> bool {
        let n = self.adj.len();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    pub fn is_tree(&self) -> bool {
        self.m + 1 == self.adj.len() && self.is_connected()
    }

    pub fn star_leaf_count(&self) -> Option<usize> {
        let n = self.adj.len();
        if !self.is_tree() {
            return None;
        }
        if n <= 2 {
            return Some(n - 1);
        }
        self.adj.iter().any(|a| a.len() == n - 1).then_some(n - 1)
    }

    /// AHU code rooted at the centre; the smaller of the two rootings when
    /// the tree is bicentral.
    pub fn tree_code(&self) -> Option<TreeCode> {
        if !self.is_tree() {
            return None;
        }
        let n = self.adj.len();
        let mut degree: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
        let mut remaining = n;
        while remaining > 2 {
            remaining -= layer.len();
            let mut next = Vec::new();
            for &leaf in &layer {
                degree[leaf] = 0;
                for &w in &self.adj[leaf] {
                    if degree[w] > 0 {
                        degree[w] -= 1;
                        if degree[w] == 1 {
                            next.push(w);
                        }
                    }
                }
            }
            layer = next;
        }
        layer.iter().map(|&c| self.rooted_code(c)).min().map(TreeCode::from_raw)
    }

    fn rooted_code(&self, root: usize) -> String {
        // iterative post-order
        let n = self.adj.len();
        let mut parent = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut stack = vec![root];
        parent[root] = root;
        while let Some(u) = stack.pop() {
            order.push(u);
            for &w in &self.adj[u] {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    stack.push(w);
                }
            }
        }
        let mut codes: Vec<Vec<String>> = vec![Vec::new(); n];
        let mut result = String::new();
        for &u in order.iter().rev() {
            let mut children = std::mem::take(&mut codes[u]);
            children.sort();
            let code = format!("({})", children.concat());
            if u == root {
                result = code;
            } else {
                codes[parent[u]].push(code);
            }
        }
        result
    }
}

/// A test applied to links during the search.
pub(crate) trait LinkPredicate: Sync {
    fn accepts(&self, link: &LocalGraph) -> bool;
    /// Every accepted link is a tree, so reducible complexes are connected
    /// with Euler characteristic one.
    fn trees_only(&self) -> bool;
}

impl LinkPredicate for FamilySpec {
    fn accepts(&self, link: &LocalGraph) -> bool {
        FamilySpec::accepts(self, link)
    }

    fn trees_only(&self) -> bool {
        FamilySpec::trees_only(self)
    }
}

/// A complex on indices `0..n`, ordered like its labels.
pub(crate) struct Indexed {
    labels: Vec<Vertex>,
    nbrs: Vec<Vec<usize>>,
    tri_pairs: Vec<Vec<(usize, usize)>>,
}

impl Indexed {
    pub fn new(k: &Complex2) -> Self {
        let labels: Vec<Vertex> = k.vertices().iter().cloned().collect();
        let n = labels.len();
        let idx = |v: &Vertex| labels.binary_search(v).expect("vertex of complex");
        let mut nbrs = vec![Vec::new(); n];
        for [a, b] in k.edges() {
            let (a, b) = (idx(a), idx(b));
            nbrs[a].push(b);
            nbrs[b].push(a);
        }
        let mut tri_pairs = vec![Vec::new(); n];
        for [a, b, c] in k.triangles() {
            let (a, b, c) = (idx(a), idx(b), idx(c));
            tri_pairs[a].push((b, c));
            tri_pairs[b].push((a, c));
            tri_pairs[c].push((a, b));
        }
        for list in &mut nbrs {
            list.sort_unstable();
        }
        Indexed {
            labels,
            nbrs,
            tri_pairs,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn index(&self, v: &Vertex) -> Option<usize> {
        self.labels.binary_search(v).ok()
    }

    pub fn label(&self, i: usize) -> &Vertex {
        &self.labels[i]
    }

    /// Link of `v` in the subcomplex induced on `alive`, with its local
    /// vertices listed in index order.
    fn local_link(&self, v: usize, alive: &VertexSet) -> (Vec<usize>, LocalGraph) {
        let verts: Vec<usize> = self.nbrs[v].iter().copied().filter(|&w| alive.contains(w)).collect();
        let mut g = LocalGraph::with_vertices(verts.len());
        for &(a, b) in &self.tri_pairs[v] {
            if alive.contains(a) && alive.contains(b) {
                let ia = verts.binary_search(&a).expect("edge of link");
                let ib = verts.binary_search(&b).expect("edge of link");
                g.add_edge(ia, ib);
            }
        }
        (verts, g)
    }

    fn link_graph(&self, v: usize, alive: &VertexSet) -> Graph {
        let mut g = Graph::new();
        for &w in &self.nbrs[v] {
            if alive.contains(w) {
                g.add_vertex(self.labels[w].clone());
            }
        }
        for &(a, b) in &self.tri_pairs[v] {
            if alive.contains(a) && alive.contains(b) {
                g.add_edge(self.labels[a].clone(), self.labels[b].clone());
            }
        }
        g
    }

    fn structure(&self, alive: &VertexSet, target: Option<usize>) -> Structure {
        let mut pos = vec![u32::MAX; self.len()];
        let mut n = 0u32;
        for v in alive.iter() {
            pos[v] = n;
            n += 1;
        }
        let mut edges = Vec::new();
        let mut tris = Vec::new();
        for a in alive.iter() {
            for &b in &self.nbrs[a] {
                if a < b && alive.contains(b) {
                    edges.push((pos[a], pos[b]));
                }
            }
            for &(b, c) in &self.tri_pairs[a] {
                if a < b && b < c && alive.contains(b) && alive.contains(c) {
                    tris.push([pos[a], pos[b], pos[c]]);
                }
            }
        }
        let colors = target.map(|t| alive.iter().map(|v| u32::from(v == t)).collect());
        Structure::new(n as usize, edges, tris, colors)
    }

    pub fn complex(&self, alive: &VertexSet) -> Complex2 {
        let mut k = Complex2::new();
        for v in alive.iter() {
            k.add_face(&crate::complex::Face::new([self.labels[v].clone()]).expect("one label"));
            for &w in &self.nbrs[v] {
                if v < w && alive.contains(w) {
                    k.add_face(
                        &crate::complex::Face::new([self.labels[v].clone(), self.labels[w].clone()]).expect("edge"),
                    );
                }
            }
            for &(b, c) in &self.tri_pairs[v] {
                if v < b && alive.contains(b) && alive.contains(c) {
                    k.add_face(
                        &crate::complex::Face::new([
                            self.labels[v].clone(),
                            self.labels[b].clone(),
                            self.labels[c].clone(),
                        ])
                        .expect("triangle"),
                    );
                }
            }
        }
        k
    }

    fn is_initial(&self, v: usize, alive: &VertexSet, pred: &dyn LinkPredicate) -> bool {
        pred.accepts(&self.local_link(v, alive).1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum MemoKey {
    Canonical(CanonicalKey),
    Labelled(VertexSet),
}

/// Exhaustive depth-first search with a memo of failed states.
struct Searcher<'a> {
    cx: &'a Indexed,
    pred: &'a dyn LinkPredicate,
    target: Option<usize>,
    failed_sets: HashSet<VertexSet>,
    failed_keys: HashSet<MemoKey>,
    shared: Option<&'a DashSet<MemoKey>>,
    degraded: bool,
}

struct Frame {
    alive: VertexSet,
    key: MemoKey,
    next: usize,
}

impl<'a> Searcher<'a> {
    fn new(
        cx: &'a Indexed,
        pred: &'a dyn LinkPredicate,
        target: Option<usize>,
        shared: Option<&'a DashSet<MemoKey>>,
    ) -> Self {
        Searcher {
            cx,
            pred,
            target,
            failed_sets: HashSet::new(),
            failed_keys: HashSet::new(),
            shared,
            degraded: false,
        }
    }

    fn is_goal(&self, alive: &VertexSet) -> bool {
        alive.len() == 1 && self.target.is_none_or(|t| alive.contains(t))
    }

    fn key(&mut self, alive: &VertexSet) -> MemoKey {
        let s = self.cx.structure(alive, self.target);
        match canon::canonical_key(&s, canon::DEFAULT_LEAF_LIMIT) {
            Some(k) => MemoKey::Canonical(k),
            None => {
                if !self.degraded {
                    log::debug!(
                        "canonical form unavailable for {} vertices; memo falls back to labelled keys",
                        alive.len()
                    );
                    self.degraded = true;
                }
                MemoKey::Labelled(alive.clone())
            }
        }
    }

    fn known_failure(&self, key: &MemoKey) -> bool {
        self.failed_keys.contains(key) || self.shared.is_some_and(|s| s.contains(key))
    }

    fn record_failure(&mut self, alive: VertexSet, key: MemoKey) {
        if let Some(s) = self.shared {
            s.insert(key.clone());
        }
        self.failed_keys.insert(key);
        self.failed_sets.insert(alive);
    }

    /// Removal order (as indices) from `start` to a goal state.
    fn run(&mut self, start: VertexSet) -> Option<Vec<usize>> {
        if self.is_goal(&start) {
            return Some(Vec::new());
        }
        if self.failed_sets.contains(&start) {
            return None;
        }
        let key = self.key(&start);
        if self.known_failure(&key) {
            return None;
        }
        let mut stack = vec![Frame {
            alive: start,
            key,
            next: 0,
        }];
        let mut path: Vec<usize> = Vec::new();
        while let Some(frame) = stack.last_mut() {
            let candidate = frame
                .alive
                .iter()
                .find(|&v| v >= frame.next && Some(v) != self.target && self.cx.is_initial(v, &frame.alive, self.pred));
            let Some(v) = candidate else {
                let done = stack.pop().expect("nonempty stack");
                path.pop();
                self.record_failure(done.alive, done.key);
                continue;
            };
            frame.next = v + 1;
            let child = frame.alive.without(v);
            path.push(v);
            if self.is_goal(&child) {
                return Some(path);
            }
            if self.failed_sets.contains(&child) {
                path.pop();
                continue;
            }
            let key = self.key(&child);
            if self.known_failure(&key) {
                self.failed_sets.insert(child);
                path.pop();
                continue;
            }
            stack.push(Frame {
                alive: child,
                key,
                next: 0,
            });
        }
        None
    }
}

/// Options for the exact search.
#[derive(Clone, Copy, Debug, Default)]
pub struct SearchOptions {
    /// Explore the first-level branches on the rayon pool with a shared memo.
    pub parallel: bool,
}

pub(crate) fn search_indexed(
    cx: &Indexed,
    pred: &dyn LinkPredicate,
    target: Option<usize>,
    opts: SearchOptions,
) -> Option<Vec<usize>> {
    let start = VertexSet::full(cx.len());
    if !opts.parallel || start.len() <= 1 {
        return Searcher::new(cx, pred, target, None).run(start);
    }
    let roots: Vec<usize> = start
        .iter()
        .filter(|&v| Some(v) != target && cx.is_initial(v, &start, pred))
        .collect();
    let shared = DashSet::new();
    roots.par_iter().find_map_first(|&v| {
        let mut searcher = Searcher::new(cx, pred, target, Some(&shared));
        searcher.run(start.without(v)).map(|mut rest| {
            rest.insert(0, v);
            rest
        })
    })
}

/// One removal: the vertex and its link at that moment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub vertex: Vertex,
    pub link: Graph,
}

/// A sequence of removals and the complex they leave behind.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionWitness {
    pub steps: Vec<ReductionStep>,
    pub final_complex: Complex2,
}

impl ReductionWitness {
    fn from_order(cx: &Indexed, order: &[usize]) -> Self {
        let mut alive = VertexSet::full(cx.len());
        let mut steps = Vec::with_capacity(order.len());
        for &v in order {
            steps.push(ReductionStep {
                vertex: cx.label(v).clone(),
                link: cx.link_graph(v, &alive),
            });
            alive.remove(v);
        }
        ReductionWitness {
            steps,
            final_complex: cx.complex(&alive),
        }
    }

    /// Removes `order` from `k` one vertex at a time, recording each link.
    /// Membership in a family is not checked.
    pub fn record(k: &Complex2, order: &[Vertex]) -> Result<Self> {
        let mut current = k.clone();
        let mut steps = Vec::with_capacity(order.len());
        for v in order {
            steps.push(ReductionStep {
                vertex: v.clone(),
                link: current.link(v)?,
            });
            current = current.delete_vertex(v)?;
        }
        Ok(ReductionWitness {
            steps,
            final_complex: current,
        })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        self.steps.iter().map(|s| s.vertex.clone()).collect()
    }

    /// Parses lines `<vertex> : <link faces>`; the final complex is left
    /// empty until replayed with [`replay_steps`].
    pub fn parse_steps(text: &str) -> Result<Vec<ReductionStep>> {
        let mut steps = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (v, link) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(i + 1, "expected `<vertex> : <link>`"))?;
            let vertex = Vertex::new(v.trim()).map_err(|_| Error::parse(i + 1, "bad vertex label"))?;
            let link = Graph::parse_inline(link).map_err(|e| Error::parse(i + 1, e.to_string()))?;
            steps.push(ReductionStep { vertex, link });
        }
        Ok(steps)
    }
}

impl fmt::Display for ReductionWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{} : {}", s.vertex, s.link.to_inline())?;
        }
        Ok(())
    }
}

fn nonempty(k: &Complex2) -> Result<()> {
    if k.is_empty() {
        Err(Error::EmptyComplex)
    } else {
        Ok(())
    }
}

/// Vertices whose link lies in F.
pub fn initial_vertices(k: &Complex2, f: &FamilySpec) -> Result<BTreeSet<Vertex>> {
    nonempty(k)?;
    let cx = Indexed::new(k);
    let alive = VertexSet::full(cx.len());
    Ok((0..cx.len())
        .filter(|&v| cx.is_initial(v, &alive, f))
        .map(|v| cx.label(v).clone())
        .collect())
}

pub fn count_initial(k: &Complex2, f: &FamilySpec) -> Result<usize> {
    Ok(initial_vertices(k, f)?.len())
}

/// Histogram of initial-vertex counts over a collection of complexes.
pub fn count_initial_distribution<'a>(
    complexes: impl IntoIterator<Item = &'a Complex2>,
    f: &FamilySpec,
) -> Result<BTreeMap<usize, usize>> {
    let mut hist = BTreeMap::new();
    for k in complexes {
        *hist.entry(count_initial(k, f)?).or_insert(0) += 1;
    }
    Ok(hist)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GreedyVerdict {
    Reduced,
    Stuck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreedyOutcome {
    pub verdict: GreedyVerdict,
    /// Removals performed; its final complex is the stuck complex when the
    /// verdict is [`GreedyVerdict::Stuck`].
    pub witness: ReductionWitness,
}

impl GreedyOutcome {
    pub fn stuck_complex(&self) -> Option<&Complex2> {
        (self.verdict == GreedyVerdict::Stuck).then_some(&self.witness.final_complex)
    }
}

/// Removes the lexicographically smallest initial vertex until one point
/// remains or no vertex is initial. `first_choice` overrides the first step.
pub fn greedy_reduce(k: &Complex2, f: &FamilySpec, first_choice: Option<&Vertex>) -> Result<GreedyOutcome> {
    nonempty(k)?;
    let cx = Indexed::new(k);
    let mut alive = VertexSet::full(cx.len());
    let mut order = Vec::new();
    if let Some(v) = first_choice {
        let i = cx.index(v).ok_or_else(|| Error::MissingVertex(v.clone()))?;
        if !cx.is_initial(i, &alive, f) {
            return Err(Error::Precondition(format!("{v} is not initial")));
        }
        if alive.len() > 1 {
            alive.remove(i);
            order.push(i);
        }
    }
    while alive.len() > 1 {
        let next = alive.iter().find(|&v| cx.is_initial(v, &alive, f));
        match next {
            Some(v) => {
                alive.remove(v);
                order.push(v);
            }
            None => break,
        }
    }
    let verdict = if alive.len() == 1 {
        GreedyVerdict::Reduced
    } else {
        GreedyVerdict::Stuck
    };
    Ok(GreedyOutcome {
        verdict,
        witness: ReductionWitness::from_order(&cx, &order),
    })
}

/// Trees-only families reduce only connected complexes with χ = 1.
fn cannot_reduce(k: &Complex2, pred: &dyn LinkPredicate) -> bool {
    pred.trees_only() && (!k.is_connected() || k.euler_characteristic() != 1)
}

pub fn decide_reducible(k: &Complex2, f: &FamilySpec) -> Result<Option<ReductionWitness>> {
    decide_reducible_with(k, f, SearchOptions::default())
}

/// Exact decision: a full witness iff K is F-reducible to a point.
pub fn decide_reducible_with(k: &Complex2, f: &FamilySpec, opts: SearchOptions) -> Result<Option<ReductionWitness>> {
    nonempty(k)?;
    if cannot_reduce(k, f) {
        return Ok(None);
    }
    let cx = Indexed::new(k);
    Ok(search_indexed(&cx, f, None, opts).map(|order| ReductionWitness::from_order(&cx, &order)))
}

/// A witness ending at the one-point complex on `target`.
pub fn reduce_to_target(k: &Complex2, f: &FamilySpec, target: &Vertex) -> Result<Option<ReductionWitness>> {
    reduce_to_target_with(k, f, target, SearchOptions::default())
}

pub fn reduce_to_target_with(
    k: &Complex2,
    f: &FamilySpec,
    target: &Vertex,
    opts: SearchOptions,
) -> Result<Option<ReductionWitness>> {
    nonempty(k)?;
    let cx = Indexed::new(k);
    let t = cx.index(target).ok_or_else(|| Error::MissingVertex(target.clone()))?;
    if cannot_reduce(k, f) {
        return Ok(None);
    }
    Ok(search_indexed(&cx, f, Some(t), opts).map(|order| ReductionWitness::from_order(&cx, &order)))
}

/// Nonevasiveness, i.e. reducibility over all trees.
pub fn nonevasive(k: &Complex2) -> Result<Option<ReductionWitness>> {
    decide_reducible(k, &FamilySpec::AllTrees)
}

/// When link(v) is a star centred at w and link(w) is a star too, checks
/// that the transposition of v and w is an automorphism and returns w.
pub fn swap_automorphism(k: &Complex2, v: &Vertex) -> Result<Option<Vertex>> {
    let link = k.link(v)?;
    let w = match family::is_star(&link) {
        Some(StarCenter::Vertex(w)) if link.num_vertices() >= 2 => w,
        Some(StarCenter::EitherEndpoint) => return Err(Error::Precondition(format!("link of {v} is a single edge"))),
        _ => return Err(Error::Precondition(format!("link of {v} is not a star with a centre"))),
    };
    if family::is_star(&k.link(&w)?).is_none() {
        return Ok(None);
    }
    let swap: BTreeMap<Vertex, Vertex> = [(v.clone(), w.clone()), (w.clone(), v.clone())].into();
    Ok((k.relabel(&swap) == *k).then_some(w))
}

/// Replays `steps` from `k`, checking each recorded link and its membership
/// in F, and returns the complex left at the end.
pub fn replay_steps(k: &Complex2, f: &FamilySpec, steps: &[ReductionStep]) -> Result<Complex2> {
    let mut current = k.clone();
    let chi = k.euler_characteristic();
    for (i, step) in steps.iter().enumerate() {
        let link = current.link(&step.vertex)?;
        if link != step.link {
            return Err(Error::InvalidWitness(format!(
                "step {}: link of {} is `{}`, recorded `{}`",
                i + 1,
                step.vertex,
                link.to_inline(),
                step.link.to_inline()
            )));
        }
        if !f.contains(&link) {
            return Err(Error::InvalidWitness(format!(
                "step {}: link of {} is not in {f}",
                i + 1,
                step.vertex
            )));
        }
        current = current.delete_vertex(&step.vertex)?;
        if f.trees_only() && current.euler_characteristic() != chi {
            return Err(Error::Invariant(format!(
                "Euler characteristic changed at step {}",
                i + 1
            )));
        }
    }
    Ok(current)
}

/// Checks a witness step by step against `k` and F.
pub fn validate_witness(k: &Complex2, f: &FamilySpec, w: &ReductionWitness) -> Result<()> {
    let end = replay_steps(k, f, &w.steps)?;
    if end != w.final_complex {
        return Err(Error::InvalidWitness("final complex does not match the replay".into()));
    }
    Ok(())
}
