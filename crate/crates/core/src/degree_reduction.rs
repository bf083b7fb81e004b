//! Graph reductions by vertex degree, acyclic orientations and degeneracy.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::complex::{sorted2, Complex2, Vertex};
use crate::engine::{self, Indexed, LinkPredicate, LocalGraph, SearchOptions};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// A nonempty set of naturals, optionally containing every n ≥ some bound.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DegreeSet {
    finite: BTreeSet<usize>,
    from: Option<usize>,
}

impl DegreeSet {
    pub fn new(values: impl IntoIterator<Item = usize>) -> Result<Self> {
        let finite: BTreeSet<usize> = values.into_iter().collect();
        if finite.is_empty() {
            return Err(Error::DegreeSet("degree set is empty".into()));
        }
        Ok(DegreeSet { finite, from: None })
    }

    /// {lo, ..., hi}
    pub fn range(lo: usize, hi: usize) -> Result<Self> {
        DegreeSet::new(lo..=hi)
    }

    /// {bound, bound + 1, ...}
    pub fn at_least(bound: usize) -> Self {
        DegreeSet {
            finite: BTreeSet::new(),
            from: Some(bound),
        }
    }

    /// Accepts `{0,3}`, `0..4` (inclusive), `2..` and mixtures such as
    /// `{0,2,5..}`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let inner = text.strip_prefix('{').and_then(|t| t.strip_suffix('}')).unwrap_or(text);
        let bad = |s: &str| Error::DegreeSet(format!("bad degree `{s}` in `{text}`"));
        let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad(s));
        let mut finite = BTreeSet::new();
        let mut from: Option<usize> = None;
        for item in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item.split_once("..") {
                Some((lo, "")) => {
                    let lo = num(lo)?;
                    from = Some(from.map_or(lo, |f| f.min(lo)));
                }
                Some((lo, hi)) => {
                    let hi = hi.strip_prefix('=').unwrap_or(hi);
                    finite.extend(num(lo)?..=num(hi)?);
                }
                None => {
                    finite.insert(num(item)?);
                }
            }
        }
        if finite.is_empty() && from.is_none() {
            return Err(Error::DegreeSet(format!("degree set `{text}` is empty")));
        }
        if let Some(f) = from {
            finite.retain(|&d| d < f);
        }
        Ok(DegreeSet { finite, from })
    }

    pub fn contains(&self, d: usize) -> bool {
        self.finite.contains(&d) || self.from.is_some_and(|f| d >= f)
    }

    /// The largest element, or `None` when unbounded.
    pub fn max(&self) -> Option<usize> {
        if self.from.is_some() {
            None
        } else {
            self.finite.last().copied()
        }
    }

    /// Of the form {0, 1, ..., n} or all naturals.
    pub fn is_initial_segment(&self) -> bool {
        let top = self.from.unwrap_or_else(|| self.finite.last().map_or(0, |m| m + 1));
        (0..top).all(|d| self.contains(d))
    }

    /// Elements below `limit`.
    pub fn elements_below(&self, limit: usize) -> Vec<usize> {
        (0..limit).filter(|&d| self.contains(d)).collect()
    }
}

impl fmt::Display for DegreeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut items: Vec<String> = self.finite.iter().map(usize::to_string).collect();
        if let Some(b) = self.from {
            items.push(format!("{b}.."));
        }
        write!(f, "{{{}}}", items.join(","))
    }
}

/// Heads of the edges of a graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Orientation {
    heads: BTreeMap<[Vertex; 2], Vertex>,
}

impl Orientation {
    pub fn new() -> Self {
        Self::default()
    }

    /// Orients the edge from `tail` to `head`.
    pub fn orient(&mut self, tail: Vertex, head: Vertex) {
        self.heads.insert(sorted2(tail, head.clone()), head);
    }

    pub fn head(&self, a: &Vertex, b: &Vertex) -> Option<&Vertex> {
        self.heads.get(&sorted2(a.clone(), b.clone()))
    }

    /// (tail, head) pairs in edge order.
    pub fn arcs(&self) -> impl Iterator<Item = (&Vertex, &Vertex)> {
        self.heads
            .iter()
            .map(|([a, b], h)| if h == b { (a, b) } else { (b, a) })
    }

    pub fn len(&self) -> usize {
        self.heads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heads.is_empty()
    }

    /// Lines `tail -> head`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut o = Orientation::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (t, h) = line
                .split_once("->")
                .ok_or_else(|| Error::parse(i + 1, "expected `tail -> head`"))?;
            let t = Vertex::new(t.trim()).map_err(|_| Error::parse(i + 1, "bad tail label"))?;
            let h = Vertex::new(h.trim()).map_err(|_| Error::parse(i + 1, "bad head label"))?;
            if t == h {
                return Err(Error::parse(i + 1, "loops cannot be oriented"));
            }
            o.orient(t, h);
        }
        Ok(o)
    }

    fn check_matches(&self, g: &Graph) -> Result<()> {
        if let Some(e) = g.edges().iter().find(|e| !self.heads.contains_key(*e)) {
            return Err(Error::OrientationMismatch(format!(
                "edge {} {} is not oriented",
                e[0], e[1]
            )));
        }
        if let Some(e) = self.heads.keys().find(|e| !g.edges().contains(*e)) {
            return Err(Error::OrientationMismatch(format!("{} {} is not an edge", e[0], e[1])));
        }
        Ok(())
    }

    /// Out-degree of every vertex of `g`.
    pub fn out_degrees(&self, g: &Graph) -> BTreeMap<Vertex, usize> {
        let mut out: BTreeMap<Vertex, usize> = g.vertices().iter().map(|v| (v.clone(), 0)).collect();
        for (t, _) in self.arcs() {
            if let Some(d) = out.get_mut(t) {
                *d += 1;
            }
        }
        out
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, h) in self.arcs() {
            writeln!(f, "{t} -> {h}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphStep {
    pub vertex: Vertex,
    pub degree: usize,
}

/// Removals in order. `survivor` is the last remaining vertex, or `None`
/// when the final vertex was removed too (possible only when 0 ∈ A).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphReductionWitness {
    pub steps: Vec<GraphStep>,
    pub survivor: Option<Vertex>,
}

impl GraphReductionWitness {
    pub fn final_removed(&self) -> bool {
        self.survivor.is_none()
    }
}

impl fmt::Display for GraphReductionWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{} : {}", s.vertex, s.degree)?;
        }
        if let Some(v) = &self.survivor {
            writeln!(f, "# survivor {v}")?;
        }
        Ok(())
    }
}

/// Accepts isolated vertices (links inside a graph seen as a 1-complex)
/// whose degree lies in A.
struct DegreePredicate<'a>(&'a DegreeSet);

impl LinkPredicate for DegreePredicate<'_> {
    fn accepts(&self, link: &LocalGraph) -> bool {
        link.num_edges() == 0 && self.0.contains(link.num_vertices())
    }

    fn trees_only(&self) -> bool {
        false
    }
}

/// A witness iff G is A-reducible to a point.
pub fn a_reducible(g: &Graph, a: &DegreeSet) -> Result<Option<GraphReductionWitness>> {
    a_reducible_with(g, a, SearchOptions::default())
}

pub fn a_reducible_with(g: &Graph, a: &DegreeSet, opts: SearchOptions) -> Result<Option<GraphReductionWitness>> {
    if g.is_empty() {
        return Err(Error::EmptyComplex);
    }
    let k = Complex2::from(g);
    let cx = Indexed::new(&k);
    let pred = DegreePredicate(a);
    let Some(order) = engine::search_indexed(&cx, &pred, None, opts) else {
        return Ok(None);
    };
    let mut current = g.clone();
    let mut steps = Vec::with_capacity(order.len());
    for i in order {
        let v = cx.label(i).clone();
        steps.push(GraphStep {
            degree: current.degree(&v),
            vertex: v.clone(),
        });
        current = current.delete_vertex(&v)?;
    }
    let survivor = current.vertices().iter().next().cloned();
    Ok(Some(GraphReductionWitness { steps, survivor }))
}

/// Replays a witness, checking recorded degrees and membership in A.
pub fn validate_graph_witness(g: &Graph, a: &DegreeSet, w: &GraphReductionWitness) -> Result<()> {
    let rest = replay(g, w)?;
    if let Some(s) = w.steps.iter().find(|s| !a.contains(s.degree)) {
        return Err(Error::InvalidWitness(format!(
            "degree {} of {} is not in {a}",
            s.degree, s.vertex
        )));
    }
    let expected: BTreeSet<Vertex> = w.survivor.iter().cloned().collect();
    if *rest.vertices() != expected {
        return Err(Error::InvalidWitness("witness does not end at its survivor".into()));
    }
    Ok(())
}

fn replay(g: &Graph, w: &GraphReductionWitness) -> Result<Graph> {
    let mut current = g.clone();
    for s in &w.steps {
        if !current.vertices().contains(&s.vertex) {
            return Err(Error::InvalidWitness(format!("{} removed twice or unknown", s.vertex)));
        }
        let d = current.degree(&s.vertex);
        if d != s.degree {
            return Err(Error::InvalidWitness(format!(
                "{} has degree {d}, recorded {}",
                s.vertex, s.degree
            )));
        }
        current = current.delete_vertex(&s.vertex)?;
    }
    Ok(current)
}

/// Directs every edge away from the endpoint removed first.
pub fn orientation_from_witness(g: &Graph, w: &GraphReductionWitness) -> Result<Orientation> {
    let rest = replay(g, w)?;
    if rest.num_vertices() > 1 {
        return Err(Error::InvalidWitness("witness leaves more than one vertex".into()));
    }
    let position: BTreeMap<&Vertex, usize> = w.steps.iter().enumerate().map(|(i, s)| (&s.vertex, i)).collect();
    let rank = |v: &Vertex| position.get(v).copied().unwrap_or(usize::MAX);
    let mut o = Orientation::new();
    for [a, b] in g.edges() {
        if rank(a) < rank(b) {
            o.orient(a.clone(), b.clone());
        } else {
            o.orient(b.clone(), a.clone());
        }
    }
    Ok(o)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AcyclicityReport {
    pub acyclic: bool,
    pub out_degrees: BTreeMap<Vertex, usize>,
}

/// Kahn's algorithm; also reports every out-degree.
pub fn check_acyclic(g: &Graph, o: &Orientation) -> Result<AcyclicityReport> {
    o.check_matches(g)?;
    let out_degrees = o.out_degrees(g);
    Ok(AcyclicityReport {
        acyclic: topological_sources(g, o).len() == g.num_vertices(),
        out_degrees,
    })
}

/// Repeatedly removes the lexicographically smallest source; returns the
/// removal order, which is shorter than |V| iff there is a directed cycle.
fn topological_sources(g: &Graph, o: &Orientation) -> Vec<Vertex> {
    let mut indegree: BTreeMap<&Vertex, usize> = g.vertices().iter().map(|v| (v, 0)).collect();
    let mut out: BTreeMap<&Vertex, Vec<&Vertex>> = BTreeMap::new();
    for (t, h) in o.arcs() {
        *indegree.get_mut(h).expect("head is a vertex") += 1;
        out.entry(t).or_default().push(h);
    }
    let mut ready: BTreeSet<&Vertex> = indegree.iter().filter(|(_, &d)| d == 0).map(|(v, _)| *v).collect();
    let mut order = Vec::new();
    while let Some(v) = ready.pop_first() {
        order.push(v.clone());
        for h in out.get(v).map(Vec::as_slice).unwrap_or(&[]) {
            let d = indegree.get_mut(h).expect("head is a vertex");
            *d -= 1;
            if *d == 0 {
                ready.insert(h);
            }
        }
    }
    order
}

/// Removes sources, smallest first. A single sink may carry an out-degree
/// outside A and survives; when every out-degree lies in A all vertices are
/// removed.
pub fn witness_from_orientation(g: &Graph, o: &Orientation, a: &DegreeSet) -> Result<GraphReductionWitness> {
    if g.is_empty() {
        return Err(Error::EmptyComplex);
    }
    let report = check_acyclic(g, o)?;
    if !report.acyclic {
        return Err(Error::CyclicOrientation);
    }
    let outside: Vec<(&Vertex, usize)> = report
        .out_degrees
        .iter()
        .filter(|(_, &d)| !a.contains(d))
        .map(|(v, &d)| (v, d))
        .collect();
    let survivor = match outside.as_slice() {
        [] => None,
        [(v, 0)] => Some((*v).clone()),
        _ => {
            let &(v, degree) = outside.iter().find(|(_, d)| *d != 0).unwrap_or(&outside[0]);
            return Err(Error::OutDegree {
                vertex: v.clone(),
                degree,
            });
        }
    };
    let steps = topological_sources(g, o)
        .into_iter()
        .filter(|v| Some(v) != survivor.as_ref())
        .map(|v| GraphStep {
            degree: report.out_degrees[&v],
            vertex: v,
        })
        .collect();
    Ok(GraphReductionWitness { steps, survivor })
}

/// The least n such that G is {0..n}-reducible, by repeatedly removing a
/// vertex of minimum degree.
pub fn degeneracy(g: &Graph) -> Result<usize> {
    if g.is_empty() {
        return Err(Error::EmptyComplex);
    }
    let mut current = g.clone();
    let mut best = 0;
    while current.num_vertices() > 1 {
        let (v, d) = current
            .degrees()
            .into_iter()
            .min_by_key(|&(_, d)| d)
            .expect("nonempty graph");
        best = best.max(d);
        current = current.delete_vertex(&v)?;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(text: &str) -> Graph {
        Graph::parse(text).unwrap()
    }

    fn ds(text: &str) -> DegreeSet {
        DegreeSet::parse(text).unwrap()
    }

    #[test]
    fn degree_set_syntax() {
        let a = ds("{0,3}");
        assert!(a.contains(0) && a.contains(3) && !a.contains(1));
        assert_eq!(a.to_string(), "{0,3}");
        let r = ds("0..3");
        assert_eq!(r.elements_below(10), vec![0, 1, 2, 3]);
        assert!(r.is_initial_segment());
        let u = ds("{0,2,5..}");
        assert!(u.contains(7) && !u.contains(4));
        assert_eq!(u.max(), None);
        assert_eq!(DegreeSet::at_least(0).to_string(), "{0..}");
        assert!(DegreeSet::parse("{}").is_err());
        assert!(DegreeSet::parse("{a}").is_err());
        assert!(!ds("{1}").is_initial_segment());
    }

    #[test]
    fn reducibility_examples() {
        let w = a_reducible(&g("a"), &ds("{1}")).unwrap().unwrap();
        assert!(w.steps.is_empty());
        // deleting a vertex of a triangle leaves an edge, whose degrees are 1
        let c3 = Graph::cycle(3);
        assert!(a_reducible(&c3, &ds("{0,2}")).unwrap().is_none());
        assert!(a_reducible(&c3, &ds("{1}")).unwrap().is_none());
        let c4 = Graph::cycle(4);
        let w = a_reducible(&c4, &ds("{0,2}")).unwrap().unwrap();
        validate_graph_witness(&c4, &ds("{0,2}"), &w).unwrap();
        let degrees: Vec<usize> = w.steps.iter().map(|s| s.degree).collect();
        assert_eq!(degrees, vec![2, 2, 0]);
        assert!(matches!(
            a_reducible(&Graph::new(), &ds("{1}")),
            Err(Error::EmptyComplex)
        ));
    }

    #[test]
    fn orientation_examples() {
        let c4 = Graph::cycle(4);
        let w = a_reducible(&c4, &ds("{0,2}")).unwrap().unwrap();
        let o = orientation_from_witness(&c4, &w).unwrap();
        let report = check_acyclic(&c4, &o).unwrap();
        assert!(report.acyclic);
        let mut degs: Vec<usize> = report.out_degrees.values().copied().collect();
        degs.sort();
        assert_eq!(degs, vec![0, 0, 2, 2]);

        let edge = g("a b");
        let w = GraphReductionWitness {
            steps: vec![GraphStep {
                vertex: "a".into(),
                degree: 1,
            }],
            survivor: Some("b".into()),
        };
        let o = orientation_from_witness(&edge, &w).unwrap();
        assert_eq!(o.head(&"a".into(), &"b".into()), Some(&"b".into()));

        let path = g("a b\nb c");
        let w = GraphReductionWitness {
            steps: vec![
                GraphStep {
                    vertex: "a".into(),
                    degree: 1,
                },
                GraphStep {
                    vertex: "b".into(),
                    degree: 1,
                },
            ],
            survivor: Some("c".into()),
        };
        let o = orientation_from_witness(&path, &w).unwrap();
        assert_eq!(o.to_string(), "a -> b\nb -> c\n");
        let back = witness_from_orientation(&path, &o, &ds("{1}")).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn bad_witness_rejected() {
        let path = g("a b\nb c");
        let w = GraphReductionWitness {
            steps: vec![GraphStep {
                vertex: "b".into(),
                degree: 1,
            }],
            survivor: None,
        };
        assert!(matches!(
            orientation_from_witness(&path, &w),
            Err(Error::InvalidWitness(_))
        ));
    }

    #[test]
    fn cyclic_orientation() {
        let c3 = Graph::cycle(3);
        let o = Orientation::parse("0 -> 1\n1 -> 2\n2 -> 0").unwrap();
        assert!(!check_acyclic(&c3, &o).unwrap().acyclic);
        assert!(matches!(
            witness_from_orientation(&c3, &o, &ds("{1}")),
            Err(Error::CyclicOrientation)
        ));
        let partial = Orientation::parse("0 -> 1").unwrap();
        assert!(matches!(
            check_acyclic(&c3, &partial),
            Err(Error::OrientationMismatch(_))
        ));
    }

    #[test]
    fn out_degree_outside_set() {
        let path = g("a b\nb c");
        let o = Orientation::parse("b -> a\nb -> c").unwrap();
        assert!(matches!(
            witness_from_orientation(&path, &o, &ds("{1}")),
            Err(Error::OutDegree { degree: 2, .. })
        ));
    }

    #[test]
    fn degeneracy_examples() {
        assert_eq!(degeneracy(&Graph::complete(4)).unwrap(), 3);
        assert_eq!(degeneracy(&Graph::cycle(5)).unwrap(), 2);
        assert_eq!(degeneracy(&Graph::star(4)).unwrap(), 1);
        assert_eq!(degeneracy(&g("a")).unwrap(), 0);
        assert!(degeneracy(&Graph::new()).is_err());
    }

    #[test]
    fn trees_and_forests() {
        assert!(a_reducible(&Graph::star(3), &ds("{1}")).unwrap().is_some());
        assert!(a_reducible(&g("a b\nc d"), &ds("{1}")).unwrap().is_none());
        assert!(a_reducible(&g("a b\nc d"), &ds("{0,1}")).unwrap().is_some());
    }
}
