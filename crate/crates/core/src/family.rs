//! Graph families that parameterise reducibility: stars, all trees, explicit
//! tree lists and the hereditary discrete classes.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::degree_reduction::DegreeSet;
use crate::engine::LocalGraph;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// AHU encoding of an unrooted tree, rooted at its centre.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct TreeCode(String);

impl TreeCode {
    pub(crate) fn from_raw(code: String) -> Self {
        TreeCode(code)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

/// Explicit list of trees, deduplicated up to isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeList {
    trees: Vec<Graph>,
    codes: BTreeSet<TreeCode>,
}

impl TreeList {
    pub fn new(trees: impl IntoIterator<Item = Graph>) -> Result<Self> {
        let mut list = TreeList {
            trees: Vec::new(),
            codes: BTreeSet::new(),
        };
        for t in trees {
            let code = tree_canonical_code(&t)?;
            if list.codes.insert(code) {
                list.trees.push(t);
            }
        }
        Ok(list)
    }

    /// Trees named `point`, `edge`, `P<n>` (path on n vertices) or `star<n>`
    /// (n leaves).
    pub fn from_names<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let trees = names
            .into_iter()
            .map(|n| named_tree(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        TreeList::new(trees)
    }

    /// One tree per `---`-separated block of face-list text.
    pub fn parse(text: &str) -> Result<Self> {
        let mut trees = Vec::new();
        let mut block = String::new();
        for line in text.lines().chain(std::iter::once("---")) {
            if line.trim() == "---" {
                if !block.trim().is_empty() {
                    let g = Graph::parse(&block)?;
                    if !g.is_tree() {
                        return Err(Error::Family(format!("not a tree:\n{g}")));
                    }
                    trees.push(g);
                }
                block.clear();
            } else {
                block.push_str(line);
                block.push('\n');
            }
        }
        TreeList::new(trees)
    }

    pub fn trees(&self) -> &[Graph] {
        &self.trees
    }

    pub fn contains_code(&self, code: &TreeCode) -> bool {
        self.codes.contains(code)
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }
}

pub fn named_tree(name: &str) -> Result<Graph> {
    let bad = || Error::Family(format!("unknown tree name `{name}`"));
    match name {
        "point" => Ok(Graph::path(1)),
        "edge" => Ok(Graph::path(2)),
        _ => {
            if let Some(n) = name.strip_prefix("star") {
                Ok(Graph::star(n.parse().map_err(|_| bad())?))
            } else if let Some(n) = name.strip_prefix('P') {
                let n: usize = n.parse().map_err(|_| bad())?;
                if n == 0 {
                    return Err(bad());
                }
                Ok(Graph::path(n))
            } else {
                Err(bad())
            }
        }
    }
}

/// A family F of graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    /// All trees.
    AllTrees,
    /// S_n: stars with at most `n` leaves; `None` is S_∞, all stars.
    StarsAtMost(Option<usize>),
    /// S_A: stars whose leaf count lies in A.
    StarsWithLeafCounts(DegreeSet),
    /// An explicit list of trees.
    Explicit(TreeList),
    /// Edgeless graphs with at most `n` vertices, the empty graph included.
    HereditaryDiscrete(usize),
}

/// Outcome of the star/P4 dichotomy for subtree-closed families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Dichotomy {
    /// F = S_n; `None` stands for n = ∞.
    StarForm(Option<usize>),
    /// P4 ∈ F.
    ContainsP4,
}

/// Centre of a star.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StarCenter {
    Vertex(crate::complex::Vertex),
    /// The single edge has no distinguished centre.
    EitherEndpoint,
}

impl FamilySpec {
    /// Parses the command-line family grammar:
    /// `all-trees`, `stars:<n|inf>`, `stars-in:{a,b,...}`, `trees:<file>`,
    /// `trees:{point,edge,P3,...}`, `discrete:<n>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec == "all-trees" {
            return Ok(FamilySpec::AllTrees);
        }
        let (kind, arg) = spec
            .split_once(':')
            .ok_or_else(|| Error::Family(format!("unrecognised family `{spec}`")))?;
        match kind {
            "stars" => {
                if arg == "inf" {
                    Ok(FamilySpec::StarsAtMost(None))
                } else {
                    arg.parse()
                        .map(|n| FamilySpec::StarsAtMost(Some(n)))
                        .map_err(|_| Error::Family(format!("bad star bound `{arg}`")))
                }
            }
            "stars-in" => Ok(FamilySpec::StarsWithLeafCounts(DegreeSet::parse(arg)?)),
            "discrete" => arg
                .parse()
                .map(FamilySpec::HereditaryDiscrete)
                .map_err(|_| Error::Family(format!("bad discrete bound `{arg}`"))),
            "trees" => {
                if let Some(inner) = arg.strip_prefix('{').and_then(|a| a.strip_suffix('}')) {
                    let names: Vec<&str> = inner.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
                    Ok(FamilySpec::Explicit(TreeList::from_names(names)?))
                } else {
                    let text = std::fs::read_to_string(Path::new(arg))?;
                    Ok(FamilySpec::Explicit(TreeList::parse(&text)?))
                }
            }
            _ => Err(Error::Family(format!("unrecognised family `{spec}`"))),
        }
    }

    pub fn trees<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        Ok(FamilySpec::Explicit(TreeList::from_names(names)?))
    }

    /// True iff `g` is isomorphic to a member of the family.
    pub fn contains(&self, g: &Graph) -> bool {
        self.accepts(&LocalGraph::from_graph(g))
    }

    pub(crate) fn accepts(&self, g: &LocalGraph) -> bool {
        match self {
            FamilySpec::AllTrees => g.is_tree(),
            FamilySpec::StarsAtMost(bound) => match g.star_leaf_count() {
                Some(leaves) => bound.is_none_or(|n| leaves <= n),
                None => false,
            },
            FamilySpec::StarsWithLeafCounts(a) => g.star_leaf_count().is_some_and(|l| a.contains(l)),
            FamilySpec::Explicit(list) => g.tree_code().is_some_and(|c| list.contains_code(&c)),
            FamilySpec::HereditaryDiscrete(n) => g.num_edges() == 0 && g.num_vertices() <= *n,
        }
    }

    /// Whether every member is a tree (so reductions preserve homotopy type).
    pub fn trees_only(&self) -> bool {
        !matches!(self, FamilySpec::HereditaryDiscrete(_))
    }

    /// Closed under taking subtrees. Only tree families qualify.
    pub fn is_subtree_closed(&self) -> bool {
        match self {
            FamilySpec::AllTrees | FamilySpec::StarsAtMost(_) => true,
            FamilySpec::StarsWithLeafCounts(a) => a.is_initial_segment(),
            FamilySpec::Explicit(list) => is_subtree_closed(list),
            FamilySpec::HereditaryDiscrete(_) => false,
        }
    }

    /// Either F = S_n or P4 ∈ F; defined for subtree-closed families.
    pub fn classify_dichotomy(&self) -> Result<Dichotomy> {
        if !self.is_subtree_closed() {
            return Err(Error::NotSubtreeClosed);
        }
        match self {
            FamilySpec::AllTrees => Ok(Dichotomy::ContainsP4),
            FamilySpec::StarsAtMost(n) => Ok(Dichotomy::StarForm(*n)),
            FamilySpec::StarsWithLeafCounts(a) => Ok(Dichotomy::StarForm(a.max())),
            FamilySpec::Explicit(list) => {
                if list.is_empty() {
                    return Err(Error::Family("empty family".into()));
                }
                if self.contains(&Graph::path(4)) {
                    return Ok(Dichotomy::ContainsP4);
                }
                // without P4 every member has diameter at most two
                let max = list
                    .trees()
                    .iter()
                    .filter_map(star_leaf_count)
                    .max()
                    .expect("nonempty star family");
                Ok(Dichotomy::StarForm(Some(max)))
            }
            FamilySpec::HereditaryDiscrete(_) => Err(Error::NotSubtreeClosed),
        }
    }

    /// Members with at most `max_vertices` vertices, as concrete graphs.
    pub fn members_up_to(&self, max_vertices: usize) -> Vec<Graph> {
        let candidates: Vec<Graph> = match self {
            FamilySpec::Explicit(list) => list.trees().to_vec(),
            FamilySpec::HereditaryDiscrete(n) => (0..=(*n).min(max_vertices))
                .map(|k| {
                    let mut g = Graph::new();
                    for i in 0..k {
                        g.add_vertex(i.to_string().into());
                    }
                    g
                })
                .collect(),
            _ => all_trees_up_to(max_vertices),
        };
        candidates
            .into_iter()
            .filter(|g| g.num_vertices() <= max_vertices && self.contains(g))
            .collect()
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::AllTrees => write!(f, "all-trees"),
            FamilySpec::StarsAtMost(None) => write!(f, "stars:inf"),
            FamilySpec::StarsAtMost(Some(n)) => write!(f, "stars:{n}"),
            FamilySpec::StarsWithLeafCounts(a) => write!(f, "stars-in:{a}"),
            FamilySpec::HereditaryDiscrete(n) => write!(f, "discrete:{n}"),
            FamilySpec::Explicit(list) => {
                let names: Vec<String> = list.trees().iter().map(tree_name).collect();
                write!(f, "trees:{{{}}}", names.join(","))
            }
        }
    }
}

/// A short name for a tree: point, edge, P<n>, star<n>, or its code.
pub fn tree_name(t: &Graph) -> String {
    let n = t.num_vertices();
    match n {
        1 => return "point".into(),
        2 => return "edge".into(),
        _ => {}
    }
    let degrees = t.degrees();
    if degrees.values().all(|&d| d <= 2) {
        return format!("P{n}");
    }
    if let Some(leaves) = star_leaf_count(t) {
        return format!("star{leaves}");
    }
    tree_canonical_code(t).map(|c| c.0).unwrap_or_else(|_| "?".into())
}

pub fn is_tree(g: &Graph) -> bool {
    g.is_tree()
}

/// The centre of a star: the point itself, the "either endpoint" marker for
/// a single edge, otherwise the unique vertex of degree other than one.
pub fn is_star(g: &Graph) -> Option<StarCenter> {
    let leaves = star_leaf_count(g)?;
    match leaves {
        0 => g.vertices().iter().next().cloned().map(StarCenter::Vertex),
        1 => Some(StarCenter::EitherEndpoint),
        _ => g
            .degrees()
            .into_iter()
            .find(|&(_, d)| d != 1)
            .map(|(v, _)| StarCenter::Vertex(v)),
    }
}

pub fn star_leaf_count(g: &Graph) -> Option<usize> {
    LocalGraph::from_graph(g).star_leaf_count()
}

pub fn tree_canonical_code(g: &Graph) -> Result<TreeCode> {
    LocalGraph::from_graph(g).tree_code().ok_or(Error::NotATree)
}

/// Every leaf deletion of every member (with at least two vertices) is again
/// a member; subtrees are reached by iterated leaf deletion.
pub fn is_subtree_closed(list: &TreeList) -> bool {
    list.trees().iter().all(|t| {
        t.num_vertices() < 2
            || t.degrees().into_iter().filter(|&(_, d)| d <= 1).all(|(leaf, _)| {
                let sub = t.delete_vertex(&leaf).expect("leaf is a vertex");
                list.contains_code(&tree_canonical_code(&sub).expect("subtree of a tree"))
            })
    })
}

/// All unlabelled trees with at most `max_vertices` vertices.
pub fn all_trees_up_to(max_vertices: usize) -> Vec<Graph> {
    let mut out: Vec<Graph> = Vec::new();
    if max_vertices == 0 {
        return out;
    }
    let mut layer = vec![Graph::path(1)];
    let mut seen: BTreeSet<TreeCode> = BTreeSet::new();
    seen.insert(tree_canonical_code(&layer[0]).unwrap());
    for n in 1..=max_vertices {
        out.extend(layer.iter().cloned());
        if n == max_vertices {
            break;
        }
        let mut next = Vec::new();
        for t in &layer {
            for v in t.vertices() {
                let mut grown = t.clone();
                grown.add_edge(v.clone(), n.to_string().into());
                if seen.insert(tree_canonical_code(&grown).unwrap()) {
                    next.push(grown);
                }
            }
        }
        layer = next;
    }
    out
}
