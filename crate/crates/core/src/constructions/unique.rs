//! Complexes with a single initial vertex: growth by cones over embedded
//! trees, the one-leaf extension step, a seeded random search, and the
//! assembly of a complex on which the greedy reduction can fail.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{Complex2, Face, Vertex};
use crate::engine::{self, ReductionWitness};
use crate::error::{Error, Result};
use crate::family::{FamilySpec, StarCenter};
use crate::graph::Graph;

/// K ∪ C(T): a new vertex `apex` coned over a tree T lying in the
/// 1-skeleton of K. The link of the apex in the result is T.
pub fn reverse_grow(k: &Complex2, t: &Graph, apex: &Vertex) -> Result<Complex2> {
    if !t.is_tree() {
        return Err(Error::NotATree);
    }
    if k.contains_vertex(apex) {
        return Err(Error::LabelClash(apex.clone()));
    }
    if let Some(v) = t.vertices().iter().find(|v| !k.contains_vertex(v)) {
        return Err(Error::Precondition(format!("tree vertex {v} is not in the complex")));
    }
    if let Some([a, b]) = t.edges().iter().find(|e| !k.edges().contains(*e)) {
        return Err(Error::Precondition(format!("tree edge {a} {b} is not in the complex")));
    }
    Ok(k.union(&Complex2::from(t).cone(apex.clone())?))
}

/// A cycle, or a path on four vertices; both survive enlarging the graph.
fn has_cycle_or_p4(g: &Graph) -> bool {
    g.components().into_iter().any(|comp| {
        let part = Complex2::from(g).induced(&comp).one_skeleton();
        part.num_edges() >= part.num_vertices() || tree_diameter(&part) >= 3
    })
}

fn tree_diameter(t: &Graph) -> usize {
    let far = |from: &Vertex| {
        let mut dist: BTreeMap<Vertex, usize> = [(from.clone(), 0)].into();
        let mut queue = VecDeque::from([from.clone()]);
        while let Some(u) = queue.pop_front() {
            for w in t.neighbors(&u) {
                if !dist.contains_key(&w) {
                    dist.insert(w.clone(), dist[&u] + 1);
                    queue.push_back(w);
                }
            }
        }
        dist.into_iter().max_by_key(|&(_, d)| d).expect("start is reached")
    };
    let Some(start) = t.vertices().iter().next() else {
        return 0;
    };
    let (end, _) = far(start);
    far(&end).1
}

/// Every vertex other than `v` has a link that stays outside F however it
/// is enlarged: it contains a cycle, or, when P4 ∉ F, a path on four
/// vertices.
fn others_stay_non_initial(k: &Complex2, v: &Vertex, f: &FamilySpec) -> Result<bool> {
    let p4_allowed = f.contains(&Graph::path(4));
    for u in k.vertices() {
        if u == v {
            continue;
        }
        let link = k.link(u)?;
        let blocked = if p4_allowed {
            !link.is_forest()
        } else {
            has_cycle_or_p4(&link)
        };
        if !blocked {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The only initial vertex of K under F, if there is exactly one.
pub fn unique_initial(k: &Complex2, f: &FamilySpec) -> Result<Option<Vertex>> {
    let init = engine::initial_vertices(k, f)?;
    Ok((init.len() == 1).then(|| init.into_iter().next().expect("one element")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extension {
    pub complex: Complex2,
    /// The new vertex, whose link is the old unique link with one extra leaf.
    pub apex: Vertex,
}

/// With T' = link(v'), moves every edge x–w of T' to x–v' and adds the
/// edge v'–w. The result T is embedded in K' and a cone over it is
/// attached. F is needed to check that v' is the only initial vertex.
pub fn extend_unique_initial(k: &Complex2, v: &Vertex, w: &Vertex, f: &FamilySpec) -> Result<Extension> {
    let t_prime = k.link(v)?;
    if !t_prime.is_tree() {
        return Err(Error::Precondition(format!("link of {v} is not a tree")));
    }
    if !t_prime.vertices().contains(w) {
        return Err(Error::Precondition(format!("{w} is not in the link of {v}")));
    }
    if unique_initial(k, f)?.as_ref() != Some(v) {
        return Err(Error::Precondition(format!("{v} is not the unique initial vertex")));
    }
    let swap: BTreeMap<Vertex, Vertex> = [(w.clone(), v.clone())].into();
    let mut t = t_prime.relabel(&swap);
    t.add_edge(v.clone(), w.clone());
    let apex = k.fresh_label("v");
    let complex = reverse_grow(k, &t, &apex)?;
    Ok(Extension { complex, apex })
}

/// Parameters of the randomised search for unique-initial complexes.
#[derive(Clone, Debug)]
pub struct UniqueSearch {
    pub family: FamilySpec,
    /// Number of independent growth trials.
    pub budget: u64,
    pub seed: u64,
    /// Largest complex built in one trial.
    pub max_vertices: usize,
    /// If set, the unique initial vertex must have a link isomorphic to it.
    pub required_link: Option<Graph>,
}

impl UniqueSearch {
    pub fn new(family: FamilySpec, budget: u64, seed: u64) -> Self {
        UniqueSearch {
            family,
            budget,
            seed,
            max_vertices: 12,
            required_link: None,
        }
    }
}

/// A complex in R(F) with one initial vertex. Every other link contains a
/// cycle (or a P4 when P4 ∉ F), so enlarging the complex keeps them
/// non-initial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniqueInitial {
    pub complex: Complex2,
    pub initial: Vertex,
    /// A reduction to a point: the growth order reversed.
    pub witness: ReductionWitness,
    /// 1-based trial on which the complex was found.
    pub trial: u64,
}

pub fn search_unique_initial(f: &FamilySpec, budget: u64, seed: u64) -> Result<UniqueInitial> {
    search_unique_initial_with(&UniqueSearch::new(f.clone(), budget, seed), |_| true)
}

/// Grows complexes from a point by cones over randomly embedded members of
/// F and returns the first hit accepted by `accept`.
pub fn search_unique_initial_with(
    cfg: &UniqueSearch,
    mut accept: impl FnMut(&UniqueInitial) -> bool,
) -> Result<UniqueInitial> {
    let f = &cfg.family;
    let needed = ["point", "edge", "P3"].map(|n| crate::family::named_tree(n).expect("known name"));
    if !f.trees_only() || !needed.iter().all(|t| f.contains(t)) {
        return Err(Error::Precondition(format!(
            "{f} must contain the point, the edge and P3"
        )));
    }
    let shapes = f.members_up_to(cfg.max_vertices);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for trial in 1..=cfg.budget {
        let mut k = Complex2::point("0");
        let mut order = vec![Vertex::from("0")];
        for step in 1..cfg.max_vertices {
            let Some(t) = random_embedding(&k, &shapes, &mut rng) else {
                break;
            };
            let apex = Vertex::from(step.to_string());
            k = reverse_grow(&k, &t, &apex)?;
            order.push(apex.clone());
            if unique_initial(&k, f)?.as_ref() != Some(&apex) || !others_stay_non_initial(&k, &apex, f)? {
                continue;
            }
            if let Some(req) = &cfg.required_link {
                if !t.is_isomorphic(req)? {
                    continue;
                }
            }
            let removal: Vec<Vertex> = order[1..].iter().rev().cloned().collect();
            let witness = ReductionWitness::record(&k, &removal)?;
            engine::validate_witness(&k, f, &witness)?;
            let hit = UniqueInitial {
                complex: k.clone(),
                initial: apex,
                witness,
                trial,
            };
            if accept(&hit) {
                return Ok(hit);
            }
        }
    }
    Err(Error::BudgetExhausted(cfg.budget))
}

/// A random member of `shapes` mapped injectively onto a subtree of the
/// 1-skeleton of K, or `None` after repeated failures.
fn random_embedding(k: &Complex2, shapes: &[Graph], rng: &mut ChaCha8Rng) -> Option<Graph> {
    let verts: Vec<&Vertex> = k.vertices().iter().collect();
    let skeleton = k.one_skeleton();
    let fitting: Vec<&Graph> = shapes.iter().filter(|t| t.num_vertices() <= verts.len()).collect();
    for _ in 0..32 {
        // larger trees close cycles in the links of their vertices faster
        let t = fitting
            .choose_weighted(rng, |t| t.num_vertices() * t.num_vertices())
            .ok()?;
        let tv: Vec<&Vertex> = t.vertices().iter().collect();
        let root = *tv.choose(rng).expect("trees are nonempty");
        let mut image: BTreeMap<&Vertex, Vertex> = BTreeMap::new();
        let mut used: BTreeSet<Vertex> = BTreeSet::new();
        let start = (*verts.choose(rng).expect("nonempty complex")).clone();
        used.insert(start.clone());
        image.insert(root, start);
        let mut queue = VecDeque::from([root]);
        let mut ok = true;
        'bfs: while let Some(u) = queue.pop_front() {
            let mut children: Vec<&Vertex> = t
                .vertices()
                .iter()
                .filter(|c| t.has_edge(u, c) && !image.contains_key(c))
                .collect();
            children.shuffle(rng);
            for c in children {
                let candidates: Vec<Vertex> = skeleton
                    .neighbors(&image[u])
                    .into_iter()
                    .filter(|x| !used.contains(x))
                    .collect();
                let Some(x) = candidates.choose(rng) else {
                    ok = false;
                    break 'bfs;
                };
                used.insert(x.clone());
                image.insert(c, x.clone());
                queue.push_back(c);
            }
        }
        if ok {
            let map: BTreeMap<Vertex, Vertex> = image.into_iter().map(|(a, b)| (a.clone(), b)).collect();
            return Some(t.relabel(&map));
        }
    }
    None
}

/// Two copies of a base complex joined through vertices A and B so that
/// removing A first strands the greedy reduction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreedyTrap {
    pub complex: Complex2,
    pub a: Vertex,
    pub b: Vertex,
    /// Unique initial vertex of the base, relabelled `1`.
    pub one: Vertex,
    /// Endpoint of the link of `1` the base reduces to, relabelled `10`.
    pub ten: Vertex,
    /// Full reduction: B, the base down to 10, then 10, A and the copy.
    pub witness: ReductionWitness,
}

/// Builds the trap from a base that is F-reducible, has a unique initial
/// vertex with link P3, and reduces to an endpoint of that link.
pub fn greedy_trap(base: &Complex2, f: &FamilySpec) -> Result<GreedyTrap> {
    let init =
        unique_initial(base, f)?.ok_or_else(|| Error::Precondition("base needs exactly one initial vertex".into()))?;
    let link = base.link(&init)?;
    if !matches!(crate::family::is_star(&link), Some(StarCenter::Vertex(_))) || link.num_vertices() != 3 {
        return Err(Error::Precondition("the initial link must be P3".into()));
    }
    let endpoints: Vec<Vertex> = link
        .degrees()
        .into_iter()
        .filter(|&(_, d)| d == 1)
        .map(|(v, _)| v)
        .collect();
    let mut chosen = None;
    for e in endpoints {
        if engine::reduce_to_target(base, f, &e)?.is_some() {
            chosen = Some(e);
            break;
        }
    }
    let ten_old =
        chosen.ok_or_else(|| Error::Precondition("base does not reduce to an endpoint of the initial link".into()))?;

    let mut map = BTreeMap::new();
    map.insert(init.clone(), Vertex::from("1"));
    map.insert(ten_old.clone(), Vertex::from("10"));
    let mut next = 2;
    for v in base.vertices() {
        if v != &init && v != &ten_old {
            if next == 10 {
                next += 1;
            }
            map.insert(v.clone(), Vertex::from(next.to_string()));
            next += 1;
        }
    }
    let k = base.relabel(&map);
    let prime: BTreeMap<Vertex, Vertex> = k.vertices().iter().map(|v| (v.clone(), v.primed(1))).collect();
    let k2 = k.relabel(&prime);
    let (one, ten, a, b) = ("1".into(), "10".into(), Vertex::from("A"), Vertex::from("B"));
    let one2 = Vertex::from("1'");
    let mut trap = k.union(&k2);
    for tri in [[&one, &ten, &a], [&one, &a, &b], [&one2, &a, &b]] {
        trap.add_face(&Face::new(tri.map(Clone::clone))?);
    }

    let to_ten = engine::reduce_to_target(&k, f, &ten)?.expect("relabelled base keeps its reduction");
    let copy = engine::decide_reducible(&k2, f)?.expect("relabelled base is reducible");
    let mut order = vec![b.clone()];
    order.extend(to_ten.vertices());
    order.extend([ten.clone(), a.clone()]);
    order.extend(copy.vertices());
    let witness = ReductionWitness::record(&trap, &order)?;
    engine::validate_witness(&trap, f, &witness)?;
    if !witness.final_complex.is_point() {
        return Err(Error::Invariant("planned reduction does not end at a point".into()));
    }
    Ok(GreedyTrap {
        complex: trap,
        a,
        b,
        one,
        ten,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(text: &str) -> Complex2 {
        Complex2::parse(text).unwrap()
    }

    fn small_family() -> FamilySpec {
        FamilySpec::trees(["point", "edge", "P3"]).unwrap()
    }

    #[test]
    fn reverse_grow_examples() {
        let grown = reverse_grow(&cx("a b"), &Graph::parse("a b").unwrap(), &"c".into()).unwrap();
        assert_eq!(grown, cx("a b c"));
        let p3 = Graph::parse("a b\nb c").unwrap();
        let grown = reverse_grow(&cx("a b c"), &p3, &"d".into()).unwrap();
        assert!(grown.link(&"d".into()).unwrap().is_isomorphic(&Graph::path(3)).unwrap());
        assert!(reverse_grow(&cx("a b"), &p3, &"d".into()).is_err());
        assert!(matches!(
            reverse_grow(&cx("a b"), &Graph::parse("a b").unwrap(), &"a".into()),
            Err(Error::LabelClash(_))
        ));
        let cyc = Graph::parse("a b\nb c\nc a").unwrap();
        assert!(matches!(
            reverse_grow(&cx("a b c"), &cyc, &"d".into()),
            Err(Error::NotATree)
        ));
    }

    #[test]
    fn cycle_or_p4_detection() {
        assert!(has_cycle_or_p4(&Graph::cycle(3)));
        assert!(has_cycle_or_p4(&Graph::path(4)));
        assert!(!has_cycle_or_p4(&Graph::path(3)));
        assert!(!has_cycle_or_p4(&Graph::star(5)));
        assert_eq!(tree_diameter(&Graph::path(6)), 5);
    }

    #[test]
    fn search_needs_small_trees() {
        let r = search_unique_initial(&FamilySpec::StarsAtMost(Some(1)), 10, 0);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn search_hit_is_checked() {
        let f = small_family();
        let hit = search_unique_initial(&f, 10_000, 3).unwrap();
        assert_eq!(unique_initial(&hit.complex, &f).unwrap(), Some(hit.initial.clone()));
        engine::validate_witness(&hit.complex, &f, &hit.witness).unwrap();
        assert!(hit.witness.final_complex.is_point());
    }

    #[test]
    fn search_is_deterministic() {
        let f = small_family();
        let a = search_unique_initial(&f, 10_000, 7).unwrap();
        let b = search_unique_initial(&f, 10_000, 7).unwrap();
        assert_eq!((a.complex, a.trial), (b.complex, b.trial));
    }

    #[test]
    fn extension_preconditions() {
        let k = cx("a b c");
        let f = FamilySpec::AllTrees;
        assert!(extend_unique_initial(&k, &"a".into(), &"z".into(), &f).is_err());
        // every vertex of a triangle is initial
        assert!(extend_unique_initial(&k, &"a".into(), &"b".into(), &f).is_err());
    }

    #[test]
    fn trap_rejects_bad_bases() {
        let f = small_family();
        assert!(greedy_trap(&cx("a b c"), &f).is_err());
        assert!(greedy_trap(&cx("a b\nb c\nc a"), &f).is_err());
    }
}
