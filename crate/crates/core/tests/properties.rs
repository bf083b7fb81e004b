use std::collections::BTreeMap;

use proptest::prelude::*;

use vdc::collapse;
use vdc::degree_reduction::{self, DegreeSet};
use vdc::engine;
use vdc::family::tree_canonical_code;
use vdc::{Complex2, FamilySpec, Graph, Vertex};

/// Random complexes on up to 7 vertices: a set of edges and triangles
/// together with their faces.
fn complex() -> impl Strategy<Value = Complex2> {
    (2usize..=7)
        .prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
            let triples: Vec<(usize, usize, usize)> = (0..n)
                .flat_map(|a| (a + 1..n).flat_map(move |b| (b + 1..n).map(move |c| (a, b, c))))
                .collect();
            let (np, nt) = (pairs.len(), triples.len());
            (
                Just(n),
                prop::sample::subsequence(pairs, 0..=np.min(10)),
                prop::sample::subsequence(triples, 0..=nt.min(8)),
            )
        })
        .prop_map(|(n, edges, tris)| {
            let mut text = String::new();
            for v in 0..n {
                text.push_str(&format!("{v}\n"));
            }
            for (a, b) in edges {
                text.push_str(&format!("{a} {b}\n"));
            }
            for (a, b, c) in tris {
                text.push_str(&format!("{a} {b} {c}\n"));
            }
            Complex2::parse(&text).unwrap()
        })
}

fn graph() -> impl Strategy<Value = Graph> {
    complex().prop_map(|k| k.one_skeleton())
}

fn shuffle_labels(k: &Complex2, seed: &[usize]) -> BTreeMap<Vertex, Vertex> {
    let mut order: Vec<usize> = (0..k.num_vertices()).collect();
    for (i, s) in seed.iter().enumerate().take(order.len()) {
        let j = s % order.len();
        order.swap(i, j);
    }
    k.vertices()
        .iter()
        .zip(order)
        .map(|(v, i)| (v.clone(), Vertex::from(format!("v{i}"))))
        .collect()
}

fn families() -> Vec<FamilySpec> {
    ["stars:1", "stars:inf", "trees:{point,edge,P3,P4}", "all-trees"]
        .iter()
        .map(|s| FamilySpec::parse(s).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn face_list_round_trips(k in complex()) {
        prop_assert_eq!(Complex2::parse(&k.to_face_list()).unwrap(), k);
    }

    #[test]
    fn canonical_form_ignores_labels(k in complex(), seed in prop::collection::vec(0usize..100, 7)) {
        let other = k.relabel(&shuffle_labels(&k, &seed));
        prop_assert_eq!(k.canonical_form().unwrap(), other.canonical_form().unwrap());
        prop_assert!(k.is_isomorphic(&other).unwrap());
    }

    #[test]
    fn reducibility_ignores_labels(k in complex(), seed in prop::collection::vec(0usize..100, 7)) {
        let other = k.relabel(&shuffle_labels(&k, &seed));
        for f in families() {
            prop_assert_eq!(
                engine::decide_reducible(&k, &f).unwrap().is_some(),
                engine::decide_reducible(&other, &f).unwrap().is_some()
            );
        }
    }

    #[test]
    fn witnesses_replay_and_keep_euler_characteristic(k in complex()) {
        for f in families() {
            if let Some(w) = engine::decide_reducible(&k, &f).unwrap() {
                engine::validate_witness(&k, &f, &w).unwrap();
                prop_assert_eq!(k.euler_characteristic(), 1);
                let steps = engine::ReductionWitness::parse_steps(&w.to_string()).unwrap();
                prop_assert_eq!(&steps, &w.steps);
            }
        }
    }

    #[test]
    fn greedy_witnesses_replay(k in complex()) {
        for f in families() {
            let out = engine::greedy_reduce(&k, &f, None).unwrap();
            engine::validate_witness(&k, &f, &out.witness).unwrap();
            if let Some(stuck) = out.stuck_complex() {
                prop_assert!(engine::initial_vertices(stuck, &f).unwrap().is_empty());
            }
        }
    }

    #[test]
    fn subdivision_keeps_euler_characteristic(k in complex()) {
        let sd = k.barycentric_subdivision().unwrap();
        prop_assert_eq!(sd.euler_characteristic(), k.euler_characteristic());
        prop_assert_eq!(sd.num_vertices(), k.num_faces());
    }

    #[test]
    fn collapses_keep_euler_characteristic(k in complex()) {
        let w = collapse::collapse_greedily(&k, None).unwrap();
        collapse::validate_collapse(&k, &w).unwrap();
        prop_assert_eq!(w.final_complex.euler_characteristic(), k.euler_characteristic());
        prop_assert!(collapse::free_faces(&w.final_complex).is_empty() || w.final_complex.is_point());
    }

    #[test]
    fn nonevasive_implies_collapsible(k in complex()) {
        if engine::nonevasive(&k).unwrap().is_some() {
            prop_assert!(collapse::greedy_collapse(&k).unwrap().is_some());
        }
    }

    #[test]
    fn graph_witnesses_give_acyclic_orientations(g in graph(), max in 0usize..4) {
        let a = DegreeSet::range(0, max).unwrap();
        if let Some(w) = degree_reduction::a_reducible(&g, &a).unwrap() {
            degree_reduction::validate_graph_witness(&g, &a, &w).unwrap();
            let o = degree_reduction::orientation_from_witness(&g, &w).unwrap();
            prop_assert_eq!(o.len(), g.num_edges());
            let report = degree_reduction::check_acyclic(&g, &o).unwrap();
            prop_assert!(report.acyclic);
            prop_assert!(report.out_degrees.values().all(|&d| a.contains(d)));
        }
    }

    #[test]
    fn tree_codes_ignore_labels(k in complex(), seed in prop::collection::vec(0usize..100, 7)) {
        let g = k.one_skeleton();
        if g.is_tree() {
            let other = g.relabel(&shuffle_labels(&k, &seed));
            prop_assert_eq!(tree_canonical_code(&g).unwrap(), tree_canonical_code(&other).unwrap());
        }
    }

    #[test]
    fn degree_sets_round_trip(values in prop::collection::btree_set(0usize..12, 1..6)) {
        let a = DegreeSet::new(values.iter().copied()).unwrap();
        prop_assert_eq!(DegreeSet::parse(&a.to_string()).unwrap(), a);
    }
}
