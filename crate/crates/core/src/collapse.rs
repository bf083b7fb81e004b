//! Elementary collapses, greedy collapsibility and the comparison of
//! collapsibility with reducibility of the barycentric subdivision.

use std::fmt;

use serde::Serialize;

use crate::complex::{Complex2, Face};
use crate::engine::{self, ReductionWitness, SearchOptions};
use crate::error::{Error, Result};
use crate::family::FamilySpec;

/// Removal of a free face together with the unique face containing it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CollapseStep {
    pub free: Face,
    pub coface: Face,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollapseWitness {
    pub steps: Vec<CollapseStep>,
    pub final_complex: Complex2,
}

impl fmt::Display for CollapseWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{} < {}", s.free, s.coface)?;
        }
        Ok(())
    }
}

/// Faces σ lying in exactly one maximal face τ, with dim τ = dim σ + 1,
/// in increasing order of (σ, τ).
pub fn free_faces(k: &Complex2) -> Vec<CollapseStep> {
    let mut out = Vec::new();
    for [a, b] in k.edges() {
        let mut cofaces = k.triangles().iter().filter(|t| t.contains(a) && t.contains(b));
        if let (Some(t), None) = (cofaces.next(), cofaces.next()) {
            out.push(CollapseStep {
                free: Face::new([a.clone(), b.clone()]).expect("edge"),
                coface: Face::new(t.iter().cloned()).expect("triangle"),
            });
        }
    }
    for v in k.vertices() {
        let in_triangle = k.triangles().iter().any(|t| t.contains(v));
        let mut edges = k.edges().iter().filter(|e| e.contains(v));
        if let (false, Some(e), None) = (in_triangle, edges.next(), edges.next()) {
            out.push(CollapseStep {
                free: Face::new([v.clone()]).expect("vertex"),
                coface: Face::new(e.iter().cloned()).expect("edge"),
            });
        }
    }
    out.sort();
    out
}

/// Performs one elementary collapse after checking that it is one.
pub fn elementary_collapse(k: &Complex2, step: &CollapseStep) -> Result<Complex2> {
    if !free_faces(k).contains(step) {
        return Err(Error::InvalidWitness(format!(
            "{} is not a free face of {}",
            step.free, step.coface
        )));
    }
    let mut next = k.clone();
    next.remove_maximal_face(&step.coface)?;
    next.remove_maximal_face(&step.free)?;
    Ok(next)
}

/// Collapses the smallest free face until none is left. The witness is
/// partial when the final complex is not a point.
pub fn collapse_greedily(k: &Complex2, first: Option<&CollapseStep>) -> Result<CollapseWitness> {
    if k.is_empty() {
        return Err(Error::EmptyComplex);
    }
    let mut current = k.clone();
    let mut steps = Vec::new();
    if let Some(step) = first {
        current = elementary_collapse(&current, step)?;
        steps.push(step.clone());
    }
    while current.num_faces() > 1 {
        let Some(step) = free_faces(&current).into_iter().next() else {
            break;
        };
        current = elementary_collapse(&current, &step)?;
        steps.push(step);
    }
    Ok(CollapseWitness {
        steps,
        final_complex: current,
    })
}

/// A collapse to a point, found greedily; greedy is complete in dimension two.
pub fn greedy_collapse(k: &Complex2) -> Result<Option<CollapseWitness>> {
    let w = collapse_greedily(k, None)?;
    Ok(w.final_complex.is_point().then_some(w))
}

/// Replays a collapse sequence, checking freeness and Euler characteristic.
pub fn validate_collapse(k: &Complex2, w: &CollapseWitness) -> Result<()> {
    let chi = k.euler_characteristic();
    let mut current = k.clone();
    for (i, step) in w.steps.iter().enumerate() {
        current = elementary_collapse(&current, step)?;
        if current.euler_characteristic() != chi {
            return Err(Error::Invariant(format!(
                "Euler characteristic changed at step {}",
                i + 1
            )));
        }
    }
    if current != w.final_complex {
        return Err(Error::InvalidWitness("final complex does not match the replay".into()));
    }
    Ok(())
}

/// The family {point, P3, P5} of links used when simulating collapses in sd K.
pub fn subdivision_family() -> FamilySpec {
    FamilySpec::trees(["point", "P3", "P5"]).expect("known names")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SdReport {
    /// K is collapsible.
    pub collapsible: bool,
    /// sd K is {point, P3, P5}-reducible.
    pub sd_restricted: bool,
    /// sd K is nonevasive.
    pub sd_nonevasive: bool,
    /// sd K is collapsible.
    pub sd_collapsible: bool,
}

impl SdReport {
    pub fn all_equal(&self) -> bool {
        let v = [
            self.collapsible,
            self.sd_restricted,
            self.sd_nonevasive,
            self.sd_collapsible,
        ];
        v.iter().all(|&b| b == v[0])
    }
}

pub fn sd_equivalence_report(k: &Complex2) -> Result<SdReport> {
    sd_equivalence_report_with(k, SearchOptions::default())
}

pub fn sd_equivalence_report_with(k: &Complex2, opts: SearchOptions) -> Result<SdReport> {
    if k.is_empty() {
        return Err(Error::EmptyComplex);
    }
    let sd = k.barycentric_subdivision()?;
    Ok(SdReport {
        collapsible: greedy_collapse(k)?.is_some(),
        sd_restricted: engine::decide_reducible_with(&sd, &subdivision_family(), opts)?.is_some(),
        sd_nonevasive: engine::decide_reducible_with(&sd, &FamilySpec::AllTrees, opts)?.is_some(),
        sd_collapsible: greedy_collapse(&sd)?.is_some(),
    })
}

/// Translates a collapse of K into a {point, P3, P5}-reduction of sd K:
/// a free edge becomes its barycentre followed by the triangle's, a free
/// vertex becomes the vertex followed by the edge's barycentre.
pub fn simulate_collapse_in_sd(k: &Complex2, w: &CollapseWitness) -> Result<ReductionWitness> {
    validate_collapse(k, w)?;
    let sub = k.subdivide()?;
    let order: Vec<_> = w
        .steps
        .iter()
        .flat_map(|s| [sub.barycenter[&s.free].clone(), sub.barycenter[&s.coface].clone()])
        .collect();
    let reduction = ReductionWitness::record(&sub.complex, &order)?;
    engine::validate_witness(&sub.complex, &subdivision_family(), &reduction)?;
    Ok(reduction)
}

/// A triangulation of the dunce hat: contractible, yet without free faces.
pub fn dunce_hat() -> Complex2 {
    Complex2::parse(include_str!("../fixtures/dunce_hat.cx")).expect("fixture parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(text: &str) -> Complex2 {
        Complex2::parse(text).unwrap()
    }

    #[test]
    fn free_face_examples() {
        assert_eq!(free_faces(&cx("a b c")).len(), 3);
        assert!(free_faces(&cx("a b\nb c\nc a")).is_empty());
        assert_eq!(free_faces(&cx("a b")).len(), 2);
    }

    #[test]
    fn dunce_hat_fixture() {
        let d = dunce_hat();
        assert_eq!((d.num_vertices(), d.num_edges(), d.num_triangles()), (8, 24, 17));
        assert_eq!(d.euler_characteristic(), 1);
        assert!(free_faces(&d).is_empty());
        assert!(greedy_collapse(&d).unwrap().is_none());
    }

    #[test]
    fn collapse_examples() {
        let tri = cx("a b c");
        let w = greedy_collapse(&tri).unwrap().unwrap();
        assert_eq!(w.steps.len(), 3);
        validate_collapse(&tri, &w).unwrap();
        let tetra = cx("a b c\na b d\na c d\nb c d");
        assert!(greedy_collapse(&tetra).unwrap().is_none());
        assert!(greedy_collapse(&Complex2::point("a"))
            .unwrap()
            .unwrap()
            .steps
            .is_empty());
    }

    #[test]
    fn sd_report_examples() {
        let all = sd_equivalence_report(&cx("a b c")).unwrap();
        assert!(all.all_equal() && all.collapsible);
        for k in [cx("a b\nb c\nc a"), cx("a b c\na b d\na c d\nb c d")] {
            let r = sd_equivalence_report(&k).unwrap();
            assert!(r.all_equal() && !r.collapsible);
        }
    }

    #[test]
    fn simulation_examples() {
        let tri = cx("a b c");
        let w = greedy_collapse(&tri).unwrap().unwrap();
        let r = simulate_collapse_in_sd(&tri, &w).unwrap();
        assert_eq!(r.len(), 6);
        assert!(r.final_complex.is_point());
        let links: Vec<usize> = r.steps.iter().map(|s| s.link.num_vertices()).collect();
        assert_eq!(&links[..2], &[3, 5]);

        let edge = cx("a b");
        let w = greedy_collapse(&edge).unwrap().unwrap();
        let r = simulate_collapse_in_sd(&edge, &w).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.steps.iter().all(|s| s.link.num_vertices() == 1));

        let p = Complex2::point("a");
        let w = greedy_collapse(&p).unwrap().unwrap();
        assert!(simulate_collapse_in_sd(&p, &w).unwrap().is_empty());
    }

    #[test]
    fn triangle_barycentre_link_is_p5() {
        let sub = cx("a b c").subdivide().unwrap();
        let edge = Face::new(["a".into(), "b".into()]).unwrap();
        let tri = Face::new(["a".into(), "b".into(), "c".into()]).unwrap();
        let k = sub.complex.delete_vertex(&sub.barycenter[&edge]).unwrap();
        let link = k.link(&sub.barycenter[&tri]).unwrap();
        assert!(link.is_isomorphic(&crate::graph::Graph::path(5)).unwrap());
    }
}
