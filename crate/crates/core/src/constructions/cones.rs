//! Cones over graphs and the three equivalent forms of S_A-reducibility.

use serde::Serialize;

use crate::complex::{Complex2, Vertex};
use crate::degree_reduction::{self, DegreeSet};
use crate::engine::{self, SearchOptions};
use crate::error::{Error, Result};
use crate::family::FamilySpec;
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConeEquivalence {
    /// C(G ⊔ G) is S_A-reducible.
    pub doubled_cone: bool,
    /// CG is S_A-reducible to its apex.
    pub cone_to_apex: bool,
    /// G is A-reducible.
    pub graph: bool,
}

impl ConeEquivalence {
    pub fn all_equal(&self) -> bool {
        self.doubled_cone == self.cone_to_apex && self.cone_to_apex == self.graph
    }
}

/// The cone over `g` and its apex label.
pub fn cone_over(g: &Graph) -> Result<(Complex2, Vertex)> {
    let k = Complex2::from(g);
    let apex = k.fresh_label("apex");
    Ok((k.cone(apex.clone())?, apex))
}

pub fn cone_equivalence_check(g: &Graph, a: &DegreeSet) -> Result<ConeEquivalence> {
    cone_equivalence_check_with(g, a, SearchOptions::default())
}

pub fn cone_equivalence_check_with(g: &Graph, a: &DegreeSet, opts: SearchOptions) -> Result<ConeEquivalence> {
    if g.is_empty() {
        return Err(Error::EmptyComplex);
    }
    let f = FamilySpec::StarsWithLeafCounts(a.clone());
    let (doubled, _) = cone_over(&g.disjoint_union(g))?;
    let (cone, apex) = cone_over(g)?;
    Ok(ConeEquivalence {
        doubled_cone: engine::decide_reducible_with(&doubled, &f, opts)?.is_some(),
        cone_to_apex: engine::reduce_to_target_with(&cone, &f, &apex, opts)?.is_some(),
        graph: degree_reduction::a_reducible_with(g, a, opts)?.is_some(),
    })
}
