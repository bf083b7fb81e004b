//! Two-dimensional simplicial complexes stored as explicit face sets.
//!
//! A [`Complex2`] keeps its vertices, edges and triangles in ordered sets, so
//! iteration order (and therefore every tie-break in the crate) follows the
//! lexicographic order of vertex labels.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::canon::{self, CanonicalKey};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// An opaque vertex label.
///
/// Labels read from face-list text are restricted to alphanumerics, `_` and
/// `'`. The `From` conversions do not validate, so generated labels must stay
/// within that alphabet if they are to be written out and read back.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Vertex(String);

impl Vertex {
    pub fn new(label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        if is_valid_label(&label) {
            Ok(Vertex(label))
        } else {
            Err(Error::parse(0, format!("invalid label `{label}`")))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The label with `count` primes appended.
    pub fn primed(&self, count: usize) -> Vertex {
        let mut s = self.0.clone();
        s.extend(std::iter::repeat_n('\'', count));
        Vertex(s)
    }
}

impl From<&str> for Vertex {
    fn from(s: &str) -> Self {
        Vertex(s.to_string())
    }
}

impl From<String> for Vertex {
    fn from(s: String) -> Self {
        Vertex(s)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) fn is_valid_label(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

/// A face of a 2-complex: one, two or three distinct labels, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Face(Vec<Vertex>);

impl Face {
    pub fn new(labels: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut labels: Vec<Vertex> = labels.into_iter().collect();
        let len = labels.len();
        labels.sort();
        labels.dedup();
        if labels.len() != len {
            return Err(Error::parse(0, "face with repeated labels"));
        }
        if labels.is_empty() || labels.len() > 3 {
            return Err(Error::parse(0, format!("face of size {len}")));
        }
        Ok(Face(labels))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.0.binary_search(v).is_ok()
    }

    pub fn is_subface_of(&self, other: &Face) -> bool {
        self.0.iter().all(|v| other.contains(v))
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub(crate) fn sorted2(a: Vertex, b: Vertex) -> [Vertex; 2] {
    if a <= b {
        [a, b]
    } else {
        [b, a]
    }
}

pub(crate) fn sorted3(a: Vertex, b: Vertex, c: Vertex) -> [Vertex; 3] {
    let mut t = [a, b, c];
    t.sort();
    t
}

/// Splits face-list text into faces. Shared by complexes, graphs and the
/// tree-list format.
pub(crate) fn parse_face_lines(text: &str) -> Result<Vec<(usize, Vec<Vertex>)>> {
    let mut faces = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let mut face = Vec::with_capacity(tokens.len());
        for tok in tokens {
            if !is_valid_label(tok) {
                return Err(Error::parse(line_no, format!("malformed label `{tok}`")));
            }
            face.push(Vertex(tok.to_string()));
        }
        if face.len() > 3 {
            return Err(Error::parse(
                line_no,
                format!("face of size {} exceeds dimension two", face.len()),
            ));
        }
        let distinct: BTreeSet<&Vertex> = face.iter().collect();
        if distinct.len() != face.len() {
            return Err(Error::parse(line_no, "face with repeated labels"));
        }
        faces.push((line_no, face));
    }
    Ok(faces)
}

/// A finite simplicial complex of dimension at most two.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Complex2 {
    vertices: BTreeSet<Vertex>,
    edges: BTreeSet<[Vertex; 2]>,
    triangles: BTreeSet<[Vertex; 3]>,
}

impl Complex2 {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn point(label: impl Into<Vertex>) -> Self {
        let mut k = Self::new();
        k.vertices.insert(label.into());
        k
    }

    /// Parses the face-list format and closes the faces downward.
    pub fn parse(text: &str) -> Result<Self> {
        let mut k = Self::new();
        for (_, face) in parse_face_lines(text)? {
            k.insert_closed(&face);
        }
        Ok(k)
    }

    /// Builds the downward closure of the given faces.
    pub fn from_faces<I, F, V>(faces: I) -> Result<Self>
    where
        I: IntoIterator<Item = F>,
        F: IntoIterator<Item = V>,
        V: Into<Vertex>,
    {
        let mut k = Self::new();
        for face in faces {
            let face = Face::new(face.into_iter().map(Into::into))?;
            k.insert_closed(face.vertices());
        }
        Ok(k)
    }

    /// Inserts a face (of size 1 to 3, distinct labels) with all its subfaces.
    pub fn add_face(&mut self, face: &Face) {
        self.insert_closed(face.vertices());
    }

    fn insert_closed(&mut self, face: &[Vertex]) {
        for v in face {
            self.vertices.insert(v.clone());
        }
        for i in 0..face.len() {
            for j in i + 1..face.len() {
                self.edges.insert(sorted2(face[i].clone(), face[j].clone()));
            }
        }
        if face.len() == 3 {
            self.triangles
                .insert(sorted3(face[0].clone(), face[1].clone(), face[2].clone()));
        }
    }

    pub fn vertices(&self) -> &BTreeSet<Vertex> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<[Vertex; 2]> {
        &self.edges
    }

    pub fn triangles(&self) -> &BTreeSet<[Vertex; 3]> {
        &self.triangles
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn num_faces(&self) -> usize {
        self.vertices.len() + self.edges.len() + self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn contains_vertex(&self, v: &Vertex) -> bool {
        self.vertices.contains(v)
    }

    pub fn contains_face(&self, face: &Face) -> bool {
        match face.vertices() {
            [a] => self.vertices.contains(a),
            [a, b] => self.edges.contains(&[a.clone(), b.clone()]),
            [a, b, c] => self.triangles.contains(&[a.clone(), b.clone(), c.clone()]),
            _ => false,
        }
    }

    /// Dimension of the complex; `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        if !self.triangles.is_empty() {
            Some(2)
        } else if !self.edges.is_empty() {
            Some(1)
        } else if !self.vertices.is_empty() {
            Some(0)
        } else {
            None
        }
    }

    /// All faces, ordered by dimension and then lexicographically.
    pub fn faces(&self) -> Vec<Face> {
        let mut out = Vec::with_capacity(self.num_faces());
        out.extend(self.vertices.iter().map(|v| Face(vec![v.clone()])));
        out.extend(self.edges.iter().map(|e| Face(e.to_vec())));
        out.extend(self.triangles.iter().map(|t| Face(t.to_vec())));
        out
    }

    /// Faces not contained in any larger face.
    pub fn maximal_faces(&self) -> Vec<Face> {
        let mut in_edge: BTreeSet<&Vertex> = BTreeSet::new();
        for [a, b] in &self.edges {
            in_edge.insert(a);
            in_edge.insert(b);
        }
        let mut in_triangle: BTreeSet<[Vertex; 2]> = BTreeSet::new();
        for [a, b, c] in &self.triangles {
            in_triangle.insert([a.clone(), b.clone()]);
            in_triangle.insert([a.clone(), c.clone()]);
            in_triangle.insert([b.clone(), c.clone()]);
        }
        let mut out = Vec::new();
        out.extend(
            self.vertices
                .iter()
                .filter(|v| !in_edge.contains(v))
                .map(|v| Face(vec![v.clone()])),
        );
        out.extend(
            self.edges
                .iter()
                .filter(|e| !in_triangle.contains(*e))
                .map(|e| Face(e.to_vec())),
        );
        out.extend(self.triangles.iter().map(|t| Face(t.to_vec())));
        out
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

    fn require(&self, v: &Vertex) -> Result<()> {
        if self.vertices.contains(v) {
            Ok(())
        } else {
            Err(Error::MissingVertex(v.clone()))
        }
    }

    /// The link of `v`: its neighbours, joined by an edge whenever the three
    /// labels span a triangle.
    pub fn link(&self, v: &Vertex) -> Result<Graph> {
        self.require(v)?;
        let mut g = Graph::new();
        for u in self.neighbors(v) {
            g.add_vertex(u);
        }
        for t in &self.triangles {
            if let Some(pos) = t.iter().position(|x| x == v) {
                let others: Vec<&Vertex> = (0..3).filter(|&i| i != pos).map(|i| &t[i]).collect();
                g.add_edge(others[0].clone(), others[1].clone());
            }
        }
        Ok(g)
    }

    /// The deletion `K \ v`: every face not containing `v`.
    pub fn delete_vertex(&self, v: &Vertex) -> Result<Complex2> {
        self.require(v)?;
        Ok(Complex2 {
            vertices: self.vertices.iter().filter(|x| *x != v).cloned().collect(),
            edges: self.edges.iter().filter(|e| !e.contains(v)).cloned().collect(),
            triangles: self.triangles.iter().filter(|t| !t.contains(v)).cloned().collect(),
        })
    }

    /// Removes a face that lies in no larger face.
    pub fn remove_maximal_face(&mut self, face: &Face) -> Result<()> {
        if !self.contains_face(face) {
            return Err(Error::Precondition(format!("{face} is not a face")));
        }
        let covered = match face.vertices() {
            [v] => self.edges.iter().any(|e| e.contains(v)),
            [a, b] => self.triangles.iter().any(|t| t.contains(a) && t.contains(b)),
            _ => false,
        };
        if covered {
            return Err(Error::Precondition(format!("{face} is not maximal")));
        }
        match face.vertices() {
            [v] => {
                self.vertices.remove(v);
            }
            [a, b] => {
                self.edges.remove(&[a.clone(), b.clone()]);
            }
            [a, b, c] => {
                self.triangles.remove(&[a.clone(), b.clone(), c.clone()]);
            }
            _ => unreachable!("faces have one to three vertices"),
        }
        Ok(())
    }

    /// The subcomplex induced on `keep`.
    pub fn induced(&self, keep: &BTreeSet<Vertex>) -> Complex2 {
        Complex2 {
            vertices: self.vertices.intersection(keep).cloned().collect(),
            edges: self
                .edges
                .iter()
                .filter(|e| e.iter().all(|x| keep.contains(x)))
                .cloned()
                .collect(),
            triangles: self
                .triangles
                .iter()
                .filter(|t| t.iter().all(|x| keep.contains(x)))
                .cloned()
                .collect(),
        }
    }

    /// The cone with a fresh apex over a complex of dimension at most one.
    pub fn cone(&self, apex: impl Into<Vertex>) -> Result<Complex2> {
        let apex = apex.into();
        if self.vertices.contains(&apex) {
            return Err(Error::LabelClash(apex));
        }
        if !self.triangles.is_empty() {
            return Err(Error::ConeOverTriangle);
        }
        let mut k = self.clone();
        k.vertices.insert(apex.clone());
        for v in &self.vertices {
            k.edges.insert(sorted2(v.clone(), apex.clone()));
        }
        for [a, b] in &self.edges {
            k.triangles.insert(sorted3(a.clone(), b.clone(), apex.clone()));
        }
        Ok(k)
    }

    /// A label not used by this complex, derived from `base` by appending primes.
    pub fn fresh_label(&self, base: &str) -> Vertex {
        let base = Vertex::from(base);
        (0..)
            .map(|k| base.primed(k))
            .find(|v| !self.vertices.contains(v))
            .expect("unbounded search")
    }

    /// Applies an injective relabelling. Labels missing from `map` are kept.
    pub fn relabel(&self, map: &BTreeMap<Vertex, Vertex>) -> Complex2 {
        let f = |v: &Vertex| map.get(v).cloned().unwrap_or_else(|| v.clone());
        Complex2 {
            vertices: self.vertices.iter().map(f).collect(),
            edges: self.edges.iter().map(|[a, b]| sorted2(f(a), f(b))).collect(),
            triangles: self
                .triangles
                .iter()
                .map(|[a, b, c]| sorted3(f(a), f(b), f(c)))
                .collect(),
        }
    }

    /// `K ⊔ L`. Labels of `other` receive the fewest appended primes that make
    /// them disjoint from this complex.
    pub fn disjoint_union(&self, other: &Complex2) -> Complex2 {
        let primes = (0..)
            .find(|&k| other.vertices.iter().all(|v| !self.vertices.contains(&v.primed(k))))
            .expect("unbounded search");
        let map: BTreeMap<Vertex, Vertex> = other.vertices.iter().map(|v| (v.clone(), v.primed(primes))).collect();
        let renamed = other.relabel(&map);
        let mut k = self.clone();
        k.vertices.extend(renamed.vertices);
        k.edges.extend(renamed.edges);
        k.triangles.extend(renamed.triangles);
        k
    }

    /// Union of face sets; shared labels are identified.
    pub fn union(&self, other: &Complex2) -> Complex2 {
        let mut k = self.clone();
        k.vertices.extend(other.vertices.iter().cloned());
        k.edges.extend(other.edges.iter().cloned());
        k.triangles.extend(other.triangles.iter().cloned());
        k
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    pub fn one_skeleton(&self) -> Graph {
        let mut g = Graph::new();
        for v in &self.vertices {
            g.add_vertex(v.clone());
        }
        for [a, b] in &self.edges {
            g.add_edge(a.clone(), b.clone());
        }
        g
    }

    pub fn is_connected(&self) -> bool {
        self.one_skeleton().is_connected()
    }

    /// Interprets a complex without triangles as a graph.
    pub fn as_graph(&self) -> Option<Graph> {
        if self.triangles.is_empty() {
            Some(self.one_skeleton())
        } else {
            None
        }
    }

    pub fn barycentric_subdivision(&self) -> Result<Complex2> {
        Ok(self.subdivide()?.complex)
    }

    /// Barycentric subdivision together with the label assigned to each face.
    pub fn subdivide(&self) -> Result<Subdivision> {
        if self.is_empty() {
            return Err(Error::EmptyComplex);
        }
        let faces = self.faces();
        let mut labels: Vec<Vertex> = faces
            .iter()
            .map(|f| {
                let parts: Vec<&str> = f.vertices().iter().map(|v| v.as_str()).collect();
                Vertex(parts.join("_"))
            })
            .collect();
        let distinct: BTreeSet<&Vertex> = labels.iter().collect();
        if distinct.len() != labels.len() {
            labels = (0..faces.len()).map(|i| Vertex(format!("F{i}"))).collect();
        }
        let barycenter: BTreeMap<Face, Vertex> = faces.iter().cloned().zip(labels.iter().cloned()).collect();

        let mut sd = Complex2::new();
        for label in &labels {
            sd.vertices.insert(label.clone());
        }
        for f in &faces {
            for g in &faces {
                if f.dim() < g.dim() && f.is_subface_of(g) {
                    sd.edges.insert(sorted2(barycenter[f].clone(), barycenter[g].clone()));
                }
            }
        }
        for t in &self.triangles {
            let tf = Face(t.to_vec());
            // one triangle per flag v ⊂ {v, w} ⊂ t
            for v in t {
                for w in t.iter().filter(|w| *w != v) {
                    let e = Face(sorted2(v.clone(), w.clone()).to_vec());
                    let vf = Face(vec![v.clone()]);
                    sd.triangles.insert(sorted3(
                        barycenter[&vf].clone(),
                        barycenter[&e].clone(),
                        barycenter[&tf].clone(),
                    ));
                }
            }
        }
        Ok(Subdivision {
            complex: sd,
            barycenter,
        })
    }

    /// Label-independent key; equal keys exactly when the complexes are isomorphic.
    pub fn canonical_form(&self) -> Result<CanonicalKey> {
        let s = canon::Structure::from_complex(self);
        canon::canonical_key(&s, canon::DEFAULT_LEAF_LIMIT).ok_or(Error::CanonicalBound(s.len()))
    }

    pub fn is_isomorphic(&self, other: &Complex2) -> Result<bool> {
        if self.num_vertices() != other.num_vertices()
            || self.num_edges() != other.num_edges()
            || self.num_triangles() != other.num_triangles()
        {
            return Ok(false);
        }
        Ok(self.canonical_form()? == other.canonical_form()?)
    }

    /// Canonical face-list text: maximal faces only, labels sorted within a
    /// face, lines sorted.
    pub fn to_face_list(&self) -> String {
        let mut lines: Vec<String> = self.maximal_faces().iter().map(|f| f.to_string()).collect();
        lines.sort();
        let mut out = String::new();
        for l in lines {
            out.push_str(&l);
            out.push('\n');
        }
        out
    }
}

/// Serialized as its list of maximal faces.
impl serde::Serialize for Complex2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let maximal = self.maximal_faces();
        let faces: Vec<Vec<&str>> = maximal
            .iter()
            .map(|f| f.vertices().iter().map(Vertex::as_str).collect::<Vec<_>>())
            .collect();
        faces.serialize(s)
    }
}

impl fmt::Display for Complex2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_face_list())
    }
}

impl From<&Graph> for Complex2 {
    fn from(g: &Graph) -> Self {
        let mut k = Complex2::new();
        for v in g.vertices() {
            k.vertices.insert(v.clone());
        }
        for e in g.edges() {
            k.edges.insert(e.clone());
        }
        k
    }
}

/// A barycentric subdivision and the vertex standing for each original face.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub complex: Complex2,
    pub barycenter: BTreeMap<Face, Vertex>,
}
