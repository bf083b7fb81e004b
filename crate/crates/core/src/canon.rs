//! Canonical labelling of small complexes.
//!
//! Colour refinement (neighbour colours plus the colour pairs of incident
//! triangles) followed by individualisation of the first non-singleton cell.
//! The smallest encoding over all leaves of the search tree is the canonical
//! key. Automorphisms discovered at leaves prune sibling branches in the usual
//! way: orbits of the automorphisms fixing the current prefix, and a jump back
//! to the divergence point whenever a leaf repeats the first or best leaf.
//!
//! Up to [`EXACT_LIMIT`] vertices the search is unbounded and the key is
//! exact. Larger inputs get a leaf budget and report failure when it runs out.

use std::collections::BTreeMap;

use crate::complex::{Complex2, Vertex};

pub const EXACT_LIMIT: usize = 16;
pub const DEFAULT_LEAF_LIMIT: usize = 4096;

/// Label-independent encoding of a complex (or graph, or coloured complex).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<u32>);

impl CanonicalKey {
    pub fn words(&self) -> &[u32] {
        &self.0
    }
}

/// Index-based view of a complex with an optional vertex colouring.
#[derive(Clone, Debug)]
pub(crate) struct Structure {
    n: usize,
    nbrs: Vec<Vec<u32>>,
    tri_pairs: Vec<Vec<(u32, u32)>>,
    edges: Vec<(u32, u32)>,
    tris: Vec<[u32; 3]>,
    colors: Vec<u32>,
}

impl Structure {
    pub fn new(n: usize, edges: Vec<(u32, u32)>, tris: Vec<[u32; 3]>, colors: Option<Vec<u32>>) -> Self {
        let mut nbrs = vec![Vec::new(); n];
        for &(a, b) in &edges {
            nbrs[a as usize].push(b);
            nbrs[b as usize].push(a);
        }
        let mut tri_pairs = vec![Vec::new(); n];
        for &[a, b, c] in &tris {
            tri_pairs[a as usize].push((b, c));
            tri_pairs[b as usize].push((a, c));
            tri_pairs[c as usize].push((a, b));
        }
        Structure {
            n,
            nbrs,
            tri_pairs,
            edges,
            tris,
            colors: colors.unwrap_or_else(|| vec![0; n]),
        }
    }

    pub fn from_complex(k: &Complex2) -> Self {
        let index: BTreeMap<&Vertex, u32> = k.vertices().iter().enumerate().map(|(i, v)| (v, i as u32)).collect();
        let edges = k.edges().iter().map(|[a, b]| (index[a], index[b])).collect();
        let tris = k
            .triangles()
            .iter()
            .map(|[a, b, c]| [index[a], index[b], index[c]])
            .collect();
        Structure::new(k.num_vertices(), edges, tris, None)
    }

    pub fn len(&self) -> usize {
        self.n
    }
}

/// Computes the canonical key. Returns `None` only when the structure is
/// larger than [`EXACT_LIMIT`] and the search needs more than `leaf_limit`
/// leaves.
pub(crate) fn canonical_key(s: &Structure, leaf_limit: usize) -> Option<CanonicalKey> {
    let mut colors = initial_colors(&s.colors);
    refine(s, &mut colors);
    let mut c = Canonizer {
        s,
        limit: if s.n <= EXACT_LIMIT { None } else { Some(leaf_limit) },
        leaves: 0,
        first: None,
        best: None,
        auts: Vec::new(),
    };
    let mut path = Vec::new();
    c.search(colors, &mut path).ok()?;
    c.best.map(|leaf| CanonicalKey(leaf.key))
}

/// Position-style colours: each vertex gets the number of vertices whose
/// user colour is strictly smaller.
fn initial_colors(user: &[u32]) -> Vec<u32> {
    let mut sorted: Vec<u32> = user.to_vec();
    sorted.sort_unstable();
    user.iter().map(|c| sorted.partition_point(|x| x < c) as u32).collect()
}

fn count_cells(colors: &[u32]) -> usize {
    let mut seen = vec![false; colors.len()];
    let mut cells = 0;
    for &c in colors {
        if !seen[c as usize] {
            seen[c as usize] = true;
            cells += 1;
        }
    }
    cells
}

fn refine(s: &Structure, colors: &mut [u32]) {
    let n = s.n as u32;
    let mut cells = count_cells(colors);
    loop {
        let mut sigs: Vec<(Vec<u32>, usize)> = (0..s.n)
            .map(|v| {
                let mut nb: Vec<u32> = s.nbrs[v].iter().map(|&u| colors[u as usize]).collect();
                nb.sort_unstable();
                let mut tp: Vec<u32> = s.tri_pairs[v]
                    .iter()
                    .map(|&(a, b)| {
                        let (x, y) = (colors[a as usize], colors[b as usize]);
                        x.min(y) * n + x.max(y)
                    })
                    .collect();
                tp.sort_unstable();
                let mut sig = Vec::with_capacity(3 + nb.len() + tp.len());
                sig.push(colors[v]);
                sig.push(nb.len() as u32);
                sig.extend(nb);
                sig.push(tp.len() as u32);
                sig.extend(tp);
                (sig, v)
            })
            .collect();
        sigs.sort_unstable();
        let mut start = 0;
        for i in 0..sigs.len() {
            if i > 0 && sigs[i].0 != sigs[i - 1].0 {
                start = i;
            }
            colors[sigs[i].1] = start as u32;
        }
        let now = count_cells(colors);
        if now == cells {
            break;
        }
        cells = now;
    }
}

struct Leaf {
    key: Vec<u32>,
    perm: Vec<u32>,
    path: Vec<u32>,
}

struct Overflow;

struct Canonizer<'a> {
    s: &'a Structure,
    limit: Option<usize>,
    leaves: usize,
    first: Option<Leaf>,
    best: Option<Leaf>,
    auts: Vec<Vec<u32>>,
}

impl Canonizer<'_> {
    /// Returns `Some(d)` to unwind to depth `d`.
    fn search(&mut self, colors: Vec<u32>, path: &mut Vec<u32>) -> Result<Option<usize>, Overflow> {
        let n = self.s.n;
        let depth = path.len();
        let mut size = vec![0usize; n];
        for &c in &colors {
            size[c as usize] += 1;
        }
        let Some(target) = (0..n).find(|&c| size[c] > 1) else {
            return self.leaf(colors, path);
        };
        let target = target as u32;
        let cell: Vec<u32> = (0..n as u32).filter(|&v| colors[v as usize] == target).collect();
        let mut explored: Vec<u32> = Vec::new();
        for &u in &cell {
            if !explored.is_empty() && self.in_explored_orbit(path, u, &explored) {
                continue;
            }
            let mut child = colors.clone();
            for &w in &cell {
                if w != u {
                    child[w as usize] = target + 1;
                }
            }
            refine(self.s, &mut child);
            path.push(u);
            let jump = self.search(child, path)?;
            path.pop();
            explored.push(u);
            if let Some(d) = jump {
                if d < depth {
                    return Ok(Some(d));
                }
            }
        }
        Ok(None)
    }

    fn leaf(&mut self, colors: Vec<u32>, path: &[u32]) -> Result<Option<usize>, Overflow> {
        self.leaves += 1;
        if let Some(limit) = self.limit {
            if self.leaves > limit {
                return Err(Overflow);
            }
        }
        let key = self.encode(&colors);
        let leaf = Leaf {
            key,
            perm: colors,
            path: path.to_vec(),
        };
        let Some(first) = &self.first else {
            self.first = Some(Leaf {
                key: leaf.key.clone(),
                perm: leaf.perm.clone(),
                path: leaf.path.clone(),
            });
            self.best = Some(leaf);
            return Ok(None);
        };
        let best = self.best.as_ref().expect("best is set with first");
        for reference in [first, best] {
            if reference.key == leaf.key {
                let mut inv = vec![0u32; self.s.n];
                for (v, &label) in reference.perm.iter().enumerate() {
                    inv[label as usize] = v as u32;
                }
                let aut: Vec<u32> = leaf.perm.iter().map(|&label| inv[label as usize]).collect();
                let lcp = leaf
                    .path
                    .iter()
                    .zip(&reference.path)
                    .take_while(|(a, b)| a == b)
                    .count();
                self.auts.push(aut);
                return Ok(Some(lcp));
            }
        }
        if leaf.key < best.key {
            self.best = Some(leaf);
        }
        Ok(None)
    }

    fn in_explored_orbit(&self, path: &[u32], u: u32, explored: &[u32]) -> bool {
        let n = self.s.n;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut any = false;
        for aut in &self.auts {
            if path.iter().any(|&p| aut[p as usize] != p) {
                continue;
            }
            any = true;
            for (v, &img) in aut.iter().enumerate() {
                let (a, b) = (find(&mut parent, v), find(&mut parent, img as usize));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        if !any {
            return false;
        }
        let ru = find(&mut parent, u as usize);
        explored.iter().any(|&x| find(&mut parent, x as usize) == ru)
    }

    fn encode(&self, labels: &[u32]) -> Vec<u32> {
        let s = self.s;
        let mut inv = vec![0u32; s.n];
        for (v, &l) in labels.iter().enumerate() {
            inv[l as usize] = v as u32;
        }
        let mut words = Vec::with_capacity(3 + s.n + 2 * s.edges.len() + 3 * s.tris.len());
        words.push(s.n as u32);
        words.extend(inv.iter().map(|&v| s.colors[v as usize]));
        let mut edges: Vec<(u32, u32)> = s
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (labels[a as usize], labels[b as usize]);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        words.push(edges.len() as u32);
        for (a, b) in edges {
            words.push(a);
            words.push(b);
        }
        let mut tris: Vec<[u32; 3]> = s
            .tris
            .iter()
            .map(|t| {
                let mut r = [labels[t[0] as usize], labels[t[1] as usize], labels[t[2] as usize]];
                r.sort_unstable();
                r
            })
            .collect();
        tris.sort_unstable();
        words.push(tris.len() as u32);
        for t in tris {
            words.extend(t);
        }
        words
    }
}
