/// Fixed-capacity set of vertex indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct VertexSet {
    words: Box<[u64]>,
}

impl VertexSet {
    pub fn full(n: usize) -> Self {
        let mut words = vec![0u64; n.div_ceil(64).max(1)].into_boxed_slice();
        for i in 0..n {
            words[i / 64] |= 1 << (i % 64);
        }
        VertexSet { words }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn without(&self, i: usize) -> Self {
        let mut s = self.clone();
        s.remove(i);
        s
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        let mut s = VertexSet::full(130);
        assert_eq!(s.len(), 130);
        s.remove(0);
        s.remove(64);
        s.remove(129);
        assert_eq!(s.len(), 127);
        assert!(!s.contains(64));
        assert!(s.contains(65));
        assert_eq!(s.iter().next(), Some(1));
        assert_eq!(s.iter().last(), Some(128));
        assert_eq!(VertexSet::full(0).len(), 0);
    }
}
