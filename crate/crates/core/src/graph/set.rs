use std::fmt;

/// Bit-indexed set of vertex ids. Grows on insert.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct VertexSet {
    words: Vec<u64>,
    len: usize,
}

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(universe: usize) -> Self {
        Self {
            words: vec![0; universe.div_ceil(64)],
            len: 0,
        }
    }

    /// Every id in `0..universe`.
    pub fn full(universe: usize) -> Self {
        let mut set = Self::with_capacity(universe);
        for v in 0..universe {
            set.insert(v);
        }
        set
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, v: usize) -> bool {
        self.words
            .get(v / 64)
            .is_some_and(|w| w & (1u64 << (v % 64)) != 0)
    }

    /// Returns true if `v` was not already present.
    pub fn insert(&mut self, v: usize) -> bool {
        let word = v / 64;
        if word >= self.words.len() {
            self.words.resize(word + 1, 0);
        }
        let bit = 1u64 << (v % 64);
        let fresh = self.words[word] & bit == 0;
        if fresh {
            self.words[word] |= bit;
            self.len += 1;
        }
        fresh
    }

    /// Returns true if `v` was present.
    pub fn remove(&mut self, v: usize) -> bool {
        let Some(w) = self.words.get_mut(v / 64) else {
            return false;
        };
        let bit = 1u64 << (v % 64);
        let present = *w & bit != 0;
        if present {
            *w &= !bit;
            self.len -= 1;
        }
        present
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
        self.len = 0;
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        for (i, w) in self.words.iter_mut().enumerate() {
            *w &= other.words.get(i).copied().unwrap_or(0);
        }
        self.len = self.recount();
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
        self.len = self.recount();
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn recount(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = VertexSet::new();
        for v in iter {
            set.insert(v);
        }
        set
    }
}

impl Extend<usize> for VertexSet {
    fn extend<I: IntoIterator<Item = usize>>(&mut self, iter: I) {
        for v in iter {
            self.insert(v);
        }
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn insert_remove_len() {
        let mut s = VertexSet::new();
        assert!(s.insert(3));
        assert!(!s.insert(3));
        assert!(s.insert(130));
        assert_eq!(s.len(), 2);
        assert!(s.contains(130));
        assert!(!s.contains(129));
        assert!(s.remove(3));
        assert!(!s.remove(3));
        assert!(!s.remove(100_000));
        assert_eq!(s.to_vec(), vec![130]);
    }

    #[test]
    fn full_and_intersection() {
        let mut s = VertexSet::full(70);
        assert_eq!(s.len(), 70);
        s.intersect_with(&[1, 3, 69, 200].into_iter().collect());
        assert_eq!(s.to_vec(), vec![1, 3, 69]);
    }

    proptest! {
        #[test]
        fn size_matches_population(ops in proptest::collection::vec((any::<bool>(), 0usize..300), 0..200)) {
            let mut s = VertexSet::new();
            let mut reference = std::collections::BTreeSet::new();
            for (add, v) in ops {
                if add {
                    prop_assert_eq!(s.insert(v), reference.insert(v));
                } else {
                    prop_assert_eq!(s.remove(v), reference.remove(&v));
                }
            }
            prop_assert_eq!(s.len(), reference.len());
            prop_assert_eq!(s.to_vec(), reference.into_iter().collect::<Vec<_>>());
        }
    }
}
