//! Fixed-width vertex bitsets used by the clique search.

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexBits {
    words: Vec<u64>,
}

impl VertexBits {
    pub fn empty(n: usize) -> Self {
        Self {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn insert(&mut self, v: usize) {
        self.words[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        self.words[v / 64] &= !(1 << (v % 64));
    }

    pub fn contains(&self, v: usize) -> bool {
        self.words
            .get(v / 64)
            .is_some_and(|w| w & (1 << (v % 64)) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    /// Keeps only members strictly greater than `v`.
    pub fn retain_above(&mut self, v: usize) {
        let word = v / 64;
        let len = self.words.len();
        for w in &mut self.words[..word.min(len)] {
            *w = 0;
        }
        if let Some(w) = self.words.get_mut(word) {
            let bit = v % 64;
            *w &= if bit == 63 { 0 } else { !0u64 << (bit + 1) };
        }
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * 64 + bit)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_iterate_and_trim() {
        let mut bits = VertexBits::empty(200);
        for v in [0, 5, 63, 64, 127, 128, 199] {
            bits.insert(v);
        }
        assert_eq!(bits.len(), 7);
        assert_eq!(
            bits.iter().collect::<Vec<_>>(),
            vec![0, 5, 63, 64, 127, 128, 199]
        );
        let mut above = bits.clone();
        above.retain_above(63);
        assert_eq!(above.iter().collect::<Vec<_>>(), vec![64, 127, 128, 199]);
        above.retain_above(128);
        assert_eq!(above.iter().collect::<Vec<_>>(), vec![199]);
        bits.remove(5);
        assert!(!bits.contains(5));
        assert!(bits.contains(199));
        assert!(!bits.contains(1000));
    }
}
