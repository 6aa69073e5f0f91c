//! Query access to a received word, with exact query accounting.
//!
//! Every locality number reported by this crate is read off a
//! [`CountingOracle`] tally; decoders never see the word directly.

use crate::bits::BitVector;

/// Read access to a (possibly corrupted) word.
pub trait Oracle {
    fn len(&self) -> usize;

    /// Reads position `index`; every call counts as one query.
    fn query(&mut self, index: usize) -> bool;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone)]
pub struct CountingOracle<'w> {
    word: &'w BitVector,
    tally: usize,
    touched: BitVector,
}

impl<'w> CountingOracle<'w> {
    pub fn new(word: &'w BitVector) -> Self {
        CountingOracle { word, tally: 0, touched: BitVector::zeros(word.len()) }
    }

    /// Total number of queries, repeats included.
    pub fn tally(&self) -> usize {
        self.tally
    }

    /// Number of distinct positions read.
    pub fn distinct(&self) -> usize {
        self.touched.weight()
    }

    pub fn touched(&self) -> &BitVector {
        &self.touched
    }

    /// View of `[offset, offset + len)` whose queries land in this tally.
    pub fn window(&mut self, offset: usize, len: usize) -> Window<'_, 'w> {
        assert!(offset + len <= self.word.len(), "window past end of word");
        Window { parent: self, offset, len }
    }
}

impl Oracle for CountingOracle<'_> {
    fn len(&self) -> usize {
        self.word.len()
    }

    fn query(&mut self, index: usize) -> bool {
        self.tally += 1;
        self.touched.set(index, true);
        self.word.get(index)
    }
}

/// A contiguous region of a [`CountingOracle`], re-indexed from zero.
pub struct Window<'o, 'w> {
    parent: &'o mut CountingOracle<'w>,
    offset: usize,
    len: usize,
}

impl Oracle for Window<'_, '_> {
    fn len(&self) -> usize {
        self.len
    }

    fn query(&mut self, index: usize) -> bool {
        assert!(index < self.len, "query {index} outside window of length {}", self.len);
        self.parent.query(self.offset + index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tally_counts_repeats_and_windows() {
        let w: BitVector = "0110".parse().unwrap();
        let mut o = CountingOracle::new(&w);
        assert!(!o.query(0));
        assert!(o.query(1));
        assert!(o.query(1));
        {
            let mut win = o.window(2, 2);
            assert!(win.query(0));
            assert!(!win.query(1));
        }
        assert_eq!(o.tally(), 5);
        assert_eq!(o.distinct(), 4);
    }
}
