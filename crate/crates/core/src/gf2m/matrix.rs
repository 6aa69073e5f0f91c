use std::fmt;

use rand::RngCore;

use crate::bits::BitVector;

/// Dense binary matrix, row-major, each row packed into `u64` words (bit j of
/// a row lives in word `j / 64` at bit `j % 64`).
#[derive(Clone, PartialEq, Eq)]
pub struct BinMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BinMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        BinMatrix { rows, cols, words, data: vec![0; rows * words] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BinMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn random<R: RngCore + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = BinMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if rng.next_u32() & 1 == 1 {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    pub fn from_rows(rows: &[BitVector], cols: usize) -> Self {
        let mut m = BinMatrix::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row {r} has wrong width");
            for c in row.ones_positions() {
                m.set(r, c, true);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.data[r * self.words + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.data[r * self.words + c / 64];
        let mask = 1u64 << (c % 64);
        if v {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn row(&self, r: usize) -> BitVector {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    /// `row[dst] ^= row[src]`
    fn xor_rows(&mut self, dst: usize, src: usize) {
        let w = self.words;
        let (d, s) = (dst * w, src * w);
        for i in 0..w {
            self.data[d + i] ^= self.data[s + i];
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let w = self.words;
        for i in 0..w {
            self.data.swap(a * w + i, b * w + i);
        }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (BinMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c)) else {
                continue;
            };
            m.swap_rows(r, p);
            for i in 0..m.rows {
                if i != r && m.get(i, c) {
                    m.xor_rows(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : M x = 0}` as rows; `cols - rank` rows.
    ///
    /// Each basis vector has a single one among the free (non-pivot) columns,
    /// so the basis is in reduced form with respect to the free columns.
    pub fn nullspace(&self) -> BinMatrix {
        let (reduced, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = BinMatrix::zeros(free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            basis.set(k, fc, true);
            for (pr, &pc) in pivots.iter().enumerate() {
                if reduced.get(pr, fc) {
                    basis.set(k, pc, true);
                }
            }
        }
        basis
    }

    /// `M v` for a column vector `v` of length `cols`.
    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.cols);
        let packed = pack(v, self.words);
        (0..self.rows)
            .map(|r| {
                self.row_words(r).iter().zip(&packed).fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones()) & 1
                    == 1
            })
            .collect()
    }

    /// `v M` for a row vector `v` of length `rows` (sum of selected rows).
    pub fn vec_mul(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.rows);
        let mut acc = vec![0u64; self.words];
        for r in v.ones_positions() {
            for (a, w) in acc.iter_mut().zip(self.row_words(r)) {
                *a ^= w;
            }
        }
        unpack(&acc, self.cols)
    }

    pub fn transpose(&self) -> BinMatrix {
        let mut t = BinMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }
}

fn pack(v: &BitVector, words: usize) -> Vec<u64> {
    let mut out = vec![0u64; words];
    for i in v.ones_positions() {
        out[i / 64] |= 1 << (i % 64);
    }
    out
}

fn unpack(words: &[u64], len: usize) -> BitVector {
    (0..len).map(|i| (words[i / 64] >> (i % 64)) & 1 == 1).collect()
}

impl fmt::Debug for BinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(16) {
            writeln!(f, "  {}", self.row(r))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn identity_has_empty_nullspace() {
        let n = BinMatrix::identity(9).nullspace();
        assert_eq!(n.rows(), 0);
    }

    #[test]
    fn zero_matrix_nullspace_is_everything() {
        let n = BinMatrix::zeros(4, 7).nullspace();
        assert_eq!(n.rows(), 7);
        assert_eq!(n.rank(), 7);
    }

    #[test]
    fn vec_mul_selects_rows() {
        let m = BinMatrix::from_rows(&["1100".parse().unwrap(), "0110".parse().unwrap()], 4);
        assert_eq!(m.vec_mul(&"11".parse().unwrap()).to_string(), "1010");
        assert_eq!(m.mul_vec(&"1000".parse().unwrap()).to_string(), "10");
        assert_eq!(m.transpose().transpose(), m);
    }

    proptest! {
        #[test]
        fn nullspace_rows_are_annihilated_and_independent(seed in 0u64..500, rows in 1usize..20, cols in 1usize..90) {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let m = BinMatrix::random(rows, cols, &mut rng);
            let ns = m.nullspace();
            prop_assert_eq!(ns.rows(), cols - m.rank());
            prop_assert_eq!(ns.rank(), ns.rows());
            for r in 0..ns.rows() {
                prop_assert_eq!(m.mul_vec(&ns.row(r)).weight(), 0);
            }
        }

        #[test]
        fn rref_is_idempotent(seed in 0u64..500, rows in 1usize..20, cols in 1usize..70) {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let m = BinMatrix::random(rows, cols, &mut rng);
            let (r1, p1) = m.rref();
            let (r2, p2) = r1.rref();
            prop_assert_eq!(&r1, &r2);
            prop_assert_eq!(p1.len(), p2.len());
            prop_assert!(p1.len() <= rows.min(cols));
        }
    }
}
