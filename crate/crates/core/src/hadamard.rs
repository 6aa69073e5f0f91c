//! Hadamard code with the amortized local decoder.
//!
//! Codeword position `S - 1` holds the parity of `x` over the nonempty subset
//! `S` of `[k]`, where `S` is read as the integer `sum_{i in S} 2^(i-1)`. The
//! empty subset is not stored: its value is the constant 0 and reading it
//! costs no query.
//!
//! To decode the bits in `Q`, draw one uniform subset `S` and read `y_S` and
//! `y_{S xor {j}}` for each `j` in `Q`; `x_j = y_S xor y_{S xor {j}}`. That is
//! at most `|Q| + 1` queries for `|Q|` bits.

use crate::bits::BitVector;
use crate::crypto::RandomStream;
use crate::error::{Error, Result};
use crate::oracle::Oracle;

pub const MAX_K: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HadamardCodeword {
    k: usize,
    bits: BitVector,
}

impl HadamardCodeword {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn bits(&self) -> &BitVector {
        &self.bits
    }

    pub fn into_bits(self) -> BitVector {
        self.bits
    }

    /// `y_S` for a subset mask; the empty subset reads as 0.
    pub fn at(&self, subset: u32) -> bool {
        subset != 0 && self.bits.get(subset as usize - 1)
    }
}

/// Codeword length `2^k - 1`.
pub fn codeword_len(k: usize) -> usize {
    (1usize << k) - 1
}

fn k_from_len(n: usize) -> Result<usize> {
    let k = (n + 1).trailing_zeros() as usize;
    if n == 0 || (n + 1) != 1 << k || k > MAX_K {
        return Err(Error::usage(format!("word length {n} is not 2^k - 1 for k in [1, {MAX_K}]")));
    }
    Ok(k)
}

pub fn had_encode(x: &BitVector) -> Result<HadamardCodeword> {
    let k = x.len();
    if !(1..=MAX_K).contains(&k) {
        return Err(Error::usage(format!("message length k = {k} outside [1, {MAX_K}]")));
    }
    let n = codeword_len(k);
    // y[S] = y[S minus its lowest element] xor x_lowest; index 0 is the empty set
    let mut y = vec![false; n + 1];
    for s in 1..=n {
        let low = s.trailing_zeros() as usize;
        y[s] = y[s & (s - 1)] ^ x.get(low);
    }
    Ok(HadamardCodeword { k, bits: y[1..].iter().copied().collect() })
}

/// Distinct 1-based message indices to decode together.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuerySet {
    indices: Vec<usize>,
}

impl QuerySet {
    pub fn new(mut indices: Vec<usize>, k: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::usage("query set is empty"));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > k) {
            return Err(Error::usage(format!("query index {bad} outside [1, {k}]")));
        }
        let before = indices.len();
        indices.sort_unstable();
        indices.dedup();
        if indices.len() != before {
            return Err(Error::usage("query set has repeated indices"));
        }
        Ok(QuerySet { indices })
    }

    /// `kappa` distinct uniform indices from `[1, k]`.
    pub fn random(k: usize, kappa: usize, rng: &mut RandomStream) -> Result<Self> {
        if kappa == 0 || kappa > k {
            return Err(Error::usage(format!("kappa = {kappa} outside [1, k = {k}]")));
        }
        QuerySet::new(rng.distinct_indices(k, kappa).into_iter().map(|i| i + 1).collect(), k)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Amortized decode with an explicit pivot subset `subset` (a `k`-bit mask).
pub fn had_decode_with_subset<O: Oracle>(oracle: &mut O, q: &QuerySet, subset: u32) -> Result<BitVector> {
    let k = k_from_len(oracle.len())?;
    if let Some(&j) = q.indices().iter().find(|&&j| j > k) {
        return Err(Error::usage(format!("query index {j} outside [1, {k}]")));
    }
    if (subset as u64) >> k != 0 {
        return Err(Error::usage(format!("subset mask {subset:#x} has bits beyond k = {k}")));
    }
    let mut read = |s: u32| s != 0 && oracle.query(s as usize - 1);
    let pivot = read(subset);
    Ok(q.indices().iter().map(|&j| pivot ^ read(subset ^ (1 << (j - 1)))).collect())
}

/// Amortized decode: pivot subset drawn uniformly from all `2^k` subsets.
pub fn had_decode_amortized<O: Oracle>(oracle: &mut O, q: &QuerySet, rng: &mut RandomStream) -> Result<BitVector> {
    let k = k_from_len(oracle.len())?;
    let subset = rng.below(1 << k) as u32;
    had_decode_with_subset(oracle, q, subset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::CountingOracle;
    use proptest::prelude::*;

    fn brute_parity(x: &BitVector, s: u32) -> bool {
        (0..x.len()).filter(|&i| (s >> i) & 1 == 1).fold(false, |acc, i| acc ^ x.get(i))
    }

    #[test]
    fn zero_message() {
        let c = had_encode(&BitVector::zeros(3)).unwrap();
        assert_eq!(c.bits(), &BitVector::zeros(7));
    }

    #[test]
    fn k3_codeword_matches_brute_force() {
        let x: BitVector = "101".parse().unwrap(); // x1 = 1, x2 = 0, x3 = 1
        let c = had_encode(&x).unwrap();
        // positions S = 1..7: {1},{2},{1,2},{3},{1,3},{2,3},{1,2,3}
        assert_eq!(c.bits().to_string(), "1011010");
        for s in 1u32..8 {
            assert_eq!(c.at(s), brute_parity(&x, s));
        }
    }

    #[test]
    fn worked_decode_with_pivot_two() {
        let x: BitVector = "101".parse().unwrap();
        let c = had_encode(&x).unwrap();
        let q = QuerySet::new(vec![1, 3], 3).unwrap();
        let mut o = CountingOracle::new(c.bits());
        let got = had_decode_with_subset(&mut o, &q, 0b010).unwrap();
        assert_eq!(got.to_string(), "11");
        assert_eq!(o.tally(), 3);
    }

    #[test]
    fn empty_pivot_costs_no_query() {
        let x: BitVector = "101".parse().unwrap();
        let c = had_encode(&x).unwrap();
        let q = QuerySet::new(vec![1, 3], 3).unwrap();
        let mut o = CountingOracle::new(c.bits());
        assert_eq!(had_decode_with_subset(&mut o, &q, 0).unwrap().to_string(), "11");
        assert_eq!(o.tally(), 2);
    }

    #[test]
    fn bad_inputs() {
        assert!(had_encode(&BitVector::zeros(0)).is_err());
        assert!(had_encode(&BitVector::zeros(25)).is_err());
        assert!(QuerySet::new(vec![], 3).is_err());
        assert!(QuerySet::new(vec![4], 3).is_err());
        assert!(QuerySet::new(vec![1, 1], 3).is_err());
        let w = BitVector::zeros(6);
        let mut o = CountingOracle::new(&w);
        let q = QuerySet::new(vec![1], 3).unwrap();
        assert!(had_decode_with_subset(&mut o, &q, 0).is_err());
    }

    proptest! {
        #[test]
        fn linearity_and_clean_decoding(bits in prop::collection::vec(any::<bool>(), 1..11), seed in any::<u64>()) {
            let x = BitVector::from_bools(bits);
            let k = x.len();
            let c = had_encode(&x).unwrap();
            let mut rng = RandomStream::from_u64(seed);
            let s = rng.below(1 << k) as u32;
            let t = rng.below(1 << k) as u32;
            if s != 0 && t != 0 && s != t {
                prop_assert_eq!(c.at(s) ^ c.at(t), c.at(s ^ t));
            }
            for i in 0..k {
                prop_assert_eq!(c.at(1 << i), x.get(i));
            }
            let kappa = 1 + rng.below(k);
            let q = QuerySet::random(k, kappa, &mut rng).unwrap();
            let mut o = CountingOracle::new(c.bits());
            let got = had_decode_amortized(&mut o, &q, &mut rng).unwrap();
            prop_assert!(o.tally() <= kappa + 1);
            for (bit, &j) in got.iter().zip(q.indices()) {
                prop_assert_eq!(bit, x.get(j - 1));
            }
        }
    }
}
