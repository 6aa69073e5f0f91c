use crate::bits::BitVector;
use crate::crypto::RandomStream;
use crate::error::{Error, Result};

/// A permutation of `[0, n)` with its inverse.
///
/// Applying it to a word `x` moves bit `j` to position `forward[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    forward: Vec<u32>,
    inverse: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        let forward: Vec<u32> = (0..n as u32).collect();
        Permutation { inverse: forward.clone(), forward }
    }

    pub fn from_forward(forward: Vec<u32>) -> Result<Self> {
        let n = forward.len();
        let mut inverse = vec![u32::MAX; n];
        for (j, &p) in forward.iter().enumerate() {
            let slot = inverse
                .get_mut(p as usize)
                .ok_or_else(|| Error::format(format!("permutation image {p} out of range {n}")))?;
            if *slot != u32::MAX {
                return Err(Error::format(format!("permutation maps two positions to {p}")));
            }
            *slot = j as u32;
        }
        Ok(Permutation { forward, inverse })
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    #[inline]
    pub fn map(&self, j: usize) -> usize {
        self.forward[j] as usize
    }

    #[inline]
    pub fn unmap(&self, i: usize) -> usize {
        self.inverse[i] as usize
    }

    pub fn forward(&self) -> &[u32] {
        &self.forward
    }

    pub fn apply(&self, x: &BitVector) -> BitVector {
        assert_eq!(x.len(), self.len());
        let mut y = BitVector::zeros(x.len());
        for j in x.ones_positions() {
            y.set(self.map(j), true);
        }
        y
    }

    pub fn apply_inverse(&self, y: &BitVector) -> BitVector {
        assert_eq!(y.len(), self.len());
        let mut x = BitVector::zeros(y.len());
        for i in y.ones_positions() {
            x.set(self.unmap(i), true);
        }
        x
    }
}

/// Uniform permutation by Fisher–Yates: for `i = n-1 .. 1`, swap slot `i` with
/// a uniform slot in `[0, i]`.
pub fn sample_permutation(n: usize, rng: &mut RandomStream) -> Permutation {
    let mut forward: Vec<u32> = (0..n as u32).collect();
    for i in (1..n).rev() {
        let j = rng.below(i + 1);
        forward.swap(i, j);
    }
    Permutation::from_forward(forward).expect("shuffle of identity is a permutation")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn singleton_is_identity() {
        let mut rng = RandomStream::from_u64(0);
        assert_eq!(sample_permutation(1, &mut rng), Permutation::identity(1));
    }

    #[test]
    fn inverse_and_bijectivity() {
        let mut rng = RandomStream::from_u64(1);
        for n in [2usize, 17, 1000] {
            let p = sample_permutation(n, &mut rng);
            let mut image: Vec<u32> = p.forward().to_vec();
            image.sort_unstable();
            assert_eq!(image, (0..n as u32).collect::<Vec<_>>());
            for i in 0..n {
                assert_eq!(p.map(p.unmap(i)), i);
                assert_eq!(p.unmap(p.map(i)), i);
            }
            let x = BitVector::random(n, &mut rng);
            assert_eq!(p.apply_inverse(&p.apply(&x)), x);
        }
    }

    #[test]
    fn three_element_uniformity() {
        // 6000 draws, expected 1000 each, binomial sigma = sqrt(6000 * 1/6 * 5/6)
        let mut rng = RandomStream::from_u64(2);
        let mut counts: HashMap<Vec<u32>, usize> = HashMap::new();
        for _ in 0..6000 {
            *counts.entry(sample_permutation(3, &mut rng).forward().to_vec()).or_default() += 1;
        }
        assert_eq!(counts.len(), 6);
        let sigma = (6000.0f64 * (1.0 / 6.0) * (5.0 / 6.0)).sqrt();
        let mut chi2 = 0.0;
        for &c in counts.values() {
            assert!((c as f64 - 1000.0).abs() <= 3.0 * sigma, "count {c}");
            chi2 += (c as f64 - 1000.0).powi(2) / 1000.0;
        }
        // chi-square with 5 dof: 99.9% quantile is 20.5
        assert!(chi2 < 20.5, "chi2 {chi2}");
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(Permutation::from_forward(vec![0, 0]).is_err());
        assert!(Permutation::from_forward(vec![0, 2]).is_err());
    }
}
