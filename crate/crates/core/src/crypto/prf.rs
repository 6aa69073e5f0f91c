use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bits::BitVector;
use crate::crypto::RandomStream;
use crate::error::{Error, Result};

/// Keyed function `{0,1}^in_bits -> {0,1}^out_bits`.
///
/// Output block `c` is `SHA-256("aldc/prf" || |key| || key || in_bits ||
/// input bytes || c)`; blocks are concatenated and truncated to `out_bits`.
/// Inputs have a fixed width per key, so the framing is unambiguous.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrfKey {
    key: Vec<u8>,
    in_bits: usize,
    out_bits: usize,
}

impl PrfKey {
    pub fn new(key: Vec<u8>, in_bits: usize, out_bits: usize) -> Self {
        PrfKey { key, in_bits, out_bits }
    }

    /// Fresh key of `lambda` bits (rounded up to whole bytes).
    pub fn generate(lambda: usize, in_bits: usize, out_bits: usize, rng: &mut RandomStream) -> Self {
        let mut key = vec![0u8; lambda.div_ceil(8)];
        rand::RngCore::fill_bytes(rng, &mut key);
        PrfKey { key, in_bits, out_bits }
    }

    pub fn key_bytes(&self) -> &[u8] {
        &self.key
    }

    pub fn in_bits(&self) -> usize {
        self.in_bits
    }

    pub fn out_bits(&self) -> usize {
        self.out_bits
    }

    pub fn eval(&self, input: &BitVector) -> Result<BitVector> {
        if input.len() != self.in_bits {
            return Err(Error::usage(format!(
                "PRF input has {} bits, key expects {}",
                input.len(),
                self.in_bits
            )));
        }
        let input_bytes = input.to_bytes();
        let mut out = BitVector::default();
        let mut counter = 0u32;
        while out.len() < self.out_bits {
            let mut h = Sha256::new();
            h.update(b"aldc/prf");
            h.update((self.key.len() as u32).to_be_bytes());
            h.update(&self.key);
            h.update((self.in_bits as u32).to_be_bytes());
            h.update(&input_bytes);
            h.update(counter.to_be_bytes());
            let block = h.finalize();
            let take = (self.out_bits - out.len()).min(256);
            out.extend_from(&BitVector::from_bytes(&block, take)?);
            counter += 1;
        }
        Ok(out)
    }
}

pub fn prf_eval(key: &PrfKey, input: &BitVector) -> Result<BitVector> {
    key.eval(input)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_width_checked() {
        let mut rng = RandomStream::from_u64(1);
        let k = PrfKey::generate(128, 40, 300, &mut rng);
        let x = BitVector::random(40, &mut rng);
        let y1 = k.eval(&x).unwrap();
        assert_eq!(y1.len(), 300);
        assert_eq!(k.eval(&x).unwrap(), y1);
        assert!(matches!(k.eval(&BitVector::zeros(39)), Err(Error::Usage(_))));
    }

    #[test]
    fn one_bit_input_change_avalanches() {
        // Mean Hamming distance over random keys sits at out/2; sigma of the
        // mean is sqrt(out/4)/sqrt(trials).
        let mut rng = RandomStream::from_u64(2);
        let (out, trials) = (256usize, 400usize);
        let mut total = 0usize;
        for _ in 0..trials {
            let k = PrfKey::generate(128, 32, out, &mut rng);
            let x = BitVector::random(32, &mut rng);
            let mut x2 = x.clone();
            x2.flip(rng.below(32));
            total += k.eval(&x).unwrap().distance(&k.eval(&x2).unwrap());
        }
        let mean = total as f64 / trials as f64;
        let sigma = (out as f64 / 4.0).sqrt() / (trials as f64).sqrt();
        assert!((mean - out as f64 / 2.0).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn distinct_keys_give_unrelated_outputs() {
        let mut rng = RandomStream::from_u64(3);
        let k1 = PrfKey::generate(128, 16, 256, &mut rng);
        let k2 = PrfKey::generate(128, 16, 256, &mut rng);
        let x = BitVector::zeros(16);
        let d = k1.eval(&x).unwrap().distance(&k2.eval(&x).unwrap());
        assert!((80..=176).contains(&d), "distance {d}");
    }
}
