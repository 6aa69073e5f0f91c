//! Multi-round code: block `i` is `RSE.Enc((w_i xor f_k(i || r_i)) || r_i)`,
//! and the concatenation of all blocks is permuted.

use crate::bits::BitVector;
use crate::crypto::{sample_permutation, Permutation, PrfKey, RandomStream};
use crate::error::{Error, Result};
use crate::oracle::Oracle;
use crate::paldc::{check_oracle_len, read_block, Interval};
use crate::rse::{rse_decode, rse_encode, rse_gen, RseKey};

/// `ceil(2 log2(q B)) + 32`: nonce width keeping the chance of any repeated
/// `(block, nonce)` pair over `q` messages below `2^-32`.
pub fn default_nonce_bits(rounds: usize, blocks: usize) -> usize {
    let qb = (rounds.max(1) * blocks.max(1)) as f64;
    (2.0 * qb.log2()).ceil() as usize + 32
}

/// Bits used to write a 0-based block index: `ceil(log2 B)`.
pub fn block_index_bits(blocks: usize) -> usize {
    if blocks <= 1 {
        0
    } else {
        (usize::BITS - (blocks - 1).leading_zeros()) as usize
    }
}

#[derive(Clone, Debug)]
pub struct MultiRoundKey {
    perm: Permutation,
    prf: PrfKey,
    rse: RseKey,
    a: usize,
    b: usize,
    msg_len: usize,
}

impl MultiRoundKey {
    /// Key for `msg_len`-bit messages in `a`-bit blocks with `b`-bit nonces.
    /// The RSE embeds `noise_weight` errors and tolerates a further
    /// `ceil(delta A)` per block.
    pub fn generate(
        lambda: usize,
        a: usize,
        b: usize,
        noise_weight: usize,
        delta: f64,
        msg_len: usize,
        rng: &mut RandomStream,
    ) -> Result<MultiRoundKey> {
        if a == 0 || msg_len == 0 {
            return Err(Error::config("block size a and message length must be positive"));
        }
        let blocks = msg_len.div_ceil(a);
        let rse = rse_gen(noise_weight, delta, a + b, rng)?;
        let prf = PrfKey::generate(lambda, b + block_index_bits(blocks), a, rng);
        let perm = sample_permutation(blocks * rse.n(), rng);
        MultiRoundKey::from_parts(perm, prf, rse, a, b, msg_len)
    }

    pub fn from_parts(
        perm: Permutation,
        prf: PrfKey,
        rse: RseKey,
        a: usize,
        b: usize,
        msg_len: usize,
    ) -> Result<MultiRoundKey> {
        if a == 0 || msg_len == 0 {
            return Err(Error::format("block size a and message length must be positive"));
        }
        let blocks = msg_len.div_ceil(a);
        if rse.k_dim() != a + b {
            return Err(Error::format(format!("RSE dimension {} != a + b = {}", rse.k_dim(), a + b)));
        }
        if prf.in_bits() != b + block_index_bits(blocks) || prf.out_bits() != a {
            return Err(Error::format("PRF widths do not match (b + ceil(log2 B)) -> a"));
        }
        if perm.len() != blocks * rse.n() {
            return Err(Error::format(format!("permutation length {} != B A = {}", perm.len(), blocks * rse.n())));
        }
        Ok(MultiRoundKey { perm, prf, rse, a, b, msg_len })
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn nonce_bits(&self) -> usize {
        self.b
    }

    pub fn msg_len(&self) -> usize {
        self.msg_len
    }

    pub fn blocks(&self) -> usize {
        self.msg_len.div_ceil(self.a)
    }

    /// RSE codeword length per block.
    pub fn block_len(&self) -> usize {
        self.rse.n()
    }

    pub fn n(&self) -> usize {
        self.blocks() * self.block_len()
    }

    pub fn kappa(&self) -> usize {
        self.a
    }

    pub fn rse(&self) -> &RseKey {
        &self.rse
    }

    pub fn prf(&self) -> &PrfKey {
        &self.prf
    }

    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }

    /// `(2 + 2 b / a) / R_RSE`, which equals `2 A / a`.
    pub fn locality_bound(&self) -> f64 {
        let r_rse = self.rse.code.rate();
        (2.0 + 2.0 * self.b as f64 / self.a as f64) / r_rse
    }

    pub fn queries_for(&self, iv: &Interval) -> usize {
        iv.block_span(self.a) * self.block_len()
    }

    fn mask(&self, block: usize, nonce: &BitVector) -> Result<BitVector> {
        let mut input = BitVector::from_uint(block as u64, block_index_bits(self.blocks()));
        input.extend_from(nonce);
        self.prf.eval(&input)
    }
}

pub fn mr_encode(key: &MultiRoundKey, x: &BitVector, rng: &mut RandomStream) -> Result<BitVector> {
    if x.len() != key.msg_len {
        return Err(Error::usage(format!("message has {} bits, key is for {}", x.len(), key.msg_len)));
    }
    let a = key.a;
    let big_a = key.block_len();
    let padded = x.resized(key.blocks() * a);
    let mut y = BitVector::zeros(key.n());
    for i in 0..key.blocks() {
        let nonce = BitVector::random(key.b, rng);
        let mut m = padded.slice(i * a..(i + 1) * a);
        m ^= &key.mask(i, &nonce)?;
        m.extend_from(&nonce);
        let c = rse_encode(&key.rse, &m, rng)?;
        for j in c.ones_positions() {
            y.set(key.perm.map(i * big_a + j), true);
        }
    }
    Ok(y)
}

pub fn mr_decode<O: Oracle + ?Sized>(key: &MultiRoundKey, oracle: &mut O, iv: &Interval) -> Result<BitVector> {
    check_oracle_len(oracle, key.n())?;
    iv.check(key.msg_len, key.kappa())?;
    let a = key.a;
    let mut out = BitVector::default();
    for j in iv.blocks(a) {
        let block = read_block(oracle, &key.perm, j, key.block_len());
        let d = rse_decode(&key.rse, &block).map_err(|e| match e {
            Error::Decode(m) => Error::Decode(format!("block {}: {m}", j + 1)),
            other => other,
        })?;
        let mut w = d.slice(0..a);
        w ^= &key.mask(j, &d.slice(a..a + key.b))?;
        out.extend_from(&w);
    }
    let first = iv.blocks(a).start() * a;
    Ok(out.slice(iv.l() - 1 - first..iv.r() - first))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::CountingOracle;
    use crate::paldc::within_locality;

    fn toy_key(seed: u64, b: usize, msg_len: usize) -> MultiRoundKey {
        let mut rng = RandomStream::from_u64(seed);
        MultiRoundKey::generate(64, 16, b, 2, 0.03, msg_len, &mut rng).unwrap()
    }

    #[test]
    fn nonce_width_and_index_bits() {
        assert_eq!(default_nonce_bits(50, 4), 48);
        assert_eq!(default_nonce_bits(1, 1), 32);
        assert_eq!(block_index_bits(1), 0);
        assert_eq!(block_index_bits(2), 1);
        assert_eq!(block_index_bits(4), 2);
        assert_eq!(block_index_bits(5), 3);
    }

    #[test]
    fn randomized_encodings_both_decode() {
        let key = toy_key(1, 8, 64);
        let mut rng = RandomStream::from_u64(2);
        let x = BitVector::random(64, &mut rng);
        let y1 = mr_encode(&key, &x, &mut rng).unwrap();
        let y2 = mr_encode(&key, &x, &mut rng).unwrap();
        assert_ne!(y1, y2);
        let full = Interval::new(1, 64).unwrap();
        for y in [&y1, &y2] {
            let mut o = CountingOracle::new(y);
            assert_eq!(mr_decode(&key, &mut o, &full).unwrap(), x);
            assert_eq!(o.tally(), key.n());
        }
    }

    #[test]
    fn zero_nonce_width_still_roundtrips() {
        let key = toy_key(3, 0, 40);
        let mut rng = RandomStream::from_u64(4);
        let x = BitVector::random(40, &mut rng);
        let y = mr_encode(&key, &x, &mut rng).unwrap();
        let mut o = CountingOracle::new(&y);
        assert_eq!(mr_decode(&key, &mut o, &Interval::new(3, 40).unwrap()).unwrap(), x.slice(2..40));
    }

    #[test]
    fn every_interval_exact_and_aligned_within_bound() {
        let key = toy_key(5, 8, 48);
        let mut rng = RandomStream::from_u64(6);
        let x = BitVector::random(48, &mut rng);
        let y = mr_encode(&key, &x, &mut rng).unwrap();
        let bound = key.locality_bound();
        assert!((bound - 2.0 * key.block_len() as f64 / 16.0).abs() < 1e-9);
        for l in 1..=48 {
            for r in (l + 15)..=48 {
                let iv = Interval::new(l, r).unwrap();
                let mut o = CountingOracle::new(&y);
                assert_eq!(mr_decode(&key, &mut o, &iv).unwrap(), x.slice(l - 1..r));
                assert_eq!(o.tally(), key.queries_for(&iv));
                if iv.block_span(16) <= 2 {
                    assert!(within_locality(o.tally(), &iv, 16, key.block_len()));
                }
            }
        }
    }

    #[test]
    fn channel_errors_within_budget_are_corrected() {
        let key = toy_key(7, 8, 32);
        let mut rng = RandomStream::from_u64(8);
        let x = BitVector::random(32, &mut rng);
        let mut y = mr_encode(&key, &x, &mut rng).unwrap();
        let budget = key.rse().channel_budget;
        for blk in 0..2 {
            for i in rng.distinct_indices(key.block_len(), budget) {
                y.flip(key.permutation().map(blk * key.block_len() + i));
            }
        }
        let mut o = CountingOracle::new(&y);
        assert_eq!(mr_decode(&key, &mut o, &Interval::new(1, 32).unwrap()).unwrap(), x);
    }
}
