//! One-time code: `y = pi(Enc_C(w_1) || ... || Enc_C(w_B)) xor r`.

use std::sync::atomic::{AtomicBool, Ordering};

use crate::bits::BitVector;
use crate::block_code::{BlockCode, BlockCodeSpec};
use crate::crypto::{sample_permutation, Permutation, RandomStream};
use crate::error::{Error, Result};
use crate::oracle::Oracle;
use crate::paldc::{check_oracle_len, read_block, Interval};

#[derive(Debug)]
pub struct OneTimeKey {
    code: BlockCode,
    msg_len: usize,
    perm: Permutation,
    pad: BitVector,
    used: AtomicBool,
}

impl Clone for OneTimeKey {
    fn clone(&self) -> Self {
        OneTimeKey {
            code: self.code.clone(),
            msg_len: self.msg_len,
            perm: self.perm.clone(),
            pad: self.pad.clone(),
            used: AtomicBool::new(self.is_used()),
        }
    }
}

impl OneTimeKey {
    /// Fresh key for `msg_len`-bit messages; `B = ceil(msg_len / a)`.
    pub fn generate(spec: BlockCodeSpec, msg_len: usize, rng: &mut RandomStream) -> Result<OneTimeKey> {
        let n = Self::codeword_len_for(&spec, msg_len)?;
        let perm = sample_permutation(n, rng);
        let pad = BitVector::random(n, rng);
        OneTimeKey::from_parts(spec, msg_len, perm, pad, false)
    }

    /// Identity permutation and zero pad: the bare concatenated block code.
    pub fn unkeyed(spec: BlockCodeSpec, msg_len: usize) -> Result<OneTimeKey> {
        let n = Self::codeword_len_for(&spec, msg_len)?;
        OneTimeKey::from_parts(spec, msg_len, Permutation::identity(n), BitVector::zeros(n), false)
    }

    pub fn from_parts(
        spec: BlockCodeSpec,
        msg_len: usize,
        perm: Permutation,
        pad: BitVector,
        used: bool,
    ) -> Result<OneTimeKey> {
        let n = Self::codeword_len_for(&spec, msg_len)?;
        if perm.len() != n || pad.len() != n {
            return Err(Error::format(format!(
                "permutation ({}) and pad ({}) must both have length n = {n}",
                perm.len(),
                pad.len()
            )));
        }
        Ok(OneTimeKey { code: BlockCode::new(spec)?, msg_len, perm, pad, used: AtomicBool::new(used) })
    }

    fn codeword_len_for(spec: &BlockCodeSpec, msg_len: usize) -> Result<usize> {
        spec.validate()?;
        if msg_len == 0 {
            return Err(Error::config("message length must be positive"));
        }
        let n = msg_len.div_ceil(spec.a) * spec.big_a;
        if n > u32::MAX as usize {
            return Err(Error::config(format!("codeword length {n} exceeds 2^32 - 1")));
        }
        Ok(n)
    }

    pub fn spec(&self) -> &BlockCodeSpec {
        self.code.spec()
    }

    pub fn msg_len(&self) -> usize {
        self.msg_len
    }

    pub fn blocks(&self) -> usize {
        self.msg_len.div_ceil(self.spec().a)
    }

    pub fn n(&self) -> usize {
        self.blocks() * self.spec().big_a
    }

    /// Minimum batch size; one block.
    pub fn kappa(&self) -> usize {
        self.spec().a
    }

    /// `2 / R_C`.
    pub fn locality_bound(&self) -> f64 {
        2.0 * self.spec().big_a as f64 / self.spec().a as f64
    }

    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }

    pub fn pad(&self) -> &BitVector {
        &self.pad
    }

    pub fn is_used(&self) -> bool {
        self.used.load(Ordering::SeqCst)
    }

    /// Exact query count for decoding `iv`: `A` per touched block.
    pub fn queries_for(&self, iv: &Interval) -> usize {
        iv.block_span(self.spec().a) * self.spec().big_a
    }
}

/// Encodes `x`; the key is marked used and refuses a second encoding.
pub fn ot_encode(key: &OneTimeKey, x: &BitVector) -> Result<BitVector> {
    if x.len() != key.msg_len {
        return Err(Error::usage(format!("message has {} bits, key is for {}", x.len(), key.msg_len)));
    }
    if key.used.swap(true, Ordering::SeqCst) {
        return Err(Error::usage("one-time key already used for an encoding"));
    }
    let a = key.spec().a;
    let padded = x.resized(key.blocks() * a);
    let mut y = key.pad.clone();
    let mut pos = 0;
    for i in 0..key.blocks() {
        let c = key.code.encode(&padded.slice(i * a..(i + 1) * a))?;
        for bit in c.iter() {
            if bit {
                y.flip(key.perm.map(pos));
            }
            pos += 1;
        }
    }
    Ok(y)
}

/// Decodes `x[L..=R]` reading only the blocks the interval touches.
pub fn ot_decode<O: Oracle + ?Sized>(key: &OneTimeKey, oracle: &mut O, iv: &Interval) -> Result<BitVector> {
    check_oracle_len(oracle, key.n())?;
    iv.check(key.msg_len, key.kappa())?;
    let spec = *key.spec();
    let mut out = BitVector::default();
    for j in iv.blocks(spec.a) {
        let mut block = read_block(oracle, &key.perm, j, spec.big_a);
        for i in 0..spec.big_a {
            if key.pad.get(key.perm.map(j * spec.big_a + i)) {
                block.flip(i);
            }
        }
        let w = key.code.decode(&block).map_err(|e| match e {
            Error::Decode(m) => Error::Decode(format!("block {}: {m}", j + 1)),
            other => other,
        })?;
        out.extend_from(&w);
    }
    let first = iv.blocks(spec.a).start() * spec.a;
    Ok(out.slice(iv.l() - 1 - first..iv.r() - first))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::CountingOracle;

    fn small() -> BlockCodeSpec {
        BlockCodeSpec::new(16, 48, 8).unwrap()
    }

    #[test]
    fn unkeyed_is_concatenated_block_encoding() {
        let key = OneTimeKey::unkeyed(small(), 32).unwrap();
        let mut rng = RandomStream::from_u64(1);
        let x = BitVector::random(32, &mut rng);
        let y = ot_encode(&key, &x).unwrap();
        let code = BlockCode::new(small()).unwrap();
        let expect = BitVector::concat([&code.encode(&x.slice(0..16)).unwrap(), &code.encode(&x.slice(16..32)).unwrap()]);
        assert_eq!(y, expect);
        assert_eq!(y.len() * 16, x.len() * 48);
    }

    #[test]
    fn reuse_is_refused() {
        let mut rng = RandomStream::from_u64(2);
        let key = OneTimeKey::generate(small(), 16, &mut rng).unwrap();
        ot_encode(&key, &BitVector::zeros(16)).unwrap();
        assert!(matches!(ot_encode(&key, &BitVector::zeros(16)), Err(Error::Usage(_))));
        assert!(key.is_used());
    }

    #[test]
    fn roundtrip_every_interval_with_exact_tally() {
        let mut rng = RandomStream::from_u64(3);
        let k = 40; // not a multiple of a: padded to 3 blocks
        let key = OneTimeKey::generate(small(), k, &mut rng).unwrap();
        let x = BitVector::random(k, &mut rng);
        let y = ot_encode(&key, &x).unwrap();
        assert_eq!(y.len(), 3 * 48);
        for l in 1..=k {
            for r in (l + 15)..=k {
                let iv = Interval::new(l, r).unwrap();
                let mut o = CountingOracle::new(&y);
                let got = ot_decode(&key, &mut o, &iv).unwrap();
                assert_eq!(got, x.slice(l - 1..r));
                assert_eq!(o.tally(), key.queries_for(&iv));
            }
        }
    }

    #[test]
    fn short_interval_rejected() {
        let mut rng = RandomStream::from_u64(4);
        let key = OneTimeKey::generate(small(), 32, &mut rng).unwrap();
        let y = ot_encode(&key, &BitVector::zeros(32)).unwrap();
        let mut o = CountingOracle::new(&y);
        assert!(matches!(ot_decode(&key, &mut o, &Interval::new(1, 15).unwrap()), Err(Error::Usage(_))));
        assert_eq!(o.tally(), 0);
    }

    #[test]
    fn corrupting_one_block_leaves_others_intact() {
        let mut rng = RandomStream::from_u64(5);
        let key = OneTimeKey::generate(small(), 48, &mut rng).unwrap();
        let x = BitVector::random(48, &mut rng);
        let mut y = ot_encode(&key, &x).unwrap();
        // wipe every bit of block 2
        for i in 48..96 {
            y.flip(key.permutation().map(i));
        }
        let mut o = CountingOracle::new(&y);
        assert_eq!(ot_decode(&key, &mut o, &Interval::new(1, 16).unwrap()).unwrap(), x.slice(0..16));
        assert_eq!(ot_decode(&key, &mut o, &Interval::new(33, 48).unwrap()).unwrap(), x.slice(32..48));
        match ot_decode(&key, &mut o, &Interval::new(17, 32).unwrap()) {
            Ok(w) => assert_ne!(w, x.slice(16..32)),
            Err(e) => assert!(e.is_decode_failure()),
        }
    }
}
