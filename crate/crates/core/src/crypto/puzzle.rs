//! Sequential-squaring time-lock puzzle.
//!
//! `Gen` picks `N = p q` and a unit `x`, computes `x^(2^t) mod N` quickly via
//! the trapdoor `2^t mod phi(N)`, and XORs the solution seed with a key derived
//! from that value. `Sol` has no trapdoor and performs `t` modular squarings.

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Zero};
use sha2::{Digest, Sha256};

use crate::bits::BitVector;
use crate::crypto::RandomStream;
use crate::error::{Error, Result};

pub const MIN_LAMBDA: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Puzzle {
    modulus: BigUint,
    base: BigUint,
    t: u64,
    payload: BitVector,
}

impl Puzzle {
    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn base(&self) -> &BigUint {
        &self.base
    }

    pub fn hardness(&self) -> u64 {
        self.t
    }

    pub fn payload(&self) -> &BitVector {
        &self.payload
    }

    /// Byte width used for `N` and `x` in the serialization.
    fn modulus_bytes(&self) -> usize {
        modulus_bytes_for(self.payload.len())
    }

    /// Fixed-width big-endian layout:
    /// `u16 L | N (L bytes) | x (L bytes) | u64 t | u16 lambda | payload (ceil(lambda/8) bytes)`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let l = self.modulus_bytes();
        let mut out = Vec::with_capacity(serialized_len_bytes(self.payload.len()));
        out.extend_from_slice(&(l as u16).to_be_bytes());
        out.extend_from_slice(&fixed_be(&self.modulus, l));
        out.extend_from_slice(&fixed_be(&self.base, l));
        out.extend_from_slice(&self.t.to_be_bytes());
        out.extend_from_slice(&(self.payload.len() as u16).to_be_bytes());
        out.extend_from_slice(&self.payload.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Puzzle> {
        let err = || Error::format("truncated puzzle encoding");
        let l = u16::from_be_bytes(bytes.get(0..2).ok_or_else(err)?.try_into().unwrap()) as usize;
        let mut at = 2;
        let mut take = |n: usize| -> Result<&[u8]> {
            let s = bytes.get(at..at + n).ok_or_else(err)?;
            at += n;
            Ok(s)
        };
        let modulus = BigUint::from_bytes_be(take(l)?);
        let base = BigUint::from_bytes_be(take(l)?);
        let t = u64::from_be_bytes(take(8)?.try_into().unwrap());
        let lambda = u16::from_be_bytes(take(2)?.try_into().unwrap()) as usize;
        let payload = BitVector::from_bytes(take(lambda.div_ceil(8))?, lambda)?;
        if modulus_bytes_for(lambda) != l {
            return Err(Error::format(format!("modulus width {l} inconsistent with lambda {lambda}")));
        }
        Ok(Puzzle { modulus, base, t, payload })
    }

    pub fn to_bits(&self) -> BitVector {
        let bytes = self.to_bytes();
        BitVector::from_bytes(&bytes, bytes.len() * 8).expect("whole bytes")
    }

    pub fn from_bits(bits: &BitVector) -> Result<Puzzle> {
        Puzzle::from_bytes(&bits.to_bytes())
    }

    /// Solves by `t` sequential squarings; returns the seed and the squaring count.
    pub fn solve_counted(&self) -> Result<(BitVector, u64)> {
        let one = BigUint::one();
        if self.modulus <= BigUint::from(3u32) || self.modulus.is_even() {
            return Err(Error::decode("malformed puzzle modulus"));
        }
        if self.base <= one || self.base >= self.modulus {
            return Err(Error::decode("puzzle base outside (1, N)"));
        }
        let mut y = self.base.clone();
        let mut squarings = 0u64;
        for _ in 0..self.t {
            y = (&y * &y) % &self.modulus;
            squarings += 1;
        }
        let mut s = derive_pad(&y, self.modulus_bytes(), self.payload.len());
        s ^= &self.payload;
        Ok((s, squarings))
    }

    pub fn solve(&self) -> Result<BitVector> {
        Ok(self.solve_counted()?.0)
    }
}

fn modulus_bytes_for(lambda: usize) -> usize {
    (2 * prime_bits_for(lambda)).div_ceil(8)
}

fn prime_bits_for(lambda: usize) -> usize {
    lambda.div_ceil(2).max(8)
}

/// Serialized size in bytes of any puzzle hiding a `lambda`-bit seed.
pub fn serialized_len_bytes(lambda: usize) -> usize {
    2 + 2 * modulus_bytes_for(lambda) + 8 + 2 + lambda.div_ceil(8)
}

pub fn serialized_len_bits(lambda: usize) -> usize {
    8 * serialized_len_bytes(lambda)
}

fn fixed_be(v: &BigUint, width: usize) -> Vec<u8> {
    let raw = v.to_bytes_be();
    let mut out = vec![0u8; width.saturating_sub(raw.len())];
    out.extend_from_slice(&raw[raw.len().saturating_sub(width)..]);
    out
}

fn derive_pad(y: &BigUint, width: usize, bits: usize) -> BitVector {
    let yb = fixed_be(y, width);
    let mut out = BitVector::default();
    let mut counter = 0u32;
    while out.len() < bits {
        let mut h = Sha256::new();
        h.update(b"aldc/puzzle-kdf");
        h.update(&yb);
        h.update(counter.to_be_bytes());
        let take = (bits - out.len()).min(256);
        out.extend_from(&BitVector::from_bytes(&h.finalize(), take).expect("digest is 256 bits"));
        counter += 1;
    }
    out
}

/// Miller–Rabin with `rounds` random bases.
pub fn is_probable_prime(n: &BigUint, rounds: usize, rng: &mut RandomStream) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for _ in 0..rounds {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Random prime with exactly `bits` bits and its top two bits set.
fn random_prime(bits: usize, rng: &mut RandomStream) -> BigUint {
    loop {
        let mut c = rng.gen_biguint(bits as u64);
        c.set_bit(bits as u64 - 1, true);
        c.set_bit(bits as u64 - 2, true);
        c.set_bit(0, true);
        if is_probable_prime(&c, 32, rng) {
            return c;
        }
    }
}

/// Locks `s` behind `t` sequential squarings.
pub fn puzzle_gen(s: &BitVector, t: u64, rng: &mut RandomStream) -> Result<Puzzle> {
    if t == 0 {
        return Err(Error::usage("puzzle hardness t must be at least 1"));
    }
    let lambda = s.len();
    if lambda < MIN_LAMBDA {
        return Err(Error::usage(format!("seed length {lambda} below the floor {MIN_LAMBDA}")));
    }
    if lambda > u16::MAX as usize {
        return Err(Error::usage(format!("seed length {lambda} does not fit the puzzle header")));
    }
    let bits = prime_bits_for(lambda);
    let (p, q) = loop {
        let p = random_prime(bits, rng);
        let q = random_prime(bits, rng);
        if p != q {
            break (p, q);
        }
    };
    let modulus = &p * &q;
    let phi = (&p - 1u32) * (&q - 1u32);
    let base = loop {
        let x = rng.gen_biguint_range(&BigUint::from(2u32), &modulus);
        if x.gcd(&modulus).is_one() {
            break x;
        }
    };
    let e = BigUint::from(2u32).modpow(&BigUint::from(t), &phi);
    let y = base.modpow(&e, &modulus);
    let mut payload = derive_pad(&y, modulus_bytes_for(lambda), lambda);
    payload ^= s;
    Ok(Puzzle { modulus, base, t, payload })
}

pub fn puzzle_solve(z: &Puzzle) -> Result<BitVector> {
    z.solve()
}
