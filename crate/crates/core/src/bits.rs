//! Bit strings over GF(2).
//!
//! Bits are stored most-significant-first, so byte conversions and the
//! textual `0101...` form agree with the big-endian packing used by every
//! file format and by the symbol packing of the block code.

use std::fmt;
use std::ops::{BitXor, BitXorAssign, Range};
use std::str::FromStr;

use bitvec::prelude::*;
use rand::RngCore;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    bits: BitVec<u64, Msb0>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector { bits: bitvec![u64, Msb0; 0; len] }
    }

    pub fn ones(len: usize) -> Self {
        BitVector { bits: bitvec![u64, Msb0; 1; len] }
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitVector { bits: iter.into_iter().collect() }
    }

    /// Unpacks `len` bits from `bytes`, MSB of byte 0 first.
    pub fn from_bytes(bytes: &[u8], len: usize) -> Result<Self> {
        if len > bytes.len() * 8 {
            return Err(Error::format(format!(
                "need {len} bits but only {} bytes supplied",
                bytes.len()
            )));
        }
        let view = bytes.view_bits::<Msb0>();
        Ok(BitVector::from_bools(view[..len].iter().by_vals()))
    }

    /// Packs into bytes, MSB first; the final byte is zero-padded.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len().div_ceil(8)];
        let view = out.view_bits_mut::<Msb0>();
        for (i, b) in self.bits.iter().by_vals().enumerate() {
            view.set(i, b);
        }
        out
    }

    /// Uniformly random bit string.
    pub fn random<R: RngCore + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut bytes = vec![0u8; len.div_ceil(8)];
        rng.fill_bytes(&mut bytes);
        BitVector::from_bytes(&bytes, len).expect("buffer sized for len")
    }

    /// Big-endian encoding of the low `width` bits of `value`.
    pub fn from_uint(value: u64, width: usize) -> Self {
        BitVector::from_bools((0..width).rev().map(|i| i < 64 && (value >> i) & 1 == 1))
    }

    /// Interprets up to the last 64 bits as a big-endian unsigned integer.
    pub fn to_uint(&self) -> u64 {
        self.bits.iter().by_vals().fold(0u64, |acc, b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn get(&self, index: usize) -> bool {
        self.bits[index]
    }

    #[inline]
    pub fn set(&mut self, index: usize, value: bool) {
        self.bits.set(index, value);
    }

    #[inline]
    pub fn flip(&mut self, index: usize) {
        let v = self.bits[index];
        self.bits.set(index, !v);
    }

    pub fn push(&mut self, value: bool) {
        self.bits.push(value);
    }

    pub fn extend_from(&mut self, other: &BitVector) {
        self.bits.extend_from_bitslice(&other.bits);
    }

    pub fn concat<'a, I: IntoIterator<Item = &'a BitVector>>(parts: I) -> Self {
        let mut out = BitVector::default();
        for p in parts {
            out.extend_from(p);
        }
        out
    }

    pub fn slice(&self, range: Range<usize>) -> BitVector {
        BitVector { bits: self.bits[range].to_bitvec() }
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn distance(&self, other: &BitVector) -> usize {
        assert_eq!(self.len(), other.len(), "distance between unequal lengths");
        let mut x = self.clone();
        x ^= other;
        x.weight()
    }

    /// Positions holding a one, ascending.
    pub fn ones_positions(&self) -> Vec<usize> {
        self.bits.iter_ones().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().by_vals()
    }

    /// Zero-pads (or truncates) to exactly `len` bits.
    pub fn resized(&self, len: usize) -> BitVector {
        let mut bits = self.bits.clone();
        bits.resize(len, false);
        BitVector { bits }
    }
}

impl BitXorAssign<&BitVector> for BitVector {
    fn bitxor_assign(&mut self, rhs: &BitVector) {
        assert_eq!(self.len(), rhs.len(), "xor of unequal lengths");
        self.bits ^= rhs.bits.as_bitslice();
    }
}

impl BitXor for &BitVector {
    type Output = BitVector;

    fn bitxor(self, rhs: &BitVector) -> BitVector {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 128 {
            write!(f, "BitVector[{}]({})", self.len(), self)
        } else {
            write!(f, "BitVector[{}](weight {})", self.len(), self.weight())
        }
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace() && *c != '_')
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::format(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitVector::from_bools)
    }
}

impl FromIterator<bool> for BitVector {
    fn from_iter<T: IntoIterator<Item = bool>>(iter: T) -> Self {
        BitVector::from_bools(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bytes_are_msb_first() {
        let v = BitVector::from_bytes(&[0b1010_0000, 0xff], 12).unwrap();
        assert_eq!(v.to_string(), "101000001111");
        assert_eq!(v.to_bytes(), vec![0b1010_0000, 0b1111_0000]);
    }

    #[test]
    fn uint_roundtrip() {
        let v = BitVector::from_uint(0b1011, 6);
        assert_eq!(v.to_string(), "001011");
        assert_eq!(v.to_uint(), 0b1011);
    }

    #[test]
    fn parse_and_weight() {
        let v: BitVector = "1100_1".parse().unwrap();
        assert_eq!(v.len(), 5);
        assert_eq!(v.weight(), 3);
        assert!("10x".parse::<BitVector>().is_err());
    }

    #[test]
    fn xor_and_distance() {
        let a: BitVector = "1100".parse().unwrap();
        let b: BitVector = "1010".parse().unwrap();
        assert_eq!(a.distance(&b), 2);
        let mut c = a.clone();
        c ^= &b;
        assert_eq!(c.to_string(), "0110");
    }
}
