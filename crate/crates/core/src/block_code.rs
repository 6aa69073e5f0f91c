//! The inner `(A, a)` block code: a shortened systematic Reed–Solomon code over
//! GF(2^c) carried on bit strings.
//!
//! Message bits are packed big-endian into `c`-bit symbols. The codeword is
//! the message symbols followed by the parity symbols, so the first `a` bits
//! of every codeword equal the message. Decoding solves the key equation with
//! the extended Euclidean algorithm, finds error positions by Chien search and
//! values by Forney's formula, and re-checks the syndromes before accepting.

use serde::{Deserialize, Serialize};

use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::gf2m::{eea, Degree, Field, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockCodeSpec {
    /// Message length in bits.
    pub a: usize,
    /// Codeword length in bits.
    #[serde(rename = "A")]
    pub big_a: usize,
    /// Bits per symbol.
    pub symbol_bits: u32,
}

impl BlockCodeSpec {
    pub fn new(a: usize, big_a: usize, symbol_bits: u32) -> Result<Self> {
        let spec = BlockCodeSpec { a, big_a, symbol_bits };
        spec.validate()?;
        Ok(spec)
    }

    /// Rate 1/2, `a = 256`, `A = 512` over GF(2^8): corrects 16 symbols.
    pub fn default_spec() -> Self {
        BlockCodeSpec { a: 256, big_a: 512, symbol_bits: 8 }
    }

    pub fn validate(&self) -> Result<()> {
        let c = self.symbol_bits as usize;
        if !(2..=16).contains(&self.symbol_bits) {
            return Err(Error::config(format!("symbol_bits = {c} outside [2, 16]")));
        }
        if self.a == 0 || !self.a.is_multiple_of(c) || !self.big_a.is_multiple_of(c) {
            return Err(Error::config(format!(
                "a = {} and A = {} must be positive multiples of symbol_bits = {c}",
                self.a, self.big_a
            )));
        }
        if self.big_a <= self.a {
            return Err(Error::config(format!("A = {} must exceed a = {}", self.big_a, self.a)));
        }
        let max_symbols = (1usize << c) - 1;
        if self.big_a / c > max_symbols {
            return Err(Error::config(format!(
                "A / symbol_bits = {} exceeds 2^{c} - 1 = {max_symbols} symbols",
                self.big_a / c
            )));
        }
        Ok(())
    }

    pub fn message_symbols(&self) -> usize {
        self.a / self.symbol_bits as usize
    }

    pub fn codeword_symbols(&self) -> usize {
        self.big_a / self.symbol_bits as usize
    }

    /// Symbol-error correction radius `floor((A - a) / (2 c))`.
    pub fn t_sym(&self) -> usize {
        (self.big_a - self.a) / (2 * self.symbol_bits as usize)
    }

    pub fn rate(&self) -> f64 {
        self.a as f64 / self.big_a as f64
    }

    /// Correctable fraction of symbols, `t_sym / (A / c)`.
    pub fn symbol_error_fraction(&self) -> f64 {
        self.t_sym() as f64 / self.codeword_symbols() as f64
    }

    /// Fraction of bits that is always correctable whatever the placement: `t_sym / A`.
    pub fn worst_case_bit_fraction(&self) -> f64 {
        self.t_sym() as f64 / self.big_a as f64
    }
}

/// A Reed–Solomon instance with its generator polynomial precomputed.
#[derive(Clone, Debug)]
pub struct BlockCode {
    spec: BlockCodeSpec,
    field: Field,
    generator: Poly,
}

impl BlockCode {
    pub fn new(spec: BlockCodeSpec) -> Result<Self> {
        spec.validate()?;
        let field = Field::new(spec.symbol_bits)?;
        let parity = spec.codeword_symbols() - spec.message_symbols();
        let mut generator = Poly::one(&field);
        for j in 1..=parity {
            generator = &generator * &Poly::new(&field, vec![field.alpha_pow(j), 1]);
        }
        Ok(BlockCode { spec, field, generator })
    }

    pub fn spec(&self) -> &BlockCodeSpec {
        &self.spec
    }

    fn parity_symbols(&self) -> usize {
        self.spec.codeword_symbols() - self.spec.message_symbols()
    }

    fn to_symbols(&self, bits: &BitVector) -> Vec<u16> {
        let c = self.spec.symbol_bits as usize;
        (0..bits.len() / c)
            .map(|s| (0..c).fold(0u16, |acc, j| (acc << 1) | bits.get(s * c + j) as u16))
            .collect()
    }

    fn to_bits(&self, symbols: &[u16]) -> BitVector {
        let c = self.spec.symbol_bits as usize;
        symbols
            .iter()
            .flat_map(|&s| (0..c).rev().map(move |j| (s >> j) & 1 == 1))
            .collect()
    }

    /// Systematic encoding: the codeword starts with the message bits.
    pub fn encode(&self, message: &BitVector) -> Result<BitVector> {
        if message.len() != self.spec.a {
            return Err(Error::usage(format!(
                "block message has {} bits, expected a = {}",
                message.len(),
                self.spec.a
            )));
        }
        let msg = self.to_symbols(message);
        let parity = self.parity_symbols();
        // coefficient of x^(n-1-i) is symbol i
        let mut shifted: Vec<u16> = vec![0; parity];
        shifted.extend(msg.iter().rev());
        let rem = Poly::new(&self.field, shifted).rem(&self.generator)?;
        let mut symbols = msg;
        symbols.extend((0..parity).map(|j| rem.coeff(parity - 1 - j)));
        Ok(self.to_bits(&symbols))
    }

    fn syndromes(&self, symbols: &[u16]) -> Vec<u16> {
        let f = &self.field;
        (1..=self.parity_symbols())
            .map(|j| {
                let x = f.alpha_pow(j);
                symbols.iter().fold(0u16, |acc, &s| f.mul(acc, x) ^ s)
            })
            .collect()
    }

    /// Bounded-distance decoding up to `t_sym` symbol errors.
    pub fn decode(&self, received: &BitVector) -> Result<BitVector> {
        Ok(self.decode_codeword(received)?.0)
    }

    /// Decodes and also reports the number of corrected symbols.
    pub fn decode_codeword(&self, received: &BitVector) -> Result<(BitVector, usize)> {
        if received.len() != self.spec.big_a {
            return Err(Error::usage(format!(
                "block codeword has {} bits, expected A = {}",
                received.len(),
                self.spec.big_a
            )));
        }
        let f = &self.field;
        let n = self.spec.codeword_symbols();
        let k = self.spec.message_symbols();
        let parity = self.parity_symbols();
        let mut symbols = self.to_symbols(received);
        let synd = self.syndromes(&symbols);
        if synd.iter().all(|&s| s == 0) {
            return Ok((self.to_bits(&symbols[..k]), 0));
        }

        let s_poly = Poly::new(f, synd);
        let x_p = Poly::monomial(f, 1, parity);
        let stop = parity.div_ceil(2).saturating_sub(1);
        let (_, lambda, omega) = eea(&x_p, &s_poly, stop)?;
        let l0 = lambda.coeff(0);
        if l0 == 0 {
            return Err(Error::decode("error locator has zero constant term"));
        }
        let norm = f.inv_nonzero(l0);
        let lambda = lambda.scale(norm);
        let omega = omega.scale(norm);
        let nu = match lambda.degree() {
            Degree::Finite(d) if d >= 1 && d <= self.spec.t_sym() => d,
            d => return Err(Error::decode(format!("error locator degree {d} outside [1, t_sym]"))),
        };

        let d_lambda = lambda.derivative();
        let mut found = 0;
        for i in 0..n {
            let x_inv = f.alpha_pow((f.order() - 1) - (n - 1 - i) % (f.order() - 1));
            if lambda.eval(x_inv) != 0 {
                continue;
            }
            let denom = d_lambda.eval(x_inv);
            if denom == 0 {
                return Err(Error::decode("repeated error locator root"));
            }
            symbols[i] ^= f.div(omega.eval(x_inv), denom);
            found += 1;
        }
        if found != nu {
            return Err(Error::decode(format!("error locator has {found} roots in range, degree {nu}")));
        }
        if self.syndromes(&symbols).iter().any(|&s| s != 0) {
            return Err(Error::decode("corrected word is not a codeword"));
        }
        Ok((self.to_bits(&symbols[..k]), nu))
    }
}

pub fn encode_block(spec: &BlockCodeSpec, w: &BitVector) -> Result<BitVector> {
    BlockCode::new(*spec)?.encode(w)
}

pub fn decode_block(spec: &BlockCodeSpec, w_corrupt: &BitVector) -> Result<BitVector> {
    BlockCode::new(*spec)?.decode(w_corrupt)
}
