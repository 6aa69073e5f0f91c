//! Keyless composition: the one-time key seed is hidden in a time-lock puzzle
//! stored, repetition coded, in front of the one-time codeword.
//!
//! Codeword layout is `Y* || Y_P`. `Y*` holds `r` copies of the block-encoded
//! puzzle, with `r` the smallest count making `|Y*| >= |Y_P|`. The decoder
//! fully decodes `sample_count` distinct copies, takes the majority, solves the
//! puzzle to get the seed `s`, rebuilds the one-time key from `s`, and then
//! decodes the interval from `Y_P`.

use serde::{Deserialize, Serialize};

use crate::bits::BitVector;
use crate::block_code::{BlockCode, BlockCodeSpec};
use crate::crypto::{puzzle_gen, serialized_len_bits, Puzzle, RandomStream, MIN_LAMBDA};
use crate::error::{Error, Result};
use crate::oracle::{CountingOracle, Oracle};
use crate::paldc::{ot_decode, ot_encode, Interval, OneTimeKey};

/// Whole-message code: `copies` repetitions of one block codeword.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LdcStarSpec {
    pub inner: BlockCodeSpec,
    /// Message bits actually carried (the rest of the inner block is zero).
    pub k_star: usize,
    pub copies: usize,
    pub sample_count: usize,
}

impl LdcStarSpec {
    pub fn new(inner: BlockCodeSpec, k_star: usize, copies: usize, sample_count: usize) -> Result<Self> {
        inner.validate()?;
        if k_star == 0 || k_star > inner.a {
            return Err(Error::config(format!("k* = {k_star} must be in [1, a = {}]", inner.a)));
        }
        if copies == 0 || sample_count == 0 || sample_count > copies {
            return Err(Error::config(format!(
                "need 1 <= sample_count ({sample_count}) <= copies ({copies})"
            )));
        }
        Ok(LdcStarSpec { inner, k_star, copies, sample_count })
    }

    pub fn copy_len(&self) -> usize {
        self.inner.big_a
    }

    /// `n* = r A*`.
    pub fn n(&self) -> usize {
        self.copies * self.copy_len()
    }

    /// Queries per decode, `l* = sample_count A*`.
    pub fn queries(&self) -> usize {
        self.sample_count * self.copy_len()
    }

    /// Bit flips needed to push one copy past its correction radius.
    pub fn copy_kill_cost(&self) -> usize {
        self.inner.t_sym() + 1
    }

    /// Largest number of destroyed copies `d` for which a majority of the
    /// sample is still good except with probability at most `eps`.
    pub fn max_killed_copies(&self, eps: f64) -> usize {
        (0..=self.copies)
            .take_while(|&d| majority_bad_prob(self.copies, d, self.sample_count) <= eps)
            .last()
            .unwrap_or(0)
    }

    /// Corruption budget `delta* n*` in bits at failure target `eps`.
    pub fn budget_bits(&self, eps: f64) -> usize {
        self.max_killed_copies(eps) * self.copy_kill_cost()
    }
}

/// `Pr[at least ceil(s/2) of s copies drawn without replacement from r are among the d bad]`.
pub fn majority_bad_prob(r: usize, d: usize, s: usize) -> f64 {
    let need = s.div_ceil(2);
    let total = ln_choose(r, s);
    (need..=s.min(d))
        .filter(|&j| s - j <= r - d)
        .map(|j| (ln_choose(d, j) + ln_choose(r - d, s - j) - total).exp())
        .sum()
}

fn ln_choose(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

/// Smallest odd `s` with `Pr[Bin(s, p_copy) >= ceil(s/2)] <= eps`.
pub fn sample_count_for(p_copy: f64, eps: f64) -> Result<usize> {
    if !(0.0..0.5).contains(&p_copy) || !(0.0 < eps && eps < 1.0) {
        return Err(Error::config(format!("need 0 <= p_copy = {p_copy} < 1/2 and 0 < eps = {eps} < 1")));
    }
    let mut s: usize = 1;
    while s < 100_001 {
        let need = s.div_ceil(2);
        let tail: f64 = (need..=s)
            .map(|j| (ln_choose(s, j) + j as f64 * p_copy.ln() + (s - j) as f64 * (1.0 - p_copy).ln()).exp())
            .sum();
        if tail <= eps {
            return Ok(s);
        }
        s += 2;
    }
    Err(Error::config("sample count above 100001"))
}

pub fn ldcstar_encode(spec: &LdcStarSpec, z: &BitVector) -> Result<BitVector> {
    if z.len() != spec.k_star {
        return Err(Error::usage(format!("LDC* message has {} bits, expected k* = {}", z.len(), spec.k_star)));
    }
    let c = BlockCode::new(spec.inner)?.encode(&z.resized(spec.inner.a))?;
    Ok(BitVector::concat(std::iter::repeat_n(&c, spec.copies)))
}

/// Majority over `sample_count` distinct, fully decoded copies.
pub fn ldcstar_decode<O: Oracle + ?Sized>(spec: &LdcStarSpec, oracle: &mut O, rng: &mut RandomStream) -> Result<BitVector> {
    if oracle.len() != spec.n() {
        return Err(Error::usage(format!("LDC* word has {} bits, expected n* = {}", oracle.len(), spec.n())));
    }
    let code = BlockCode::new(spec.inner)?;
    let a_star = spec.copy_len();
    let mut votes: Vec<(BitVector, usize)> = Vec::new();
    let mut good = 0;
    for copy in rng.distinct_indices(spec.copies, spec.sample_count) {
        let word: BitVector = (0..a_star).map(|i| oracle.query(copy * a_star + i)).collect();
        if let Ok(m) = code.decode(&word) {
            let m = m.slice(0..spec.k_star);
            good += 1;
            match votes.iter_mut().find(|(v, _)| *v == m) {
                Some((_, c)) => *c += 1,
                None => votes.push((m, 1)),
            }
        }
    }
    votes
        .into_iter()
        .find(|(_, c)| 2 * c > good)
        .map(|(v, _)| v)
        .ok_or_else(|| Error::decode(format!("no majority among {good} decodable copies")))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RbParams {
    /// Seed and puzzle security parameter, in bits.
    pub lambda: usize,
    /// Sequential squarings in the puzzle.
    pub puzzle_t: u64,
    /// Inner code of the puzzle copies.
    pub star_inner: BlockCodeSpec,
    pub sample_count: usize,
    /// Inner code of the one-time code.
    pub paldc: BlockCodeSpec,
    pub msg_len: usize,
}

impl RbParams {
    pub fn validate(&self) -> Result<()> {
        if self.lambda < MIN_LAMBDA {
            return Err(Error::config(format!("lambda = {} < {MIN_LAMBDA}", self.lambda)));
        }
        if self.puzzle_t == 0 {
            return Err(Error::config("puzzle hardness t must be at least 1"));
        }
        self.paldc.validate()?;
        self.star_spec().map(|_| ())
    }

    pub fn n_p(&self) -> usize {
        self.msg_len.div_ceil(self.paldc.a) * self.paldc.big_a
    }

    /// Smallest `r` with `r A* >= n_P`, and the resulting LDC* spec.
    pub fn star_spec(&self) -> Result<LdcStarSpec> {
        let k_star = serialized_len_bits(self.lambda);
        if k_star > self.star_inner.a {
            return Err(Error::config(format!(
                "puzzle needs k* = {k_star} bits > LDC* inner message width a* = {}",
                self.star_inner.a
            )));
        }
        let copies = self.n_p().div_ceil(self.star_inner.big_a).max(1);
        LdcStarSpec::new(self.star_inner, k_star, copies, self.sample_count)
    }

    pub fn n(&self) -> Result<usize> {
        Ok(self.star_spec()?.n() + self.n_p())
    }

    /// `alpha_P = 2 A / a` of the one-time code.
    pub fn alpha_p(&self) -> f64 {
        2.0 * self.paldc.big_a as f64 / self.paldc.a as f64
    }

    fn key_from_seed(&self, s: &BitVector) -> Result<OneTimeKey> {
        let mut material = b"aldc/rb-key".to_vec();
        material.extend_from_slice(&s.to_bytes());
        OneTimeKey::generate(self.paldc, self.msg_len, &mut RandomStream::from_bytes(&material))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComposedCodeword {
    pub y_star: BitVector,
    pub y_p: BitVector,
}

impl ComposedCodeword {
    pub fn n_star(&self) -> usize {
        self.y_star.len()
    }

    pub fn n_p(&self) -> usize {
        self.y_p.len()
    }

    pub fn to_bits(&self) -> BitVector {
        BitVector::concat([&self.y_star, &self.y_p])
    }

    pub fn from_bits(bits: &BitVector, n_star: usize) -> Result<ComposedCodeword> {
        if n_star > bits.len() {
            return Err(Error::format(format!("n* = {n_star} exceeds word length {}", bits.len())));
        }
        Ok(ComposedCodeword { y_star: bits.slice(0..n_star), y_p: bits.slice(n_star..bits.len()) })
    }
}

pub fn rb_encode(x: &BitVector, params: &RbParams, rng: &mut RandomStream) -> Result<ComposedCodeword> {
    params.validate()?;
    if x.len() != params.msg_len {
        return Err(Error::usage(format!("message has {} bits, parameters are for {}", x.len(), params.msg_len)));
    }
    let s = BitVector::random(params.lambda, rng);
    let z = puzzle_gen(&s, params.puzzle_t, rng)?;
    let y_star = ldcstar_encode(&params.star_spec()?, &z.to_bits())?;
    let key = params.key_from_seed(&s)?;
    let y_p = ot_encode(&key, x)?;
    Ok(ComposedCodeword { y_star, y_p })
}

/// Outcome of a composed decode, with the squaring count of the puzzle solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RbDecoded {
    pub bits: BitVector,
    pub squarings: u64,
}

pub fn rb_decode(
    oracle: &mut CountingOracle<'_>,
    params: &RbParams,
    iv: &Interval,
    rng: &mut RandomStream,
) -> Result<RbDecoded> {
    params.validate()?;
    let star = params.star_spec()?;
    let n_star = star.n();
    if oracle.len() != n_star + params.n_p() {
        return Err(Error::usage(format!(
            "composed word has {} bits, expected n* + n_P = {}",
            oracle.len(),
            n_star + params.n_p()
        )));
    }
    iv.check(params.msg_len, params.paldc.a)?;
    let z_bits = ldcstar_decode(&star, &mut oracle.window(0, n_star), rng)?;
    let (s, squarings) = Puzzle::from_bits(&z_bits)?.solve_counted()?;
    let key = params.key_from_seed(&s)?;
    let bits = ot_decode(&key, &mut oracle.window(n_star, params.n_p()), iv)?;
    Ok(RbDecoded { bits, squarings })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> RbParams {
        RbParams {
            lambda: 128,
            puzzle_t: 200,
            star_inner: BlockCodeSpec::new(512, 1024, 8).unwrap(),
            sample_count: 5,
            paldc: BlockCodeSpec::default_spec(),
            msg_len: 4096,
        }
    }

    #[test]
    fn sizes_follow_smallest_r_rule() {
        let p = params();
        let star = p.star_spec().unwrap();
        assert_eq!(star.k_star, 480);
        assert_eq!(p.n_p(), 8192);
        assert_eq!(star.copies, 8);
        assert!(star.n() >= p.n_p());
        let p = RbParams { msg_len: 4097, ..p };
        assert_eq!(p.star_spec().unwrap().copies, 9);
        let p = RbParams { msg_len: 1024, ..p };
        assert!(matches!(p.star_spec(), Err(Error::Config(_))));
    }

    #[test]
    fn sample_count_rule() {
        assert_eq!(sample_count_for(0.1, 0.01).unwrap(), 5);
        assert_eq!(sample_count_for(0.0, 0.5).unwrap(), 1);
        assert!(sample_count_for(0.5, 0.01).is_err());
    }

    #[test]
    fn majority_probability_edges() {
        assert_eq!(majority_bad_prob(8, 0, 5), 0.0);
        assert_eq!(majority_bad_prob(8, 2, 5), 0.0);
        assert!((majority_bad_prob(8, 3, 5) - 10.0 / 56.0).abs() < 1e-12);
        assert!((majority_bad_prob(8, 8, 5) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ldcstar_copies_and_majority() {
        let spec = LdcStarSpec::new(BlockCodeSpec::new(16, 48, 8).unwrap(), 12, 10, 3).unwrap();
        let mut rng = RandomStream::from_u64(1);
        let z = BitVector::random(12, &mut rng);
        let y = ldcstar_encode(&spec, &z).unwrap();
        for c in 1..10 {
            assert_eq!(y.slice(c * 48..(c + 1) * 48), y.slice(0..48));
        }
        let mut o = CountingOracle::new(&y);
        assert_eq!(ldcstar_decode(&spec, &mut o, &mut rng).unwrap(), z);
        assert_eq!(o.tally(), spec.queries());
        // destroy one copy entirely
        let mut bad = y.clone();
        for i in 96..144 {
            bad.flip(i);
        }
        for _ in 0..50 {
            let mut o = CountingOracle::new(&bad);
            assert_eq!(ldcstar_decode(&spec, &mut o, &mut rng).unwrap(), z);
        }
    }

    #[test]
    fn composed_roundtrip_and_tally() {
        let p = params();
        let mut rng = RandomStream::from_u64(2);
        let x = BitVector::random(p.msg_len, &mut rng);
        let cw = rb_encode(&x, &p, &mut rng).unwrap();
        assert_eq!(cw.n_star() + cw.n_p(), p.n().unwrap());
        let word = cw.to_bits();
        let iv = Interval::new(100, 100 + 255).unwrap();
        let mut o = CountingOracle::new(&word);
        let got = rb_decode(&mut o, &p, &iv, &mut rng).unwrap();
        assert_eq!(got.bits, x.slice(99..355));
        assert_eq!(got.squarings, p.puzzle_t);
        let star = p.star_spec().unwrap();
        assert_eq!(o.tally(), star.queries() + 2 * 512);
        assert!(o.tally() as f64 <= star.queries() as f64 + iv.len() as f64 * p.alpha_p());
    }

    #[test]
    fn key_derivation_is_deterministic() {
        let p = params();
        let s = BitVector::random(128, &mut RandomStream::from_u64(3));
        let k1 = p.key_from_seed(&s).unwrap();
        let k2 = p.key_from_seed(&s).unwrap();
        assert_eq!(k1.pad(), k2.pad());
        assert_eq!(k1.permutation(), k2.permutation());
    }
}
