//! Robust secret encryption from a secret binary Goppa code.
//!
//! The key is the code itself. Encoding adds exactly `noise_weight` random
//! errors to `m G`; the code corrects `t >= noise_weight + channel_budget`
//! errors, so a channel may add up to `channel_budget` more. Decoding is
//! Patterson's algorithm. The McEliece scrambling matrices are identity in the
//! secret-key setting.

use crate::bits::BitVector;
use crate::crypto::RandomStream;
use crate::error::{Error, Result};
use crate::gf2m::{eea, BinMatrix, Degree, Field, Poly, SqrtMod};
use crate::params::budget_ceil;

/// A binary Goppa code `{c : sum c_i / (z - alpha_i) = 0 mod g(z)}`.
#[derive(Clone, Debug)]
pub struct GoppaCode {
    field: Field,
    g: Poly,
    support: Vec<u16>,
    /// `k_dim x n` generator; row `i` has its single free-column one at `info_set[i]`.
    generator: BinMatrix,
    info_set: Vec<usize>,
    /// `1 / (z - alpha_i) mod g` for each support point.
    inv_terms: Vec<Poly>,
    sqrt: SqrtMod,
}

impl GoppaCode {
    /// Random code: irreducible monic `g` of degree `t`, `n` random support points.
    /// Retries until the binary parity check has full rank `m t`.
    pub fn generate(m: u32, n: usize, t: usize, rng: &mut RandomStream) -> Result<GoppaCode> {
        let field = Field::new(m)?;
        if t == 0 {
            return Err(Error::config("Goppa degree t must be at least 1"));
        }
        if n > field.order() {
            return Err(Error::config(format!("n = {n} exceeds 2^m = {}", field.order())));
        }
        if n <= m as usize * t {
            return Err(Error::config(format!(
                "n = {n} must exceed m * t = {} for a nonzero dimension",
                m as usize * t
            )));
        }
        for _ in 0..64 {
            let g = loop {
                let g = Poly::random_monic(&field, t, rng);
                if g.is_irreducible() {
                    break g;
                }
            };
            let mut candidates: Vec<u16> =
                (0..field.order() as u16).filter(|&a| g.eval(a) != 0).collect();
            if candidates.len() < n {
                continue;
            }
            for i in 0..n {
                let j = i + rng.below(candidates.len() - i);
                candidates.swap(i, j);
            }
            candidates.truncate(n);
            if let Some(code) = GoppaCode::from_parts(g, candidates)? {
                return Ok(code);
            }
        }
        Err(Error::config("no full-rank Goppa code found after 64 attempts"))
    }

    /// Builds the code for a given `g` and support; `Ok(None)` when the binary
    /// parity check is rank deficient.
    pub fn from_parts(g: Poly, support: Vec<u16>) -> Result<Option<GoppaCode>> {
        let field = g.field().clone();
        let m = field.m() as usize;
        let Degree::Finite(t) = g.degree() else {
            return Err(Error::config("Goppa polynomial is zero"));
        };
        let n = support.len();
        let mut seen = vec![false; field.order()];
        for &a in &support {
            if !field.contains(a) || std::mem::replace(&mut seen[a as usize], true) {
                return Err(Error::config(format!("support point {a} repeated or outside the field")));
            }
            if g.eval(a) == 0 {
                return Err(Error::config(format!("support point {a} is a root of g")));
            }
        }

        // Alternant parity check H[i][j] = alpha_j^i / g(alpha_j), expanded to m bit rows.
        let mut h = BinMatrix::zeros(m * t, n);
        for (j, &a) in support.iter().enumerate() {
            let mut entry = field.inv_nonzero(g.eval(a));
            for i in 0..t {
                for b in 0..m {
                    if (entry >> b) & 1 == 1 {
                        h.set(i * m + b, j, true);
                    }
                }
                entry = field.mul(entry, a);
            }
        }
        let (_, pivots) = h.rref();
        if pivots.len() != m * t {
            return Ok(None);
        }
        let generator = h.nullspace();
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let info_set: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        debug_assert_eq!(info_set.len(), generator.rows());

        let inv_terms = support.iter().map(|&a| inverse_linear(&g, a)).collect();
        let sqrt = SqrtMod::new(&g)?;
        Ok(Some(GoppaCode { field, g, support, generator, info_set, inv_terms, sqrt }))
    }

    pub fn m(&self) -> u32 {
        self.field.m()
    }

    pub fn n(&self) -> usize {
        self.support.len()
    }

    pub fn t(&self) -> usize {
        self.g.degree().finite().expect("nonzero g")
    }

    pub fn k_dim(&self) -> usize {
        self.generator.rows()
    }

    pub fn rate(&self) -> f64 {
        self.k_dim() as f64 / self.n() as f64
    }

    pub fn goppa_poly(&self) -> &Poly {
        &self.g
    }

    pub fn support(&self) -> &[u16] {
        &self.support
    }

    pub fn generator(&self) -> &BinMatrix {
        &self.generator
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn encode(&self, msg: &BitVector) -> Result<BitVector> {
        if msg.len() != self.k_dim() {
            return Err(Error::usage(format!(
                "message has {} bits, code dimension is {}",
                msg.len(),
                self.k_dim()
            )));
        }
        Ok(self.generator.vec_mul(msg))
    }

    /// `sum_i y_i / (z - alpha_i) mod g`.
    pub fn syndrome(&self, word: &BitVector) -> Poly {
        let f = &self.field;
        let mut acc = vec![0u16; self.t()];
        for i in word.ones_positions() {
            for (a, &c) in acc.iter_mut().zip(self.inv_terms[i].coeffs()) {
                *a ^= c;
            }
        }
        Poly::new(f, acc)
    }

    /// Error positions of `word` via Patterson's algorithm.
    pub fn error_positions(&self, word: &BitVector) -> Result<Vec<usize>> {
        if word.len() != self.n() {
            return Err(Error::usage(format!("word has {} bits, code length is {}", word.len(), self.n())));
        }
        let s = self.syndrome(word);
        if s.is_zero() {
            return Ok(Vec::new());
        }
        let f = &self.field;
        let t = self.t();
        let z = Poly::z(f);
        let tau = s.inv_mod(&self.g)?;
        let sigma = if tau == z {
            z.clone()
        } else {
            let r = self.sqrt.sqrt(&(&tau + &z))?;
            let (_, b, a) = eea(&self.g, &r, t / 2)?;
            if b.degree() > Degree::Finite((t.saturating_sub(1)) / 2) {
                return Err(Error::decode("Patterson split exceeds the degree bound"));
            }
            &a.square() + &b.square().shift(1)
        };
        let deg = match sigma.degree() {
            Degree::Finite(d) if (1..=t).contains(&d) => d,
            d => return Err(Error::decode(format!("error locator degree {d} outside [1, t = {t}]"))),
        };
        let roots: Vec<usize> =
            self.support.iter().enumerate().filter(|(_, &a)| sigma.eval(a) == 0).map(|(i, _)| i).collect();
        if roots.len() != deg {
            return Err(Error::decode(format!("error locator of degree {deg} has {} support roots", roots.len())));
        }
        Ok(roots)
    }

    /// Nearest codeword within distance `t`, then the message on the information set.
    pub fn decode(&self, word: &BitVector) -> Result<BitVector> {
        let mut c = word.clone();
        for i in self.error_positions(word)? {
            c.flip(i);
        }
        if !self.syndrome(&c).is_zero() {
            return Err(Error::decode("corrected word has nonzero syndrome"));
        }
        Ok(self.info_set.iter().map(|&i| c.get(i)).collect())
    }
}

/// `1 / (z - a) mod g`: from `g(z) - g(a) = (z - a) h(z)`, the inverse is `h(z) / g(a)`
/// (signs vanish in characteristic 2).
fn inverse_linear(g: &Poly, a: u16) -> Poly {
    let f = g.field();
    let c = g.coeffs();
    let t = c.len() - 1;
    // synthetic division of g by (z - a)
    let mut h = vec![0u16; t];
    let mut carry = 0u16;
    for i in (1..=t).rev() {
        carry = f.mul(carry, a) ^ c[i];
        h[i - 1] = carry;
    }
    Poly::new(f, h).scale(f.inv_nonzero(g.eval(a)))
}

#[derive(Clone, Debug)]
pub struct RseKey {
    pub code: GoppaCode,
    /// Errors embedded by every encoding.
    pub noise_weight: usize,
    /// Additional errors a channel may introduce.
    pub channel_budget: usize,
}

impl RseKey {
    pub fn new(code: GoppaCode, noise_weight: usize, channel_budget: usize) -> Result<RseKey> {
        if code.t() < noise_weight + channel_budget {
            return Err(Error::config(format!(
                "t = {} < noise_weight + channel_budget = {} + {}",
                code.t(),
                noise_weight,
                channel_budget
            )));
        }
        Ok(RseKey { code, noise_weight, channel_budget })
    }

    pub fn n(&self) -> usize {
        self.code.n()
    }

    pub fn k_dim(&self) -> usize {
        self.code.k_dim()
    }

    /// Channel error fraction the key tolerates, `channel_budget / n`.
    pub fn delta(&self) -> f64 {
        self.channel_budget as f64 / self.n() as f64
    }
}

/// Smallest-length parameters `(m, n, t)` with `n = target + m t <= 2^m`
/// and `t >= lambda + ceil(delta n)`.
pub fn rse_params(lambda: usize, delta: f64, target_msg_bits: usize) -> Result<(u32, usize, usize)> {
    if target_msg_bits == 0 {
        return Err(Error::config("target message length must be positive"));
    }
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::config(format!("delta = {delta} outside [0, 1)")));
    }
    let mut best: Option<(u32, usize, usize)> = None;
    for m in 2u32..=16 {
        let cap = 1usize << m;
        let mut t = lambda.max(1);
        loop {
            let n = target_msg_bits + m as usize * t;
            if n > cap {
                break;
            }
            if t >= lambda + budget_ceil(delta, n) {
                if best.is_none_or(|(_, bn, _)| n < bn) {
                    best = Some((m, n, t));
                }
                break;
            }
            t += 1;
        }
    }
    best.ok_or_else(|| {
        Error::config(format!(
            "no m <= 16 satisfies n = {target_msg_bits} + m t <= 2^m with t >= {lambda} + ceil({delta} n)"
        ))
    })
}

/// Key for `target_msg_bits`-bit messages tolerating `noise_weight = lambda`
/// embedded errors plus `ceil(delta n)` channel errors.
pub fn rse_gen(lambda: usize, delta: f64, target_msg_bits: usize, rng: &mut RandomStream) -> Result<RseKey> {
    let (m, n, t) = rse_params(lambda, delta, target_msg_bits)?;
    let code = GoppaCode::generate(m, n, t, rng)?;
    let budget = t - lambda;
    RseKey::new(code, lambda, budget)
}

/// Key over an explicitly sized code.
pub fn rse_gen_with(
    m: u32,
    n: usize,
    t: usize,
    noise_weight: usize,
    channel_budget: usize,
    rng: &mut RandomStream,
) -> Result<RseKey> {
    if t < noise_weight + channel_budget {
        return Err(Error::config(format!(
            "t = {t} < noise_weight + channel_budget = {noise_weight} + {channel_budget}"
        )));
    }
    RseKey::new(GoppaCode::generate(m, n, t, rng)?, noise_weight, channel_budget)
}

/// `msg G + z` with `z` uniform of weight exactly `noise_weight`.
pub fn rse_encode(key: &RseKey, msg: &BitVector, rng: &mut RandomStream) -> Result<BitVector> {
    let mut y = key.code.encode(msg)?;
    for i in rng.distinct_indices(key.n(), key.noise_weight) {
        y.flip(i);
    }
    Ok(y)
}

pub fn rse_decode(key: &RseKey, y: &BitVector) -> Result<BitVector> {
    key.code.decode(y)
}

/// One RSE-game challenge: `b = 0` encodes a uniform message, `b = 1` is uniform noise.
pub fn rse_game_sample(key: &RseKey, b: bool, rng: &mut RandomStream) -> Result<BitVector> {
    if b {
        Ok(BitVector::random(key.n(), rng))
    } else {
        let msg = BitVector::random(key.k_dim(), rng);
        rse_encode(key, &msg, rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_key(seed: u64) -> RseKey {
        let mut rng = RandomStream::from_u64(seed);
        rse_gen(2, 1.0 / 16.0, 12, &mut rng).unwrap()
    }

    #[test]
    fn params_for_the_m5_code() {
        assert_eq!(rse_params(2, 1.0 / 16.0, 12).unwrap(), (5, 32, 4));
        let key = toy_key(1);
        assert_eq!(key.code.k_dim(), 12);
        assert_eq!(key.code.n(), 32);
        assert_eq!(key.code.t(), 4);
        assert_eq!(key.channel_budget, 2);
        assert!(key.code.goppa_poly().is_irreducible());
    }

    #[test]
    fn infeasible_parameters_name_the_inequality() {
        let mut rng = RandomStream::from_u64(2);
        let err = rse_gen_with(5, 32, 4, 3, 2, &mut rng).unwrap_err();
        assert!(matches!(&err, Error::Config(m) if m.contains("t = 4")));
        assert!(rse_params(1, 0.5, 100).is_err());
    }

    #[test]
    fn generator_rows_satisfy_goppa_identity() {
        let key = toy_key(3);
        let g = key.code.generator();
        for r in 0..g.rows() {
            assert!(key.code.syndrome(&g.row(r)).is_zero());
        }
        assert_eq!(g.rank(), g.rows());
    }

    #[test]
    fn same_seed_same_generator() {
        let a = toy_key(4);
        let b = toy_key(4);
        assert_eq!(a.code.generator(), b.code.generator());
        assert_eq!(a.code.support(), b.code.support());
    }

    #[test]
    fn noise_free_encoding_and_exact_weight() {
        let key = toy_key(5);
        let mut rng = RandomStream::from_u64(6);
        let msg = BitVector::random(12, &mut rng);
        let clean = key.code.encode(&msg).unwrap();
        let zero_noise = RseKey::new(key.code.clone(), 0, 2).unwrap();
        assert_eq!(rse_encode(&zero_noise, &msg, &mut rng).unwrap(), clean);
        let y = rse_encode(&key, &msg, &mut rng).unwrap();
        assert_eq!(y.distance(&clean), 2);
        assert_eq!(rse_decode(&key, &y).unwrap(), msg);
        assert_eq!(rse_decode(&key, &clean).unwrap(), msg);
    }

    #[test]
    fn single_error_at_zero_support_point() {
        // T = z branch: the error sits on the support point 0.
        let key = toy_key(7);
        let code = &key.code;
        let pos = code.support().iter().position(|&a| a == 0).expect("full support contains 0");
        let mut w = code.encode(&BitVector::ones(12)).unwrap();
        w.flip(pos);
        assert_eq!(code.error_positions(&w).unwrap(), vec![pos]);
    }

    #[test]
    fn inverse_linear_matches_inv_mod() {
        let key = toy_key(8);
        let code = &key.code;
        let f = code.field();
        for &a in code.support() {
            let lin = Poly::new(f, vec![a, 1]);
            let inv = lin.inv_mod(code.goppa_poly()).unwrap();
            assert_eq!(inverse_linear(code.goppa_poly(), a), inv);
        }
    }

    #[test]
    fn wrong_lengths_are_usage_errors() {
        let key = toy_key(9);
        let mut rng = RandomStream::from_u64(10);
        assert!(matches!(rse_encode(&key, &BitVector::zeros(11), &mut rng), Err(Error::Usage(_))));
        assert!(matches!(rse_decode(&key, &BitVector::zeros(31)), Err(Error::Usage(_))));
    }

    #[test]
    fn beyond_radius_is_failure_or_wrong_never_panic() {
        let key = toy_key(11);
        let mut rng = RandomStream::from_u64(12);
        let mut failures = 0;
        for _ in 0..500 {
            let msg = BitVector::random(12, &mut rng);
            let mut y = key.code.encode(&msg).unwrap();
            for i in rng.distinct_indices(32, 7) {
                y.flip(i);
            }
            if let Err(e) = rse_decode(&key, &y) {
                assert!(e.is_decode_failure());
                failures += 1;
            }
        }
        assert!(failures > 0);
    }

    #[test]
    fn game_samples_have_the_right_shape() {
        let key = toy_key(13);
        let mut rng = RandomStream::from_u64(14);
        for b in [false, true] {
            let s = rse_game_sample(&key, b, &mut rng).unwrap();
            assert_eq!(s.len(), 32);
            if !b {
                assert!(rse_decode(&key, &s).is_ok());
            }
        }
    }

    #[test]
    fn larger_code_corrects_full_radius() {
        let mut rng = RandomStream::from_u64(15);
        let key = rse_gen(4, 0.04, 120, &mut rng).unwrap();
        let t = key.code.t();
        for _ in 0..20 {
            let msg = BitVector::random(key.k_dim(), &mut rng);
            let mut y = key.code.encode(&msg).unwrap();
            for i in rng.distinct_indices(key.n(), t) {
                y.flip(i);
            }
            assert_eq!(rse_decode(&key, &y).unwrap(), msg);
        }
    }
}
