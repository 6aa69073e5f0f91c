//! Security games and the per-trial experiments behind the bench.

use serde::{Deserialize, Serialize};

use crate::bits::BitVector;
use crate::crypto::RandomStream;
use crate::error::{Error, Result};
use crate::gf2m::BinMatrix;
use crate::hadamard::{codeword_len, had_decode_amortized, had_encode, QuerySet};
use crate::harness::channel::ChannelModel;
use crate::harness::stats::binomial_sigma;
use crate::oracle::CountingOracle;
use crate::paldc::{mr_decode, mr_encode, ot_decode, ot_encode, Interval, MultiRoundKey, OneTimeKey};
use crate::params::budget_floor;
use crate::rse::{rse_decode, rse_game_sample, GoppaCode, RseKey};

/// Messages an adversary may pick in the paLDC game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MessageFixture {
    Zeros,
    Ones,
    Alternating,
    Random,
}

impl MessageFixture {
    pub const ALL: [MessageFixture; 4] =
        [MessageFixture::Zeros, MessageFixture::Ones, MessageFixture::Alternating, MessageFixture::Random];

    pub fn message(&self, k: usize, rng: &mut RandomStream) -> BitVector {
        match self {
            MessageFixture::Zeros => BitVector::zeros(k),
            MessageFixture::Ones => BitVector::ones(k),
            MessageFixture::Alternating => (0..k).map(|i| i % 2 == 0).collect(),
            MessageFixture::Random => BitVector::random(k, rng),
        }
    }
}

/// All block-aligned `kappa`-bit intervals, then `random` unaligned ones of
/// length `kappa` (each spans exactly two blocks).
pub fn interval_grid(k: usize, kappa: usize, random: usize, rng: &mut RandomStream) -> Result<Vec<Interval>> {
    if kappa == 0 || kappa > k {
        return Err(Error::usage(format!("kappa = {kappa} outside [1, k = {k}]")));
    }
    let mut grid: Vec<Interval> =
        (0..k / kappa).map(|i| Interval::starting_at(i * kappa + 1, kappa)).collect::<Result<_>>()?;
    if k > kappa && kappa > 1 {
        for _ in 0..random {
            let l = loop {
                let l = 1 + rng.below(k - kappa + 1);
                if !(l - 1).is_multiple_of(kappa) {
                    break l;
                }
            };
            grid.push(Interval::starting_at(l, kappa)?);
        }
    }
    Ok(grid)
}

/// A keyed private code under test.
#[derive(Clone, Copy, Debug)]
pub enum GameCodec<'k> {
    OneTime(&'k OneTimeKey),
    MultiRound(&'k MultiRoundKey),
}

impl GameCodec<'_> {
    pub fn name(&self) -> &'static str {
        match self {
            GameCodec::OneTime(_) => "onetime",
            GameCodec::MultiRound(_) => "multiround",
        }
    }

    pub fn k(&self) -> usize {
        match self {
            GameCodec::OneTime(key) => key.msg_len(),
            GameCodec::MultiRound(key) => key.msg_len(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            GameCodec::OneTime(key) => key.n(),
            GameCodec::MultiRound(key) => key.n(),
        }
    }

    pub fn kappa(&self) -> usize {
        match self {
            GameCodec::OneTime(key) => key.kappa(),
            GameCodec::MultiRound(key) => key.kappa(),
        }
    }

    /// Bits read per touched block.
    pub fn block_len(&self) -> usize {
        match self {
            GameCodec::OneTime(key) => key.spec().big_a,
            GameCodec::MultiRound(key) => key.block_len(),
        }
    }

    pub fn locality_bound(&self) -> f64 {
        match self {
            GameCodec::OneTime(key) => key.locality_bound(),
            GameCodec::MultiRound(key) => key.locality_bound(),
        }
    }

    pub fn encode(&self, x: &BitVector, rng: &mut RandomStream) -> Result<BitVector> {
        match self {
            GameCodec::OneTime(key) => ot_encode(key, x),
            GameCodec::MultiRound(key) => mr_encode(key, x, rng),
        }
    }

    pub fn decode(&self, oracle: &mut CountingOracle<'_>, iv: &Interval) -> Result<BitVector> {
        match self {
            GameCodec::OneTime(key) => ot_decode(key, oracle, iv),
            GameCodec::MultiRound(key) => mr_decode(key, oracle, iv),
        }
    }
}

/// One decode of one round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub interval: Interval,
    pub queries: usize,
    pub success: bool,
}

/// Encode `x`, corrupt once, decode every interval of `grid` against the same word.
/// Decode failures count as unsuccessful; any other error aborts.
pub fn play_round(
    codec: GameCodec<'_>,
    channel: &ChannelModel,
    x: &BitVector,
    grid: &[Interval],
    rng: &mut RandomStream,
) -> Result<Vec<DecodeOutcome>> {
    let y = codec.encode(x, rng)?;
    let corrupted = channel.corrupt(&y, rng)?;
    grid.iter()
        .map(|iv| {
            let mut oracle = CountingOracle::new(&corrupted);
            let success = match codec.decode(&mut oracle, iv) {
                Ok(bits) => bits == x.slice(iv.l() - 1..iv.r()),
                Err(e) if e.is_decode_failure() => false,
                Err(e) => return Err(e),
            };
            Ok(DecodeOutcome { interval: *iv, queries: oracle.tally(), success })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecGameConfig {
    pub rounds: usize,
    pub channel: ChannelModel,
    /// Per-interval failure rate above which the adversary wins.
    pub epsilon: f64,
    pub random_intervals: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SecGameReport {
    /// `(round, outcomes)` for each round.
    pub rounds: Vec<Vec<DecodeOutcome>>,
    /// Failure rate of each aligned interval, then of the unaligned pool.
    pub failure_rates: Vec<f64>,
    /// True when some interval failed more often than `epsilon`.
    pub adversary_wins: bool,
}

/// The paLDC security game against the built-in adversary: messages cycle
/// through the fixtures, the channel is `cfg.channel`.
pub fn run_paldc_sec_game(codec: GameCodec<'_>, cfg: &SecGameConfig, rng: &mut RandomStream) -> Result<SecGameReport> {
    let k = codec.k();
    let kappa = codec.kappa();
    let aligned = k / kappa;
    let mut fails = vec![0usize; aligned + 1];
    let mut counts = vec![0usize; aligned + 1];
    let mut rounds = Vec::with_capacity(cfg.rounds);
    for h in 0..cfg.rounds {
        let x = MessageFixture::ALL[h % 4].message(k, rng);
        let grid = interval_grid(k, kappa, cfg.random_intervals, rng)?;
        let out = play_round(codec, &cfg.channel, &x, &grid, rng)?;
        for (i, o) in out.iter().enumerate() {
            let slot = i.min(aligned);
            counts[slot] += 1;
            fails[slot] += usize::from(!o.success);
        }
        rounds.push(out);
    }
    let failure_rates: Vec<f64> =
        fails.iter().zip(&counts).map(|(&f, &c)| if c == 0 { 0.0 } else { f as f64 / c as f64 }).collect();
    let adversary_wins = failure_rates.iter().any(|&r| r > cfg.epsilon);
    Ok(SecGameReport { rounds, failure_rates, adversary_wins })
}

/// One Hadamard trial: fresh message and corruption, uniform query set of
/// size `kappa`, one amortized decode.
pub fn hadamard_trial(k: usize, kappa: usize, channel: &ChannelModel, rng: &mut RandomStream) -> Result<(QuerySet, usize, bool)> {
    let x = BitVector::random(k, rng);
    let c = had_encode(&x)?;
    let corrupted = channel.corrupt(c.bits(), rng)?;
    let q = QuerySet::random(k, kappa, rng)?;
    let mut oracle = CountingOracle::new(&corrupted);
    let got = had_decode_amortized(&mut oracle, &q, rng)?;
    let ok = got.iter().zip(q.indices()).all(|(b, &j)| b == x.get(j - 1));
    debug_assert_eq!(corrupted.len(), codeword_len(k));
    Ok((q, oracle.tally(), ok))
}

/// Per-block error counts of one one-time encoding under `channel`, read
/// back through the key's permutation.
pub fn block_error_counts(key: &OneTimeKey, channel: &ChannelModel, rng: &mut RandomStream) -> Result<Vec<usize>> {
    let x = BitVector::random(key.msg_len(), rng);
    let y = ot_encode(key, &x)?;
    let e = &channel.corrupt(&y, rng)? ^ &y;
    let big_a = key.spec().big_a;
    let mut counts = vec![0usize; key.blocks()];
    for p in e.ones_positions() {
        counts[key.permutation().unmap(p) / big_a] += 1;
    }
    Ok(counts)
}

/// Overflow tally: blocks with more than `floor(delta_code A)` errors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverflowTally {
    pub observations: usize,
    pub overflows: usize,
    pub max_errors: usize,
}

pub fn overflow_tally(counts: &[usize], delta_code: f64, block_len: usize) -> OverflowTally {
    let limit = budget_floor(delta_code, block_len);
    OverflowTally {
        observations: counts.len(),
        overflows: counts.iter().filter(|&&c| c > limit).count(),
        max_errors: counts.iter().copied().max().unwrap_or(0),
    }
}

/// Statistical tests playing the RSE game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distinguisher {
    RandomGuess,
    /// Reads the coordinate most biased on encodings (learned from a training set).
    BitBias,
    /// Likelihood ratio of the Hamming weight, histograms learned from training sets.
    WeightHistogram,
    /// Rank of the XORs of a batch of samples with its first sample.
    PairwiseXorRank,
}

impl Distinguisher {
    pub const ALL: [Distinguisher; 4] = [
        Distinguisher::RandomGuess,
        Distinguisher::BitBias,
        Distinguisher::WeightHistogram,
        Distinguisher::PairwiseXorRank,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Distinguisher::RandomGuess => "random_guess",
            Distinguisher::BitBias => "bit_bias",
            Distinguisher::WeightHistogram => "weight_histogram",
            Distinguisher::PairwiseXorRank => "pairwise_xor_rank",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdvantageReport {
    pub distinguisher: String,
    pub null_experiment: bool,
    pub samples: usize,
    pub correct: usize,
    /// `|Pr[guess = b] - 1/2|`.
    pub advantage: f64,
    /// Standard deviation of the success frequency at advantage 0.
    pub sigma: f64,
    /// Encodings whose embedded noise was not exactly the key's weight, or that failed to decode.
    pub invariant_violations: usize,
}

impl AdvantageReport {
    pub fn within_three_sigma_of_zero(&self) -> bool {
        self.advantage <= 3.0 * self.sigma
    }
}

const TRAINING: usize = 2000;

enum Trained {
    Random,
    Bit(usize),
    Weights { enc: Vec<f64>, uni: Vec<f64> },
    Rank { batch: usize },
}

fn train(d: Distinguisher, key: &RseKey, rng: &mut RandomStream) -> Result<Trained> {
    let n = key.n();
    Ok(match d {
        Distinguisher::RandomGuess => Trained::Random,
        Distinguisher::BitBias => {
            let mut ones = vec![0usize; n];
            for _ in 0..TRAINING {
                for p in rse_game_sample(key, false, rng)?.ones_positions() {
                    ones[p] += 1;
                }
            }
            let half = TRAINING as f64 / 2.0;
            let best = (0..n).max_by(|&a, &b| {
                (ones[a] as f64 - half).abs().total_cmp(&(ones[b] as f64 - half).abs()).then(b.cmp(&a))
            });
            Trained::Bit(best.unwrap_or(0))
        }
        Distinguisher::WeightHistogram => {
            let mut enc = vec![1.0; n + 1];
            let mut uni = vec![1.0; n + 1];
            for _ in 0..TRAINING {
                enc[rse_game_sample(key, false, rng)?.weight()] += 1.0;
                uni[rse_game_sample(key, true, rng)?.weight()] += 1.0;
            }
            Trained::Weights { enc, uni }
        }
        Distinguisher::PairwiseXorRank => Trained::Rank { batch: (key.k_dim() + 4).min(n) },
    })
}

impl Trained {
    fn batch(&self) -> usize {
        match self {
            Trained::Rank { batch } => *batch,
            _ => 1,
        }
    }

    /// `true` guesses "uniform" (b = 1).
    fn guess(&self, batch: &[BitVector], rng: &mut RandomStream) -> bool {
        match self {
            Trained::Random => rng.bit(),
            Trained::Bit(i) => batch[0].get(*i),
            Trained::Weights { enc, uni } => {
                let w = batch[0].weight();
                uni[w] >= enc[w]
            }
            Trained::Rank { .. } => {
                let rows: Vec<BitVector> = batch[1..].iter().map(|y| y ^ &batch[0]).collect();
                let m = BinMatrix::from_rows(&rows, batch[0].len());
                m.rank() == rows.len()
            }
        }
    }
}

/// RSE game: each challenge draws `b`, then samples from encodings of
/// uniform messages (`b = 0`) or uniform strings (`b = 1`). With `null`,
/// both arms are uniform strings.
pub fn run_rse_game(
    key: &RseKey,
    samples: usize,
    distinguishers: &[Distinguisher],
    null: bool,
    rng: &mut RandomStream,
) -> Result<Vec<AdvantageReport>> {
    let mut reports = Vec::with_capacity(distinguishers.len());
    for &d in distinguishers {
        let trained = train(d, key, rng)?;
        let mut correct = 0;
        let mut violations = 0;
        for _ in 0..samples {
            let b = rng.bit();
            let uniform_arm = b || null;
            let batch: Vec<BitVector> =
                (0..trained.batch()).map(|_| rse_game_sample(key, uniform_arm, rng)).collect::<Result<_>>()?;
            if !uniform_arm {
                violations += batch.iter().filter(|y| !encoding_invariants_hold(key, y)).count();
            }
            correct += usize::from(trained.guess(&batch, rng) == b);
        }
        let rate = correct as f64 / samples.max(1) as f64;
        reports.push(AdvantageReport {
            distinguisher: d.name().to_string(),
            null_experiment: null,
            samples,
            correct,
            advantage: (rate - 0.5).abs(),
            sigma: binomial_sigma(0.5, samples),
            invariant_violations: violations,
        });
    }
    Ok(reports)
}

/// The embedded noise of an encoding has weight exactly `noise_weight` and it decodes.
pub fn encoding_invariants_hold(key: &RseKey, y: &BitVector) -> bool {
    match rse_decode(key, y) {
        Ok(m) => key.code.encode(&m).map(|c| c.distance(y) == key.noise_weight).unwrap_or(false),
        Err(_) => false,
    }
}

/// ADP challenge: `(R, c)` with `c = x R + e`, `wt(e) = lambda`, or `c` uniform.
#[derive(Clone, Debug)]
pub struct AdpInstance {
    pub matrix: BinMatrix,
    pub word: BitVector,
    pub hidden_bit: bool,
    /// `(x, e)` when `hidden_bit` is false.
    pub witness: Option<(BitVector, BitVector)>,
}

pub fn adp_sample(k: usize, n: usize, lambda: usize, b: bool, rng: &mut RandomStream) -> Result<AdpInstance> {
    if k == 0 || k > n || lambda > n {
        return Err(Error::config(format!("ADP needs 0 < k ({k}) <= n ({n}) and lambda ({lambda}) <= n")));
    }
    let matrix = BinMatrix::random(k, n, rng);
    if b {
        return Ok(AdpInstance { matrix, word: BitVector::random(n, rng), hidden_bit: true, witness: None });
    }
    let x = BitVector::random(k, rng);
    let mut e = BitVector::zeros(n);
    for i in rng.distinct_indices(n, lambda) {
        e.set(i, true);
    }
    let word = &matrix.vec_mul(&x) ^ &e;
    Ok(AdpInstance { matrix, word, hidden_bit: false, witness: Some((x, e)) })
}

/// GD challenge: a reduced-echelon generator of a random Goppa code (`b = 1`)
/// or of a random linear code of the same size (`b = 0`).
#[derive(Clone, Debug)]
pub struct GdInstance {
    pub generator: BinMatrix,
    pub hidden_bit: bool,
    pub code: Option<GoppaCode>,
}

pub fn gd_sample(m: u32, n: usize, t: usize, b: bool, rng: &mut RandomStream) -> Result<GdInstance> {
    let code = GoppaCode::generate(m, n, t, rng)?;
    if b {
        let (generator, _) = code.generator().rref();
        return Ok(GdInstance { generator, hidden_bit: true, code: Some(code) });
    }
    let k = code.k_dim();
    loop {
        let g = BinMatrix::random(k, n, rng);
        let (generator, pivots) = g.rref();
        if pivots.len() == k {
            return Ok(GdInstance { generator, hidden_bit: false, code: None });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block_code::BlockCodeSpec;
    use crate::harness::channel::ChannelKind;
    use crate::rse::rse_gen;

    fn toy_rse(seed: u64) -> RseKey {
        rse_gen(2, 1.0 / 16.0, 12, &mut RandomStream::from_u64(seed)).unwrap()
    }

    #[test]
    fn grid_shape() {
        let mut rng = RandomStream::from_u64(1);
        let g = interval_grid(1024, 256, 16, &mut rng).unwrap();
        assert_eq!(g.len(), 4 + 16);
        assert_eq!(g[0], Interval::new(1, 256).unwrap());
        assert_eq!(g[3], Interval::new(769, 1024).unwrap());
        for iv in &g[4..] {
            assert_eq!(iv.len(), 256);
            assert!(iv.r() <= 1024);
            assert_ne!((iv.l() - 1) % 256, 0);
            assert_eq!(iv.block_span(256), 2);
        }
    }

    #[test]
    fn clean_channel_never_wins() {
        let mut rng = RandomStream::from_u64(2);
        let key = MultiRoundKey::generate(64, 16, 8, 2, 0.03, 64, &mut rng).unwrap();
        let cfg = SecGameConfig { rounds: 4, channel: ChannelModel::uniform(0.0), epsilon: 0.0, random_intervals: 4 };
        let rep = run_paldc_sec_game(GameCodec::MultiRound(&key), &cfg, &mut rng).unwrap();
        assert!(!rep.adversary_wins);
        assert!(rep.rounds.iter().flatten().all(|o| o.success && o.queries > 0));
    }

    #[test]
    fn one_time_key_reuse_is_usage_error() {
        let mut rng = RandomStream::from_u64(3);
        let key = OneTimeKey::generate(BlockCodeSpec::new(16, 48, 8).unwrap(), 64, &mut rng).unwrap();
        let cfg = SecGameConfig { rounds: 2, channel: ChannelModel::uniform(0.0), epsilon: 0.0, random_intervals: 0 };
        let err = run_paldc_sec_game(GameCodec::OneTime(&key), &cfg, &mut rng).unwrap_err();
        assert!(matches!(err, Error::Usage(_)));
    }

    #[test]
    fn unkeyed_block_code_falls_to_block_targeting() {
        let spec = BlockCodeSpec::new(16, 48, 8).unwrap();
        let mut rng = RandomStream::from_u64(4);
        let mut failed = 0;
        for _ in 0..20 {
            let key = OneTimeKey::unkeyed(spec, 160).unwrap();
            // 48 flips fill one whole block
            let ch = ChannelModel::new(ChannelKind::BlockTargeting { block_len: 48 }, 0.1).unwrap();
            let grid = interval_grid(160, 16, 0, &mut rng).unwrap();
            let out = play_round(GameCodec::OneTime(&key), &ch, &BitVector::random(160, &mut rng), &grid, &mut rng).unwrap();
            failed += out.iter().filter(|o| !o.success).count();
        }
        assert!(failed >= 20);
    }

    #[test]
    fn block_counts_sum_to_budget() {
        let mut rng = RandomStream::from_u64(5);
        let key = OneTimeKey::generate(BlockCodeSpec::default_spec(), 2048, &mut rng).unwrap();
        let ch = ChannelModel::uniform(0.05);
        let counts = block_error_counts(&key, &ch, &mut rng).unwrap();
        assert_eq!(counts.len(), 8);
        assert_eq!(counts.iter().sum::<usize>(), ch.budget(4096));
        let t = overflow_tally(&counts, 0.0, 512);
        assert_eq!(t.overflows, counts.iter().filter(|&&c| c > 0).count());
    }

    #[test]
    fn hadamard_trial_counts() {
        let mut rng = RandomStream::from_u64(6);
        for _ in 0..50 {
            let (q, tally, ok) = hadamard_trial(8, 3, &ChannelModel::uniform(0.0), &mut rng).unwrap();
            assert_eq!(q.len(), 3);
            assert!(tally <= 4);
            assert!(ok);
        }
    }

    #[test]
    fn rse_null_game_is_fair_and_plumbing_holds() {
        let key = toy_rse(7);
        let mut rng = RandomStream::from_u64(8);
        let reps = run_rse_game(&key, 2000, &Distinguisher::ALL, true, &mut rng).unwrap();
        for r in &reps {
            assert!(r.within_three_sigma_of_zero(), "{r:?}");
        }
        let real = run_rse_game(&key, 300, &Distinguisher::ALL, false, &mut rng).unwrap();
        assert!(real.iter().all(|r| r.invariant_violations == 0));
    }

    #[test]
    fn adp_and_gd_samplers() {
        let mut rng = RandomStream::from_u64(9);
        let inst = adp_sample(12, 32, 3, false, &mut rng).unwrap();
        let (x, e) = inst.witness.clone().unwrap();
        assert_eq!(e.weight(), 3);
        assert_eq!(&inst.matrix.vec_mul(&x) ^ &e, inst.word);
        assert_eq!((inst.matrix.rows(), inst.matrix.cols()), (12, 32));
        let gd1 = gd_sample(5, 32, 4, true, &mut rng).unwrap();
        let code = gd1.code.as_ref().unwrap();
        for r in 0..gd1.generator.rows() {
            assert!(code.syndrome(&gd1.generator.row(r)).is_zero());
        }
        let gd0 = gd_sample(5, 32, 4, false, &mut rng).unwrap();
        assert_eq!((gd0.generator.rows(), gd0.generator.cols()), (gd1.generator.rows(), gd1.generator.cols()));
        assert_eq!(gd0.generator.rank(), gd0.generator.rows());
    }
}
