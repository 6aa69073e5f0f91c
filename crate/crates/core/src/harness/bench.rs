//! Parameter sweeps producing one [`ExperimentRecord`] per decode.
//!
//! Trial `i` draws all its randomness from `RandomStream::from_u64(seed).substream(i)`,
//! so output is independent of the worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::block_code::BlockCodeSpec;
use crate::crypto::RandomStream;
use crate::error::{Error, Result};
use crate::hadamard::codeword_len;
use crate::harness::channel::{ChannelKind, ChannelModel};
use crate::harness::games::{hadamard_trial, interval_grid, play_round, GameCodec, MessageFixture};
use crate::harness::record::{ConfigSummary, ExperimentRecord};
use crate::oracle::CountingOracle;
use crate::paldc::{default_nonce_bits, MultiRoundKey, OneTimeKey};
use crate::resource_bounded::{rb_decode, rb_encode, RbParams};

const KEY_STREAM: u64 = u64::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchCodec {
    Hadamard,
    Onetime,
    Multiround,
    Rb,
}

impl BenchCodec {
    pub const ALL: [BenchCodec; 4] = [BenchCodec::Hadamard, BenchCodec::Onetime, BenchCodec::Multiround, BenchCodec::Rb];

    pub fn name(&self) -> &'static str {
        match self {
            BenchCodec::Hadamard => "hadamard",
            BenchCodec::Onetime => "onetime",
            BenchCodec::Multiround => "multiround",
            BenchCodec::Rb => "rb",
        }
    }

    pub fn parse(s: &str) -> Result<BenchCodec> {
        BenchCodec::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::config(format!("unknown codec {s:?}; expected hadamard, onetime, multiround or rb")))
    }
}

/// Channel family; the concrete region sizes follow from the codec.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelChoice {
    Uniform,
    Burst,
    Block,
    Left,
    Right,
}

impl ChannelChoice {
    pub fn parse(s: &str) -> Result<ChannelChoice> {
        Ok(match s {
            "uniform" | "uniform_random" => ChannelChoice::Uniform,
            "burst" | "contiguous_burst" => ChannelChoice::Burst,
            "block" | "block_targeting" => ChannelChoice::Block,
            "left" | "left_dump" => ChannelChoice::Left,
            "right" | "right_dump" => ChannelChoice::Right,
            _ => return Err(Error::config(format!("unknown channel {s:?}"))),
        })
    }

    /// `boundary` splits left from right; `chunk`/`per_chunk` shape the left dump.
    pub fn model(&self, delta: f64, block_len: usize, boundary: usize, chunk: usize, per_chunk: usize) -> Result<ChannelModel> {
        let kind = match self {
            ChannelChoice::Uniform => ChannelKind::UniformRandom,
            ChannelChoice::Burst => ChannelKind::ContiguousBurst,
            ChannelChoice::Block => ChannelKind::BlockTargeting { block_len },
            ChannelChoice::Left => ChannelKind::LeftDump { boundary, chunk, per_chunk },
            ChannelChoice::Right => ChannelKind::RightDump { boundary },
        };
        ChannelModel::new(kind, delta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub codec: BenchCodec,
    pub channel: ChannelChoice,
    /// Message bits.
    pub k: usize,
    /// Channel error fraction.
    pub delta: f64,
    /// Batch size for the Hadamard decoder; the private codecs use `kappa = a`.
    pub kappa: usize,
    pub trials: usize,
    pub seed: u64,
    pub jobs: usize,
    /// Block payload bits of the private codecs.
    pub a: usize,
    /// Block codeword bits of the one-time codec.
    pub big_a: usize,
    /// Nonce bits; `None` picks `ceil(2 log2(q B)) + 32` with `q = trials`.
    pub nonce_bits: Option<usize>,
    /// RSE embedded noise weight.
    pub noise_weight: usize,
    /// RSE per-block channel tolerance.
    pub design_delta: f64,
    pub random_intervals: usize,
    pub lambda: usize,
    pub puzzle_t: u64,
    pub sample_count: usize,
}

impl BenchConfig {
    pub fn defaults(codec: BenchCodec) -> BenchConfig {
        let base = BenchConfig {
            codec,
            channel: ChannelChoice::Uniform,
            k: 8192,
            delta: 0.02,
            kappa: 3,
            trials: 100,
            seed: 1,
            jobs: 1,
            a: 256,
            big_a: 512,
            nonce_bits: None,
            noise_weight: 4,
            design_delta: 0.05,
            random_intervals: 16,
            lambda: 128,
            puzzle_t: 1000,
            sample_count: 5,
        };
        match codec {
            BenchCodec::Hadamard => BenchConfig { k: 12, ..base },
            BenchCodec::Onetime => base,
            BenchCodec::Multiround => BenchConfig { k: 2048, a: 512, ..base },
            BenchCodec::Rb => BenchConfig { k: 4096, delta: 0.005, ..base },
        }
    }

    fn block_spec(&self) -> Result<BlockCodeSpec> {
        BlockCodeSpec::new(self.a, self.big_a, 8)
    }

    pub fn rb_params(&self) -> Result<RbParams> {
        let p = RbParams {
            lambda: self.lambda,
            puzzle_t: self.puzzle_t,
            star_inner: BlockCodeSpec::new(512, 1024, 8)?,
            sample_count: self.sample_count,
            paldc: self.block_spec()?,
            msg_len: self.k,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn multiround_key(&self) -> Result<MultiRoundKey> {
        let blocks = self.k.div_ceil(self.a.max(1));
        let b = self.nonce_bits.unwrap_or_else(|| default_nonce_bits(self.trials, blocks));
        let mut rng = RandomStream::from_u64(self.seed).substream(KEY_STREAM);
        MultiRoundKey::generate(self.lambda, self.a, b, self.noise_weight, self.design_delta, self.k, &mut rng)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRun {
    pub records: Vec<ExperimentRecord>,
    pub summary: ConfigSummary,
}

fn parallel_trials<T, F>(jobs: usize, trials: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::config(format!("thread pool: {e}")))?;
    pool.install(|| (0..trials).into_par_iter().map(f).collect())
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchRun> {
    if cfg.trials == 0 {
        return Err(Error::config("trials must be at least 1"));
    }
    let root = RandomStream::from_u64(cfg.seed);
    let record = |trial: usize, n: usize, kappa: usize, l: usize, r: usize, queries: usize, success: bool| ExperimentRecord {
        codec: cfg.codec.name().to_string(),
        k: cfg.k,
        n,
        delta: cfg.delta,
        kappa,
        trial,
        l,
        r,
        queries,
        success,
        seed: cfg.seed,
    };
    let (per_trial, bound, channel_name): (Vec<Vec<ExperimentRecord>>, f64, String) = match cfg.codec {
        BenchCodec::Hadamard => {
            let n = codeword_len(cfg.k);
            let ch = cfg.channel.model(cfg.delta, n, n / 2, n, 1)?;
            let rows = parallel_trials(cfg.jobs, cfg.trials, |t| {
                let mut rng = root.substream(t as u64);
                let (q, queries, ok) = hadamard_trial(cfg.k, cfg.kappa, &ch, &mut rng)?;
                let idx = q.indices();
                Ok(vec![record(t, n, cfg.kappa, idx[0], idx[idx.len() - 1], queries, ok)])
            })?;
            (rows, (cfg.kappa + 1) as f64 / cfg.kappa as f64, ch.to_string())
        }
        BenchCodec::Onetime => {
            let spec = cfg.block_spec()?;
            let n = cfg.k.div_ceil(cfg.a) * cfg.big_a;
            let ch = cfg.channel.model(cfg.delta, cfg.big_a, n / 2, cfg.big_a, spec.t_sym() + 1)?;
            let rows = parallel_trials(cfg.jobs, cfg.trials, |t| {
                let mut rng = root.substream(t as u64);
                let key = OneTimeKey::generate(spec, cfg.k, &mut rng)?;
                let x = MessageFixture::ALL[t % 4].message(cfg.k, &mut rng);
                let grid = interval_grid(cfg.k, cfg.a, cfg.random_intervals, &mut rng)?;
                let out = play_round(GameCodec::OneTime(&key), &ch, &x, &grid, &mut rng)?;
                Ok(out.iter().map(|o| record(t, n, cfg.a, o.interval.l(), o.interval.r(), o.queries, o.success)).collect())
            })?;
            (rows, 2.0 * cfg.big_a as f64 / cfg.a as f64, ch.to_string())
        }
        BenchCodec::Multiround => {
            let key = cfg.multiround_key()?;
            let n = key.n();
            let ch = cfg.channel.model(cfg.delta, key.block_len(), n / 2, key.block_len(), key.rse().code.t() + 1)?;
            let rows = parallel_trials(cfg.jobs, cfg.trials, |t| {
                let mut rng = root.substream(t as u64);
                let x = MessageFixture::ALL[t % 4].message(cfg.k, &mut rng);
                let grid = interval_grid(cfg.k, cfg.a, cfg.random_intervals, &mut rng)?;
                let out = play_round(GameCodec::MultiRound(&key), &ch, &x, &grid, &mut rng)?;
                Ok(out.iter().map(|o| record(t, n, cfg.a, o.interval.l(), o.interval.r(), o.queries, o.success)).collect())
            })?;
            (rows, key.locality_bound(), ch.to_string())
        }
        BenchCodec::Rb => {
            let p = cfg.rb_params()?;
            let star = p.star_spec()?;
            let n = p.n()?;
            let ch = cfg.channel.model(cfg.delta, cfg.big_a, star.n(), star.copy_len(), star.copy_kill_cost())?;
            let rows = parallel_trials(cfg.jobs, cfg.trials, |t| {
                let mut rng = root.substream(t as u64);
                let x = MessageFixture::ALL[t % 4].message(cfg.k, &mut rng);
                let grid = interval_grid(cfg.k, cfg.a, cfg.random_intervals, &mut rng)?;
                let word = ch.corrupt(&rb_encode(&x, &p, &mut rng)?.to_bits(), &mut rng)?;
                grid.iter()
                    .map(|iv| {
                        let mut oracle = CountingOracle::new(&word);
                        let ok = match rb_decode(&mut oracle, &p, iv, &mut rng) {
                            Ok(d) => d.bits == x.slice(iv.l() - 1..iv.r()),
                            Err(e) if e.is_decode_failure() => false,
                            Err(e) => return Err(e),
                        };
                        Ok(record(t, n, cfg.a, iv.l(), iv.r(), oracle.tally(), ok))
                    })
                    .collect()
            })?;
            (rows, p.alpha_p() + star.queries() as f64 / cfg.a as f64, ch.to_string())
        }
    };
    let records: Vec<ExperimentRecord> = per_trial.into_iter().flatten().collect();
    let summary = ConfigSummary::from_records(cfg.codec.name(), &channel_name, cfg.trials, bound, &records);
    Ok(BenchRun { records, summary })
}

/// Every codec at its defaults with the given seed, trial count and channel fraction scale.
pub fn run_suite(seed: u64, trials: usize, jobs: usize) -> Result<Vec<BenchRun>> {
    BenchCodec::ALL
        .iter()
        .map(|&c| run_bench(&BenchConfig { seed, trials, jobs, ..BenchConfig::defaults(c) }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::record::csv_string;

    #[test]
    fn jobs_do_not_change_output() {
        let cfg = BenchConfig { trials: 6, k: 1024, ..BenchConfig::defaults(BenchCodec::Onetime) };
        let one = run_bench(&cfg).unwrap();
        let four = run_bench(&BenchConfig { jobs: 4, ..cfg }).unwrap();
        assert_eq!(csv_string(&one.records).unwrap(), csv_string(&four.records).unwrap());
        assert_eq!(one.records.len(), 6 * (4 + 16));
    }

    #[test]
    fn hadamard_rows() {
        let cfg = BenchConfig { trials: 20, ..BenchConfig::defaults(BenchCodec::Hadamard) };
        let run = run_bench(&cfg).unwrap();
        assert_eq!(run.records.len(), 20);
        assert!(run.records.iter().all(|r| r.queries <= 4 && r.n == 4095));
    }

    #[test]
    fn codec_and_channel_names_parse() {
        for c in BenchCodec::ALL {
            assert_eq!(BenchCodec::parse(c.name()).unwrap(), c);
        }
        assert!(BenchCodec::parse("x").is_err());
        assert_eq!(ChannelChoice::parse("left_dump").unwrap(), ChannelChoice::Left);
    }
}
