//! `bench` flags, merged over an optional flat `key=value` file.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::Args;

use aldc::harness::{run_bench, write_csv, BenchCodec, BenchConfig, BenchRun, ChannelChoice, ConfigSummary};

use crate::{CliError, CliResult};

#[derive(Args, Debug, Default)]
pub struct BenchArgs {
    /// hadamard | onetime | multiround | rb.
    #[arg(long)]
    pub codec: Option<String>,
    /// Run every codec at its defaults; only seed, trials, jobs and outputs apply.
    #[arg(long)]
    pub suite: bool,
    /// uniform | burst | block | left | right.
    #[arg(long)]
    pub channel: Option<String>,
    /// Message length [bits].
    #[arg(long)]
    pub k: Option<usize>,
    /// Channel error fraction [fraction of n].
    #[arg(long)]
    pub delta: Option<f64>,
    /// Hadamard batch size [bits].
    #[arg(long)]
    pub kappa: Option<usize>,
    /// Independent trials [count].
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads [count]; output does not depend on it.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Block message width [bits].
    #[arg(long)]
    pub a: Option<usize>,
    /// One-time block codeword width [bits].
    #[arg(long = "A")]
    pub big_a: Option<usize>,
    /// Multi-round nonce length [bits]; sized from trials when absent.
    #[arg(long)]
    pub b: Option<usize>,
    /// RSE embedded noise [bits per block].
    #[arg(long)]
    pub noise_weight: Option<usize>,
    /// RSE per-block channel tolerance [fraction].
    #[arg(long)]
    pub design_delta: Option<f64>,
    /// Unaligned intervals per trial [count].
    #[arg(long)]
    pub random_intervals: Option<usize>,
    /// Security parameter [bits].
    #[arg(long)]
    pub lambda: Option<usize>,
    /// Puzzle hardness [squarings].
    #[arg(long)]
    pub puzzle_t: Option<u64>,
    /// Puzzle copies read per decode [count].
    #[arg(long)]
    pub sample_count: Option<usize>,
    /// Flat `key=value` file; keys are the flag names, flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON summary destination; stderr when absent.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

/// Parses `key = value` lines; `#` starts a comment, `-` and `_` are interchangeable in keys.
pub fn parse_config(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("config line {}: expected key=value", no + 1)))?;
        map.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(map)
}

struct Layer(BTreeMap<String, String>);

impl Layer {
    fn take<T: FromStr>(&mut self, key: &str) -> CliResult<Option<T>> {
        self.0
            .remove(key)
            .map(|v| v.parse().map_err(|_| CliError::Config(format!("config key {key}: cannot parse {v:?}"))))
            .transpose()
    }

    fn pick<T: FromStr>(&mut self, flag: Option<T>, key: &str, default: T) -> CliResult<T> {
        let from_file = self.take(key)?;
        Ok(flag.or(from_file).unwrap_or(default))
    }
}

/// Resolves flags over the file over codec defaults.
pub fn resolve(a: &BenchArgs, file: BTreeMap<String, String>) -> CliResult<BenchConfig> {
    let mut f = Layer(file);
    let codec_name = a.codec.clone().or(f.take("codec")?).unwrap_or_else(|| "onetime".into());
    let codec = BenchCodec::parse(&codec_name).map_err(|e| CliError::Config(e.to_string()))?;
    let d = BenchConfig::defaults(codec);
    let channel = match a.channel.clone().or(f.take("channel")?) {
        Some(s) => ChannelChoice::parse(&s).map_err(|e| CliError::Config(e.to_string()))?,
        None => d.channel,
    };
    let nonce_bits = a.b.or(f.take("b")?).or(d.nonce_bits);
    let cfg = BenchConfig {
        codec,
        channel,
        k: f.pick(a.k, "k", d.k)?,
        delta: f.pick(a.delta, "delta", d.delta)?,
        kappa: f.pick(a.kappa, "kappa", d.kappa)?,
        trials: f.pick(a.trials, "trials", d.trials)?,
        seed: f.pick(a.seed, "seed", d.seed)?,
        jobs: f.pick(a.jobs, "jobs", d.jobs)?,
        a: f.pick(a.a, "a", d.a)?,
        big_a: f.pick(a.big_a, "A", d.big_a)?,
        nonce_bits,
        noise_weight: f.pick(a.noise_weight, "noise_weight", d.noise_weight)?,
        design_delta: f.pick(a.design_delta, "design_delta", d.design_delta)?,
        random_intervals: f.pick(a.random_intervals, "random_intervals", d.random_intervals)?,
        lambda: f.pick(a.lambda, "lambda", d.lambda)?,
        puzzle_t: f.pick(a.puzzle_t, "puzzle_t", d.puzzle_t)?,
        sample_count: f.pick(a.sample_count, "sample_count", d.sample_count)?,
    };
    if let Some(k) = f.0.keys().next() {
        return Err(CliError::Config(format!("unknown config key {k:?}")));
    }
    if !(0.0..=1.0).contains(&cfg.delta) {
        return Err(CliError::Config(format!("delta = {} outside [0, 1]", cfg.delta)));
    }
    if cfg.trials == 0 {
        return Err(CliError::Config("trials must be at least 1".into()));
    }
    Ok(cfg)
}

fn suite_configs(a: &BenchArgs, file: &BTreeMap<String, String>) -> CliResult<Vec<BenchConfig>> {
    BenchCodec::ALL
        .iter()
        .map(|c| {
            let mut f = Layer(file.clone());
            let d = BenchConfig::defaults(*c);
            Ok(BenchConfig {
                seed: f.pick(a.seed, "seed", d.seed)?,
                trials: f.pick(a.trials, "trials", d.trials)?,
                jobs: f.pick(a.jobs, "jobs", d.jobs)?,
                ..d
            })
        })
        .collect()
}

pub fn bench(a: &BenchArgs) -> CliResult {
    let file = match &a.config {
        Some(p) => parse_config(
            &fs::read_to_string(p).map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?,
        )?,
        None => BTreeMap::new(),
    };
    let configs = if a.suite { suite_configs(a, &file)? } else { vec![resolve(a, file)?] };
    let runs: Vec<BenchRun> = configs
        .iter()
        .map(|c| {
            run_bench(c).map_err(|e| match e {
                aldc::Error::Config(_) | aldc::Error::Usage(_) => CliError::Config(e.to_string()),
                e => e.into(),
            })
        })
        .collect::<CliResult<_>>()?;

    let records: Vec<_> = runs.iter().flat_map(|r| r.records.iter().cloned()).collect();
    match &a.out {
        Some(p) => write_csv(&records, fs::File::create(p)?)?,
        None => write_csv(&records, std::io::stdout().lock())?,
    }
    let summaries: Vec<&ConfigSummary> = runs.iter().map(|r| &r.summary).collect();
    let json = serde_json::to_string_pretty(&summaries).expect("summary serializes");
    match &a.summary {
        Some(p) => fs::write(p, json + "\n")?,
        None => writeln!(std::io::stderr(), "{json}")?,
    }

    for s in &summaries {
        if s.max_amortized_locality > s.locality_bound + 1e-9 {
            return Err(CliError::Assertion(format!(
                "{}: amortized locality {} exceeds bound {}",
                s.codec, s.max_amortized_locality, s.locality_bound
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file = parse_config("codec = multiround\ntrials=7 # comment\nrandom-intervals = 2\n").unwrap();
        let a = BenchArgs { trials: Some(3), ..Default::default() };
        let cfg = resolve(&a, file).unwrap();
        assert_eq!(cfg.codec, BenchCodec::Multiround);
        assert_eq!(cfg.trials, 3);
        assert_eq!(cfg.random_intervals, 2);
        assert_eq!(cfg.k, 2048);
    }

    #[test]
    fn unknown_key_rejected() {
        let file = parse_config("colour = blue").unwrap();
        assert!(matches!(resolve(&BenchArgs::default(), file), Err(CliError::Config(_))));
    }

    #[test]
    fn bad_line_rejected() {
        assert!(parse_config("k 12").is_err());
    }
}
