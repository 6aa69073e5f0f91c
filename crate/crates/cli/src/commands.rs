use std::fs;
use std::io::Write;
use std::path::Path;

use aldc::block_code::BlockCodeSpec;
use aldc::crypto::RandomStream;
use aldc::formats::{
    read_codeword, read_composed, read_key, write_codeword, write_composed, write_key, CodecTag, CodewordHeader,
    SecretKey,
};
use aldc::harness::{
    binomial_sigma, hadamard_trial, within_three_sigma, hypergeometric_bound, interval_grid, play_round,
    run_rse_game, ChannelKind, ChannelModel, DecodeOutcome, Distinguisher, GameCodec, MessageFixture,
};
use aldc::paldc::{default_nonce_bits, mr_decode, mr_encode, ot_decode, ot_encode, MultiRoundKey, OneTimeKey};
use aldc::resource_bounded::{rb_decode, rb_encode, ComposedCodeword, RbParams};
use aldc::rse::{rse_decode, rse_encode, rse_gen};
use aldc::{BitVector, CountingOracle};

use crate::{
    BoundTableArgs, CliError, CliResult, Codec, DecodeArgs, DemoChannel, EncodeArgs, HadamardDemoArgs, KeygenArgs,
    PaldcGameArgs, RbDecodeArgs, RbEncodeArgs, RseGameArgs, RseTestArgs,
};

/// Key material is drawn from this substream so message/channel streams stay independent of it.
const KEY_STREAM: u64 = u64::MAX;

fn read(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> CliResult {
    fs::write(path, bytes).map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

fn read_message(path: &Path, k: usize) -> CliResult<BitVector> {
    BitVector::from_bytes(&read(path)?, k)
        .map_err(|_| CliError::Config(format!("{} holds fewer than k = {k} bits", path.display())))
}

fn maybe_corrupt(y: BitVector, delta: f64, rng: &mut RandomStream) -> CliResult<BitVector> {
    if delta == 0.0 {
        return Ok(y);
    }
    Ok(ChannelModel::uniform(delta).corrupt(&y, rng)?)
}

pub fn hadamard_demo(a: &HadamardDemoArgs) -> CliResult {
    let kind = match a.channel {
        DemoChannel::Uniform => ChannelKind::UniformRandom,
        DemoChannel::Burst => ChannelKind::ContiguousBurst,
    };
    let ch = ChannelModel::new(kind, a.delta)?;
    if a.trials == 0 {
        return Err(CliError::Config("trials must be at least 1".into()));
    }
    let root = RandomStream::from_u64(a.seed);
    let mut out: Box<dyn Write> = match &a.out {
        Some(p) => Box::new(fs::File::create(p)?),
        None => Box::new(std::io::stdout().lock()),
    };
    writeln!(out, "trial,queries,success")?;
    let (mut fails, mut max_q) = (0usize, 0usize);
    for t in 0..a.trials {
        let (_, q, ok) = hadamard_trial(a.k, a.kappa, &ch, &mut root.substream(t as u64))?;
        writeln!(out, "{t},{q},{}", u8::from(ok))?;
        fails += usize::from(!ok);
        max_q = max_q.max(q);
    }
    out.flush()?;
    let rate = fails as f64 / a.trials as f64;
    let bound = (a.kappa + 1) as f64 * a.delta;
    eprintln!(
        "failure rate {rate:.4} over {} trials, bound (kappa+1)*delta = {bound:.4} (3 sigma {:.4}); max queries {max_q} <= {}",
        a.trials,
        3.0 * binomial_sigma(bound.min(1.0), a.trials),
        a.kappa + 1
    );
    if max_q > a.kappa + 1 {
        return Err(CliError::Assertion(format!("a decode made {max_q} > kappa + 1 queries")));
    }
    if bound < 1.0 && !within_three_sigma(rate, bound, a.trials) {
        return Err(CliError::Assertion(format!("failure rate {rate:.4} exceeds (kappa+1)*delta = {bound:.4}")));
    }
    Ok(())
}

pub fn paldc_keygen(a: &KeygenArgs) -> CliResult {
    let mut rng = RandomStream::from_u64(a.seed).substream(KEY_STREAM);
    let key = match a.codec {
        Codec::Onetime => {
            let spec = BlockCodeSpec::new(a.a.unwrap_or(256), a.big_a, 8)?;
            SecretKey::OneTime(OneTimeKey::generate(spec, a.k, &mut rng)?)
        }
        Codec::Multiround => {
            let block = a.a.unwrap_or(512);
            if block == 0 {
                return Err(CliError::Config("a must be at least 1".into()));
            }
            let b = a.b.unwrap_or_else(|| default_nonce_bits(a.rounds, a.k.div_ceil(block)));
            SecretKey::MultiRound(MultiRoundKey::generate(a.lambda, block, b, a.noise, a.design_delta, a.k, &mut rng)?)
        }
    };
    write(&a.out, &write_key(&key))?;
    match &key {
        SecretKey::OneTime(k) => eprintln!("one-time key: k={} n={} blocks={}", k.msg_len(), k.n(), k.blocks()),
        SecretKey::MultiRound(k) => eprintln!(
            "multi-round key: k={} n={} blocks={} b={} block codeword={} bits",
            k.msg_len(),
            k.n(),
            k.blocks(),
            k.nonce_bits(),
            k.block_len()
        ),
        _ => {}
    }
    Ok(())
}

pub fn paldc_encode(a: &EncodeArgs) -> CliResult {
    let key = read_key(&read(&a.key)?)?;
    let mut rng = RandomStream::from_u64(a.seed);
    let (header, y) = match &key {
        SecretKey::OneTime(k) => {
            let x = read_message(&a.input, k.msg_len())?;
            let h = CodewordHeader { codec: CodecTag::OneTime, n: k.n(), k: k.msg_len(), blocks: k.blocks() };
            (h, ot_encode(k, &x)?)
        }
        SecretKey::MultiRound(k) => {
            let x = read_message(&a.input, k.msg_len())?;
            let h = CodewordHeader { codec: CodecTag::MultiRound, n: k.n(), k: k.msg_len(), blocks: k.blocks() };
            (h, mr_encode(k, &x, &mut rng)?)
        }
        _ => return Err(CliError::Config(format!("{} is not a paLDC key", a.key.display()))),
    };
    let y = maybe_corrupt(y, a.delta, &mut rng)?;
    write(&a.out, &write_codeword(&header, &y)?)?;
    if let SecretKey::OneTime(_) = &key {
        // persist the use-once flag so the key cannot encode again
        write(&a.key, &write_key(&key))?;
    }
    Ok(())
}

pub fn paldc_decode(a: &DecodeArgs) -> CliResult {
    let key = read_key(&read(&a.key)?)?;
    let (header, y) = read_codeword(&read(&a.codeword)?)?;
    let mut oracle = CountingOracle::new(&y);
    let bits = match (&key, header.codec) {
        (SecretKey::OneTime(k), CodecTag::OneTime) => ot_decode(k, &mut oracle, &a.interval)?,
        (SecretKey::MultiRound(k), CodecTag::MultiRound) => mr_decode(k, &mut oracle, &a.interval)?,
        _ => return Err(CliError::Config("key and codeword belong to different codecs".into())),
    };
    println!("{bits}");
    eprintln!("interval {} decoded with {} queries", a.interval, oracle.tally());
    Ok(())
}

pub fn rse_test(a: &RseTestArgs) -> CliResult {
    let root = RandomStream::from_u64(a.seed);
    let key = rse_gen(a.lambda, a.delta, a.target, &mut root.substream(KEY_STREAM))?;
    if let Some(p) = &a.key_out {
        write(p, &write_key(&SecretKey::Rse(key.clone())))?;
    }
    let code = &key.code;
    let mut failures = 0;
    for t in 0..a.trials {
        let mut rng = root.substream(t as u64);
        let msg = BitVector::random(key.k_dim(), &mut rng);
        let mut y = rse_encode(&key, &msg, &mut rng)?;
        rng.distinct_indices(key.n(), key.channel_budget).into_iter().for_each(|i| y.flip(i));
        failures += usize::from(rse_decode(&key, &y).ok().as_ref() != Some(&msg));
    }
    println!(
        "m={} n={} t={} k={} noise={} channel={}: {failures}/{} failures",
        code.m(),
        code.n(),
        code.t(),
        code.k_dim(),
        key.noise_weight,
        key.channel_budget,
        a.trials
    );
    if failures > 0 {
        return Err(CliError::Assertion(format!("{failures} decryptions failed within the error budget")));
    }
    Ok(())
}

fn rb_params(a: &RbEncodeArgs) -> CliResult<RbParams> {
    let p = RbParams {
        lambda: a.lambda,
        puzzle_t: a.puzzle_t,
        star_inner: BlockCodeSpec::new(512, 1024, 8)?,
        sample_count: a.sample_count,
        paldc: BlockCodeSpec::default_spec(),
        msg_len: a.k,
    };
    p.validate()?;
    Ok(p)
}

pub fn rbldc_encode(a: &RbEncodeArgs) -> CliResult {
    let p = rb_params(a)?;
    let x = read_message(&a.input, a.k)?;
    let mut rng = RandomStream::from_u64(a.seed);
    let cw = rb_encode(&x, &p, &mut rng)?;
    let n_star = cw.n_star();
    let cw = ComposedCodeword::from_bits(&maybe_corrupt(cw.to_bits(), a.delta, &mut rng)?, n_star)?;
    write(&a.out, &write_composed(&p, &cw)?)?;
    eprintln!("n* = {n_star}, n_P = {}, puzzle t = {}", cw.n_p(), p.puzzle_t);
    Ok(())
}

pub fn rbldc_decode(a: &RbDecodeArgs) -> CliResult {
    let (p, cw) = read_composed(&read(&a.codeword)?)?;
    if let Some(t) = a.puzzle_t {
        if t != p.puzzle_t {
            return Err(CliError::Config(format!("--puzzle-t {t} != file hardness {}", p.puzzle_t)));
        }
    }
    let word = cw.to_bits();
    let mut oracle = CountingOracle::new(&word);
    let d = rb_decode(&mut oracle, &p, &a.interval, &mut RandomStream::from_u64(a.seed))?;
    println!("{}", d.bits);
    eprintln!("interval {} decoded with {} queries and {} squarings", a.interval, oracle.tally(), d.squarings);
    Ok(())
}

/// Per aligned interval, then the unaligned pool.
fn slot_failure_rates(rounds: &[Vec<DecodeOutcome>], aligned: usize) -> Vec<f64> {
    let mut fails = vec![0usize; aligned + 1];
    let mut counts = vec![0usize; aligned + 1];
    for out in rounds {
        for (i, o) in out.iter().enumerate() {
            counts[i.min(aligned)] += 1;
            fails[i.min(aligned)] += usize::from(!o.success);
        }
    }
    fails.iter().zip(&counts).filter(|(_, &c)| c > 0).map(|(&f, &c)| f as f64 / c as f64).collect()
}

pub fn paldc_game(a: &PaldcGameArgs) -> CliResult {
    let root = RandomStream::from_u64(a.seed);
    let ch = ChannelModel::uniform(a.delta);
    let mr_key = match a.codec {
        Codec::Multiround => {
            let b = default_nonce_bits(a.rounds, a.k.div_ceil(a.a.max(1)));
            Some(MultiRoundKey::generate(128, a.a, b, 4, 0.05, a.k, &mut root.substream(KEY_STREAM))?)
        }
        Codec::Onetime => None,
    };
    let mut rounds = Vec::with_capacity(a.rounds);
    let mut max_locality: f64 = 0.0;
    let mut bound = 0.0;
    for h in 0..a.rounds {
        let mut rng = root.substream(h as u64);
        let ot_key;
        let codec = match &mr_key {
            Some(k) => GameCodec::MultiRound(k),
            None => {
                ot_key = OneTimeKey::generate(BlockCodeSpec::new(a.a, 2 * a.a, 8)?, a.k, &mut rng)?;
                GameCodec::OneTime(&ot_key)
            }
        };
        bound = codec.locality_bound();
        let x = MessageFixture::ALL[h % 4].message(a.k, &mut rng);
        let grid = interval_grid(a.k, a.a, 16, &mut rng)?;
        let out = play_round(codec, &ch, &x, &grid, &mut rng)?;
        for o in &out {
            max_locality = max_locality.max(o.queries as f64 / o.interval.len() as f64);
        }
        rounds.push(out);
    }
    let rates = slot_failure_rates(&rounds, a.k / a.a);
    let worst = rates.iter().copied().fold(0.0, f64::max);
    let report = serde_json::json!({
        "codec": format!("{:?}", a.codec).to_lowercase(),
        "rounds": a.rounds,
        "channel": ch.to_string(),
        "epsilon": a.epsilon,
        "worst_interval_failure_rate": worst,
        "failure_rates": rates,
        "max_amortized_locality": max_locality,
        "locality_bound": bound,
        "adversary_wins": worst > a.epsilon,
    });
    println!("{}", serde_json::to_string_pretty(&report).expect("json"));
    if max_locality > bound + 1e-9 {
        return Err(CliError::Assertion(format!("amortized locality {max_locality} > {bound}")));
    }
    if worst > a.epsilon {
        return Err(CliError::Assertion(format!("interval failure rate {worst} > epsilon {}", a.epsilon)));
    }
    Ok(())
}

pub fn rse_game(a: &RseGameArgs) -> CliResult {
    let root = RandomStream::from_u64(a.seed);
    let key = rse_gen(a.lambda, a.delta, a.target, &mut root.substream(KEY_STREAM))?;
    let reports = run_rse_game(&key, a.samples, &Distinguisher::ALL, a.null, &mut root.substream(0))?;
    println!("{}", serde_json::to_string_pretty(&reports).expect("json"));
    let violations: usize = reports.iter().map(|r| r.invariant_violations).sum();
    if violations > 0 {
        return Err(CliError::Assertion(format!("{violations} ciphertexts broke the encoding invariants")));
    }
    if a.null {
        if let Some(r) = reports.iter().find(|r| !r.within_three_sigma_of_zero()) {
            return Err(CliError::Assertion(format!(
                "null advantage of {} is {:.4}, beyond 3 sigma = {:.4}",
                r.distinguisher,
                r.advantage,
                3.0 * r.sigma
            )));
        }
    }
    Ok(())
}

pub fn bound_table(a: &BoundTableArgs) -> CliResult {
    println!("A\tdelta_code\tdelta\tprinted\tstandard");
    for &big_a in &a.big_a {
        let b = hypergeometric_bound(a.delta_code, a.delta, big_a)?;
        println!("{big_a}\t{}\t{}\t{:.3e}\t{:.3e}", a.delta_code, a.delta, b.printed, b.standard);
    }
    Ok(())
}
