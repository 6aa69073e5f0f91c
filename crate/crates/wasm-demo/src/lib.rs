//! Browser bindings. Every export returns a flat `Float64Array`; the page reshapes it.

use wasm_bindgen::prelude::*;

use aldc::block_code::BlockCodeSpec;
use aldc::crypto::RandomStream;
use aldc::harness::{hadamard_trial, hypergeometric_bound, ChannelKind, ChannelModel};
use aldc::paldc::{ot_decode, ot_encode, Interval, OneTimeKey};
use aldc::{BitVector, CountingOracle};

fn js_err(e: aldc::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn sweep(lo: f64, hi: f64, points: usize) -> impl Iterator<Item = f64> {
    let steps = points.max(2) - 1;
    (0..=steps).map(move |i| lo + (hi - lo) * i as f64 / steps as f64)
}

/// Measured Hadamard failure rate against `(kappa+1) delta`.
/// Rows of `[delta, uniform, burst, bound]` for `points` values of delta in `[0, max_delta]`.
#[wasm_bindgen]
pub fn hadamard_failure_curve(
    k: usize,
    kappa: usize,
    max_delta: f64,
    points: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>, JsError> {
    if trials == 0 {
        return Err(JsError::new("trials must be at least 1"));
    }
    let mut out = Vec::with_capacity(4 * points);
    for (i, delta) in sweep(0.0, max_delta, points).enumerate() {
        out.push(delta);
        for kind in [ChannelKind::UniformRandom, ChannelKind::ContiguousBurst] {
            let ch = ChannelModel::new(kind, delta).map_err(js_err)?;
            let mut rng = RandomStream::from_u64(seed).substream(i as u64);
            let mut fails = 0;
            for _ in 0..trials {
                fails += usize::from(!hadamard_trial(k, kappa, &ch, &mut rng).map_err(js_err)?.2);
            }
            out.push(fails as f64 / trials as f64);
        }
        out.push(((kappa + 1) as f64 * delta).min(1.0));
    }
    Ok(out)
}

/// Rows of `[delta, printed, standard]`; NaN where `delta >= delta_code`.
#[wasm_bindgen]
pub fn overflow_bound_curve(block_len: usize, delta_code: f64, max_delta: f64, points: usize) -> Vec<f64> {
    sweep(0.0, max_delta, points)
        .flat_map(|delta| match hypergeometric_bound(delta_code, delta, block_len) {
            Ok(b) => [delta, b.printed, b.standard],
            Err(_) => [delta, f64::NAN, f64::NAN],
        })
        .collect()
}

/// Encode a random message with a fresh one-time key, corrupt it, decode `[l, r]`.
/// Returns `[queries, interval length, queries/length, bound 2A/a, success, blocks touched]`.
#[wasm_bindgen]
pub fn paldc_locality(k: usize, a: usize, big_a: usize, l: usize, r: usize, delta: f64, seed: u64) -> Result<Vec<f64>, JsError> {
    let spec = BlockCodeSpec::new(a, big_a, 8).map_err(js_err)?;
    let iv = Interval::new(l, r).map_err(js_err)?;
    let mut rng = RandomStream::from_u64(seed);
    let key = OneTimeKey::generate(spec, k, &mut rng).map_err(js_err)?;
    let x = BitVector::random(k, &mut rng);
    let y = ChannelModel::uniform(delta)
        .corrupt(&ot_encode(&key, &x).map_err(js_err)?, &mut rng)
        .map_err(js_err)?;
    let mut oracle = CountingOracle::new(&y);
    let ok = match ot_decode(&key, &mut oracle, &iv) {
        Ok(bits) => bits == x.slice(l - 1..r),
        Err(e) if e.is_decode_failure() => false,
        Err(e) => return Err(js_err(e)),
    };
    let q = oracle.tally() as f64;
    let len = iv.len() as f64;
    Ok(vec![q, len, q / len, key.locality_bound(), f64::from(u8::from(ok)), iv.block_span(a) as f64])
}
