//! Bounds and binomial confidence arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tail bounds on the per-block error count when `delta_channel` of all
/// positions are corrupted uniformly and a block tolerates `delta_code A` bit errors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypergeometricBound {
    pub delta_code: f64,
    pub delta_channel: f64,
    pub block_len: usize,
    /// `2^(-2 (((delta_code - delta) A)^2 - 1) / (A + 1))`.
    pub printed: f64,
    /// `exp(-2 (delta_code - delta)^2 A)`.
    pub standard: f64,
}

pub fn hypergeometric_bound(delta_code: f64, delta_channel: f64, block_len: usize) -> Result<HypergeometricBound> {
    if delta_code <= delta_channel {
        return Err(Error::Domain(format!(
            "need delta_code ({delta_code}) > delta_channel ({delta_channel})"
        )));
    }
    if block_len < 2 {
        return Err(Error::Domain(format!("block length A = {block_len} < 2")));
    }
    let a = block_len as f64;
    let gap = delta_code - delta_channel;
    let printed = 2f64.powf(-2.0 * ((gap * a).powi(2) - 1.0) / (a + 1.0));
    let standard = (-2.0 * gap * gap * a).exp();
    Ok(HypergeometricBound { delta_code, delta_channel, block_len, printed, standard })
}

/// `delta_code` putting the printed bound at `target` for the given `delta` and `A`.
pub fn delta_code_for_printed(target: f64, delta_channel: f64, block_len: usize) -> Result<f64> {
    if !(0.0 < target && target < 1.0) {
        return Err(Error::Domain(format!("target {target} outside (0, 1)")));
    }
    let a = block_len as f64;
    let gap_a = (1.0 + (a + 1.0) * (-target.log2()) / 2.0).sqrt();
    Ok(delta_channel + gap_a / a)
}

/// Standard deviation of a Bernoulli(`p`) frequency over `trials`.
pub fn binomial_sigma(p: f64, trials: usize) -> f64 {
    (p.clamp(0.0, 1.0) * (1.0 - p.clamp(0.0, 1.0)) / trials.max(1) as f64).sqrt()
}

/// `observed <= p + 3 sigma(p)`.
pub fn within_three_sigma(observed: f64, p: f64, trials: usize) -> bool {
    observed <= p + 3.0 * binomial_sigma(p, trials)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_formula_instance() {
        let b = hypergeometric_bound(0.1, 0.05, 2000).unwrap();
        // exponent -2 * 9999 / 2001
        assert!((b.printed.log2() + 2.0 * 9999.0 / 2001.0).abs() < 1e-9);
        assert!((b.printed - 9.8e-4).abs() < 0.1e-4);
        assert!((b.standard - (-10.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn vacuous_at_unit_gap_and_monotone() {
        let b = hypergeometric_bound(0.01 + 1.0 / 100.0, 0.01, 100).unwrap();
        assert!((b.printed - 1.0).abs() < 1e-9);
        let mut last = 1.0;
        for a in [200, 400, 800, 1600] {
            let p = hypergeometric_bound(0.1, 0.05, a).unwrap().printed;
            assert!(p < last);
            last = p;
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(hypergeometric_bound(0.05, 0.05, 100), Err(Error::Domain(_))));
        assert!(matches!(hypergeometric_bound(0.1, 0.05, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn inverse_solver() {
        let dc = delta_code_for_printed(5e-3, 0.05, 512).unwrap();
        let b = hypergeometric_bound(dc, 0.05, 512).unwrap();
        assert!((b.printed - 5e-3).abs() < 1e-12);
    }
}
