//! Adversarial channels with a hard Hamming budget `floor(delta n)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::BitVector;
use crate::crypto::RandomStream;
use crate::error::{Error, Result};
use crate::params::budget_floor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelKind {
    /// Exactly `floor(delta n)` flips at uniform distinct positions.
    UniformRandom,
    /// One run of consecutive flips at a uniform offset.
    ContiguousBurst,
    /// Flips packed into one uniformly chosen `block_len`-aligned block,
    /// spilling into the following blocks once a block is saturated.
    BlockTargeting { block_len: usize },
    /// Everything lands in `[0, boundary)`. The region is cut into `chunk`-bit
    /// pieces; whole pieces are attacked one at a time with `per_chunk` evenly
    /// spaced flips each (enough to push a block code past its radius).
    LeftDump { boundary: usize, chunk: usize, per_chunk: usize },
    /// Uniform flips inside `[boundary, n)`.
    RightDump { boundary: usize },
}

impl ChannelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ChannelKind::UniformRandom => "uniform_random",
            ChannelKind::ContiguousBurst => "contiguous_burst",
            ChannelKind::BlockTargeting { .. } => "block_targeting",
            ChannelKind::LeftDump { .. } => "left_dump",
            ChannelKind::RightDump { .. } => "right_dump",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelModel {
    pub kind: ChannelKind,
    pub delta: f64,
}

impl fmt::Display for ChannelModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.kind.name(), self.delta)
    }
}

impl ChannelModel {
    pub fn new(kind: ChannelKind, delta: f64) -> Result<ChannelModel> {
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::config(format!("channel delta = {delta} outside [0, 1]")));
        }
        Ok(ChannelModel { kind, delta })
    }

    pub fn uniform(delta: f64) -> ChannelModel {
        ChannelModel { kind: ChannelKind::UniformRandom, delta }
    }

    pub fn budget(&self, n: usize) -> usize {
        budget_floor(self.delta, n)
    }

    /// Corrupted copy of `y`. Panics if a model ever exceeds its budget.
    pub fn corrupt(&self, y: &BitVector, rng: &mut RandomStream) -> Result<BitVector> {
        let n = y.len();
        let budget = self.budget(n);
        let positions = self.error_positions(n, budget, rng)?;
        let mut out = y.clone();
        for p in positions {
            out.flip(p);
        }
        let d = out.distance(y);
        assert!(d <= budget, "channel {self} flipped {d} bits, budget {budget}");
        Ok(out)
    }

    fn error_positions(&self, n: usize, budget: usize, rng: &mut RandomStream) -> Result<Vec<usize>> {
        if budget == 0 {
            return Ok(Vec::new());
        }
        Ok(match self.kind {
            ChannelKind::UniformRandom => rng.distinct_indices(n, budget),
            ChannelKind::ContiguousBurst => {
                let start = rng.below(n - budget + 1);
                (start..start + budget).collect()
            }
            ChannelKind::BlockTargeting { block_len } => {
                if block_len == 0 || block_len > n {
                    return Err(Error::config(format!("block_len = {block_len} outside [1, n = {n}]")));
                }
                let blocks = n / block_len;
                let first = rng.below(blocks);
                let mut out = Vec::with_capacity(budget);
                let mut blk = first;
                while out.len() < budget {
                    let take = (budget - out.len()).min(block_len);
                    let base = blk * block_len;
                    out.extend(rng.distinct_indices(block_len, take).into_iter().map(|i| base + i));
                    blk = (blk + 1) % blocks;
                    if blk == first {
                        break;
                    }
                }
                out
            }
            ChannelKind::LeftDump { boundary, chunk, per_chunk } => {
                if boundary == 0 || boundary > n || chunk == 0 || per_chunk == 0 || per_chunk > chunk {
                    return Err(Error::config(format!(
                        "left_dump needs 0 < boundary ({boundary}) <= n ({n}) and 0 < per_chunk ({per_chunk}) <= chunk ({chunk})"
                    )));
                }
                let chunks = boundary / chunk;
                let budget = budget.min(boundary);
                let mut out = Vec::with_capacity(budget);
                let stride = chunk / per_chunk;
                for c in rng.distinct_indices(chunks, chunks) {
                    if out.len() >= budget {
                        break;
                    }
                    let take = per_chunk.min(budget - out.len());
                    let offset = rng.below(stride);
                    out.extend((0..take).map(|i| c * chunk + offset + i * stride));
                }
                // leftover budget when every chunk is hit: spread uniformly
                if out.len() < budget {
                    let mut hit = BitVector::zeros(boundary);
                    for &p in &out {
                        hit.set(p, true);
                    }
                    let free: Vec<usize> = (0..boundary).filter(|&i| !hit.get(i)).collect();
                    let more = budget - out.len();
                    out.extend(rng.distinct_indices(free.len(), more).into_iter().map(|i| free[i]));
                }
                out
            }
            ChannelKind::RightDump { boundary } => {
                if boundary >= n {
                    return Err(Error::config(format!("right_dump boundary {boundary} must be < n = {n}")));
                }
                let width = n - boundary;
                rng.distinct_indices(width, budget.min(width)).into_iter().map(|i| boundary + i).collect()
            }
        })
    }
}

/// Applies `channel` to `y`.
pub fn corrupt(channel: &ChannelModel, y: &BitVector, rng: &mut RandomStream) -> Result<BitVector> {
    channel.corrupt(y, rng)
}
