use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use crate::error::{Error, Result};

/// 1-based inclusive message interval `[L, R]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    l: usize,
    r: usize,
}

impl Interval {
    pub fn new(l: usize, r: usize) -> Result<Interval> {
        if l == 0 || l > r {
            return Err(Error::usage(format!("interval [{l}, {r}] needs 1 <= L <= R")));
        }
        Ok(Interval { l, r })
    }

    /// Interval of `len` bits starting at 1-based `l`.
    pub fn starting_at(l: usize, len: usize) -> Result<Interval> {
        if len == 0 {
            return Err(Error::usage("interval length must be positive"));
        }
        Interval::new(l, l + len - 1)
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.r - self.l + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Checks `R <= k` and `R - L + 1 >= kappa`.
    pub fn check(&self, k: usize, kappa: usize) -> Result<()> {
        if self.r > k {
            return Err(Error::usage(format!("interval end R = {} exceeds message length {k}", self.r)));
        }
        if self.len() < kappa {
            return Err(Error::usage(format!(
                "interval length {} is below the minimum batch size kappa = {kappa}",
                self.len()
            )));
        }
        Ok(())
    }

    /// 0-based indices of the `a`-bit blocks the interval touches.
    pub fn blocks(&self, a: usize) -> RangeInclusive<usize> {
        (self.l - 1) / a..=(self.r - 1) / a
    }

    pub fn block_span(&self, a: usize) -> usize {
        let b = self.blocks(a);
        b.end() - b.start() + 1
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.l, self.r)
    }
}

impl FromStr for Interval {
    type Err = Error;

    /// Parses `L:R`.
    fn from_str(s: &str) -> Result<Interval> {
        let (l, r) = s
            .split_once(':')
            .ok_or_else(|| Error::usage(format!("interval {s:?} is not of the form L:R")))?;
        let parse = |v: &str| {
            v.trim().parse::<usize>().map_err(|_| Error::usage(format!("interval bound {v:?} is not an integer")))
        };
        Interval::new(parse(l)?, parse(r)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_and_parse() {
        let iv: Interval = "5:12".parse().unwrap();
        assert_eq!(iv.len(), 8);
        assert_eq!(iv.blocks(4), 1..=2);
        assert_eq!(Interval::new(1, 4).unwrap().blocks(4), 0..=0);
        assert_eq!(Interval::new(4, 5).unwrap().block_span(4), 2);
        assert!("0:3".parse::<Interval>().is_err());
        assert!("4:3".parse::<Interval>().is_err());
        assert!("x".parse::<Interval>().is_err());
        assert!(iv.check(11, 1).is_err());
        assert!(iv.check(12, 9).is_err());
        assert!(iv.check(12, 8).is_ok());
    }
}
