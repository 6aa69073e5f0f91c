//! Private amortized locally decodable codes.
//!
//! Both codecs split the message into `B` blocks of `a` bits, encode each
//! block into `A` bits, concatenate, and scatter the `n = B A` bits with a
//! secret permutation. Decoding an interval `[L, R]` reads exactly the `A`
//! permuted positions of each block the interval touches.
//!
//! * [`onetime`]: inner [`BlockCode`](crate::block_code::BlockCode) plus a
//!   one-time pad; the key may encode a single message.
//! * [`multiround`]: each block is `(w_i xor f_k(i, r_i)) || r_i` under robust
//!   secret encryption, with a fresh nonce `r_i` per block and per message.

mod interval;
pub mod multiround;
pub mod onetime;

pub use interval::Interval;
pub use multiround::{default_nonce_bits, mr_decode, mr_encode, MultiRoundKey};
pub use onetime::{ot_decode, ot_encode, OneTimeKey};

use crate::bits::BitVector;
use crate::crypto::Permutation;
use crate::error::{Error, Result};
use crate::oracle::Oracle;

/// Reads block `block` (length `big_a`) of the unpermuted word through `perm`.
pub(crate) fn read_block<O: Oracle + ?Sized>(
    oracle: &mut O,
    perm: &Permutation,
    block: usize,
    big_a: usize,
) -> BitVector {
    (0..big_a).map(|i| oracle.query(perm.map(block * big_a + i))).collect()
}

pub(crate) fn check_oracle_len<O: Oracle + ?Sized>(oracle: &O, n: usize) -> Result<()> {
    if oracle.len() != n {
        return Err(Error::usage(format!("received word has {} bits, codeword length is {n}", oracle.len())));
    }
    Ok(())
}

/// Checks `queries <= alpha (R - L + 1)` for `alpha = 2 A / a`, in integers.
pub fn within_locality(queries: usize, iv: &Interval, a: usize, big_a: usize) -> bool {
    queries * a <= 2 * big_a * iv.len()
}
