//! Seeded randomness, the PRF, random permutations and the time-lock puzzle.

mod perm;
mod prf;
mod puzzle;
mod rng;

pub use perm::{sample_permutation, Permutation};
pub use prf::{prf_eval, PrfKey};
pub use puzzle::{
    is_probable_prime, puzzle_gen, puzzle_solve, serialized_len_bits, serialized_len_bytes, Puzzle,
    MIN_LAMBDA,
};
pub use rng::RandomStream;
