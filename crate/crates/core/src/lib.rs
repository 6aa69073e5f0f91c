//! Amortized locally decodable codes.
//!
//! * [`hadamard`]: the Hadamard code with an amortized decoder making
//!   `|Q| + 1` queries for `|Q|` bits.
//! * [`paldc`]: private amortized codes over a shared key, one-time
//!   (permute and mask) and multi-round (robust secret encryption plus PRF).
//! * [`rse`]: robust secret encryption from secret binary Goppa codes with
//!   Patterson decoding.
//! * [`resource_bounded`]: keyless composition that hides the key in a
//!   time-lock puzzle protected by a repetition code.
//! * [`harness`]: channel models, security-game runners and the statistics
//!   behind the locality and failure measurements.

pub mod bits;
pub mod block_code;
pub mod crypto;
pub mod error;
pub mod formats;
pub mod gf2m;
pub mod hadamard;
pub mod harness;
pub mod oracle;
pub mod paldc;
pub mod resource_bounded;
pub mod params;
pub mod rse;

pub use bits::BitVector;
pub use error::{Error, Result};
pub use oracle::{CountingOracle, Oracle};
