//! Arithmetic over GF(2^m), polynomials over it, and GF(2) linear algebra.

mod field;
mod matrix;
mod poly;

pub use field::{Field, FieldElement, MAX_M, MIN_M};
pub use matrix::BinMatrix;
pub use poly::{eea, poly_sqrt_mod, Degree, Poly, SqrtMod};
