//! Low-bandwidth evaluation of linear functions on Reed-Solomon encoded data.
//!
//! A message `x ∈ F^k` is stored as a Reed-Solomon codeword, one symbol per
//! node. To learn `pᵀx` the evaluator asks each surviving node for a handful
//! of base-field trace values instead of whole symbols, then reassembles the
//! answer. Over `F = GF(q^t)` this costs `O(n log q)` bits against the
//! `k log Q` bits of downloading `k` symbols and decoding.
//!
//! Layout:
//!
//! - [`field`], [`poly`], [`linalg`]: `GF(q)`, `GF(q^t)`, the trace, univariate
//!   polynomials and Gaussian elimination.
//! - [`rs`]: Reed-Solomon encoding, the dual code and naive recovery.
//! - [`scheme`]: linear evaluation schemes for an arbitrary linear code
//!   (verification, witnesses, the generic trace-based decoder).
//! - [`rs_scheme`]: the Reed-Solomon construction (good triples, consistent
//!   polynomials, multi-round schemes with erasures, interpolation decoder).
//! - [`bounds`]: bandwidth lower bounds.
//! - [`sim`]: an in-process storage cluster with exact download accounting.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bounds;
mod error;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod rs;
pub mod rs_scheme;
pub mod scheme;
pub mod sim;

pub use error::{Error, Result};
pub use field::{BaseField, Elem, Field};
pub use poly::Poly;
pub use rs::RsCode;

/// Exact rational used for the scheme parameters `ε`, `γ`, `δ`.
pub type Rational = num_rational::Ratio<i64>;

/// `⌈log₂ m⌉` for `m ≥ 1`: the number of bits needed for one symbol of an
/// alphabet of size `m`.
pub fn bits_per_symbol(m: u64) -> u64 {
    if m <= 1 {
        0
    } else {
        u64::from(64 - (m - 1).leading_zeros())
    }
}
