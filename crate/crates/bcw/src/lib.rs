//! Coefficient words of binary cyclotomic polynomials `Phi_pq` and
//! two-generator numerical-semigroup polynomials `F_{p,q}`, computed by a
//! two-phase word algorithm (precompute per residue class, then
//! concatenate) that runs in time linear in the output, plus three
//! independent brute-force oracles for cross-checking, gap/sign analysis
//! and text serializations.

pub mod analysis;
pub mod cli;
pub mod engine;
mod error;
pub mod formats;
pub mod oracles;
pub mod primes;
pub mod word;

pub use error::{Error, Result};

/// Oracle polynomial over machine integers; the default for desk-scale
/// cross-checks (intermediate values stay tiny for the divisions we do).
pub type IntPoly64 = oracles::IntPoly<i64>;

/// Oracle polynomial over arbitrary-precision integers, for divisions
/// whose intermediates may grow.
pub type IntPolyBig = oracles::IntPoly<num_bigint::BigInt>;
