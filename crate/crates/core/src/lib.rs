//! Exact computations around the growth of congruence subgroups of `SL2(Z)`.
//!
//! The crate is split by subject:
//!
//! - [`numtheory`]: sieving, primes in progressions, Chebyshev sums, factorization.
//! - [`bombieri`]: certificates for primes whose progression `1 mod q` has a small
//!   error term, and scans for them.
//! - [`abelian`]: layer types, Gaussian binomials, Butler's subgroup count and a
//!   brute-force lattice oracle for finite abelian groups.
//! - [`extremal`]: the constant `γ(R)`, the sequence-pair optimizer, gcd-product
//!   searches and related exponent formulas.
//! - [`congruence`]: `SL2(Z/mZ)`, its subgroup lattice, the census `γ_n`,
//!   maximal-subgroup classification and the Borel lower-bound construction.
//!
//! Everything is deterministic. Counts are arbitrary precision; logarithms of
//! counts are taken at the end.

pub mod abelian;
pub mod bombieri;
pub mod congruence;
pub mod error;
pub mod extremal;
pub mod numtheory;

pub use error::{Error, Result};
