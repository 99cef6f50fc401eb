//! Exact q-analogs of descent and peak polynomials.
//!
//! `D_S(n,q)` and `P_S(n,q)` sum `q^inv(w)` over permutations `w` of size
//! `n` with descent set (respectively peak set) equal to `S`. This crate
//! computes them by several independent closed forms, checks those against
//! exhaustive enumeration, and tests the structural properties they carry:
//! palindromicity of the peak polynomials and strong q-log-concavity of the
//! descent coefficients.

pub mod descent;
pub mod error;
pub mod peak;
pub mod permtools;
pub mod polynomial;
pub mod properties;
pub mod qcore;

pub use error::{Error, Result};
pub use permtools::{EnumerationCap, Permutation, PositionSet};
pub use polynomial::IntPolynomial;
