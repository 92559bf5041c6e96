//! Exact differential algebra on polynomial rings over the rationals.
//!
//! The crate builds derivations of `Q[x1, ..., xn]`, in particular the family
//! `d_n = (1 - x1*x2^α) ∂_1 + x1^m ∂_2 + x2 ∂_3 + ... + x_{n-1} ∂_n`, and
//! provides degree-bounded, exact checks of three of its properties: no unit
//! (nor any nonzero `a*x_n + b`) lies in the image, no principal ideal is
//! stable, and the only commuting automorphisms found are translations of the
//! last variable. Everything here is `no_std` with `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod darboux;
pub mod derivation;
pub mod error;
pub mod image;
pub mod isotropy;
pub mod lemma;
pub mod linalg;
pub mod poly;

pub use derivation::{jordan_derivation, two_variable_derivation, Derivation, FamilyParams};
pub use error::{Error, Result};
pub use poly::{parse, Degree, Monomial, Polynomial, Rational};
