//! Exact computational Lie theory over countable-dimensional paired spaces.
//!
//! The crate is organised bottom-up:
//!
//! - [`exactnum`]: rationals, dense matrices, polynomials, Jordan–Chevalley.
//! - [`epcore`]: eventually periodic sets and sequences over the naturals.
//! - [`pairedspace`]: computable models of paired spaces and their subspaces.
//! - [`genflag`]: generalized flags and taut couples.
//! - [`finitary`]: finite-rank operators and membership tests.
//! - [`finoracle`]: finite-dimensional structure theory used as an oracle.

pub mod error;
pub mod epcore;
pub mod exactnum;
pub mod finitary;
pub mod finoracle;
pub mod genflag;
pub mod pairedspace;

pub use error::{Error, Result};
pub use exactnum::{Matrix, Poly, Rational};
