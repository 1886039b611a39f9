//! Exact VC-dimension engine for k-covering families of s-subsets of `[n]`.
//!
//! The crate builds the standard constructions (full families, initial segments,
//! hypercubes, cones, products, the recursive families `F_k`), decides shattering,
//! the k-covering property and the unique-face property exactly, computes
//! `D(k, s, n)` (the least VC-dimension of a k-covering s-uniform family on `[n]`)
//! by exhaustive search for small parameters, and certifies bounds on it with
//! exact integer arithmetic.

pub mod binom;
pub mod cli;
pub mod constructions;
pub mod corpus;
pub mod covering;
pub mod error;
pub mod explore;
pub mod family;
pub mod io;
pub mod mask;
pub mod oracle;
mod parallel;
pub mod vc;
pub mod verify;

pub use error::{Error, Result};
pub use family::{make_family, Parameters, SetFamily};
pub use mask::{enumerate_subsets, SubsetMask, MAX_GROUND};
