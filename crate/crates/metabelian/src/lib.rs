//! Analysis of finite presentations of metabelian groups.
//!
//! The pipeline: parse a presentation `< A | R >`, form its integer relation
//! matrix (entry `(i, j)` is the exponent sum of generator `j` in relator
//! `i`), bring the matrix to Smith normal form by exact unimodular
//! elimination, mirror every elementary operation as a Nielsen transformation
//! on the presentation itself, and read the structural consequences off the
//! diagonal: full-rank status, the free metabelian subgroup `H` and the
//! virtually abelian subgroup `K`, the Diophantine-problem verdict keyed on
//! `(|A|, |R|)`, and the abelianization invariants.
//!
//! The [`randgen`] module implements the few-relators random model (uniform
//! words of a fixed length) together with an exact dynamic-programming oracle
//! for the probability that a random presentation has full rank.
//!
//! This crate is `no_std` (with `alloc`); file formats, the CLI, and the
//! Monte Carlo experiment harness live in the companion `metabelian-tools`
//! crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod classify;
pub mod intlinalg;
pub mod presentation;
pub mod randgen;
#[cfg(test)]
mod testutil;
pub mod tietze;
pub mod words;

pub use classify::{classify, StructureReport};
pub use intlinalg::{smith_normal_form, IntMatrix, SmithDecomposition};
pub use presentation::Presentation;
pub use tietze::{normalize_to_snf, NormalizedPresentation};
pub use words::GroupWord;
