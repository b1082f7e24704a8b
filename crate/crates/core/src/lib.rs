//! Exact arithmetic engine for Wolstenholme-type congruences.
//!
//! The crate is organized around exact residue arithmetic over arbitrary
//! moduli (`residues`), binomial and harmonic machinery (`combinatorics`),
//! Bernoulli numbers three ways (`bernoulli`), polynomial arithmetic in the
//! cyclotomic quotient rings `Q[q]/Phi_p(q)^r` (`qring`), a data-driven
//! registry of executable congruence checks (`catalog`), and a segmented,
//! parallel scanner for Wolstenholme primes and converse-of-Wolstenholme
//! composites (`hunter`).

pub mod bernoulli;
pub mod catalog;
pub mod combinatorics;
pub mod error;
pub mod hunter;
pub mod primes;
pub mod qring;
pub mod residues;

pub use error::{Error, Result};
pub use residues::{Modulus, PadicValue, ResidueClass};

/// Exact arbitrary-precision rational, the oracle-side number type.
pub type Rational = num_rational::BigRational;
