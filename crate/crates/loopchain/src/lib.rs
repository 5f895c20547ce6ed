//! Divisor combinatorics on chains of loops.
//!
//! A chain of loops is a metric graph made of `g` circles strung together,
//! optionally through bridges, with a marked point at the rightmost vertex.
//! This crate provides:
//!
//! * exact-rational models of the chain, its torsion profile, partitions and
//!   Schubert indices ([`chain`], [`partition`]),
//! * displacement tableaux and their enumeration ([`tableaux`]),
//! * Brill-Noether loci assembled as unions of congruence-constrained
//!   coordinate tori, with two independent membership tests ([`locus`]),
//! * a chip-firing rank oracle on unit subdivisions ([`oracle`]),
//! * the rectangle-ladder checks behind the lifting argument ([`lifting`]),
//! * a small structured-text chain spec format ([`specfile`]).
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod chain;
pub mod coords;
pub mod error;
pub mod lifting;
pub mod locus;
pub mod oracle;
pub mod partition;
pub mod specfile;
pub mod tableaux;

pub use chain::{ChainOfLoops, LoopSpec};
pub use coords::{ClassCoords, MetricDivisor, PointOnChain};
pub use error::Error;
pub use lifting::Ladder;
pub use locus::{BNLocus, Torus};
pub use oracle::{FiniteGraph, FiniteGraphDivisor};
pub use partition::{Partition, SchubertIndex};
pub use tableaux::DisplacementTableau;

/// Exact rational scalar used throughout: arbitrary-precision, lowest terms,
/// positive denominator.
pub type Rat = num_rational::BigRational;

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}
