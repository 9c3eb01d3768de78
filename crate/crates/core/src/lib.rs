//! Screening of Eisenstein polynomials for Heilbronn's criterion.
//!
//! A monic integer polynomial that is Eisenstein at a prime `p` generates a
//! number field in which `p` is totally ramified. If two small primes
//! `q1 < q2` are not norms (certified here by `f` having no root modulo
//! `q1` and `q2`) and `p = u*q1 + v*q2` with the usual coprimality side
//! conditions and `u*q1` an `n`-th power residue modulo `p`, the field is not
//! norm-Euclidean.
//!
//! The crate is split along the lines of that argument:
//!
//! * [`poly`] holds the polynomial type, the Eisenstein predicate and root
//!   detection over `F_q`;
//! * [`density`] evaluates the local densities and effective bounds exactly;
//! * [`decomposition`] finds `p = u*q1 + v*q2`;
//! * [`criterion`] is the verdict engine, including the character-constrained
//!   search used when `gcd(p - 1, n) > 1`;
//! * [`survey`] counts lattice points with local conditions and estimates the
//!   proportion of polynomials the criterion applies to;
//! * [`cli`] and [`report`] bind all of the above to a batch interface.

pub mod arith;
pub mod cli;
pub mod config;
pub mod criterion;
pub mod decomposition;
pub mod density;
pub mod error;
pub mod oracle;
pub mod poly;
pub mod rational;
pub mod report;
pub mod survey;
pub mod verify;

pub use criterion::{criterion_verdict, CriterionEngine, HeilbronnVerdict, HeilbronnWitness, InconclusiveReason};
pub use decomposition::{adjust_for_criterion, frobenius_decompose, guarantee_threshold, Decomposition};
pub use error::{Error, Result};
pub use poly::{MonicIntPolynomial, ResiduePolynomial};
pub use rational::{ExactRational, RationalInterval};

/// Version string embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
