//! Combinatorics and probability on trace monoids.
//!
//! A trace monoid is given by an [`IndependencePair`]: an alphabet together
//! with a symmetric, irreflexive relation telling which letters commute.
//! Traces are stored in Cartier-Foata normal form ([`Trace`]), a sequence of
//! non-empty [`Clique`]s where every letter of a layer depends on some letter
//! of the layer below.
//!
//! On top of this the crate provides
//!
//! * clique enumeration and Möbius polynomials ([`CliqueSet`], [`mobius`]),
//! * trace counting by length with arbitrary-precision integers,
//! * Möbius valuations and the Bernoulli measures they define ([`measures`]),
//! * the Markov chain of Cartier-Foata cliques realizing such a measure,
//!   its stationary law, a seeded sampler, and the speedup of concurrent
//!   execution ([`markov`]).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, JSON output and
//! the command-line tool live in the `tracemon-cli` crate.
#![no_std]
#![deny(missing_debug_implementations)]
// NaN must fail every range check, which the negated form guarantees
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod alphabet;
mod clique;
mod error;
pub mod markov;
pub mod measures;
pub mod mobius;
pub mod rng;
mod trace;

pub use alphabet::{IndependencePair, Letter};
pub use clique::{Clique, CliqueSet, DEFAULT_CLIQUE_CAP};
pub use error::{Error, Result};
pub use trace::{Trace, TraceDisplay, DEFAULT_TRACE_LENGTH_CAP};
