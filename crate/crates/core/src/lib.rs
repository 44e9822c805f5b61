//! Group secret-key agreement in pair-wise independent networks.
//!
//! Every pair of terminals `{i, j}` shares an ideal secret key of
//! `budget(i, j)` bits. On top of those keys this crate runs three
//! one-time-pad protocols over a simulated public channel:
//!
//! * [`protocols::run_broadcast`]: a star network agrees on the shortest leaf key.
//! * [`protocols::run_subgroup`]: two terminals relay random bits along a maximum flow.
//! * [`protocols::run_group_key`]: all terminals peel off one bit per maximum spanning tree.
//!
//! [`bounds`] computes the matching capacity upper bounds (minimum leaf budget,
//! minimum s-t cut, minimum normalized multi-cut) and [`secrecy`] checks that
//! the produced keys are uniform and independent of the transcript, exactly,
//! by rank computations over GF(2).
//!
//! Terminals are 0-indexed. The crate is `no_std` and needs only `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
mod error;
pub mod gf2;
pub mod graph;
pub mod model;
pub mod protocols;
pub mod secrecy;

pub use error::{Error, Result};
pub use model::{NetworkSpec, Pair, PairwiseKeyStore, TerminalId};

/// Exact non-negative rational used for bounds and multi-cut values.
pub type Rational = num_rational::Ratio<u64>;
