//! Exact finite-n distribution theory for triangular arrays of zero-modified
//! geometric random variables and for branching processes with varying
//! fractional-linear (geometric) offspring laws.
//!
//! The crate provides, in closed form and in numerically stable log-space:
//!
//! * the zero-modified geometric law itself ([`zmg`]),
//! * exact laws of the row maximum, minimum, joint extrema, and range of a
//!   row of iid variables ([`extremes`]),
//! * the limit laws those extremes converge to (Gumbel, truncated Gumbel,
//!   exponential, logistic, discrete and defective variants), normalizing
//!   constants, oscillation bands, regime classification, and convergence
//!   diagnostics ([`asymptotics`]),
//! * parameter-sequence generators realizing the limit hypotheses, including
//!   the sampled linear birth-death chain ([`scenarios`]),
//! * the varying-environment branching engine with closed-form generation
//!   aggregates, survival probabilities, conditioned laws, and path
//!   simulation ([`branching`]),
//! * the conditional law of the maximum family size within a generation and
//!   its limit diagnostics ([`maxfamily`]),
//! * a seeded, counter-based Monte Carlo harness with empirical cdfs and
//!   Kolmogorov-Smirnov comparison ([`montecarlo`]).
//!
//! Everything is `no_std`-compatible (with `alloc`); the default `std`
//! feature only switches float math to the platform intrinsics.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod asymptotics;
pub mod branching;
pub mod extremes;
pub mod maxfamily;
pub mod montecarlo;
pub mod numeric;
pub mod rng;
pub mod scenarios;
pub mod zmg;

pub use extremes::RowParams;
pub use rng::{RngSpec, StreamRng};
pub use zmg::ZmgParams;
