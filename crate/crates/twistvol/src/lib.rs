//! Numerical laboratory for the volume conjecture on twist knots.
//!
//! The crate evaluates the colored Jones polynomial of the twist knot K_p
//! at the root of unity q = exp(2 pi i / N) through its nested
//! (2p-1)-fold sum, extracts the growth rate
//! v_N = (2 pi / N) log |J_N|, and compares the large-N behaviour with the
//! critical values of a dilogarithm potential function whose stationary
//! points encode hyperbolic volume. Everything is computed from scratch:
//! q-Pochhammer tables, dilogarithms and Clausen functions, the
//! high-precision summation kernel, the Newton solver for the critical
//! point, and the consistency checks tying the two sides together.
//!
//! Organization:
//! - [`qseries`]: roots of unity, q-Pochhammer symbols, q-binomials.
//! - [`dilog`]: complex dilogarithm, Clausen function, branch tracking.
//! - [`jones`]: the nested-sum evaluation of J_N and growth diagnostics.
//! - [`potential`]: the potential function, its gradient, critical points.
//! - [`conjecture`]: experiment orchestration and named consistency checks.
//! - [`report`]: deterministic JSON / CSV serialization of results.
//! - [`cli`]: the `twistvol` command-line front end.
//! - [`qd`]: quad-double arithmetic backing the summation at large N.

// frozen oracle values keep their full reference digits even past f64
// resolution, the hot recursions index several tables by one loop
// variable, and the multi-limb types use named mul/div methods on
// purpose (they are not ring operations on a std numeric type)
#![allow(clippy::excessive_precision)]
#![allow(clippy::needless_range_loop)]
#![allow(clippy::should_implement_trait)]

pub mod cli;
pub mod conjecture;
pub mod dilog;
pub mod error;
pub mod jones;
pub mod potential;
pub mod qd;
pub mod qseries;
pub mod report;

pub use error::{Error, Result};
