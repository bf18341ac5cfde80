//! Constructive universal series.
//!
//! A coefficient sequence `a = (a_0, a_1, ...)` is grown block by block so
//! that the generalized partial sums
//! `T_N(a)(z) = sum_{n<=N} b_n(a_0, ..., a_n) z^n` approximate a schedule of
//! polynomial targets on compact sets `K` in the punctured plane whose
//! complement is connected. Every achieved approximation is recorded in a
//! ledger that can be re-verified independently.

// `!(x < tol)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod approx;
pub mod artifacts;
pub mod cli;
pub mod config;
pub mod enumerate;
pub mod error;
pub mod exec;
pub mod pairing;
pub mod poly;
pub mod schedule;
pub mod sets;
pub mod transform;

pub use error::{Error, Result};
pub use exec::Exec;
pub use num_complex::Complex64;
pub use poly::ComplexPolynomial;
pub use schedule::{ForgeOptions, ForgePlan, ForgeState, MuSpec, Task, TolLadder, UniversalSeries};
pub use sets::{CompactSetSpec, PointCloud};
pub use transform::{LambdaRule, Psi, TransformSpec};
