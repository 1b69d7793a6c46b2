//! Exact certification of norm-based robust efficiency for vector
//! optimization problems.
//!
//! Given a vector objective `f` made of piecewise-affine or quadratic
//! components, a feasible set `Ω` and a polyhedral ordering cone `K`,
//! the crate decides whether a candidate `x̄` stays efficient under every
//! linear perturbation `f + C·` with `‖C‖_F < r` for some `r > 0`. It does
//! so with exact rational cone computations, and cross-checks the answer
//! with a sampling oracle that refutes robustness by exhibiting a
//! perturbation and a dominating point.

pub mod certifier;
pub mod error;
pub mod exactlp;
pub mod funcalc;
pub mod gap;
pub mod geometry;
pub mod instance;
pub mod oracle;
pub mod report;

pub use error::{ConeError, Error, Result};
