//! Schur-sampling estimation of quantum relative entropy `D(ρ‖σ)` for a known `σ`.
//!
//! The crate computes the exact outcome distribution of the Schur-basis measurement on
//! `ρ^{⊗n}` (two independent backends), the per-outcome estimates, and the closed-form
//! error bounds that accompany the estimator.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod combinatorics;
pub mod dd;
pub mod distribution;
pub mod error;
pub mod estimator;
pub mod linalg;
pub mod params;
pub mod states;

pub use error::{Error, Result};
