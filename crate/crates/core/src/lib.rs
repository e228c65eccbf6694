//! Data-partition model selection for Gaussian location models.
//!
//! The crate connects Bayesian and information-based model selection through
//! the split of a sample into training and generalization sets, with
//! `nu = N_G / N_T`:
//!
//! - [`gaussian`]: exact conjugate evidence, posteriors and predictive
//!   informations for known-variance normal data.
//! - [`criteria`]: the partition-indexed criterion `IC^nu`, AIC, BIC, Bayes
//!   and pseudo-Bayes factors, and model selection.
//! - [`analysis`]: resolution thresholds, implied significance levels,
//!   parameter information and Occam-factor volumes.
//! - [`simulation`]: a seeded Monte Carlo harness for the paradox
//!   demonstrations and estimator checks.
//!
//! All informations are natural-log (nats): `h = -ln q`.

// `!(x > 0.0)` style checks are deliberate: NaN must fail them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod criteria;
pub mod error;
pub mod gaussian;
pub mod io;
pub mod rng;
pub mod simulation;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
