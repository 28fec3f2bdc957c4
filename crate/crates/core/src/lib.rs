//! Bayesian posterior indices for testing a point null on a standardized
//! effect size.
//!
//! The crate covers the whole path from two-group data to a report:
//!
//! - [`ttest`]: the two-sample t-test with a Cauchy prior on δ, the analytic
//!   JZS Bayes factor and the posterior of δ on a grid.
//! - [`posterior`]: sample- and grid-based posteriors with KDE, HPD intervals,
//!   MAP, interval and level-set masses, and inverse-CDF sampling.
//! - [`indices`]: Savage-Dickey Bayes factor with verbal evidence scales, the
//!   ROPE decision, MAP-based p-value, probability of direction and the FBST
//!   e-value.
//! - [`report`], [`replicate`] and [`cli`]: configuration, JSON/text reports,
//!   plot data, and the calibrated replication of the running example.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod cli;
pub mod config;
pub mod error;
pub mod indices;
pub mod io;
pub mod numeric;
pub mod posterior;
pub mod replicate;
pub mod report;
pub mod ttest;

pub use error::{Error, Result};
