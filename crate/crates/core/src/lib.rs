//! Comparing latent continuous distributions through ordinal data.
//!
//! Ordinal responses are modelled as thresholded latent variables. From the
//! two groups' ordinal CDFs this crate computes the quantile sets on which
//! the latent distributions are provably ordered, inner confidence sets for
//! those sets, frequentist tests of ordinal dominance and single crossing,
//! and Dirichlet–multinomial posterior probabilities of the same relations.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. The `parallel` feature spreads simulation work over a rayon
//! pool; results never depend on the degree of parallelism.

#![cfg_attr(not(feature = "std"), no_std)]
// `!(a < b)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bayes;
pub mod confsets;
mod error;
pub mod gauss;
pub mod harness;
pub mod identify;
pub mod interval;
pub mod math;
pub mod matrix;
mod par;
pub mod sample;
pub mod hypothesis;

pub use error::{Error, Result};
pub use interval::{Interval, QuantileSet, Rect, RectSet};
pub use matrix::SymMatrix;
pub use sample::{estimate_cdf, merge_categories, theta, MergeSpec, OrdinalCdf, OrdinalSample};
