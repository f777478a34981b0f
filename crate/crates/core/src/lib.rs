//! Artificial-noise-aided secrecy rate maximization for pinching-antenna
//! downlinks: channel model, rate evaluation, the closed-form single-waveguide
//! solver, the alternating multi-waveguide solver with its small dense SDP
//! engine, and a seeded Monte Carlo experiment harness.

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod eig;
pub mod error;
pub mod experiments;
pub mod model;
pub mod multi;
pub mod poly;
pub mod rates;
pub mod sdp;
pub mod single;
pub mod trace;

pub use error::{Error, Result};
