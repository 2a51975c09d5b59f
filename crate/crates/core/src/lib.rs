#![allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must fail these checks

pub mod error;
pub mod localisation;
pub mod quasimode;
pub mod rng;
pub mod rootfind;
pub mod secular;
pub mod spectrum;
pub mod stochastic;

pub use error::{Error, Result};
