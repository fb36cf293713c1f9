// NaN-rejecting checks are written as negated comparisons on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assignment;
pub mod baselines;
pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod rf_model;
pub mod selftest;
pub mod topology;

pub use error::{Error, Result};
