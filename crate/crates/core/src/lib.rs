//! Equilibrium Expectation estimation of exponential random graph models for
//! large sparse directed networks.

pub mod attributes;
pub mod change_stats;
pub mod cli;
pub mod config;
pub mod error;
pub mod estimator;
pub mod fit;
pub mod graph;
pub mod inference;
pub mod io;
pub mod model;
pub mod prefilter;
pub mod rng;
pub mod sampler;
pub mod simulate;
pub mod statistics;
pub mod study;

pub use error::{Error, Result};
