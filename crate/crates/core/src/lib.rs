pub mod chisq;
pub mod cli;
pub mod error;
pub mod harness;
pub mod l1norm;
pub mod netgen;
pub mod report;
pub mod rng;
pub mod spectral;
pub mod stats;

pub use error::{Error, Result};
