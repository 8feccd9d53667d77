pub mod bernoulli;
pub mod bits;
pub mod cnh;
pub mod error;
pub mod error_model;
pub mod legacy;
pub mod report;
pub mod samples;
pub mod stats;
pub mod stochastic;
pub mod tables;
pub mod warning;

pub use error::{Error, Result};
