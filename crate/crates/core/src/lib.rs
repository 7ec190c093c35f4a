pub mod cli;
pub mod error;
pub mod factor;
pub mod field;
pub mod json;
pub mod linalg;
pub mod montecarlo;
pub mod poly;
pub mod primes;
mod scalar;
pub mod splitting;
pub mod unimodular;
pub mod zeta;

pub use error::{Error, Result};
