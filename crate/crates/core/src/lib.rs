//! Dual Schur measures on partitions in an `n x k` box: exact evaluation, sampling,
//! correlation kernels, limit shapes, edge and corner fluctuations.

pub mod airy;
pub mod config;
pub mod critical;
pub mod density;
pub mod edge;
pub mod error;
pub mod kernel;
pub mod limit_shape;
pub mod partition;
pub mod quadrature;
pub mod run;
pub mod sampler;
pub mod schur;

pub use error::{Error, Result};
