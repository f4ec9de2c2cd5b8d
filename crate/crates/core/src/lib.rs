//! Torus-model laboratory for bilinear pseudo-differential operators with
//! `S_{0,0}`-type symbols: function space norms, symbol classes, operator
//! application, proof-machinery checks and sharpness experiments.

pub mod decomposition;
pub mod error;
pub mod experiments;
pub mod indices;
pub mod key_estimates;
pub mod operator;
pub mod partitions;
pub mod spaces;
pub mod suites;
pub mod symbols;
pub mod torus;

pub use error::{LabError, Result};
