//! Limit operators and separating topologies on finite spaces, and causal
//! completions of finitely presented chronological sets.

pub mod bits;
pub mod chrono;
pub mod cli;
pub mod completion;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod limit_ops;
pub mod predicate;
pub mod separation;
pub mod sweeps;
pub mod symbolic;
pub mod theorems;
pub mod topology;

pub use error::{Error, Result};
