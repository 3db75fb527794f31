//! Steepest-entropy-ascent (SEA) dynamics for continuous-time quantum walks on
//! rings and hypercubes.

pub mod error;
pub mod operator;
pub mod walk;
pub mod engine;
pub mod observables;

pub use error::{Error, Result};
