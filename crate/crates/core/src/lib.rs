//! Markov chain Monte Carlo samplers built from the Lie algebra of
//! stochastic matrices fixing a target measure: higher-order Barker,
//! Metropolis, and linear-programming samplers, with exact diagnostics on
//! small Sherrington-Kirkpatrick spin glasses.

pub mod bench;
pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod hops;
pub mod lie;
pub mod lp;
pub mod measure;
pub mod oracle;
pub mod samplers;
pub mod spin_glass;
pub mod verify;

pub use error::{Error, Result};

/// Dense real matrix used throughout.
pub type Matrix = nalgebra::DMatrix<f64>;
