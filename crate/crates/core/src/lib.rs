//! Numerical verification that identical spin-zero particles obey symmetric
//! statistics.

pub mod analysis;
pub mod cli;
pub mod config_space;
pub mod error;
pub mod random;
pub mod seam;
pub mod spectrum;
pub mod special;
pub mod superselection;

pub use error::{Error, Result};
