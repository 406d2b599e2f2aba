pub mod chain;
pub mod cli;
pub mod cube;
pub mod diagram;
pub mod error;
pub mod frobenius;
pub mod homology;
pub mod lee;
pub mod poly;
pub mod ring;
pub mod skein;
pub mod snf;

pub use error::{Error, Result};
