//! Twisted products of sampled tempered distributions and their wavefront sets.

pub mod cone;
pub mod error;
pub mod field;
pub mod harness;
pub mod numerics;
pub mod par;
pub mod spectral;
pub mod twisted;
pub mod wavefront;

pub use error::{Error, Result};
