//! Exact conic geometry over the rationals.

pub mod calculus;
pub mod conic;
pub mod feasibility;
pub mod rational;

pub use calculus::*;
pub use conic::{Cap, Component, ConicSet, Factor, PolyCone};
pub use rational::{qmat_from_f64, QMat, QVec, Q};
