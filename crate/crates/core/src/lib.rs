//! Exact computations for the restricted quantum group at a `2p`-th root of
//! unity: ribbon data, integral, center, trace classes, modified traces, and
//! logarithmic Hennings invariants of surgery presentations.

#![allow(clippy::needless_range_loop)]

mod cache;
pub mod center;
pub mod cli;
pub mod error;
pub mod hh0;
pub mod hopf;
pub mod integral;
pub mod invariant;
pub mod linalg;
pub mod mtrace;
pub mod quasitriangular;
pub mod repmod;
pub mod report;
pub mod sample;
pub mod scalars;
pub mod tangle;

pub use error::{Error, Result};
