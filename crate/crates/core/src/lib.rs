//! Exact invariants of superisolated, Lê-Yomdin and weighted Lê-Yomdin
//! surface singularities.

pub mod arith;
pub mod catalog;
pub mod cli;
pub mod curve;
pub mod cyclo;
pub mod error;
pub mod linalg;
pub mod poly;
pub mod qres;
pub mod quotient;
pub mod rational;
pub mod weight;
pub mod wlys;
pub mod zeta;

pub use cyclo::{CycloDivisor, CycloProduct, DensePoly};
pub use error::{Error, Result};
