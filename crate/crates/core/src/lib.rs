//! Simple even lattices of square-free level and signature (2, n), their
//! Weil representations, and the holomorphic Borcherds products of singular
//! weight living on them.

pub mod arith;
pub mod classify;
pub mod cyclo;
pub mod dimensions;
pub mod eisenstein;
pub mod error;
pub mod genus;
pub mod lifts;
pub mod orthoprod;
pub mod qseries;
pub mod search;
pub mod weilrep;

pub use error::{Error, Result};
