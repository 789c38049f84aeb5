//! Exact arithmetic for Hecke groups `G(2cos(pi/k))`: word matrices over
//! `Z[lambda]/(p)`, their multilinear coefficient tables, and the linear
//! recurrences whose ratio limits recover `lambda`.

pub mod combinatorics;
pub mod decimal;
pub mod error;
pub mod fixtures;
pub mod hecke;
pub mod nu;
pub mod poly;
pub mod recurrence;

pub use error::{Error, Result};
