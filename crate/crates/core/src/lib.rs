//! Exact homological algebra over finite-dimensional commutative local
//! algebras over prime fields.

pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod complex;
pub mod error;
pub mod io;
pub mod linalg;
pub mod module;
pub mod reducing;
pub mod suite;
pub mod torsionfree;
