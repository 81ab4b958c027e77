//! Exact mod-p representation theory of U(1,1)(Q_{p²}/Q_p).

pub mod chars;
pub mod cli;
pub mod error;
pub mod ffield;
pub mod finituni;
pub mod hecke;
pub mod langlands;
pub mod linalg;
pub mod reps;

pub use error::{Error, Result};
pub use ffield::{FFElem, FieldTower, Layer};
