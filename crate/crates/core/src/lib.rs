//! A finite-precision laboratory for valued fields: p-adic and local-field
//! arithmetic, unit filtrations, Kummer and Artin-Schreier constructions,
//! rank-2 valuations on truncated Laurent series, and finite-depth tilts.

pub mod error;
pub mod finite;
pub mod kummer;
pub mod ordgroup;
pub mod padic;
pub mod report;
pub mod suites;
pub mod tilt;
pub mod units;
pub mod valtower;

mod linalg;
mod polyfp;
mod tower;

pub use error::{Error, Result};
