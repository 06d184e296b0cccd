//! Magic rectangles with empty cells.
//!
//! An `MR(m, n; r, s)` is an `m x n` array in which each row has `r` filled
//! cells, each column has `s` filled cells, the filled cells hold
//! `0..m*r` once each, and all row sums and all column sums are equal.
//!
//! - [`grid`]: the [`HoleyGrid`] type, the MRX text format and [`verify`].
//! - [`kotzig`]: Kotzig arrays.
//! - [`construct`]: explicit constructions.
//! - [`ingredients`]: magic squares, rectangles and rectangle sets consumed
//!   by the constructions, from a catalog, a cache file or search.
//! - [`existence`]: necessary conditions and the [`decide`] verdict.
//! - [`oracle`]: exhaustive enumeration for small parameters.

pub mod construct;
pub mod error;
pub mod existence;
pub mod grid;
pub mod ingredients;
pub mod kotzig;
pub mod oracle;

pub use error::{Error, Result};
pub use existence::{decide, necessary_conditions, realize, Decision, Reason, Route};
pub use grid::{
    magic_constants, parse, parse_many, serialize, verify, HoleyGrid, MagicSpec, VerificationReport,
};
pub use ingredients::{DiagonalProfile, Ingredients};
pub use kotzig::KotzigArray;
pub use oracle::{enumerate, exists_brute, BruteVerdict, EnumerationResult};
