use std::collections::BTreeSet;

use super::HoleyGrid;
use crate::error::{Error, Result};

/// Index of the broken diagonal through `(row, col)` of an order-`order`
/// square: `(col - row) mod order`.
#[inline]
pub fn diagonal_index(row: usize, col: usize, order: usize) -> usize {
    (col % order + order - row % order) % order
}

/// Set of diagonals holding at least one filled cell of a square grid.
pub fn diagonal_support(grid: &HoleyGrid) -> Result<BTreeSet<usize>> {
    if !grid.is_square() {
        return Err(Error::shape(format!(
            "diagonal support needs a square grid, got {}x{}",
            grid.rows(),
            grid.cols()
        )));
    }
    let order = grid.rows();
    Ok(grid
        .filled()
        .map(|(i, j, _)| diagonal_index(i, j, order))
        .collect())
}

/// Start of the cyclic run `{start, start+1, ..}` (mod `order`) that `set`
/// forms, if it forms one. A complete set reports start 0.
pub fn cyclic_run_start(set: &BTreeSet<usize>, order: usize) -> Option<usize> {
    let len = set.len();
    if len == 0 || set.iter().any(|&d| d >= order) {
        return None;
    }
    if len == order {
        return Some(0);
    }
    // exactly one member has its predecessor missing
    let mut starts = set
        .iter()
        .filter(|&&d| !set.contains(&((d + order - 1) % order)));
    let start = *starts.next()?;
    if starts.next().is_some() {
        return None;
    }
    Some(start)
}

/// Whether `set` is a cyclically consecutive run of exactly `len` diagonals.
pub fn is_consecutive_run(set: &BTreeSet<usize>, order: usize, len: usize) -> bool {
    set.len() == len && cyclic_run_start(set, order).is_some()
}
