//! Holey grids: rectangular arrays whose cells are either empty or hold a
//! nonnegative integer.
//!
//! Every other module produces or consumes [`HoleyGrid`] values. The
//! [`verify`] function checks the magic-rectangle axioms against a
//! [`MagicSpec`], and the MRX text format in [`mrx`] is the one canonical
//! serialization used by the CLI and by the ingredient cache.

mod diagonal;
pub mod mrx;
mod verify;

use std::fmt;

use crate::error::{Error, Result};

pub use diagonal::{cyclic_run_start, diagonal_index, diagonal_support, is_consecutive_run};
pub use mrx::{parse, parse_many, serialize};
pub use verify::{
    magic_constants, verify, verify_set, Failure, LineConstant, MagicConstants, SetFailure,
    SetReport, VerificationReport,
};

/// A dense `rows x cols` array of optional values, addressed `(row, col)`
/// from zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HoleyGrid {
    rows: usize,
    cols: usize,
    cells: Vec<Option<u64>>,
}

impl HoleyGrid {
    /// An all-empty grid. Both dimensions must be positive.
    pub fn empty(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::shape(format!(
                "grid dimensions must be positive, got {rows}x{cols}"
            )));
        }
        Ok(HoleyGrid {
            rows,
            cols,
            cells: vec![None; rows * cols],
        })
    }

    /// Builds a grid from row vectors; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<Option<u64>>>) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        let mut grid = HoleyGrid::empty(height, width)?;
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != width {
                return Err(Error::shape(format!(
                    "row {i} has {} cells, expected {width}",
                    row.len()
                )));
            }
            grid.cells[i * width..(i + 1) * width].copy_from_slice(&row);
        }
        Ok(grid)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Option<u64> {
        assert!(
            row < self.rows && col < self.cols,
            "cell ({row},{col}) out of range"
        );
        self.cells[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Option<u64>) {
        assert!(
            row < self.rows && col < self.cols,
            "cell ({row},{col}) out of range"
        );
        self.cells[row * self.cols + col] = value;
    }

    /// Iterator over `(row, col, value)` for filled cells in row-major order.
    pub fn filled(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter_map(move |(idx, v)| v.map(|v| (idx / self.cols, idx % self.cols, v)))
    }

    pub fn filled_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    pub fn row(&self, row: usize) -> &[Option<u64>] {
        &self.cells[row * self.cols..(row + 1) * self.cols]
    }

    /// Sum of the filled values in each row.
    pub fn row_sums(&self) -> Vec<u64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().flatten().sum())
            .collect()
    }

    /// Sum of the filled values in each column.
    pub fn col_sums(&self) -> Vec<u64> {
        let mut sums = vec![0; self.cols];
        for (_, j, v) in self.filled() {
            sums[j] += v;
        }
        sums
    }

    pub fn transpose(&self) -> HoleyGrid {
        let mut out = HoleyGrid {
            rows: self.cols,
            cols: self.rows,
            cells: vec![None; self.cells.len()],
        };
        for (i, j, v) in self.filled() {
            out.set(j, i, Some(v));
        }
        out
    }

    /// Copies the `rows x cols` window whose top-left corner is `(row, col)`.
    pub fn window(&self, row: usize, col: usize, rows: usize, cols: usize) -> Result<HoleyGrid> {
        if row + rows > self.rows || col + cols > self.cols {
            return Err(Error::shape(format!(
                "window {rows}x{cols} at ({row},{col}) exceeds {}x{} grid",
                self.rows, self.cols
            )));
        }
        let mut out = HoleyGrid::empty(rows, cols)?;
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(row + i, col + j));
            }
        }
        Ok(out)
    }

    /// Writes `block` into this grid with its top-left corner at `(row, col)`.
    pub fn paste(&mut self, row: usize, col: usize, block: &HoleyGrid) -> Result<()> {
        if row + block.rows > self.rows || col + block.cols > self.cols {
            return Err(Error::shape(format!(
                "block {}x{} at ({row},{col}) exceeds {}x{} grid",
                block.rows, block.cols, self.rows, self.cols
            )));
        }
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(row + i, col + j, block.get(i, j));
            }
        }
        Ok(())
    }

    /// Returns a copy with `offset` added to every filled value.
    pub fn shifted(&self, offset: u64) -> HoleyGrid {
        HoleyGrid {
            rows: self.rows,
            cols: self.cols,
            cells: self.cells.iter().map(|c| c.map(|v| v + offset)).collect(),
        }
    }

    /// Largest filled value, if any.
    pub fn max_value(&self) -> Option<u64> {
        self.cells.iter().flatten().copied().max()
    }
}

impl fmt::Debug for HoleyGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "HoleyGrid {}x{}", self.rows, self.cols)?;
        f.write_str(&serialize(self))
    }
}

impl fmt::Display for HoleyGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize(self))
    }
}

/// Shape and fill counts of a magic rectangle with empty cells: `m x n`,
/// `r` filled cells per row and `s` per column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MagicSpec {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub s: usize,
}

impl MagicSpec {
    /// Validated constructor.
    pub fn new(m: usize, n: usize, r: usize, s: usize) -> Result<Self> {
        let spec = MagicSpec { m, n, r, s };
        spec.check()?;
        Ok(spec)
    }

    /// Spec of a full `m x n` magic rectangle.
    pub fn full(m: usize, n: usize) -> Result<Self> {
        MagicSpec::new(m, n, n, m)
    }

    /// Spec of a magic square with `s` filled cells per line.
    pub fn square(m: usize, s: usize) -> Result<Self> {
        MagicSpec::new(m, m, s, s)
    }

    pub fn check(&self) -> Result<()> {
        let MagicSpec { m, n, r, s } = *self;
        if m == 0 || n == 0 || r == 0 || s == 0 {
            return Err(Error::shape(format!("{self} has a zero parameter")));
        }
        if m * r != n * s {
            return Err(Error::shape(format!(
                "{self}: m*r = {} != n*s = {}",
                m * r,
                n * s
            )));
        }
        if r > n || s > m {
            return Err(Error::shape(format!(
                "{self}: fill counts exceed dimensions"
            )));
        }
        Ok(())
    }

    /// Number of filled cells, which is also one past the largest value.
    pub fn cell_count(&self) -> u64 {
        (self.m * self.r) as u64
    }

    pub fn has_holes(&self) -> bool {
        self.r < self.n
    }

    pub fn transposed(&self) -> MagicSpec {
        MagicSpec {
            m: self.n,
            n: self.m,
            r: self.s,
            s: self.r,
        }
    }
}

impl fmt::Display for MagicSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MR({},{};{},{})", self.m, self.n, self.r, self.s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        assert!(MagicSpec::new(5, 10, 4, 2).is_ok());
        assert!(MagicSpec::new(3, 4, 2, 2).is_err());
        assert!(MagicSpec::new(2, 2, 3, 3).is_err());
        assert!(MagicSpec::new(0, 1, 1, 1).is_err());
        assert_eq!(
            MagicSpec::new(5, 10, 4, 2).unwrap().transposed(),
            MagicSpec {
                m: 10,
                n: 5,
                r: 2,
                s: 4
            }
        );
    }

    #[test]
    fn window_and_paste() {
        let mut g = HoleyGrid::empty(3, 4).unwrap();
        g.set(1, 2, Some(7));
        let w = g.window(1, 1, 2, 2).unwrap();
        assert_eq!(w.get(0, 1), Some(7));
        let mut h = HoleyGrid::empty(3, 4).unwrap();
        h.paste(1, 1, &w).unwrap();
        assert_eq!(h, g);
        assert!(g.window(2, 2, 2, 2).is_err());
    }

    #[test]
    fn transpose_twice_is_identity() {
        let g = HoleyGrid::from_rows(vec![
            vec![Some(1), None, Some(3)],
            vec![None, Some(0), None],
        ])
        .unwrap();
        assert_eq!(g.transpose().rows(), 3);
        assert_eq!(g.transpose().get(2, 0), Some(3));
        assert_eq!(g.transpose().transpose(), g);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(HoleyGrid::from_rows(vec![vec![Some(1)], vec![None, None]]).is_err());
        assert!(HoleyGrid::from_rows(vec![]).is_err());
    }
}
