use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::grid::{diagonal_index, HoleyGrid};

/// `diagonals` broken diagonals which together hold exactly `values`, each
/// diagonal holding a block of consecutive numbers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockRun {
    pub diagonals: usize,
    pub values: Range<u64>,
}

/// Structural requirements on how values sit on the diagonals of a magic
/// square with empty cells.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DiagonalProfile {
    pub runs: Vec<BlockRun>,
}

impl DiagonalProfile {
    pub fn none() -> Self {
        DiagonalProfile::default()
    }

    /// `count` diagonals of an order-`order` square partitioning
    /// `0..count*order`, one block of `order` consecutive values each.
    pub fn low_blocks(count: usize, order: usize) -> Self {
        DiagonalProfile {
            runs: vec![BlockRun {
                diagonals: count,
                values: 0..(count * order) as u64,
            }],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Checks that the runs are disjoint, fit in `0..order*s`, and each
    /// splits evenly into diagonal-sized blocks.
    pub fn check(&self, order: usize, s: usize) -> Result<()> {
        let limit = (order * s) as u64;
        let mut sorted: Vec<&BlockRun> = self.runs.iter().collect();
        sorted.sort_by_key(|r| r.values.start);
        let mut prev_end = 0;
        let mut used = 0;
        for run in sorted {
            let len = run.values.end.saturating_sub(run.values.start);
            if run.values.start < prev_end || run.values.end > limit || run.diagonals == 0 {
                return Err(Error::shape(format!(
                    "profile {self} does not fit MS({order};{s})"
                )));
            }
            if len != (run.diagonals * order) as u64 {
                return Err(Error::shape(format!(
                    "profile run {}x{:?} is not {} blocks of {order}",
                    run.diagonals, run.values, run.diagonals
                )));
            }
            prev_end = run.values.end;
            used += run.diagonals;
        }
        if used > s {
            return Err(Error::shape(format!(
                "profile {self} needs more than {s} diagonals"
            )));
        }
        Ok(())
    }

    /// Whether every run is realized by whole diagonals of `grid`.
    pub fn is_satisfied_by(&self, grid: &HoleyGrid) -> bool {
        if !grid.is_square() {
            return false;
        }
        let order = grid.rows();
        let mut diagonals: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
        for (i, j, v) in grid.filled() {
            diagonals
                .entry(diagonal_index(i, j, order))
                .or_default()
                .push(v);
        }
        self.runs.iter().all(|run| {
            let touching: Vec<&Vec<u64>> = diagonals
                .values()
                .filter(|vals| vals.iter().any(|v| run.values.contains(v)))
                .collect();
            touching.len() == run.diagonals
                && touching.iter().all(|vals| {
                    let lo = *vals.iter().min().expect("nonempty");
                    let hi = *vals.iter().max().expect("nonempty");
                    vals.len() == order
                        && hi - lo + 1 == order as u64
                        && run.values.contains(&lo)
                        && run.values.contains(&hi)
                })
        })
    }

    /// Compact tag used in cache keys, e.g. `1x0-8` or `none`.
    pub fn tag(&self) -> String {
        self.to_string()
    }

    pub fn from_tag(tag: &str) -> Result<Self> {
        if tag == "none" {
            return Ok(DiagonalProfile::none());
        }
        let bad = || Error::parse(1, format!("invalid profile tag {tag:?}"));
        let runs = tag
            .split('+')
            .map(|part| {
                let (count, range) = part.split_once('x').ok_or_else(bad)?;
                let (start, end) = range.split_once('-').ok_or_else(bad)?;
                Ok(BlockRun {
                    diagonals: count.parse().map_err(|_| bad())?,
                    values: start.parse().map_err(|_| bad())?..end.parse().map_err(|_| bad())?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DiagonalProfile { runs })
    }
}

impl fmt::Display for DiagonalProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return f.write_str("none");
        }
        for (idx, run) in self.runs.iter().enumerate() {
            if idx > 0 {
                f.write_str("+")?;
            }
            write!(
                f,
                "{}x{}-{}",
                run.diagonals, run.values.start, run.values.end
            )?;
        }
        Ok(())
    }
}
