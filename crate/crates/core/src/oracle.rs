//! Exhaustive enumeration of `MR(m, n; r, s)` for small parameters.
//!
//! Cells are visited in row-major order. Each cell is first left empty and
//! then filled with every unused value in ascending order, subject to the
//! fill counts and to partial row and column sums not exceeding the magic
//! constants. This module shares nothing with the constructive search in
//! [`crate::ingredients`] beyond the grid type and the constant formulas.

use crate::error::{Error, Result};
use crate::grid::{magic_constants, HoleyGrid, MagicSpec};

/// Default node budget for [`enumerate`].
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

/// Largest `m*r` accepted unless [`EnumerationOptions::max_cells`] is raised.
pub const DEFAULT_MAX_CELLS: u64 = 14;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationOptions {
    /// Number of solutions kept as witnesses.
    pub witness_cap: usize,
    pub node_budget: u64,
    /// Stop after this many solutions; the result is then not exhausted
    /// unless the space ran out at the same time.
    pub stop_after: Option<u64>,
    /// Count only solutions with `0` in the top-left cell. Every solution
    /// maps to one of these by a row and a column swap, so the full count is
    /// `m * n` times the reduced one.
    pub fix_zero_corner: bool,
    pub max_cells: u64,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            witness_cap: 1,
            node_budget: DEFAULT_NODE_BUDGET,
            stop_after: None,
            fix_zero_corner: false,
            max_cells: DEFAULT_MAX_CELLS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationResult {
    pub count: u64,
    pub witnesses: Vec<HoleyGrid>,
    /// True iff the whole search space was visited.
    pub exhausted: bool,
    pub nodes: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BruteVerdict {
    Yes,
    No,
    Inconclusive,
}

/// Enumerates with the given witness cap and node budget.
pub fn enumerate(
    m: usize,
    n: usize,
    r: usize,
    s: usize,
    witness_cap: usize,
    node_budget: u64,
) -> Result<EnumerationResult> {
    enumerate_with(
        m,
        n,
        r,
        s,
        &EnumerationOptions {
            witness_cap,
            node_budget,
            ..EnumerationOptions::default()
        },
    )
}

pub fn enumerate_with(
    m: usize,
    n: usize,
    r: usize,
    s: usize,
    options: &EnumerationOptions,
) -> Result<EnumerationResult> {
    let spec = MagicSpec::new(m, n, r, s)?;
    if spec.cell_count() > options.max_cells {
        return Err(Error::shape(format!(
            "{spec} has {} filled cells, above the oracle limit of {}",
            spec.cell_count(),
            options.max_cells
        )));
    }
    let constants = magic_constants(&spec)?;
    let (Some(row_target), Some(col_target)) = (constants.row.integral(), constants.col.integral())
    else {
        return Ok(EnumerationResult {
            count: 0,
            witnesses: Vec::new(),
            exhausted: true,
            nodes: 0,
        });
    };
    let mut search = Search {
        spec,
        options,
        row_target,
        col_target,
        #[cfg(test)]
        skew: 0,
        cells: vec![None; m * n],
        used: vec![false; spec.cell_count() as usize],
        row_fill: vec![0; m],
        col_fill: vec![0; n],
        row_sum: vec![0; m],
        col_sum: vec![0; n],
        count: 0,
        witnesses: Vec::new(),
        nodes: 0,
    };
    let finished = search.run(0);
    Ok(search.into_result(finished))
}

/// `Yes` on the first witness, `No` when the space is exhausted without
/// one, `Inconclusive` when the default budget runs out.
pub fn exists_brute(m: usize, n: usize, r: usize, s: usize) -> Result<BruteVerdict> {
    let options = EnumerationOptions {
        witness_cap: 0,
        stop_after: Some(1),
        ..EnumerationOptions::default()
    };
    let result = enumerate_with(m, n, r, s, &options)?;
    Ok(if result.count > 0 {
        BruteVerdict::Yes
    } else if result.exhausted {
        BruteVerdict::No
    } else {
        BruteVerdict::Inconclusive
    })
}

enum Stop {
    Budget,
    Enough,
}

struct Search<'o> {
    spec: MagicSpec,
    options: &'o EnumerationOptions,
    row_target: u64,
    col_target: u64,
    /// Added to the row bound; nonzero only in mutation tests.
    #[cfg(test)]
    skew: u64,
    cells: Vec<Option<u64>>,
    used: Vec<bool>,
    row_fill: Vec<usize>,
    col_fill: Vec<usize>,
    row_sum: Vec<u64>,
    col_sum: Vec<u64>,
    count: u64,
    witnesses: Vec<HoleyGrid>,
    nodes: u64,
}

impl Search<'_> {
    fn row_bound(&self) -> u64 {
        #[cfg(test)]
        return self.row_target + self.skew;
        #[cfg(not(test))]
        self.row_target
    }

    fn tick(&mut self) -> std::result::Result<(), Stop> {
        self.nodes += 1;
        if self.nodes > self.options.node_budget {
            Err(Stop::Budget)
        } else {
            Ok(())
        }
    }

    /// Returns `Ok(())` when the subtree below `pos` was fully searched.
    fn run(&mut self, pos: usize) -> std::result::Result<(), Stop> {
        let MagicSpec { m, n, r, s } = self.spec;
        if pos == m * n {
            return self.record();
        }
        let (i, j) = (pos / n, pos % n);
        let cells_left_in_row = n - j - 1;
        let rows_left_below = m - i - 1;
        let corner_fixed = self.options.fix_zero_corner && pos == 0;

        let can_skip =
            self.row_fill[i] + cells_left_in_row >= r && self.col_fill[j] + rows_left_below >= s;
        if can_skip && !corner_fixed {
            self.tick()?;
            if self.line_ends_ok(i, j) {
                self.run(pos + 1)?;
            }
        }
        if self.row_fill[i] == r || self.col_fill[j] == s {
            return Ok(());
        }
        let values: Vec<u64> = if corner_fixed {
            vec![0]
        } else {
            (0..self.used.len() as u64)
                .filter(|&v| !self.used[v as usize])
                .collect()
        };
        for v in values {
            if self.used[v as usize] {
                continue;
            }
            if self.row_sum[i] + v > self.row_bound() || self.col_sum[j] + v > self.col_target {
                break;
            }
            self.tick()?;
            self.place(i, j, v);
            if self.line_ends_ok(i, j) {
                let outcome = self.run(pos + 1);
                self.unplace(i, j, v);
                outcome?;
            } else {
                self.unplace(i, j, v);
            }
        }
        Ok(())
    }

    /// Checks lines that are complete after deciding cell `(i, j)`: a row
    /// or column with all its cells filled must hit its constant, and the
    /// last cell of a row or column closes it.
    fn line_ends_ok(&self, i: usize, j: usize) -> bool {
        let MagicSpec { m, n, r, s } = self.spec;
        let row_done = self.row_fill[i] == r || j == n - 1;
        let col_done = self.col_fill[j] == s || i == m - 1;
        (!row_done || (self.row_fill[i] == r && self.row_sum[i] == self.row_bound()))
            && (!col_done || (self.col_fill[j] == s && self.col_sum[j] == self.col_target))
    }

    fn place(&mut self, i: usize, j: usize, v: u64) {
        self.cells[i * self.spec.n + j] = Some(v);
        self.used[v as usize] = true;
        self.row_fill[i] += 1;
        self.col_fill[j] += 1;
        self.row_sum[i] += v;
        self.col_sum[j] += v;
    }

    fn unplace(&mut self, i: usize, j: usize, v: u64) {
        self.cells[i * self.spec.n + j] = None;
        self.used[v as usize] = false;
        self.row_fill[i] -= 1;
        self.col_fill[j] -= 1;
        self.row_sum[i] -= v;
        self.col_sum[j] -= v;
    }

    fn record(&mut self) -> std::result::Result<(), Stop> {
        self.count += 1;
        if self.witnesses.len() < self.options.witness_cap {
            let rows = self
                .cells
                .chunks(self.spec.n)
                .map(<[Option<u64>]>::to_vec)
                .collect();
            self.witnesses
                .push(HoleyGrid::from_rows(rows).expect("grid shape"));
        }
        match self.options.stop_after {
            Some(limit) if self.count >= limit => Err(Stop::Enough),
            _ => Ok(()),
        }
    }

    fn into_result(self, finished: std::result::Result<(), Stop>) -> EnumerationResult {
        EnumerationResult {
            count: self.count,
            witnesses: self.witnesses,
            exhausted: finished.is_ok(),
            nodes: self.nodes,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::verify;

    fn count(m: usize, n: usize, r: usize, s: usize) -> EnumerationResult {
        enumerate(m, n, r, s, 4, DEFAULT_NODE_BUDGET).unwrap()
    }

    #[test]
    fn single_cell() {
        let result = count(1, 1, 1, 1);
        assert_eq!((result.count, result.exhausted), (1, true));
        assert_eq!(result.witnesses[0].get(0, 0), Some(0));
    }

    #[test]
    fn known_empty_cases() {
        for (m, n, r, s) in [(3, 3, 2, 2), (2, 3, 3, 2), (4, 6, 3, 2), (2, 2, 2, 2)] {
            let result = count(m, n, r, s);
            assert_eq!(
                (result.count, result.exhausted),
                (0, true),
                "MR({m},{n};{r},{s})"
            );
        }
    }

    #[test]
    fn three_by_three_squares() {
        // semi-magic squares on 0..8
        let result = count(3, 3, 3, 3);
        assert_eq!((result.count, result.exhausted), (72, true));
    }

    #[test]
    fn witnesses_verify() {
        for (m, n, r, s) in [(2, 4, 4, 2), (3, 3, 3, 3), (2, 6, 6, 2), (3, 6, 4, 2)] {
            let spec = MagicSpec::new(m, n, r, s).unwrap();
            let result = enumerate(m, n, r, s, 5, 50_000_000).unwrap();
            assert!(!result.witnesses.is_empty(), "{spec}");
            for w in &result.witnesses {
                assert!(verify(w, &spec).unwrap().ok, "{spec}\n{w}");
            }
        }
    }

    #[test]
    fn corner_reduction_scales_count() {
        for (m, n, r, s) in [(2, 4, 4, 2), (3, 3, 3, 3), (4, 4, 2, 2), (2, 6, 6, 2)] {
            let full = count(m, n, r, s);
            let options = EnumerationOptions {
                fix_zero_corner: true,
                ..EnumerationOptions::default()
            };
            let reduced = enumerate_with(m, n, r, s, &options).unwrap();
            assert!(full.exhausted && reduced.exhausted);
            assert_eq!(
                full.count,
                (m * n) as u64 * reduced.count,
                "MR({m},{n};{r},{s})"
            );
        }
    }

    #[test]
    fn brute_verdicts() {
        assert_eq!(exists_brute(2, 4, 4, 2).unwrap(), BruteVerdict::Yes);
        assert_eq!(exists_brute(4, 4, 2, 2).unwrap(), BruteVerdict::No);
        assert_eq!(exists_brute(4, 6, 3, 2).unwrap(), BruteVerdict::No);
    }

    #[test]
    fn budget_and_limits() {
        let result = enumerate(3, 3, 3, 3, 0, 10).unwrap();
        assert!(!result.exhausted);
        assert!(matches!(enumerate(4, 4, 4, 4, 0, 10), Err(Error::Shape(_))));
        assert!(matches!(enumerate(3, 4, 2, 2, 0, 10), Err(Error::Shape(_))));
    }

    #[test]
    fn deterministic_witness_order() {
        assert_eq!(count(2, 4, 4, 2), count(2, 4, 4, 2));
    }

    #[test]
    fn skewed_bound_is_caught() {
        let spec = MagicSpec::new(2, 4, 4, 2).unwrap();
        let constants = magic_constants(&spec).unwrap();
        let options = EnumerationOptions {
            witness_cap: 100,
            ..EnumerationOptions::default()
        };
        let mut search = Search {
            spec,
            options: &options,
            row_target: constants.row.integral().unwrap(),
            col_target: constants.col.integral().unwrap(),
            skew: 1,
            cells: vec![None; 8],
            used: vec![false; 8],
            row_fill: vec![0; 2],
            col_fill: vec![0; 4],
            row_sum: vec![0; 2],
            col_sum: vec![0; 4],
            count: 0,
            witnesses: Vec::new(),
            nodes: 0,
        };
        let finished = search.run(0);
        let skewed = search.into_result(finished);
        let honest = count(2, 4, 4, 2);
        let witnesses_ok = skewed
            .witnesses
            .iter()
            .all(|w| verify(w, &spec).unwrap().ok);
        assert!(skewed.count != honest.count || !witnesses_ok);
    }
}
