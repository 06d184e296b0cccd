//! Magic squares with empty cells, classical magic rectangles and magic
//! rectangle sets used as building blocks by the constructions.
//!
//! Requests are answered from the compiled-in [`catalog`], then an in-memory
//! memo, then the optional on-disk [`IngredientCache`], and finally by a
//! budgeted backtracking search. Search results are deterministic for a
//! fixed budget.

mod cache;
pub mod catalog;
mod profile;
mod search;

use std::collections::HashMap;
use std::path::PathBuf;

pub use cache::{IngredientCache, IngredientKey};
pub use profile::{BlockRun, DiagonalProfile};

use crate::error::{Error, Result};
use crate::existence::{classical_rectangle_exists, magic_square_exists, rectangle_set_exists};
use crate::grid::{diagonal_index, HoleyGrid};
use search::{solve, Line, Outcome, Problem, ValueSet};

/// Default number of search nodes per ingredient request.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Ingredient provider with its memo, optional cache file and search budget.
#[derive(Debug)]
pub struct Ingredients {
    cache: Option<IngredientCache>,
    budget: u64,
    memo: HashMap<IngredientKey, Vec<HoleyGrid>>,
    /// Keys whose search ran out of budget, with that budget.
    failed: HashMap<IngredientKey, u64>,
    nodes: u64,
}

impl Default for Ingredients {
    fn default() -> Self {
        Ingredients::new()
    }
}

impl Ingredients {
    pub fn new() -> Self {
        Ingredients {
            cache: None,
            budget: DEFAULT_BUDGET,
            memo: HashMap::new(),
            failed: HashMap::new(),
            nodes: 0,
        }
    }

    pub fn with_cache(mut self, path: impl Into<PathBuf>) -> Self {
        self.cache = Some(IngredientCache::new(path));
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Total search nodes spent by this provider so far.
    pub fn nodes_searched(&self) -> u64 {
        self.nodes
    }

    /// An s-diagonal `MS(m; s)` whose filled cells lie on diagonals
    /// `0..s`, optionally meeting `profile`.
    pub fn magic_square_holes(
        &mut self,
        m: usize,
        s: usize,
        profile: Option<&DiagonalProfile>,
    ) -> Result<HoleyGrid> {
        if !magic_square_exists(m, s) {
            return Err(Error::not_constructible(format!(
                "MS({m};{s}) needs m = s = 1 or 3 <= s <= m with s even or m odd"
            )));
        }
        let profile = profile.cloned().unwrap_or_default();
        profile.check(m, s)?;
        if m == 1 {
            return HoleyGrid::from_rows(vec![vec![Some(0)]]);
        }
        let key = IngredientKey::MagicSquare {
            m,
            s,
            profile: profile.clone(),
        };
        if let Some(mut grids) = self.lookup(&key)? {
            return Ok(grids.remove(0));
        }
        let mut attempts = Vec::new();
        if square_pairs(s) > 0 {
            attempts.push(true);
        }
        attempts.push(false);
        let mut grids = self.search(&key, attempts, |&paired| {
            square_problem(m, s, &profile, paired)
        })?;
        Ok(grids.remove(0))
    }

    /// A full `a x b` magic rectangle.
    pub fn classical_rectangle(&mut self, a: usize, b: usize) -> Result<HoleyGrid> {
        if !classical_rectangle_exists(a, b) {
            return Err(Error::not_constructible(format!(
                "a {a}x{b} magic rectangle needs a = b = 1 or a, b > 1 of equal parity with a + b > 5"
            )));
        }
        if a == 1 {
            return HoleyGrid::from_rows(vec![vec![Some(0)]]);
        }
        let key = IngredientKey::Classical { a, b };
        if let Some(mut grids) = self.lookup(&key)? {
            return Ok(grids.remove(0));
        }
        // search the wide orientation, which has the longer rows
        let (rows, cols) = (a.min(b), a.max(b));
        let mut attempts = Vec::new();
        if row_pairs(rows, cols) > 0 {
            attempts.push(true);
        }
        attempts.push(false);
        let found = self.search(&key, attempts, |&paired| {
            let (problem, mut layout) = set_problem(rows, cols, 1, None, paired);
            if rows != a {
                layout.transpose();
            }
            (problem, layout)
        })?;
        Ok(found.into_iter().next().expect("one grid"))
    }

    /// A magic rectangle set `MRS(a, b; c)`.
    ///
    /// The search first looks for a set layered over a classical `a x b`
    /// rectangle `R`: position `(i, j)` of every member takes its value from
    /// `c*R(i,j) .. c*R(i,j) + c`. If that fails it searches all labelings.
    pub fn magic_rectangle_set(&mut self, a: usize, b: usize, c: usize) -> Result<Vec<HoleyGrid>> {
        if !rectangle_set_exists(a, b, c) {
            return Err(Error::not_constructible(format!(
                "MRS({a},{b};{c}) needs 2 <= a <= b with a, b, c odd or a, b even and (a, b) != (2, 2)"
            )));
        }
        let key = IngredientKey::RectangleSet { a, b, c };
        if let Some(grids) = self.lookup(&key)? {
            return Ok(grids);
        }
        let mut attempts = Vec::new();
        if c > 1 {
            match self.classical_rectangle(a, b) {
                Ok(base) => attempts.push(SetAttempt::Layered(base)),
                Err(Error::SearchBudgetExceeded { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        if row_pairs(a, b) > 0 {
            attempts.push(SetAttempt::Paired);
        }
        attempts.push(SetAttempt::Plain);
        self.search(&key, attempts, |attempt| match attempt {
            SetAttempt::Layered(base) => set_problem(a, b, c, Some(base), false),
            SetAttempt::Paired => set_problem(a, b, c, None, true),
            SetAttempt::Plain => set_problem(a, b, c, None, false),
        })
    }

    /// Catalog, memo, then cache.
    fn lookup(&mut self, key: &IngredientKey) -> Result<Option<Vec<HoleyGrid>>> {
        if let Some(grids) = catalog::lookup(key) {
            return Ok(Some(grids));
        }
        if let Some(grids) = self.memo.get(key) {
            return Ok(Some(grids.clone()));
        }
        if let Some(cache) = &self.cache {
            if let Some(grids) = cache.load(key)? {
                self.memo.insert(key.clone(), grids.clone());
                return Ok(Some(grids));
            }
        }
        Ok(None)
    }

    /// Searches each attempt in turn with an even share of the remaining
    /// budget and records the first solution. A key whose search already ran
    /// out of a budget at least as large fails again without searching.
    fn search<A>(
        &mut self,
        key: &IngredientKey,
        attempts: Vec<A>,
        build: impl Fn(&A) -> (Problem, Layout),
    ) -> Result<Vec<HoleyGrid>> {
        let over_budget = || Error::SearchBudgetExceeded {
            what: key.to_string(),
            budget: self.budget,
        };
        if self
            .failed
            .get(key)
            .is_some_and(|&spent| spent >= self.budget)
        {
            return Err(over_budget());
        }
        let mut remaining = self.budget;
        let mut exhausted_all = true;
        let total = attempts.len();
        for (idx, attempt) in attempts.iter().enumerate() {
            let share = remaining / (total - idx) as u64;
            let (problem, layout) = build(attempt);
            let (outcome, nodes) = solve(&problem, share);
            self.nodes += nodes;
            remaining -= nodes.min(share);
            match outcome {
                Outcome::Found(values) => {
                    let grids = layout.render(&values)?;
                    key.check(&grids).map_err(|reason| {
                        Error::bad_ingredient(format!("search produced an invalid {key}: {reason}"))
                    })?;
                    if let Some(cache) = &self.cache {
                        cache.store(key, &grids)?;
                    }
                    self.memo.insert(key.clone(), grids.clone());
                    return Ok(grids);
                }
                Outcome::Exhausted => {}
                Outcome::BudgetExceeded => exhausted_all = false,
            }
        }
        if exhausted_all {
            Err(Error::not_constructible(format!(
                "search space for {key} exhausted without a solution"
            )))
        } else {
            let err = over_budget();
            self.failed.insert(key.clone(), self.budget);
            Err(err)
        }
    }
}

enum SetAttempt {
    Layered(HoleyGrid),
    Paired,
    Plain,
}

/// Where each search cell lives: `(member, row, col)` in grids of the given
/// shape.
struct Layout {
    members: usize,
    rows: usize,
    cols: usize,
    cells: Vec<(usize, usize, usize)>,
}

impl Layout {
    fn transpose(&mut self) {
        std::mem::swap(&mut self.rows, &mut self.cols);
        for cell in &mut self.cells {
            *cell = (cell.0, cell.2, cell.1);
        }
    }

    fn render(&self, values: &[u64]) -> Result<Vec<HoleyGrid>> {
        let mut grids = vec![HoleyGrid::empty(self.rows, self.cols)?; self.members];
        for (&(k, i, j), &v) in self.cells.iter().zip(values) {
            grids[k].set(i, j, Some(v));
        }
        Ok(grids)
    }
}

/// Number of complementary diagonal pairs `(2p, 2p+1)` used by the paired
/// square search: all diagonals for even `s`, all but three for odd `s`.
fn square_pairs(s: usize) -> usize {
    if s % 2 == 0 {
        s / 2
    } else {
        s.saturating_sub(3) / 2
    }
}

/// Number of complementary column pairs per row in the paired rectangle
/// search. With two rows the pairs would force equal cells, so none.
fn row_pairs(rows: usize, cols: usize) -> usize {
    if rows < 3 {
        0
    } else if cols % 2 == 0 {
        cols / 2
    } else {
        cols.saturating_sub(3) / 2
    }
}

/// Search problem for an `MS(m; s)` on diagonals `0..s`.
///
/// Runs of `profile` claim whole diagonals in order, each taking the next
/// block of `m` values; the remaining diagonals share the remaining values.
/// When `paired`, the cells of diagonals `2p` and `2p+1` in each row must
/// add up to `ms - 1`, which settles most of every row sum in advance.
fn square_problem(
    m: usize,
    s: usize,
    profile: &DiagonalProfile,
    paired: bool,
) -> (Problem, Layout) {
    let n = m * s;
    let mut diagonal_domain: Vec<Option<ValueSet>> = vec![None; s];
    let mut free = ValueSet::range(n, 0..n);
    let mut next = 0;
    for run in &profile.runs {
        for t in 0..run.diagonals {
            let lo = run.values.start as usize + t * m;
            diagonal_domain[next] = Some(ValueSet::range(n, lo..lo + m));
            next += 1;
        }
        for v in run.values.clone() {
            free.remove(v as usize);
        }
    }

    let mut cells = Vec::with_capacity(n);
    let mut domains = Vec::with_capacity(n);
    let mut at = vec![vec![usize::MAX; s]; m];
    for i in 0..m {
        for j in 0..m {
            let d = diagonal_index(i, j, m);
            if d < s {
                at[i][d] = cells.len();
                cells.push((0, i, j));
                domains.push(diagonal_domain[d].clone().unwrap_or_else(|| free.clone()));
            }
        }
    }
    let target = (s * (n - 1) / 2) as u64;
    let mut lines = grid_lines(&cells, 1, m, m, target, target);
    if paired {
        for row in &at {
            for p in 0..square_pairs(s) {
                lines.push(Line {
                    cells: vec![row[2 * p], row[2 * p + 1]],
                    target: (n - 1) as u64,
                });
            }
        }
    }
    let slack = if paired { 4 } else { 6 };
    (
        Problem {
            domains,
            lines,
            order: (0..n).collect(),
            slack,
        },
        Layout {
            members: 1,
            rows: m,
            cols: m,
            cells,
        },
    )
}

/// Search problem for `c` full `a x b` rectangles sharing `0..abc`.
///
/// With `base`, position `(i, j)` of every member is restricted to the
/// block `c*base(i,j) .. c*base(i,j) + c`. When `paired`, columns `2p` and
/// `2p+1` of each row must add up to `abc - 1`.
fn set_problem(
    a: usize,
    b: usize,
    c: usize,
    base: Option<&HoleyGrid>,
    paired: bool,
) -> (Problem, Layout) {
    let n = a * b * c;
    let cells: Vec<_> = (0..c)
        .flat_map(|k| (0..a).flat_map(move |i| (0..b).map(move |j| (k, i, j))))
        .collect();
    let domains = cells
        .iter()
        .map(|&(_, i, j)| match base.and_then(|g| g.get(i, j)) {
            Some(x) => {
                let lo = x as usize * c;
                ValueSet::range(n, lo..lo + c)
            }
            None => ValueSet::range(n, 0..n),
        })
        .collect();
    let row_target = (b * (n - 1) / 2) as u64;
    let col_target = (a * (n - 1) / 2) as u64;
    let mut lines = grid_lines(&cells, c, a, b, row_target, col_target);
    if paired {
        for row in 0..c * a {
            for p in 0..row_pairs(a, b) {
                lines.push(Line {
                    cells: vec![row * b + 2 * p, row * b + 2 * p + 1],
                    target: (n - 1) as u64,
                });
            }
        }
    }
    (
        Problem {
            domains,
            lines,
            order: (0..n).collect(),
            slack: 0,
        },
        Layout {
            members: c,
            rows: a,
            cols: b,
            cells,
        },
    )
}

fn grid_lines(
    cells: &[(usize, usize, usize)],
    members: usize,
    rows: usize,
    cols: usize,
    row_target: u64,
    col_target: u64,
) -> Vec<Line> {
    let mut row_cells = vec![Vec::new(); members * rows];
    let mut col_cells = vec![Vec::new(); members * cols];
    for (idx, &(k, i, j)) in cells.iter().enumerate() {
        row_cells[k * rows + i].push(idx);
        col_cells[k * cols + j].push(idx);
    }
    row_cells
        .into_iter()
        .map(|cells| Line {
            cells,
            target: row_target,
        })
        .chain(col_cells.into_iter().map(|cells| Line {
            cells,
            target: col_target,
        }))
        .collect()
}
