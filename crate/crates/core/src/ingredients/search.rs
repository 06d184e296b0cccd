//! Budgeted depth-first search for bijective cell labelings with line-sum
//! constraints.
//!
//! A problem has `n` cells and the values `0..n`, each used exactly once.
//! Every cell has a value domain and belongs to some lines; every line must
//! sum to its target. The search branches on the open cell with the fewest
//! candidate values (ties broken by a fixed order) and tries candidates in
//! ascending order. After each assignment, a line with a single open cell
//! forces that cell, and lines with more open cells are bounded by the sums
//! of their smallest and largest still-available domain values.
//!
//! A problem may ask for limited-discrepancy passes first: pass `d` only
//! explores paths that deviate from the first candidate at most `d` times.
//! The final pass is unrestricted, so the search stays complete.

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ValueSet {
    words: Vec<u64>,
}

impl ValueSet {
    pub(crate) fn empty(universe: usize) -> Self {
        ValueSet {
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub(crate) fn range(universe: usize, range: std::ops::Range<usize>) -> Self {
        let mut set = ValueSet::empty(universe);
        for v in range {
            set.insert(v);
        }
        set
    }

    #[inline]
    pub(crate) fn insert(&mut self, v: usize) {
        self.words[v / 64] |= 1 << (v % 64);
    }

    #[inline]
    pub(crate) fn remove(&mut self, v: usize) {
        self.words[v / 64] &= !(1 << (v % 64));
    }

    #[inline]
    fn contains(&self, v: usize) -> bool {
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    fn intersection_count(&self, other: &ValueSet) -> u32 {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    fn union_with(&mut self, other: &ValueSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    fn intersection_iter<'a>(&'a self, other: &'a ValueSet) -> impl Iterator<Item = usize> + 'a {
        self.words
            .iter()
            .zip(&other.words)
            .enumerate()
            .flat_map(|(w, (a, b))| {
                let mut bits = a & b;
                std::iter::from_fn(move || {
                    (bits != 0).then(|| {
                        let t = bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        w * 64 + t
                    })
                })
            })
    }

    /// Sums of the `k` smallest and `k` largest members of `self & other`,
    /// or `None` when the intersection has fewer than `k` members.
    fn extreme_sums(&self, other: &ValueSet, k: usize) -> Option<(u64, u64)> {
        let mut low = 0u64;
        let mut taken = 0;
        for v in self.intersection_iter(other) {
            if taken == k {
                break;
            }
            low += v as u64;
            taken += 1;
        }
        if taken < k {
            return None;
        }
        let mut high = 0u64;
        let mut taken = 0;
        'outer: for w in (0..self.words.len()).rev() {
            let mut bits = self.words[w] & other.words[w];
            while bits != 0 {
                if taken == k {
                    break 'outer;
                }
                let t = 63 - bits.leading_zeros() as usize;
                bits &= !(1 << t);
                high += (w * 64 + t) as u64;
                taken += 1;
            }
        }
        Some((low, high))
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Line {
    pub cells: Vec<usize>,
    pub target: u64,
}

#[derive(Clone, Debug)]
pub(crate) struct Problem {
    pub domains: Vec<ValueSet>,
    pub lines: Vec<Line>,
    /// Tie-break order for branching.
    pub order: Vec<usize>,
    /// Number of limited-discrepancy passes, allowing `0, 1, ..` non-first
    /// choices per path, before the unrestricted pass.
    pub slack: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Outcome {
    Found(Vec<u64>),
    Exhausted,
    BudgetExceeded,
}

struct BudgetHit;

struct Solver<'p> {
    problem: &'p Problem,
    cell_lines: Vec<Vec<usize>>,
    line_masks: Vec<ValueSet>,
    value: Vec<Option<usize>>,
    available: ValueSet,
    line_sum: Vec<u64>,
    line_open: Vec<usize>,
    trail: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl<'p> Solver<'p> {
    fn new(problem: &'p Problem, budget: u64) -> Self {
        let n = problem.domains.len();
        let mut cell_lines = vec![Vec::new(); n];
        let mut line_masks = Vec::with_capacity(problem.lines.len());
        for (idx, line) in problem.lines.iter().enumerate() {
            let mut mask = ValueSet::empty(n);
            for &c in &line.cells {
                cell_lines[c].push(idx);
                mask.union_with(&problem.domains[c]);
            }
            line_masks.push(mask);
        }
        Solver {
            problem,
            cell_lines,
            line_masks,
            value: vec![None; n],
            available: ValueSet::range(n, 0..n),
            line_sum: vec![0; problem.lines.len()],
            line_open: problem.lines.iter().map(|l| l.cells.len()).collect(),
            trail: Vec::with_capacity(n),
            nodes: 0,
            budget,
        }
    }

    fn place(&mut self, cell: usize, v: usize) {
        self.value[cell] = Some(v);
        self.available.remove(v);
        for &l in &self.cell_lines[cell] {
            self.line_sum[l] += v as u64;
            self.line_open[l] -= 1;
        }
        self.trail.push(cell);
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let cell = self.trail.pop().expect("trail entry");
            let v = self.value[cell].take().expect("assigned cell");
            self.available.insert(v);
            for &l in &self.cell_lines[cell] {
                self.line_sum[l] -= v as u64;
                self.line_open[l] += 1;
            }
        }
    }

    /// Assigns `cell = v` and runs forcing plus bound checks. On failure the
    /// caller undoes to its mark.
    fn assign(&mut self, cell: usize, v: usize) -> bool {
        let mut queue = vec![(cell, v)];
        let mut touched = Vec::new();
        while let Some((cell, v)) = queue.pop() {
            match self.value[cell] {
                Some(existing) if existing == v => continue,
                Some(_) => return false,
                None => {}
            }
            if v >= self.value.len()
                || !self.available.contains(v)
                || !self.problem.domains[cell].contains(v)
            {
                return false;
            }
            self.place(cell, v);
            for &l in &self.cell_lines[cell] {
                let target = self.problem.lines[l].target;
                let sum = self.line_sum[l];
                if sum > target {
                    return false;
                }
                match self.line_open[l] {
                    0 => {
                        if sum != target {
                            return false;
                        }
                    }
                    1 => {
                        let open = self.problem.lines[l]
                            .cells
                            .iter()
                            .copied()
                            .find(|&c| self.value[c].is_none())
                            .expect("one open cell");
                        queue.push((open, (target - sum) as usize));
                    }
                    _ => touched.push(l),
                }
            }
        }
        touched.into_iter().all(|l| self.within_bounds(l))
    }

    fn within_bounds(&self, line: usize) -> bool {
        let open = self.line_open[line];
        if open < 2 {
            return true;
        }
        let need = self.problem.lines[line].target - self.line_sum[line];
        match self.available.extreme_sums(&self.line_masks[line], open) {
            Some((low, high)) => low <= need && need <= high,
            None => false,
        }
    }

    /// Open cell with the fewest candidate values; ties go to the earliest
    /// cell in the problem's order.
    fn pick_cell(&self) -> Option<usize> {
        let mut best: Option<(u32, usize)> = None;
        for &cell in &self.problem.order {
            if self.value[cell].is_some() {
                continue;
            }
            let count = self
                .available
                .intersection_count(&self.problem.domains[cell]);
            if best.is_none_or(|(c, _)| count < c) {
                best = Some((count, cell));
                if count <= 1 {
                    break;
                }
            }
        }
        best.map(|(_, cell)| cell)
    }

    /// Depth-first search allowing at most `slack` non-first choices along
    /// the path; `usize::MAX` searches everything.
    fn dfs(&mut self, slack: usize) -> Result<bool, BudgetHit> {
        let Some(cell) = self.pick_cell() else {
            return Ok(true);
        };
        let candidates: Vec<usize> = self
            .available
            .intersection_iter(&self.problem.domains[cell])
            .collect();
        for (idx, v) in candidates.into_iter().enumerate() {
            let slack = match (idx, slack) {
                (0, _) | (_, usize::MAX) => slack,
                (_, 0) => break,
                _ => slack - 1,
            };
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(BudgetHit);
            }
            let mark = self.trail.len();
            if self.assign(cell, v) && self.dfs(slack)? {
                return Ok(true);
            }
            self.undo_to(mark);
        }
        Ok(false)
    }
}

/// Runs the search; returns the outcome and the number of branching nodes.
pub(crate) fn solve(problem: &Problem, budget: u64) -> (Outcome, u64) {
    let n = problem.domains.len();
    let total: u64 = (0..n as u64).sum();
    // every value is used once, so the lines of any partition must add up
    debug_assert!(problem.lines.iter().all(|l| l.target <= total));
    let mut solver = Solver::new(problem, budget);
    let mut found = Ok(false);
    for slack in (0..problem.slack).chain([usize::MAX]) {
        found = solver.dfs(slack);
        if !matches!(found, Ok(false)) {
            break;
        }
        solver.undo_to(0);
    }
    let outcome = match found {
        Ok(true) => Outcome::Found(
            solver
                .value
                .iter()
                .map(|v| v.expect("complete assignment") as u64)
                .collect(),
        ),
        Ok(false) => Outcome::Exhausted,
        Err(BudgetHit) => Outcome::BudgetExceeded,
    };
    (outcome, solver.nodes)
}
