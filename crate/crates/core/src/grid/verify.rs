use std::collections::HashMap;
use std::fmt;

use super::{HoleyGrid, MagicSpec};
use crate::error::{Error, Result};

/// A line constant stored as twice its value, so half-integers are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LineConstant {
    twice: u64,
}

impl LineConstant {
    pub fn from_twice(twice: u64) -> Self {
        LineConstant { twice }
    }

    pub fn twice(&self) -> u64 {
        self.twice
    }

    pub fn is_integral(&self) -> bool {
        self.twice % 2 == 0
    }

    /// The constant as an integer, when it is one.
    pub fn integral(&self) -> Option<u64> {
        self.is_integral().then_some(self.twice / 2)
    }
}

impl fmt::Display for LineConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.integral() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "{}/2", self.twice),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MagicConstants {
    pub row: LineConstant,
    pub col: LineConstant,
}

impl MagicConstants {
    pub fn is_integral(&self) -> bool {
        self.row.is_integral() && self.col.is_integral()
    }
}

/// Row and column sums forced by the value set `{0, .., mr-1}`:
/// `r(mr-1)/2` and `s(mr-1)/2`.
pub fn magic_constants(spec: &MagicSpec) -> Result<MagicConstants> {
    spec.check()?;
    let cells = spec.cell_count();
    let span = cells - 1;
    Ok(MagicConstants {
        row: LineConstant::from_twice(spec.r as u64 * span),
        col: LineConstant::from_twice(spec.s as u64 * span),
    })
}

/// One violated magic axiom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Failure {
    FillCountRow(usize),
    FillCountCol(usize),
    ValueMultiset,
    RowSum(usize),
    ColSum(usize),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::FillCountRow(i) => write!(f, "FillCountRow({i})"),
            Failure::FillCountCol(j) => write!(f, "FillCountCol({j})"),
            Failure::ValueMultiset => write!(f, "ValueMultiset"),
            Failure::RowSum(i) => write!(f, "RowSum({i})"),
            Failure::ColSum(j) => write!(f, "ColSum({j})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub ok: bool,
    /// Common row sum, present when every row sums to the same value.
    pub row_constant: Option<u64>,
    /// Common column sum, present when every column sums to the same value.
    pub col_constant: Option<u64>,
    pub failures: Vec<Failure>,
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |c: Option<u64>| c.map_or_else(|| "-".to_string(), |v| v.to_string());
        if self.ok {
            write!(
                f,
                "OK row={} col={}",
                show(self.row_constant),
                show(self.col_constant)
            )
        } else {
            write!(
                f,
                "FAIL row={} col={}",
                show(self.row_constant),
                show(self.col_constant)
            )?;
            for failure in &self.failures {
                write!(f, " {failure}")?;
            }
            Ok(())
        }
    }
}

/// Checks `grid` against the magic-rectangle axioms for `spec`.
///
/// When the value multiset is correct, line sums are compared against the
/// forced constant, so a half-integral constant flags every line. Otherwise
/// the most frequent sum serves as the reference.
pub fn verify(grid: &HoleyGrid, spec: &MagicSpec) -> Result<VerificationReport> {
    spec.check()?;
    if grid.rows() != spec.m || grid.cols() != spec.n {
        return Err(Error::shape(format!(
            "grid is {}x{} but {spec} expects {}x{}",
            grid.rows(),
            grid.cols(),
            spec.m,
            spec.n
        )));
    }
    let mut failures = Vec::new();

    let mut row_fill = vec![0usize; spec.m];
    let mut col_fill = vec![0usize; spec.n];
    let mut values = Vec::with_capacity(spec.m * spec.r);
    for (i, j, v) in grid.filled() {
        row_fill[i] += 1;
        col_fill[j] += 1;
        values.push(v);
    }
    failures.extend(
        row_fill
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != spec.r)
            .map(|(i, _)| Failure::FillCountRow(i)),
    );
    failures.extend(
        col_fill
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != spec.s)
            .map(|(j, _)| Failure::FillCountCol(j)),
    );

    values.sort_unstable();
    let multiset_ok = values.len() as u64 == spec.cell_count()
        && values.iter().enumerate().all(|(idx, &v)| idx as u64 == v);
    if !multiset_ok {
        failures.push(Failure::ValueMultiset);
    }

    let constants = magic_constants(spec)?;
    let row_sums = grid.row_sums();
    let col_sums = grid.col_sums();
    let row_ref = if multiset_ok {
        constants.row.integral()
    } else {
        mode(&row_sums)
    };
    let col_ref = if multiset_ok {
        constants.col.integral()
    } else {
        mode(&col_sums)
    };
    failures.extend(
        row_sums
            .iter()
            .enumerate()
            .filter(|&(_, &v)| Some(v) != row_ref)
            .map(|(i, _)| Failure::RowSum(i)),
    );
    failures.extend(
        col_sums
            .iter()
            .enumerate()
            .filter(|&(_, &v)| Some(v) != col_ref)
            .map(|(j, _)| Failure::ColSum(j)),
    );

    Ok(VerificationReport {
        ok: failures.is_empty(),
        row_constant: common(&row_sums),
        col_constant: common(&col_sums),
        failures,
    })
}

/// A violation within a collection of grids that share one value range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetFailure {
    Member(usize, Failure),
    ValueMultiset,
    MemberShape(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetReport {
    pub ok: bool,
    pub row_constant: Option<u64>,
    pub col_constant: Option<u64>,
    pub failures: Vec<SetFailure>,
}

/// Checks a collection of `spec`-shaped grids whose filled values jointly
/// form `{0, .., members*m*r - 1}` and whose every row (column) sums to
/// the constant forced by that range.
///
/// This is the common shape of magic rectangle sets (full members) and
/// nonconsecutive magic square sets (members with holes).
pub fn verify_set(grids: &[HoleyGrid], spec: &MagicSpec) -> Result<SetReport> {
    spec.check()?;
    if grids.is_empty() {
        return Err(Error::shape("empty grid set"));
    }
    let total = grids.len() as u64 * spec.cell_count();
    let row_target = LineConstant::from_twice(spec.r as u64 * (total - 1)).integral();
    let col_target = LineConstant::from_twice(spec.s as u64 * (total - 1)).integral();
    let mut failures = Vec::new();
    let mut values = Vec::with_capacity(total as usize);
    let mut row_sums = Vec::new();
    let mut col_sums = Vec::new();
    for (idx, grid) in grids.iter().enumerate() {
        if grid.rows() != spec.m || grid.cols() != spec.n {
            failures.push(SetFailure::MemberShape(idx));
            continue;
        }
        let mut row_fill = vec![0usize; spec.m];
        let mut col_fill = vec![0usize; spec.n];
        for (i, j, v) in grid.filled() {
            row_fill[i] += 1;
            col_fill[j] += 1;
            values.push(v);
        }
        for (i, &c) in row_fill.iter().enumerate() {
            if c != spec.r {
                failures.push(SetFailure::Member(idx, Failure::FillCountRow(i)));
            }
        }
        for (j, &c) in col_fill.iter().enumerate() {
            if c != spec.s {
                failures.push(SetFailure::Member(idx, Failure::FillCountCol(j)));
            }
        }
        let rs = grid.row_sums();
        let cs = grid.col_sums();
        for (i, &v) in rs.iter().enumerate() {
            if Some(v) != row_target {
                failures.push(SetFailure::Member(idx, Failure::RowSum(i)));
            }
        }
        for (j, &v) in cs.iter().enumerate() {
            if Some(v) != col_target {
                failures.push(SetFailure::Member(idx, Failure::ColSum(j)));
            }
        }
        row_sums.extend(rs);
        col_sums.extend(cs);
    }
    values.sort_unstable();
    let multiset_ok =
        values.len() as u64 == total && values.iter().enumerate().all(|(idx, &v)| idx as u64 == v);
    if !multiset_ok {
        failures.push(SetFailure::ValueMultiset);
    }
    Ok(SetReport {
        ok: failures.is_empty(),
        row_constant: common(&row_sums),
        col_constant: common(&col_sums),
        failures,
    })
}

fn common(sums: &[u64]) -> Option<u64> {
    let first = *sums.first()?;
    sums.iter().all(|&s| s == first).then_some(first)
}

// Most frequent value; ties go to the value seen first.
fn mode(sums: &[u64]) -> Option<u64> {
    let mut counts: HashMap<u64, (usize, usize)> = HashMap::new();
    for (idx, &s) in sums.iter().enumerate() {
        counts.entry(s).or_insert((0, idx)).0 += 1;
    }
    counts
        .into_iter()
        .max_by(|a, b| a.1 .0.cmp(&b.1 .0).then(b.1 .1.cmp(&a.1 .1)))
        .map(|(s, _)| s)
}
