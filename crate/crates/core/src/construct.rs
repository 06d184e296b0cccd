//! Explicit constructions of magic rectangles with empty cells.
//!
//! Every constructor validates its ingredients, builds the grid
//! deterministically, and re-verifies the result before returning it.

use crate::error::{Error, Result};
use crate::existence::rectangle_set_exists;
use crate::grid::{
    cyclic_run_start, diagonal_index, diagonal_support, verify, verify_set, HoleyGrid, MagicSpec,
};
use crate::kotzig::kotzig;

/// The `m` values of one broken diagonal of subsquare `square_index`, listed
/// by row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalBlock {
    pub square_index: usize,
    pub diagonal_label: usize,
    pub values: Vec<u64>,
}

/// A nonconsecutive magic square set: `t` squares jointly holding
/// `0..m*s*t` with one shared line constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NmssResult {
    pub squares: Vec<HoleyGrid>,
    pub constant: u64,
}

fn single_zero() -> HoleyGrid {
    let mut g = HoleyGrid::empty(1, 1).expect("1x1 grid");
    g.set(0, 0, Some(0));
    g
}

fn ensure_verified(grid: &HoleyGrid, spec: &MagicSpec, what: &str) -> Result<()> {
    let report = verify(grid, spec)?;
    if report.ok {
        Ok(())
    } else {
        Err(Error::bad_ingredient(format!(
            "{what} is not a valid {spec}: {report}"
        )))
    }
}

/// `MR(m, km; 2k, 2)` for `m >= 2`, `k >= 2`.
///
/// The strip is cut into `k` squares of order `m`; square `l` receives two
/// adjacent diagonals whose values come from `l*m..(l+1)*m` and
/// `(2k-l-1)*m..(2k-l)*m`. Row indices wrap modulo `m`.
pub fn two_per_column(m: usize, k: usize) -> Result<HoleyGrid> {
    if k == 0 {
        return Err(Error::shape("k must be positive"));
    }
    if k == 1 {
        return Err(Error::not_constructible(format!(
            "MR({m},{m};2,2) does not exist"
        )));
    }
    if m < 2 {
        return Err(Error::not_constructible(format!(
            "two filled cells per column need at least two rows, got m={m}"
        )));
    }
    let mut grid = HoleyGrid::empty(m, k * m)?;
    let (mu, ku) = (m as u64, k as u64);
    for l in 0..k {
        let lu = l as u64;
        let rising = |i: u64| lu * mu + i;
        let falling = |i: u64| (2 * ku - lu) * mu - i - 1;
        let falling_odd = |i: u64| (lu + 1) * mu - i - 1;
        let rising_odd = |i: u64| (2 * ku - lu - 1) * mu + i;
        let odd_kind = if k % 2 == 0 {
            l % 2 == 1
        } else {
            l > (k - 1) / 2
        };
        for i in 0..m {
            let iu = i as u64;
            let (first, second) = if k % 2 == 1 && l == k - 1 {
                ((ku + 1) * mu - 2 * iu - 1, (ku - 1) * mu + 2 * iu)
            } else if odd_kind {
                (falling_odd(iu), rising_odd(iu))
            } else {
                (rising(iu), falling(iu))
            };
            grid.set(i, l * m + i, Some(first));
            grid.set((i + 1) % m, l * m + i, Some(second));
        }
    }
    ensure_verified(
        &grid,
        &MagicSpec::new(m, k * m, 2 * k, 2)?,
        "two-per-column output",
    )?;
    Ok(grid)
}

fn stacked_preconditions(m: usize, k: usize, s: usize) -> Result<()> {
    if m == 0 || k == 0 || s == 0 {
        return Err(Error::shape("m, k and s must be positive"));
    }
    if !(2..=m).contains(&s) {
        return Err(Error::not_constructible(format!(
            "need 2 <= s <= m, got s={s} m={m}"
        )));
    }
    if s % 2 == 1 && (k * m) % 2 == 0 {
        return Err(Error::not_constructible(format!(
            "s={s} is odd but km={} is even",
            k * m
        )));
    }
    if s == 2 && k == 1 {
        return Err(Error::not_constructible(format!(
            "MR({m},{m};2,2) does not exist"
        )));
    }
    Ok(())
}

/// Diagonal indices of an s-diagonal square in canonical label order: label
/// `i` is the `i`-th diagonal counted down from the top of the run.
fn canonical_labels(square: &HoleyGrid, s: usize) -> Result<Vec<usize>> {
    let m = square.rows();
    let support = diagonal_support(square)?;
    let start = (support.len() == s)
        .then(|| cyclic_run_start(&support, m))
        .flatten()
        .ok_or_else(|| {
            Error::bad_ingredient(format!("square is not {s}-diagonal, support {support:?}"))
        })?;
    Ok((0..s).map(|i| (start + s - 1 - i) % m).collect())
}

fn check_diagonal_square(square: &HoleyGrid, m: usize, s: usize) -> Result<Vec<usize>> {
    if square.rows() != m || square.cols() != m {
        return Err(Error::bad_ingredient(format!(
            "expected an {m}x{m} square, got {}x{}",
            square.rows(),
            square.cols()
        )));
    }
    ensure_verified(square, &MagicSpec::square(m, s)?, "square ingredient")?;
    canonical_labels(square, s)
}

/// Diagonal blocks of `square` shifted by `index * m * s`, one per label.
fn diagonal_blocks(square: &HoleyGrid, labels: &[usize], index: usize) -> Vec<DiagonalBlock> {
    let m = square.rows();
    let offset = (index * m * labels.len()) as u64;
    labels
        .iter()
        .enumerate()
        .map(|(label, &d)| DiagonalBlock {
            square_index: index,
            diagonal_label: label,
            values: (0..m)
                .map(|row| square.get(row, (row + d) % m).expect("filled diagonal") + offset)
                .collect(),
        })
        .collect()
}

/// The `k` squares `T_0..T_{k-1}` of the stacked construction with `s >= 3`.
///
/// Copies of `square` shifted by `l*m*s` are redistributed diagonal by
/// diagonal according to the Kotzig array `kotzig(s, k)`: diagonal `i` of
/// copy `l` moves to square `j` whenever row `i`, column `j` of the array
/// holds `l`.
pub fn stacked_squares(m: usize, k: usize, s: usize, square: &HoleyGrid) -> Result<Vec<HoleyGrid>> {
    if s < 3 {
        return Err(Error::not_constructible(
            "diagonal redistribution needs s >= 3",
        ));
    }
    stacked_preconditions(m, k, s)?;
    let labels = check_diagonal_square(square, m, s)?;
    if k == 1 {
        return Ok(vec![square.clone()]);
    }
    let blocks: Vec<Vec<DiagonalBlock>> = (0..k)
        .map(|l| diagonal_blocks(square, &labels, l))
        .collect();
    let plan = kotzig(s, k)?;
    let mut out = vec![HoleyGrid::empty(m, m)?; k];
    for (label, &d) in labels.iter().enumerate() {
        for (j, target) in out.iter_mut().enumerate() {
            let block = &blocks[plan.get(label, j)][label];
            debug_assert_eq!(block.diagonal_label, label);
            for (row, &v) in block.values.iter().enumerate() {
                target.set(row, (row + d) % m, Some(v));
            }
        }
    }
    Ok(out)
}

/// `MR(m, km; ks, s)`.
///
/// For `s = 2` this is [`two_per_column`] and `square` is ignored; for
/// `s >= 3`, `square` must be an s-diagonal `MS(m; s)`.
pub fn stacked(m: usize, k: usize, s: usize, square: Option<&HoleyGrid>) -> Result<HoleyGrid> {
    if m == 1 && k == 1 && s == 1 {
        return Ok(single_zero());
    }
    stacked_preconditions(m, k, s)?;
    if s == 2 {
        return two_per_column(m, k);
    }
    let square =
        square.ok_or_else(|| Error::bad_ingredient(format!("an MS({m};{s}) is required")))?;
    let parts = stacked_squares(m, k, s, square)?;
    let mut grid = HoleyGrid::empty(m, k * m)?;
    for (j, part) in parts.iter().enumerate() {
        grid.paste(0, j * m, part)?;
    }
    ensure_verified(
        &grid,
        &MagicSpec::new(m, k * m, k * s, s)?,
        "stacked output",
    )?;
    Ok(grid)
}

/// Nonconsecutive magic square set `NMSS(m, s; t)`: the squares of
/// [`stacked_squares`] with `k = t`, returned separately.
pub fn nmss(m: usize, s: usize, t: usize, square: &HoleyGrid) -> Result<NmssResult> {
    if m == 1 && s == 1 && t == 1 {
        return Ok(NmssResult {
            squares: vec![single_zero()],
            constant: 0,
        });
    }
    if !((3..=m).contains(&s) && (s % 2 == 0 || (m * t) % 2 == 1)) {
        return Err(Error::not_constructible(format!(
            "NMSS({m},{s};{t}) needs 3 <= s <= m and s even or mt odd"
        )));
    }
    let squares = stacked_squares(m, t, s, square)?;
    let report = verify_set(&squares, &MagicSpec::square(m, s)?)?;
    if !report.ok {
        return Err(Error::bad_ingredient(format!(
            "square set failed verification: {report:?}"
        )));
    }
    let constant = (s * (m * s * t - 1) / 2) as u64;
    Ok(NmssResult { squares, constant })
}

/// `MR(am, bm; bs, as)` from an `MS(m; s)` and a full `a x b` magic
/// rectangle: block `(i, j)` of the output is `rect` shifted by `k*a*b`
/// wherever cell `(i, j)` of `square` holds `k`.
pub fn product(square: &HoleyGrid, rect: &HoleyGrid) -> Result<HoleyGrid> {
    if !square.is_square() {
        return Err(Error::bad_ingredient("first ingredient must be square"));
    }
    let m = square.rows();
    let s = square.row(0).iter().flatten().count();
    if s == 0 {
        return Err(Error::bad_ingredient("square ingredient has an empty row"));
    }
    ensure_verified(square, &MagicSpec::square(m, s)?, "square ingredient")?;
    let (a, b) = (rect.rows(), rect.cols());
    ensure_verified(rect, &MagicSpec::full(a, b)?, "rectangle ingredient")?;

    let ab = (a * b) as u64;
    let mut grid = HoleyGrid::empty(a * m, b * m)?;
    for (i, j, k) in square.filled() {
        for (p, q, l) in rect.filled() {
            grid.set(i * a + p, j * b + q, Some(k * ab + l));
        }
    }
    ensure_verified(
        &grid,
        &MagicSpec::new(a * m, b * m, b * s, a * s)?,
        "product output",
    )?;
    Ok(grid)
}

/// Classifies every filled diagonal of the `order x order` window at column
/// `col0` as lying wholly below `threshold` (true) or wholly at or above it
/// (false). Mixed diagonals are an error.
fn split_diagonals(
    grid: &HoleyGrid,
    col0: usize,
    order: usize,
    threshold: u64,
) -> Result<Vec<(usize, bool, usize)>> {
    let mut seen: Vec<(Option<bool>, usize)> = vec![(None, 0); order];
    for row in 0..order {
        for col in 0..order {
            if let Some(v) = grid.get(row, col0 + col) {
                let d = diagonal_index(row, col, order);
                let low = v < threshold;
                match seen[d].0 {
                    Some(prev) if prev != low => {
                        return Err(Error::bad_ingredient(format!(
                            "diagonal {d} mixes values below and above {threshold}"
                        )))
                    }
                    _ => seen[d] = (Some(low), seen[d].1 + 1),
                }
            }
        }
    }
    Ok(seen
        .into_iter()
        .enumerate()
        .filter_map(|(d, (low, count))| low.map(|low| (d, low, count)))
        .collect())
}

/// `MR(2m, 3m; 3s, 2s)` for even `s`.
///
/// `square2m` is an `MS(2m; 2s)` in which `s/2` full diagonals hold exactly
/// the values `0..ms`; `strip` is an `MR(m, 2m; 2s, s)` whose diagonals in
/// each half lie wholly below or wholly at or above `ms`. The low diagonals
/// of the square and the high diagonals of the strip are lifted by `4ms`,
/// then the square and the transposed strip are placed side by side.
pub fn five_case(m: usize, s: usize, square2m: &HoleyGrid, strip: &HoleyGrid) -> Result<HoleyGrid> {
    if m == 0 || s == 0 {
        return Err(Error::shape("m and s must be positive"));
    }
    if s % 2 == 1 {
        return Err(Error::not_constructible(format!("s must be even, got {s}")));
    }
    if s > m {
        return Err(Error::not_constructible(format!(
            "need s <= m, got s={s} m={m}"
        )));
    }
    let ms = (m * s) as u64;
    let lift = 4 * ms;

    if square2m.rows() != 2 * m || square2m.cols() != 2 * m {
        return Err(Error::bad_ingredient(format!(
            "expected a {0}x{0} square",
            2 * m
        )));
    }
    ensure_verified(
        square2m,
        &MagicSpec::square(2 * m, 2 * s)?,
        "square ingredient",
    )?;
    let low_diagonals: Vec<_> = split_diagonals(square2m, 0, 2 * m, ms)?
        .into_iter()
        .filter(|&(_, low, _)| low)
        .collect();
    if low_diagonals.len() != s / 2 || low_diagonals.iter().any(|&(_, _, count)| count != 2 * m) {
        return Err(Error::bad_ingredient(format!(
            "square must have {} full diagonals holding 0..{ms}",
            s / 2
        )));
    }

    if strip.rows() != m || strip.cols() != 2 * m {
        return Err(Error::bad_ingredient(format!(
            "expected an {m}x{} strip",
            2 * m
        )));
    }
    ensure_verified(
        strip,
        &MagicSpec::new(m, 2 * m, 2 * s, s)?,
        "strip ingredient",
    )?;
    for half in 0..2 {
        split_diagonals(strip, half * m, m, ms)?;
    }

    let mut grid = HoleyGrid::empty(2 * m, 3 * m)?;
    for (i, j, v) in square2m.filled() {
        grid.set(i, j, Some(if v < ms { v + lift } else { v }));
    }
    for (i, j, v) in strip.filled() {
        grid.set(j, i + 2 * m, Some(if v >= ms { v + lift } else { v }));
    }
    let spec = MagicSpec::new(2 * m, 3 * m, 3 * s, 2 * s)?;
    ensure_verified(&grid, &spec, "combined square and strip")?;
    Ok(grid)
}

/// `MR(ac, bc; b, a)` from a magic rectangle set: member `k` goes on
/// diagonal block `(k, k)`.
pub fn block_set(a: usize, b: usize, c: usize, set: &[HoleyGrid]) -> Result<HoleyGrid> {
    if !rectangle_set_exists(a, b, c) {
        return Err(Error::not_constructible(format!(
            "MRS({a},{b};{c}) conditions fail: need 2 <= a <= b and a,b,c odd or a,b even with (a,b) != (2,2)"
        )));
    }
    if set.len() != c {
        return Err(Error::bad_ingredient(format!(
            "expected {c} rectangles, got {}",
            set.len()
        )));
    }
    let report = verify_set(set, &MagicSpec::full(a, b)?)?;
    if !report.ok {
        return Err(Error::bad_ingredient(format!(
            "rectangle set failed verification: {report:?}"
        )));
    }
    let mut grid = HoleyGrid::empty(a * c, b * c)?;
    for (k, member) in set.iter().enumerate() {
        grid.paste(k * a, k * b, member)?;
    }
    ensure_verified(
        &grid,
        &MagicSpec::new(a * c, b * c, b, a)?,
        "block set output",
    )?;
    Ok(grid)
}
