//! Existence of `MR(m, n; r, s)`: necessary conditions, constructive routes
//! and the [`decide`] verdict.
//!
//! Routes decompose `m = a*d`, `n = b*d` with `d = gcd(m, n)` and
//! `r = b*s'`, `s = a*s'`. Each route is tried on the given orientation and
//! then on the transposed one.

use std::fmt;

use crate::construct::{block_set, five_case, product, stacked, two_per_column};
use crate::error::{Error, Result};
use crate::grid::{HoleyGrid, MagicSpec};
use crate::ingredients::{DiagonalProfile, Ingredients};

/// Whether an s-diagonal `MS(m; s)` exists.
pub fn magic_square_exists(m: usize, s: usize) -> bool {
    (m == 1 && s == 1) || (3 <= s && s <= m && (s % 2 == 0 || m % 2 == 1))
}

/// Whether a full `a x b` magic rectangle exists.
pub fn classical_rectangle_exists(a: usize, b: usize) -> bool {
    (a == 1 && b == 1) || (a > 1 && b > 1 && a % 2 == b % 2 && a + b > 5)
}

/// Whether a magic rectangle set `MRS(a, b; c)` with `2 <= a <= b` exists.
pub fn rectangle_set_exists(a: usize, b: usize, c: usize) -> bool {
    2 <= a
        && a <= b
        && c >= 1
        && ((a % 2 == 1 && b % 2 == 1 && c % 2 == 1)
            || (a % 2 == 0 && b % 2 == 0 && (a, b) != (2, 2)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Route {
    Trivial,
    Classical,
    TwoPerColumn,
    Stacked,
    FiveCase,
    Product,
    BlockSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reason {
    /// `mr != ns`, `r > n` or `s > m`.
    ShapeInfeasible,
    /// `r` odd and `mr` even.
    RowSumNonIntegral,
    /// `s` odd and `mr` even.
    ColSumNonIntegral,
    /// `gcd(m, n) = 1` with empty cells.
    CoprimeHoles,
    /// `MR(m, m; 2, 2)`.
    TwoTwoSquare,
    /// Full rectangle with `m`, `n` of different parity.
    ClassicalParity,
    /// Full rectangle with a side of 1 or `m + n <= 5`.
    ClassicalSmall,
    /// One filled cell per row or column with more than one value.
    SingletonLines,
    /// `MR(2d, 3d; 3s', 2s')` with `s'` odd.
    FiveCaseParity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    /// Constructible by `route`, applied to the transposed spec when
    /// `transposed` is set.
    Exists {
        route: Route,
        transposed: bool,
    },
    NotExists(Reason),
    Unknown,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decision::Exists {
                route,
                transposed: false,
            } => write!(f, "EXISTS {route}"),
            Decision::Exists {
                route,
                transposed: true,
            } => write!(f, "EXISTS {route} transposed"),
            Decision::NotExists(reason) => write!(f, "NOT-EXISTS {reason}"),
            Decision::Unknown => f.write_str("UNKNOWN"),
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// All violated necessary conditions among `ShapeInfeasible`,
/// `RowSumNonIntegral`, `ColSumNonIntegral`, `CoprimeHoles` and
/// `TwoTwoSquare`.
pub fn necessary_conditions(m: usize, n: usize, r: usize, s: usize) -> Vec<Reason> {
    let mut out = Vec::new();
    if m == 0 || n == 0 || r == 0 || s == 0 || m * r != n * s || r > n || s > m {
        out.push(Reason::ShapeInfeasible);
    }
    let cells = m * r;
    if r % 2 == 1 && cells % 2 == 0 {
        out.push(Reason::RowSumNonIntegral);
    }
    if s % 2 == 1 && cells % 2 == 0 {
        out.push(Reason::ColSumNonIntegral);
    }
    if gcd(m, n) == 1 && r < n {
        out.push(Reason::CoprimeHoles);
    }
    if m == n && r == 2 && s == 2 && m >= 2 {
        out.push(Reason::TwoTwoSquare);
    }
    out
}

/// The gcd decomposition of a well-shaped spec.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Split {
    a: usize,
    b: usize,
    d: usize,
    /// `s / a`, when integral.
    sp: Option<usize>,
}

fn split(spec: &MagicSpec) -> Split {
    let d = gcd(spec.m, spec.n);
    let (a, b) = (spec.m / d, spec.n / d);
    let sp = (spec.s % a == 0 && spec.r % b == 0 && spec.s / a == spec.r / b).then(|| spec.s / a);
    Split { a, b, d, sp }
}

/// Whether `route` applies to `spec` as given (no transposition).
fn route_applies(route: Route, spec: &MagicSpec) -> bool {
    let MagicSpec { m, n, r, s } = *spec;
    let Split { a, b, d, sp } = split(spec);
    match route {
        Route::Trivial => (m, n, r, s) == (1, 1, 1, 1),
        Route::Classical => r == n && s == m && m > 1 && classical_rectangle_exists(m, n),
        Route::TwoPerColumn => a == 1 && s == 2 && b >= 2 && m >= 2,
        Route::Stacked => a == 1 && 3 <= s && s <= m && (s % 2 == 0 || (b * m) % 2 == 1),
        Route::FiveCase => {
            (a, b) == (2, 3) && matches!(sp, Some(sp) if sp % 2 == 0 && 2 <= sp && sp < d)
        }
        Route::Product => {
            a > 1
                && b > 1
                && classical_rectangle_exists(a, b)
                && matches!(sp, Some(sp) if sp >= 3 && sp < d && magic_square_exists(d, sp))
        }
        Route::BlockSet => sp == Some(1) && d > 1 && rectangle_set_exists(a, b, d),
    }
}

const ROUTE_PRIORITY: [Route; 7] = [
    Route::Trivial,
    Route::Classical,
    Route::TwoPerColumn,
    Route::Stacked,
    Route::FiveCase,
    Route::Product,
    Route::BlockSet,
];

/// Verdict for `MR(m, n; r, s)`.
///
/// An infeasible shape gives `NotExists` first. Full rectangles are then
/// settled by the classical criterion, so `(2, 5, 5, 2)` reports
/// `ClassicalParity` rather than the half-integral row sum that parity
/// implies. Otherwise the first violated necessary condition gives
/// `NotExists`, singleton lines are ruled out, and the routes are tried in
/// priority order. `FiveCaseParity`
/// closes the `a + b = 5` family; anything else is `Unknown`.
pub fn decide(m: usize, n: usize, r: usize, s: usize) -> Decision {
    let violations = necessary_conditions(m, n, r, s);
    if violations.contains(&Reason::ShapeInfeasible) {
        return Decision::NotExists(Reason::ShapeInfeasible);
    }
    if (m, n, r, s) == (1, 1, 1, 1) {
        return Decision::Exists {
            route: Route::Trivial,
            transposed: false,
        };
    }
    if r == n && s == m {
        if classical_rectangle_exists(m, n) {
            return Decision::Exists {
                route: Route::Classical,
                transposed: false,
            };
        }
        let reason = if m % 2 != n % 2 {
            Reason::ClassicalParity
        } else {
            Reason::ClassicalSmall
        };
        return Decision::NotExists(reason);
    }
    if let Some(&reason) = violations.first() {
        return Decision::NotExists(reason);
    }
    let spec = MagicSpec { m, n, r, s };
    if r == 1 || s == 1 {
        return Decision::NotExists(Reason::SingletonLines);
    }
    for route in ROUTE_PRIORITY {
        for (transposed, oriented) in [(false, spec), (true, spec.transposed())] {
            if route_applies(route, &oriented) {
                return Decision::Exists { route, transposed };
            }
        }
    }
    for oriented in [spec, spec.transposed()] {
        let Split { a, b, sp, .. } = split(&oriented);
        if (a, b) == (2, 3) && matches!(sp, Some(sp) if sp % 2 == 1) {
            return Decision::NotExists(Reason::FiveCaseParity);
        }
    }
    Decision::Unknown
}

/// Builds an `MR(m, n; r, s)` along the route chosen by [`decide`].
pub fn realize(
    m: usize,
    n: usize,
    r: usize,
    s: usize,
    ingredients: &mut Ingredients,
) -> Result<HoleyGrid> {
    match decide(m, n, r, s) {
        Decision::Exists { route, transposed } => {
            let spec = MagicSpec::new(m, n, r, s)?;
            if transposed {
                Ok(build(route, &spec.transposed(), ingredients)?.transpose())
            } else {
                build(route, &spec, ingredients)
            }
        }
        other => Err(Error::not_constructible(format!(
            "MR({m},{n};{r},{s}): {other}"
        ))),
    }
}

fn build(route: Route, spec: &MagicSpec, ingredients: &mut Ingredients) -> Result<HoleyGrid> {
    let MagicSpec { m, n, s, .. } = *spec;
    let Split { a, b, d, sp } = split(spec);
    let sp = sp.unwrap_or(0);
    match route {
        Route::Trivial => stacked(1, 1, 1, None),
        Route::Classical => ingredients.classical_rectangle(m, n),
        Route::TwoPerColumn => two_per_column(m, n / m),
        Route::Stacked => {
            let square = ingredients.magic_square_holes(m, s, None)?;
            stacked(m, n / m, s, Some(&square))
        }
        Route::FiveCase => {
            let profile = DiagonalProfile::low_blocks(sp / 2, 2 * d);
            let square = ingredients.magic_square_holes(2 * d, 2 * sp, Some(&profile))?;
            let strip = if sp == 2 {
                two_per_column(d, 2)?
            } else {
                let small = ingredients.magic_square_holes(d, sp, None)?;
                stacked(d, 2, sp, Some(&small))?
            };
            five_case(d, sp, &square, &strip)
        }
        Route::Product => {
            let square = ingredients.magic_square_holes(d, sp, None)?;
            let rect = ingredients.classical_rectangle(a, b)?;
            product(&square, &rect)
        }
        Route::BlockSet => {
            let set = ingredients.magic_rectangle_set(a, b, d)?;
            block_set(a, b, d, &set)
        }
    }
}
