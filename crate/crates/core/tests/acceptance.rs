//! Acceptance suite. Runs each criterion once, prints one PASS/FAIL line per
//! criterion and exits non-zero if any failed.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use holey_core::construct::{block_set, five_case, nmss, product, stacked, two_per_column};
use holey_core::grid::{diagonal_support, is_consecutive_run};
use holey_core::kotzig::{base_triple, kotzig, KotzigArray};
use holey_core::oracle::{enumerate, exists_brute};
use holey_core::{
    decide, parse, realize, serialize, verify, BruteVerdict, Decision, Error, HoleyGrid,
    Ingredients, MagicSpec,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

/// Per-ingredient search budget for the constructive sweep.
const SWEEP_BUDGET: u64 = 2_000_000;

type Outcome = Result<String, String>;

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn well_shaped(max_cells: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for m in 1..=max_cells {
        for r in 1..=max_cells / m {
            let cells = m * r;
            for s in 1..=m {
                if cells % s == 0 {
                    let n = cells / s;
                    if r <= n {
                        out.push((m, n, r, s));
                    }
                }
            }
        }
    }
    out
}

fn constants(grid: &HoleyGrid, spec: &MagicSpec) -> Result<(u64, u64), String> {
    let report = verify(grid, spec).map_err(err)?;
    match (report.ok, report.row_constant, report.col_constant) {
        (true, Some(row), Some(col)) => Ok((row, col)),
        _ => Err(format!("{spec}: {report}")),
    }
}

fn golden_arrays() -> Outcome {
    let s0 = parse(&golden("ms_5_3.mrx")).map_err(err)?;
    let square = parse(&golden("ms_6_4.mrx")).map_err(err)?;
    let strip = parse(&golden("mr_3_6_4_2.mrx")).map_err(err)?;
    let cases: Vec<(&str, Box<dyn Fn() -> Result<String, Error>>)> = vec![
        (
            "mr_5_10_4_2.mrx",
            Box::new(|| two_per_column(5, 2).map(|g| serialize(&g))),
        ),
        (
            "mr_4_12_6_2.mrx",
            Box::new(|| two_per_column(4, 3).map(|g| serialize(&g))),
        ),
        (
            "mr_3_6_4_2.mrx",
            Box::new(|| two_per_column(3, 2).map(|g| serialize(&g))),
        ),
        (
            "kotzig_3_9.txt",
            Box::new(|| kotzig(3, 9).map(|a| a.to_string())),
        ),
        (
            "triple_5.txt",
            Box::new(|| base_triple(5).map(|a| a.to_string())),
        ),
        (
            "mr_6_9_6_4.mrx",
            Box::new(|| five_case(3, 2, &square, &strip).map(|g| serialize(&g))),
        ),
        (
            "mr_5_25_15_3.mrx",
            Box::new(|| stacked(5, 5, 3, Some(&s0)).map(|g| serialize(&g))),
        ),
    ];
    for (name, build) in &cases {
        let start = Instant::now();
        let got = build().map_err(err)?;
        let expected = golden(name);
        let tokens = |t: &str| t.split_whitespace().map(str::to_string).collect::<Vec<_>>();
        ensure(got == expected && tokens(&got) == tokens(&expected), || {
            format!("{name} differs:\n{got}")
        })?;
        ensure(start.elapsed() < Duration::from_secs(1), || {
            format!("{name} took {:?}", start.elapsed())
        })?;
    }
    Ok(format!("{} arrays", cases.len()))
}

fn constant_formulas() -> Outcome {
    let mut checked = 0;
    for m in 2..=8 {
        for k in 2..=6 {
            let spec = MagicSpec::new(m, k * m, 2 * k, 2).map_err(err)?;
            let got = constants(&two_per_column(m, k).map_err(err)?, &spec)?;
            let expected = ((k * (2 * k * m - 1)) as u64, (2 * k * m - 1) as u64);
            ensure(got == expected, || {
                format!("two_per_column({m},{k}): {got:?} != {expected:?}")
            })?;
            checked += 1;
        }
    }
    let mut ingredients = Ingredients::new();
    for m in 3..=6 {
        for s in 3..=m {
            for k in 1..=4 {
                if s % 2 == 1 && (k * m) % 2 == 0 {
                    continue;
                }
                let square = ingredients.magic_square_holes(m, s, None).map_err(err)?;
                let spec = MagicSpec::new(m, k * m, k * s, s).map_err(err)?;
                let got = constants(&stacked(m, k, s, Some(&square)).map_err(err)?, &spec)?;
                let kms = k * m * s;
                let expected = ((k * s * (kms - 1) / 2) as u64, (s * (kms - 1) / 2) as u64);
                ensure(got == expected, || {
                    format!("stacked({m},{k},{s}): {got:?} != {expected:?}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} parameter sets"))
}

fn nmss_sets() -> Outcome {
    let mut ingredients = Ingredients::new();
    for (m, s, t) in [(5, 3, 5), (4, 4, 2), (5, 4, 3), (7, 3, 3)] {
        let square = ingredients.magic_square_holes(m, s, None).map_err(err)?;
        let result = nmss(m, s, t, &square).map_err(err)?;
        let label = format!("NMSS({m},{s};{t})");
        ensure(result.squares.len() == t, || {
            format!("{label}: {} squares", result.squares.len())
        })?;
        let expected_c = (s * (m * s * t - 1) / 2) as u64;
        ensure(result.constant == expected_c, || {
            format!("{label}: constant {}", result.constant)
        })?;
        let mut values = Vec::new();
        for sq in &result.squares {
            values.extend(sq.filled().map(|(_, _, v)| v));
            let lines_ok = sq
                .row_sums()
                .iter()
                .chain(sq.col_sums().iter())
                .all(|&x| x == expected_c);
            ensure(lines_ok, || {
                format!("{label}: line sums {:?} {:?}", sq.row_sums(), sq.col_sums())
            })?;
            let support = diagonal_support(sq).map_err(err)?;
            ensure(is_consecutive_run(&support, m, s), || {
                format!("{label}: support {support:?}")
            })?;
        }
        values.sort_unstable();
        ensure(
            values == (0..(m * s * t) as u64).collect::<Vec<_>>(),
            || format!("{label}: values not a partition"),
        )?;
    }
    Ok("4 sets".into())
}

fn products() -> Outcome {
    let mut ingredients = Ingredients::new();
    for ((m, s), (a, b)) in [((5, 3), (3, 5)), ((6, 4), (2, 4)), ((5, 3), (3, 3))] {
        let square = ingredients.magic_square_holes(m, s, None).map_err(err)?;
        let rect = ingredients.classical_rectangle(a, b).map_err(err)?;
        let spec = MagicSpec::new(a * m, b * m, b * s, a * s).map_err(err)?;
        let got = constants(&product(&square, &rect).map_err(err)?, &spec)?;
        let t = (a * b * m * s - 1) as u64;
        let expected = (t * (b * s) as u64 / 2, t * (a * s) as u64 / 2);
        ensure(got == expected, || {
            format!("MS({m};{s}) x {a}x{b}: {got:?} != {expected:?}")
        })?;
    }
    Ok("3 pairs".into())
}

fn block_sets() -> Outcome {
    let mut ingredients = Ingredients::new();
    for (a, b, c) in [(3, 3, 3), (2, 4, 2)] {
        let set = ingredients.magic_rectangle_set(a, b, c).map_err(err)?;
        let spec = MagicSpec::new(a * c, b * c, b, a).map_err(err)?;
        let got = constants(&block_set(a, b, c, &set).map_err(err)?, &spec)?;
        let t = (a * b * c - 1) as u64;
        let expected = (b as u64 * t / 2, a as u64 * t / 2);
        ensure(got == expected, || {
            format!("MRS({a},{b};{c}): {got:?} != {expected:?}")
        })?;
    }
    Ok("2 sets".into())
}

fn oracle_ground_truth() -> Outcome {
    let budget = holey_core::oracle::DEFAULT_NODE_BUDGET;
    let cases = [
        ((3, 3, 2, 2), false),
        ((4, 4, 2, 2), false),
        ((2, 3, 3, 2), false),
        ((4, 6, 3, 2), false),
        ((2, 4, 4, 2), true),
        ((1, 1, 1, 1), true),
    ];
    for ((m, n, r, s), exists) in cases {
        let start = Instant::now();
        let result = enumerate(m, n, r, s, 1, budget).map_err(err)?;
        let label = format!("MR({m},{n};{r},{s})");
        if exists {
            ensure(result.count >= 1, || format!("{label}: no witness"))?;
            let spec = MagicSpec::new(m, n, r, s).map_err(err)?;
            constants(&result.witnesses[0], &spec)?;
        } else {
            ensure(result.exhausted && result.count == 0, || {
                format!("{label}: {result:?}")
            })?;
        }
        ensure(start.elapsed() < Duration::from_secs(60), || {
            format!("{label} took {:?}", start.elapsed())
        })?;
    }
    Ok("6 cases".into())
}

fn decide_matches_oracle() -> Outcome {
    let (mut agree, mut unknown, mut inconclusive) = (0, 0, 0);
    for (m, n, r, s) in well_shaped(12) {
        let decision = decide(m, n, r, s);
        let brute = exists_brute(m, n, r, s).map_err(err)?;
        let label = format!("MR({m},{n};{r},{s})");
        match (&decision, brute) {
            (_, BruteVerdict::Inconclusive) => inconclusive += 1,
            (Decision::Exists { .. }, BruteVerdict::No)
            | (Decision::NotExists(_), BruteVerdict::Yes) => {
                return Err(format!(
                    "{label}: decide says {decision}, oracle says {brute:?}"
                ));
            }
            (Decision::Unknown, _) => unknown += 1,
            _ => agree += 1,
        }
    }
    Ok(format!(
        "{agree} agree, {unknown} unknown, {inconclusive} oracle-inconclusive"
    ))
}

fn constructive_honesty() -> Outcome {
    let mut ingredients = Ingredients::new().with_budget(SWEEP_BUDGET);
    let (mut built, mut unreached) = (0, 0);
    for (m, n, r, s) in well_shaped(200) {
        if !matches!(decide(m, n, r, s), Decision::Exists { .. }) {
            continue;
        }
        let label = format!("MR({m},{n};{r},{s})");
        match realize(m, n, r, s, &mut ingredients) {
            Ok(grid) => {
                let spec = MagicSpec::new(m, n, r, s).map_err(err)?;
                constants(&grid, &spec).map_err(|e| format!("{label}: {e}"))?;
                built += 1;
            }
            Err(Error::SearchBudgetExceeded { .. }) => unreached += 1,
            Err(e) => return Err(format!("{label}: {e}")),
        }
    }
    Ok(format!(
        "{built} built and verified, {unreached} need ingredients beyond the search budget"
    ))
}

fn naive_ok(grid: &HoleyGrid, m: usize, n: usize, r: usize, s: usize) -> bool {
    let cells = (m * r) as u64;
    let mut values: Vec<u64> = grid.filled().map(|(_, _, v)| v).collect();
    values.sort_unstable();
    if values != (0..cells).collect::<Vec<_>>() {
        return false;
    }
    let total = cells * (cells - 1) / 2;
    for i in 0..m {
        let row: Vec<u64> = (0..n).filter_map(|j| grid.get(i, j)).collect();
        if row.len() != r || row.iter().sum::<u64>() * m as u64 != total {
            return false;
        }
    }
    for j in 0..n {
        let col: Vec<u64> = (0..m).filter_map(|i| grid.get(i, j)).collect();
        if col.len() != s || col.iter().sum::<u64>() * n as u64 != total {
            return false;
        }
    }
    true
}

fn grid_strategy() -> impl Strategy<Value = HoleyGrid> {
    (1usize..8, 1usize..8)
        .prop_flat_map(|(rows, cols)| {
            proptest::collection::vec(proptest::option::of(0u64..1_000_000), rows * cols)
                .prop_map(move |cells| (cols, cells))
        })
        .prop_map(|(cols, cells)| {
            let rows = cells.chunks(cols).map(<[_]>::to_vec).collect();
            HoleyGrid::from_rows(rows).unwrap()
        })
}

#[derive(Clone, Debug)]
enum Mutation {
    Keep,
    Swap(usize, usize),
    Bump(usize, u64),
    Clear(usize),
    Move(usize, usize),
}

fn mutation_strategy() -> impl Strategy<Value = Mutation> {
    prop_oneof![
        1 => Just(Mutation::Keep),
        3 => (any::<usize>(), any::<usize>()).prop_map(|(a, b)| Mutation::Swap(a, b)),
        2 => (any::<usize>(), 1u64..4).prop_map(|(a, d)| Mutation::Bump(a, d)),
        1 => any::<usize>().prop_map(Mutation::Clear),
        2 => (any::<usize>(), any::<usize>()).prop_map(|(a, b)| Mutation::Move(a, b)),
    ]
}

fn mutate(grid: &HoleyGrid, mutation: &Mutation) -> HoleyGrid {
    let mut g = grid.clone();
    let cells = g.rows() * g.cols();
    let at = |idx: usize| (idx % cells / g.cols(), idx % cells % g.cols());
    match *mutation {
        Mutation::Keep => {}
        Mutation::Swap(a, b) => {
            let (pa, pb) = (at(a), at(b));
            let (va, vb) = (g.get(pa.0, pa.1), g.get(pb.0, pb.1));
            g.set(pa.0, pa.1, vb);
            g.set(pb.0, pb.1, va);
        }
        Mutation::Bump(a, d) => {
            let p = at(a);
            g.set(p.0, p.1, Some(g.get(p.0, p.1).map_or(0, |v| v + d)));
        }
        Mutation::Clear(a) => {
            let p = at(a);
            g.set(p.0, p.1, None);
        }
        Mutation::Move(a, b) => {
            let (pa, pb) = (at(a), at(b));
            let v = g.get(pa.0, pa.1);
            g.set(pa.0, pa.1, None);
            g.set(pb.0, pb.1, v);
        }
    }
    g
}

fn properties() -> Outcome {
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&grid_strategy(), |grid| {
            prop_assert_eq!(parse(&serialize(&grid)).unwrap(), grid);
            Ok(())
        })
        .map_err(|e| format!("MRX round trip: {e}"))?;

    let mut ingredients = Ingredients::new();
    let specs = [
        (5, 10, 4, 2),
        (4, 12, 6, 2),
        (5, 25, 15, 3),
        (6, 9, 6, 4),
        (3, 5, 5, 3),
        (9, 15, 5, 3),
        (7, 7, 3, 3),
    ];
    let bases: Vec<((usize, usize, usize, usize), HoleyGrid)> = specs
        .iter()
        .map(|&(m, n, r, s)| realize(m, n, r, s, &mut ingredients).map(|g| ((m, n, r, s), g)))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(
            &(0..bases.len(), mutation_strategy()),
            |(which, mutation)| {
                let ((m, n, r, s), base) = &bases[which];
                let grid = mutate(base, &mutation);
                let report = verify(&grid, &MagicSpec::new(*m, *n, *r, *s).unwrap()).unwrap();
                prop_assert_eq!(report.ok, naive_ok(&grid, *m, *n, *r, *s), "{:?}", mutation);
                Ok(())
            },
        )
        .map_err(|e| format!("verifier agreement: {e}"))?;

    for s in 1..=10 {
        for k in 1..=11 {
            let expected = (s % 2 == 0 || k % 2 == 1) && (s > 1 || k == 1);
            match kotzig(s, k) {
                Ok(array) => {
                    ensure(expected, || format!("kotzig({s},{k}) should not exist"))?;
                    KotzigArray::from_rows(array.rows().to_vec()).map_err(err)?;
                    ensure((array.s(), array.k()) == (s, k), || {
                        format!("kotzig({s},{k}) has wrong shape")
                    })?;
                    for row in array.rows() {
                        let set: BTreeSet<usize> = row.iter().copied().collect();
                        ensure(set == (0..k).collect(), || {
                            format!("kotzig({s},{k}): row {row:?}")
                        })?;
                    }
                    let sums_ok = array.column_sums().iter().all(|&c| 2 * c == s * (k - 1));
                    ensure(sums_ok, || {
                        format!("kotzig({s},{k}): column sums {:?}", array.column_sums())
                    })?;
                }
                Err(_) => ensure(!expected, || format!("kotzig({s},{k}) should exist"))?,
            }
        }
    }
    Ok("1000 round trips, 1000 mutants, 110 Kotzig shapes".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, u64); 9] = [
        ("golden arrays", golden_arrays, 7),
        ("constant formulas", constant_formulas, 10),
        ("nonconsecutive square sets", nmss_sets, 5),
        ("product construction", products, 10),
        ("block set construction", block_sets, 60),
        ("oracle ground truth", oracle_ground_truth, 360),
        ("decide agrees with oracle", decide_matches_oracle, 600),
        ("constructive honesty", constructive_honesty, 300),
        ("property suite", properties, 30),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            ensure(elapsed <= Duration::from_secs(*limit), || {
                format!("took {elapsed:.1?}, limit {limit} s")
            })?;
            Ok(detail)
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail}; {elapsed:.2?})", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {reason}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
