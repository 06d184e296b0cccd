//! `holey`: construct, verify and search magic rectangles with empty cells.
//!
//! Grids are read and written in the MRX text format. Exit status is 0 on
//! success, 1 when something does not exist, fails to verify or cannot be
//! built, and 2 on a usage error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use holey_core::construct;
use holey_core::kotzig::kotzig;
use holey_core::oracle::{enumerate_with, EnumerationOptions};
use holey_core::{
    decide, parse, parse_many, realize, serialize, verify, Decision, DiagonalProfile, HoleyGrid,
    Ingredients, MagicSpec,
};

#[derive(Parser)]
#[command(name = "holey", version, about = "Magic rectangles with empty cells")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a grid with one of the explicit constructions.
    Construct {
        #[command(subcommand)]
        which: Construction,
    },
    /// Check an MRX grid against MR(m, n; r, s).
    Verify {
        /// MRX file; standard input when omitted.
        path: Option<PathBuf>,
        #[arg(long, num_args = 4, value_names = ["M", "N", "R", "S"], required = true)]
        spec: Vec<usize>,
    },
    /// Existence verdict for MR(m, n; r, s).
    Decide(Shape),
    /// Exhaustive enumeration for small parameters.
    Oracle {
        #[command(flatten)]
        shape: Shape,
        /// Number of witnesses to print.
        #[arg(long, default_value_t = 0)]
        cap: usize,
        /// Node budget.
        #[arg(long, default_value_t = holey_core::oracle::DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// Largest m*r accepted.
        #[arg(long, default_value_t = holey_core::oracle::DEFAULT_MAX_CELLS)]
        max_cells: u64,
    },
    /// Print the Kotzig array with s rows and k columns.
    Kotzig {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        k: usize,
    },
    /// Fetch or search for an ingredient.
    Ingredient {
        #[command(subcommand)]
        which: IngredientKind,
        #[command(flatten)]
        source: Source,
    },
}

#[derive(Args)]
struct Shape {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    s: usize,
}

#[derive(Args)]
struct Source {
    /// Ingredient cache file.
    #[arg(long, env = "HOLEY_CACHE", global = true)]
    cache: Option<PathBuf>,
    /// Search budget per ingredient, in nodes.
    #[arg(long, default_value_t = holey_core::ingredients::DEFAULT_BUDGET, global = true)]
    budget: u64,
}

impl Source {
    fn ingredients(&self) -> Ingredients {
        let ingredients = Ingredients::new().with_budget(self.budget);
        match &self.cache {
            Some(path) => ingredients.with_cache(path),
            None => ingredients,
        }
    }
}

#[derive(Subcommand)]
enum Construction {
    /// MR(m, km; 2k, 2).
    TwoPerColumn {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
    },
    /// MR(m, km; ks, s) from an s-diagonal MS(m; s).
    Stacked {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        s: usize,
        /// MRX file holding the MS(m; s).
        #[arg(long)]
        square: Option<PathBuf>,
        #[command(flatten)]
        source: Source,
    },
    /// t squares MS(m; s) jointly holding 0..mst.
    Nmss {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        square: Option<PathBuf>,
        #[command(flatten)]
        source: Source,
    },
    /// MR(am, bm; bs, as) from an MS(m; s) and an a x b magic rectangle.
    Product {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        square: Option<PathBuf>,
        #[arg(long)]
        rect: Option<PathBuf>,
        #[command(flatten)]
        source: Source,
    },
    /// MR(2m, 3m; 3s, 2s) for even s.
    FiveCase {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        s: usize,
        /// MRX file holding the MS(2m; 2s).
        #[arg(long)]
        square: Option<PathBuf>,
        /// MRX file holding the MR(m, 2m; 2s, s).
        #[arg(long)]
        strip: Option<PathBuf>,
        #[command(flatten)]
        source: Source,
    },
    /// MR(ac, bc; b, a) from a magic rectangle set.
    BlockSet {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        c: usize,
        /// MRX file holding the c members of the set.
        #[arg(long)]
        set: Option<PathBuf>,
        #[command(flatten)]
        source: Source,
    },
    /// Whatever route the existence verdict picks.
    Auto {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        source: Source,
    },
}

#[derive(Subcommand)]
enum IngredientKind {
    /// s-diagonal MS(m; s).
    Ms {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        s: usize,
        /// Require this many full diagonals holding 0..q*m.
        #[arg(long)]
        low_blocks: Option<usize>,
    },
    /// Full a x b magic rectangle.
    Mr {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
    },
    /// Magic rectangle set MRS(a, b; c).
    Mrs {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        c: usize,
    },
}

fn read_text(path: Option<&Path>) -> Result<String> {
    match path {
        Some(path) => {
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
        }
        None => {
            let mut text = String::new();
            io::stdin()
                .read_to_string(&mut text)
                .context("reading standard input")?;
            Ok(text)
        }
    }
}

fn read_grid(path: &Path) -> Result<HoleyGrid> {
    parse(&read_text(Some(path))?).with_context(|| format!("parsing {}", path.display()))
}

fn square_or_search(
    path: &Option<PathBuf>,
    m: usize,
    s: usize,
    source: &Source,
) -> Result<HoleyGrid> {
    match path {
        Some(path) => read_grid(path),
        None => Ok(source.ingredients().magic_square_holes(m, s, None)?),
    }
}

fn grids_text(grids: &[HoleyGrid]) -> String {
    grids.iter().map(serialize).collect()
}

fn run_construct(which: Construction) -> Result<String> {
    let grid = match which {
        Construction::TwoPerColumn { m, k } => construct::two_per_column(m, k)?,
        Construction::Stacked {
            m,
            k,
            s,
            square,
            source,
        } => {
            if s == 2 {
                construct::stacked(m, k, s, None)?
            } else {
                let square = square_or_search(&square, m, s, &source)?;
                construct::stacked(m, k, s, Some(&square))?
            }
        }
        Construction::Nmss {
            m,
            s,
            t,
            square,
            source,
        } => {
            let square = square_or_search(&square, m, s, &source)?;
            return Ok(grids_text(&construct::nmss(m, s, t, &square)?.squares));
        }
        Construction::Product {
            m,
            s,
            a,
            b,
            square,
            rect,
            source,
        } => {
            let square = square_or_search(&square, m, s, &source)?;
            let rect = match rect {
                Some(path) => read_grid(&path)?,
                None => source.ingredients().classical_rectangle(a, b)?,
            };
            construct::product(&square, &rect)?
        }
        Construction::FiveCase {
            m,
            s,
            square,
            strip,
            source,
        } => {
            if s == 0 || s % 2 == 1 {
                bail!("five-case needs a positive even s, got {s}");
            }
            let mut ingredients = source.ingredients();
            let square = match square {
                Some(path) => read_grid(&path)?,
                None => {
                    let profile = DiagonalProfile::low_blocks(s / 2, 2 * m);
                    ingredients.magic_square_holes(2 * m, 2 * s, Some(&profile))?
                }
            };
            let strip = match strip {
                Some(path) => read_grid(&path)?,
                None if s == 2 => construct::two_per_column(m, 2)?,
                None => {
                    let small = ingredients.magic_square_holes(m, s, None)?;
                    construct::stacked(m, 2, s, Some(&small))?
                }
            };
            construct::five_case(m, s, &square, &strip)?
        }
        Construction::BlockSet {
            a,
            b,
            c,
            set,
            source,
        } => {
            let set = match set {
                Some(path) => parse_many(&read_text(Some(&path))?)?,
                None => source.ingredients().magic_rectangle_set(a, b, c)?,
            };
            construct::block_set(a, b, c, &set)?
        }
        Construction::Auto { shape, source } => {
            let Shape { m, n, r, s } = shape;
            realize(m, n, r, s, &mut source.ingredients())?
        }
    };
    Ok(serialize(&grid))
}

fn run_ingredient(which: IngredientKind, source: Source) -> Result<String> {
    let mut ingredients = source.ingredients();
    let grids = match which {
        IngredientKind::Ms { m, s, low_blocks } => {
            let profile = low_blocks.map(|q| DiagonalProfile::low_blocks(q, m));
            vec![ingredients.magic_square_holes(m, s, profile.as_ref())?]
        }
        IngredientKind::Mr { a, b } => vec![ingredients.classical_rectangle(a, b)?],
        IngredientKind::Mrs { a, b, c } => ingredients.magic_rectangle_set(a, b, c)?,
    };
    Ok(grids_text(&grids))
}

/// Output text and whether the command succeeded.
fn run(command: Command) -> Result<(String, bool)> {
    match command {
        Command::Construct { which } => Ok((run_construct(which)?, true)),
        Command::Verify { path, spec } => {
            let spec = MagicSpec::new(spec[0], spec[1], spec[2], spec[3])?;
            let text = read_text(path.as_deref())?;
            let grid = parse(&text)?;
            let report = verify(&grid, &spec)?;
            Ok((format!("{report}\n"), report.ok))
        }
        Command::Decide(Shape { m, n, r, s }) => {
            let decision = decide(m, n, r, s);
            let ok = !matches!(decision, Decision::NotExists(_));
            Ok((format!("{decision}\n"), ok))
        }
        Command::Oracle {
            shape,
            cap,
            budget,
            max_cells,
        } => {
            let Shape { m, n, r, s } = shape;
            let options = EnumerationOptions {
                witness_cap: cap,
                node_budget: budget,
                max_cells,
                ..EnumerationOptions::default()
            };
            let result = enumerate_with(m, n, r, s, &options)?;
            let mut out = format!(
                "count={} exhausted={} nodes={}\n",
                result.count, result.exhausted, result.nodes
            );
            out.push_str(&grids_text(&result.witnesses));
            Ok((out, true))
        }
        Command::Kotzig { s, k } => Ok((kotzig(s, k)?.to_string(), true)),
        Command::Ingredient { which, source } => Ok((run_ingredient(which, source)?, true)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((out, ok)) => {
            let mut stdout = io::stdout().lock();
            if stdout
                .write_all(out.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::FAILURE;
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
