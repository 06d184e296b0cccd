//! On-disk ingredient cache.
//!
//! The file is a sequence of records, each a `KEY <kind> <params> <profile>`
//! line followed by one MRX block per member grid:
//!
//! ```text
//! KEY ms 5,3 none
//! 5 5
//! . . 2 10 9
//! ...
//! ```
//!
//! Stores rewrite the whole file through a temporary sibling and a rename,
//! so readers never see a partially written file.

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use super::profile::DiagonalProfile;
use crate::error::{Error, Result};
use crate::grid::mrx::Reader;
use crate::grid::{
    diagonal_support, is_consecutive_run, serialize, verify, verify_set, HoleyGrid, MagicSpec,
};

/// What an ingredient is: its kind, parameters and diagonal profile.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IngredientKey {
    /// An s-diagonal `MS(m; s)`.
    MagicSquare {
        m: usize,
        s: usize,
        profile: DiagonalProfile,
    },
    /// A full `a x b` magic rectangle.
    Classical { a: usize, b: usize },
    /// A magic rectangle set `MRS(a, b; c)`.
    RectangleSet { a: usize, b: usize, c: usize },
}

impl IngredientKey {
    pub fn kind(&self) -> &'static str {
        match self {
            IngredientKey::MagicSquare { .. } => "ms",
            IngredientKey::Classical { .. } => "mr",
            IngredientKey::RectangleSet { .. } => "mrs",
        }
    }

    fn params(&self) -> String {
        match self {
            IngredientKey::MagicSquare { m, s, .. } => format!("{m},{s}"),
            IngredientKey::Classical { a, b } => format!("{a},{b}"),
            IngredientKey::RectangleSet { a, b, c } => format!("{a},{b},{c}"),
        }
    }

    fn profile_tag(&self) -> String {
        match self {
            IngredientKey::MagicSquare { profile, .. } => profile.tag(),
            _ => DiagonalProfile::none().tag(),
        }
    }

    /// Number of grids a record for this key holds.
    pub fn member_count(&self) -> usize {
        match self {
            IngredientKey::RectangleSet { c, .. } => *c,
            _ => 1,
        }
    }

    pub fn header(&self) -> String {
        format!(
            "KEY {} {} {}",
            self.kind(),
            self.params(),
            self.profile_tag()
        )
    }

    pub fn parse_header(line: &str, line_no: usize) -> Result<Self> {
        let bad = |msg: &str| Error::parse(line_no, format!("{msg}: {line:?}"));
        let fields: Vec<&str> = line.split(' ').collect();
        if fields.len() != 4 || fields[0] != "KEY" {
            return Err(bad("expected \"KEY <kind> <params> <profile>\""));
        }
        let params = fields[2]
            .split(',')
            .map(|p| p.parse::<usize>().map_err(|_| bad("invalid parameter")))
            .collect::<Result<Vec<_>>>()?;
        let profile = DiagonalProfile::from_tag(fields[3]).map_err(|_| bad("invalid profile"))?;
        match (fields[1], params.as_slice()) {
            ("ms", &[m, s]) => Ok(IngredientKey::MagicSquare { m, s, profile }),
            ("mr", &[a, b]) if profile.is_empty() => Ok(IngredientKey::Classical { a, b }),
            ("mrs", &[a, b, c]) if profile.is_empty() => {
                Ok(IngredientKey::RectangleSet { a, b, c })
            }
            _ => Err(bad("unknown kind or parameter count")),
        }
    }

    /// Full validity check of a candidate ingredient.
    pub fn check(&self, grids: &[HoleyGrid]) -> std::result::Result<(), String> {
        if grids.len() != self.member_count() {
            return Err(format!(
                "expected {} grids, got {}",
                self.member_count(),
                grids.len()
            ));
        }
        match self {
            IngredientKey::MagicSquare { m, s, profile } => {
                let grid = &grids[0];
                let spec = MagicSpec::square(*m, *s).map_err(|e| e.to_string())?;
                let report = verify(grid, &spec).map_err(|e| e.to_string())?;
                if !report.ok {
                    return Err(report.to_string());
                }
                let support = diagonal_support(grid).map_err(|e| e.to_string())?;
                if !is_consecutive_run(&support, *m, *s) {
                    return Err(format!("not {s}-diagonal: support {support:?}"));
                }
                if !profile.is_satisfied_by(grid) {
                    return Err(format!("diagonal profile {profile} not met"));
                }
                Ok(())
            }
            IngredientKey::Classical { a, b } => {
                let spec = MagicSpec::full(*a, *b).map_err(|e| e.to_string())?;
                let report = verify(&grids[0], &spec).map_err(|e| e.to_string())?;
                report.ok.then_some(()).ok_or_else(|| report.to_string())
            }
            IngredientKey::RectangleSet { a, b, .. } => {
                let spec = MagicSpec::full(*a, *b).map_err(|e| e.to_string())?;
                let report = verify_set(grids, &spec).map_err(|e| e.to_string())?;
                report
                    .ok
                    .then_some(())
                    .ok_or_else(|| format!("{:?}", report.failures))
            }
        }
    }
}

impl fmt::Display for IngredientKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}",
            self.kind(),
            self.params(),
            self.profile_tag()
        )
    }
}

#[derive(Clone, Debug)]
pub struct IngredientCache {
    path: PathBuf,
}

type Record = (IngredientKey, Vec<HoleyGrid>);

impl IngredientCache {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        IngredientCache { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn io_error(&self, source: io::Error) -> Error {
        Error::Cache {
            path: self.path.clone(),
            source,
        }
    }

    fn read_records(&self) -> Result<Vec<Record>> {
        let text = match fs::read_to_string(&self.path) {
            Ok(text) => text,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(self.io_error(e)),
        };
        if text.is_empty() {
            return Ok(Vec::new());
        }
        let corrupt = |e: Error| Error::CorruptCache {
            key: self.path.display().to_string(),
            reason: e.to_string(),
        };
        let mut reader = Reader::new(&text).map_err(corrupt)?;
        let mut records = Vec::new();
        while let Some((line_no, line)) = reader.next_line() {
            let key = IngredientKey::parse_header(line, line_no).map_err(corrupt)?;
            let grids = (0..key.member_count())
                .map(|_| reader.next_grid())
                .collect::<Result<Vec<_>>>()
                .map_err(corrupt)?;
            records.push((key, grids));
        }
        Ok(records)
    }

    /// Looks up `key`. A missing file or entry is a miss; an entry that no
    /// longer verifies is [`Error::CorruptCache`].
    pub fn load(&self, key: &IngredientKey) -> Result<Option<Vec<HoleyGrid>>> {
        let records = self.read_records()?;
        let Some((_, grids)) = records.into_iter().rev().find(|(k, _)| k == key) else {
            return Ok(None);
        };
        key.check(&grids).map_err(|reason| Error::CorruptCache {
            key: key.to_string(),
            reason,
        })?;
        Ok(Some(grids))
    }

    /// Inserts or replaces the entry for `key`.
    pub fn store(&self, key: &IngredientKey, grids: &[HoleyGrid]) -> Result<()> {
        key.check(grids).map_err(|reason| {
            Error::bad_ingredient(format!("refusing to cache {key}: {reason}"))
        })?;
        let mut records = self.read_records()?;
        records.retain(|(k, _)| k != key);
        records.push((key.clone(), grids.to_vec()));

        let mut text = String::new();
        for (k, gs) in &records {
            text.push_str(&k.header());
            text.push('\n');
            for g in gs {
                text.push_str(&serialize(g));
            }
        }
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| self.io_error(e))?;
        }
        let mut tmp_name = self.path.file_name().unwrap_or_default().to_os_string();
        tmp_name.push(format!(".tmp{}", std::process::id()));
        let tmp = self.path.with_file_name(tmp_name);
        fs::write(&tmp, text).map_err(|e| self.io_error(e))?;
        fs::rename(&tmp, &self.path).map_err(|e| self.io_error(e))
    }
}
