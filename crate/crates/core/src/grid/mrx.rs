//! MRX, the plain-text grid format.
//!
//! ```text
//! 2 2
//! 3 .
//! . 0
//! ```
//!
//! The header holds the row and column counts; each following line holds
//! one row as single-space separated tokens, `.` for an empty cell. Every
//! line, including the last, ends in `\n`.

use std::fmt::Write;

use super::HoleyGrid;
use crate::error::{Error, Result};

pub const EMPTY_TOKEN: &str = ".";

pub fn serialize(grid: &HoleyGrid) -> String {
    let mut out = String::with_capacity(grid.rows() * grid.cols() * 3 + 8);
    writeln!(out, "{} {}", grid.rows(), grid.cols()).unwrap();
    for i in 0..grid.rows() {
        for (j, cell) in grid.row(i).iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            match cell {
                Some(v) => write!(out, "{v}").unwrap(),
                None => out.push_str(EMPTY_TOKEN),
            }
        }
        out.push('\n');
    }
    out
}

/// Parses exactly one MRX grid; trailing content is an error.
pub fn parse(text: &str) -> Result<HoleyGrid> {
    let mut reader = Reader::new(text)?;
    let grid = reader.next_grid()?;
    if let Some(line) = reader.remaining_line() {
        return Err(Error::parse(line, "unexpected content after grid"));
    }
    Ok(grid)
}

/// Parses a concatenation of MRX grids.
pub fn parse_many(text: &str) -> Result<Vec<HoleyGrid>> {
    let mut reader = Reader::new(text)?;
    let mut grids = Vec::new();
    while reader.remaining_line().is_some() {
        grids.push(reader.next_grid()?);
    }
    Ok(grids)
}

/// Line-oriented cursor shared with the cache reader. Line numbers are
/// 1-based and absolute within the original text.
pub(crate) struct Reader<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Reader<'a> {
    pub(crate) fn new(text: &'a str) -> Result<Self> {
        if text.is_empty() {
            return Err(Error::parse(1, "empty input"));
        }
        if !text.ends_with('\n') {
            let line = text.split('\n').count();
            return Err(Error::parse(line, "missing trailing newline"));
        }
        let lines: Vec<&str> = text[..text.len() - 1].split('\n').collect();
        Ok(Reader { lines, pos: 0 })
    }

    /// Line number of the next unread line, if any.
    pub(crate) fn remaining_line(&self) -> Option<usize> {
        (self.pos < self.lines.len()).then_some(self.pos + 1)
    }

    pub(crate) fn next_line(&mut self) -> Option<(usize, &'a str)> {
        let line = *self.lines.get(self.pos)?;
        self.pos += 1;
        Some((self.pos, line))
    }

    pub(crate) fn next_grid(&mut self) -> Result<HoleyGrid> {
        let eof = self.lines.len() + 1;
        let (header_no, header) = self
            .next_line()
            .ok_or_else(|| Error::parse(eof, "missing header"))?;
        let dims: Vec<&str> = header.split(' ').collect();
        if dims.len() != 2 {
            return Err(Error::parse(header_no, "header must be \"<rows> <cols>\""));
        }
        let rows = parse_count(dims[0], header_no)?;
        let cols = parse_count(dims[1], header_no)?;
        let mut grid =
            HoleyGrid::empty(rows, cols).map_err(|e| Error::parse(header_no, e.to_string()))?;
        for i in 0..rows {
            let (line_no, line) = self
                .next_line()
                .ok_or_else(|| Error::parse(eof, format!("expected {rows} rows, found {i}")))?;
            let tokens: Vec<&str> = line.split(' ').collect();
            if tokens.len() != cols {
                return Err(Error::parse(
                    line_no,
                    format!("expected {cols} tokens, found {}", tokens.len()),
                ));
            }
            for (j, token) in tokens.into_iter().enumerate() {
                grid.set(i, j, parse_cell(token, line_no)?);
            }
        }
        Ok(grid)
    }
}

fn parse_count(token: &str, line: usize) -> Result<usize> {
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(line, format!("invalid dimension {token:?}")));
    }
    let value: usize = token
        .parse()
        .map_err(|_| Error::parse(line, format!("dimension {token:?} out of range")))?;
    if value == 0 {
        return Err(Error::parse(line, "dimensions must be positive"));
    }
    Ok(value)
}

fn parse_cell(token: &str, line: usize) -> Result<Option<u64>> {
    if token == EMPTY_TOKEN {
        return Ok(None);
    }
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(line, format!("invalid token {token:?}")));
    }
    token
        .parse()
        .map(Some)
        .map_err(|_| Error::parse(line, format!("value {token:?} out of range")))
}
