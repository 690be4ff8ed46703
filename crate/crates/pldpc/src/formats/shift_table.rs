//! Compact circulant description of a lifted code.
//!
//! ```text
//! rows cols v
//! punctured block columns, or -
//! one line per block row: a cell per block column, either - or
//!   comma-separated shifts (one per parallel edge)
//! truncate t        (optional: trailing columns removed)
//! ```
//!
//! Lines starting with `#` are comments; a leading one names the protograph.

use std::fmt::Write as _;
use std::path::Path;

use pldpc_core::protograph::{lift, ProtoMatrix, QcParityCheck, ShiftAssignment};
use pldpc_core::Error as CoreError;

use super::{content_lines, read_text, write_text};
use crate::{Error, Result};

pub fn to_shift_table(h: &QcParityCheck) -> Result<String> {
    let p = h.proto();
    let mut s = String::new();
    let _ = writeln!(s, "# {}", p.name());
    let _ = writeln!(s, "{} {} {}", p.rows(), p.cols(), h.lifting());
    if p.punctured().is_empty() {
        s.push_str("-\n");
    } else {
        let cols: Vec<String> = p.punctured().iter().map(|c| c.to_string()).collect();
        let _ = writeln!(s, "{}", cols.join(" "));
    }
    for r in 0..p.rows() {
        let mut cells = Vec::with_capacity(p.cols());
        for c in 0..p.cols() {
            let shifts = h.shifts().shifts(r, c).ok_or_else(|| {
                CoreError::UnsupportedStructure(
                    "explicit permutations have no shift-table form".to_string(),
                )
            })?;
            cells.push(if shifts.is_empty() {
                "-".to_string()
            } else {
                shifts.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            });
        }
        let _ = writeln!(s, "{}", cells.join(" "));
    }
    if h.truncated() > 0 {
        let _ = writeln!(s, "truncate {}", h.truncated());
    }
    Ok(s)
}

fn numbers(line: usize, text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::parse(line, format!("bad number {t:?}"))))
        .collect()
}

pub fn parse(text: &str) -> Result<QcParityCheck> {
    let mut lines = content_lines(text);
    let mut last = 0;
    let mut next = |what: &str| {
        let item = lines.next();
        if let Some((n, _)) = item {
            last = n;
        }
        item.ok_or_else(|| Error::parse(last, format!("missing {what}")))
    };
    let (ln, header) = next("header")?;
    let &[rows, cols, v] = numbers(ln, header)?.as_slice() else {
        return Err(Error::parse(ln, "header must be `rows cols v`"));
    };
    if rows == 0 || cols == 0 || v == 0 {
        return Err(Error::parse(ln, "dimensions must be positive"));
    }
    let (ln, punct) = next("punctured line")?;
    let punctured = if punct == "-" { Vec::new() } else { numbers(ln, punct)? };

    let mut mult = Vec::with_capacity(rows);
    let mut cells = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let (ln, line) = next(&format!("block row {r}"))?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != cols {
            return Err(Error::parse(ln, format!("{} cells, expected {cols}", tokens.len())));
        }
        let mut row = Vec::with_capacity(cols);
        for t in tokens {
            let shifts: Vec<u32> = if t == "-" {
                Vec::new()
            } else {
                t.split(',')
                    .map(|x| x.parse().map_err(|_| Error::parse(ln, format!("bad shift {x:?}"))))
                    .collect::<Result<_>>()?
            };
            row.push(shifts.len() as u32);
            cells.push(shifts);
        }
        mult.push(row);
    }
    let truncated = match lines.next() {
        None => 0,
        Some((ln, line)) => {
            let t = line
                .strip_prefix("truncate")
                .and_then(|t| t.trim().parse().ok())
                .ok_or_else(|| Error::parse(ln, format!("unexpected line {line:?}")))?;
            if let Some((ln, extra)) = lines.next() {
                return Err(Error::parse(ln, format!("unexpected line {extra:?}")));
            }
            t
        }
    };
    let name = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .and_then(|l| l.strip_prefix('#'))
        .map_or("shift-table", str::trim);
    let proto = ProtoMatrix::new_graph(name, mult, punctured)?;
    let code = lift(&proto, &ShiftAssignment::from_shifts(v, cols, cells))?;
    Ok(if truncated > 0 { code.truncate(truncated)? } else { code })
}

pub fn read(path: &Path) -> Result<QcParityCheck> {
    parse(&read_text(path)?)
}

pub fn write(path: &Path, h: &QcParityCheck) -> Result<()> {
    write_text(path, &to_shift_table(h)?)
}
