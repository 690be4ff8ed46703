//! MacKay's alist format.
//!
//! ```text
//! n m
//! max_col_weight max_row_weight
//! col weights (n values)
//! row weights (m values)
//! n lines: 1-based row indices of each column
//! m lines: 1-based column indices of each row
//! ```
//!
//! Lists are zero-padded to the maximum weight on write. Zeros are skipped
//! on read, so both padded and unpadded files load.

use std::fmt::Write as _;
use std::path::Path;

use pldpc_core::sparse::SparseMatrix;

use super::{read_text, write_text};
use crate::{Error, Result};

struct Tokens<'a> {
    inner: Box<dyn Iterator<Item = (usize, &'a str)> + 'a>,
    line: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let inner = text
            .lines()
            .enumerate()
            .flat_map(|(i, l)| l.split_whitespace().map(move |t| (i + 1, t)));
        Tokens {
            inner: Box::new(inner),
            line: 0,
        }
    }

    fn next(&mut self, what: &str) -> Result<usize> {
        let (line, tok) = self
            .inner
            .next()
            .ok_or_else(|| Error::parse(self.line, format!("unexpected end of file reading {what}")))?;
        self.line = line;
        tok.parse()
            .map_err(|_| Error::parse(line, format!("bad {what} {tok:?}")))
    }

    fn rest(&mut self) -> Option<(usize, &'a str)> {
        self.inner.next()
    }
}

/// Reads the indices of one list, dropping zero padding.
fn read_list(
    tok: &mut Tokens<'_>,
    weight: usize,
    max_weight: usize,
    bound: usize,
    padded: bool,
) -> Result<Vec<usize>> {
    let total = if padded { max_weight } else { weight };
    let mut out = Vec::with_capacity(weight);
    for _ in 0..total {
        let x = tok.next("index")?;
        if x == 0 {
            continue;
        }
        if x > bound {
            return Err(Error::parse(tok.line, format!("index {x} exceeds {bound}")));
        }
        out.push(x - 1);
    }
    if out.len() != weight {
        return Err(Error::parse(
            tok.line,
            format!("list has {} entries, header says {weight}", out.len()),
        ));
    }
    Ok(out)
}

fn parse_with(text: &str, padded: bool) -> Result<SparseMatrix> {
    let mut tok = Tokens::new(text);
    let n = tok.next("column count")?;
    let m = tok.next("row count")?;
    let max_col = tok.next("max column weight")?;
    let max_row = tok.next("max row weight")?;
    let col_w = (0..n).map(|_| tok.next("column weight")).collect::<Result<Vec<_>>>()?;
    let row_w = (0..m).map(|_| tok.next("row weight")).collect::<Result<Vec<_>>>()?;
    if col_w.iter().any(|&w| w > max_col) || row_w.iter().any(|&w| w > max_row) {
        return Err(Error::parse(tok.line, "weight exceeds the stated maximum"));
    }
    let cols = col_w
        .iter()
        .map(|&w| read_list(&mut tok, w, max_col, m, padded))
        .collect::<Result<Vec<_>>>()?;
    let rows = row_w
        .iter()
        .map(|&w| read_list(&mut tok, w, max_row, n, padded))
        .collect::<Result<Vec<_>>>()?;
    if let Some((line, t)) = tok.rest() {
        return Err(Error::parse(line, format!("unexpected trailing token {t:?}")));
    }
    for row in &rows {
        let mut sorted = row.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::parse(tok.line, "repeated index in a row list"));
        }
    }
    let h = SparseMatrix::from_rows(n, rows)?;
    let consistent = (0..n).all(|c| {
        let mut listed = cols[c].clone();
        listed.sort_unstable();
        listed == h.col(c)
    });
    if !consistent {
        return Err(Error::parse(tok.line, "column lists disagree with row lists"));
    }
    Ok(h)
}

/// Parses alist text. Accepts both zero-padded and unpadded lists.
pub fn parse(text: &str) -> Result<SparseMatrix> {
    parse_with(text, true).or_else(|padded_err| parse_with(text, false).map_err(|_| padded_err))
}

/// Renders `h` in alist form with zero-padded lists.
pub fn to_alist(h: &SparseMatrix) -> String {
    let (n, m) = (h.n_cols(), h.n_rows());
    let max_col = (0..n).map(|c| h.col(c).len()).max().unwrap_or(0);
    let max_row = (0..m).map(|r| h.row(r).len()).max().unwrap_or(0);
    let mut s = String::new();
    let _ = writeln!(s, "{n} {m}");
    let _ = writeln!(s, "{max_col} {max_row}");
    let join = |xs: &mut dyn Iterator<Item = usize>| xs.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let _ = writeln!(s, "{}", join(&mut (0..n).map(|c| h.col(c).len())));
    let _ = writeln!(s, "{}", join(&mut (0..m).map(|r| h.row(r).len())));
    let mut list = |idx: &[usize], width: usize| {
        let padded = idx.iter().map(|&i| i + 1).chain(std::iter::repeat(0)).take(width);
        let _ = writeln!(s, "{}", join(&mut padded.into_iter()));
    };
    for c in 0..n {
        list(h.col(c), max_col);
    }
    for r in 0..m {
        list(h.row(r), max_row);
    }
    s
}

pub fn read(path: &Path) -> Result<SparseMatrix> {
    parse(&read_text(path)?).map_err(|e| match e {
        Error::Parse { line, msg } => Error::Parse {
            line,
            msg: format!("{}: {msg}", path.display()),
        },
        e => e,
    })
}

pub fn write(path: &Path, h: &SparseMatrix) -> Result<()> {
    write_text(path, &to_alist(h))
}
