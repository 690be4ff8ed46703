//! Protograph algebra: the AR4JA rate family, node appending, lifting-order
//! arithmetic and copy-and-permute lifting.
//!
//! A protograph is stored as its multiplicity matrix (the protomatrix). Lifting
//! by an order `v` replaces every cell `(r, c)` with a `v × v` block that is the
//! sum of `mult[r][c]` disjoint permutation matrices. With cyclic shifts only,
//! the result is a quasi-cyclic parity-check matrix.
//!
//! Column layout convention used by the rate family and by truncation: the
//! first `rows` columns carry the parity structure (including every punctured
//! node), the remaining `cols - rows` columns are information nodes.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::sparse::SparseMatrix;
use crate::{Error, Rate, Result};

const AR4JA_BASE: &str = include_str!("../assets/ar4ja.proto");
const AR4JA_EXTENSION: &str = include_str!("../assets/ar4ja_extension.proto");

/// Edge multiplicities of a protograph together with its punctured columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtoMatrix {
    rows: usize,
    cols: usize,
    mult: Vec<u32>,
    punctured: Vec<usize>,
    name: String,
}

impl ProtoMatrix {
    /// Builds and validates a protomatrix from row-major multiplicities.
    pub fn new(
        name: impl Into<String>,
        mult: Vec<Vec<u32>>,
        punctured: Vec<usize>,
    ) -> Result<Self> {
        let p = Self::unchecked(name.into(), mult, punctured)?;
        p.validate()?;
        Ok(p)
    }

    /// Builds a protomatrix that only has to be connected (no empty rows or
    /// columns). Useful for toy graphs whose design rate is not in (0, 1).
    pub fn new_graph(
        name: impl Into<String>,
        mult: Vec<Vec<u32>>,
        punctured: Vec<usize>,
    ) -> Result<Self> {
        let p = Self::unchecked(name.into(), mult, punctured)?;
        p.validate_connectivity()?;
        Ok(p)
    }

    fn unchecked(name: String, mult: Vec<Vec<u32>>, mut punctured: Vec<usize>) -> Result<Self> {
        let rows = mult.len();
        let cols = mult.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(Error::Config("protomatrix must be non-empty".to_string()));
        }
        if mult.iter().any(|r| r.len() != cols) {
            return Err(Error::Config("protomatrix rows differ in length".to_string()));
        }
        punctured.sort_unstable();
        punctured.dedup();
        if let Some(&c) = punctured.iter().find(|&&c| c >= cols) {
            return Err(Error::Config(format!("punctured column {c} out of range")));
        }
        Ok(ProtoMatrix {
            rows,
            cols,
            mult: mult.into_iter().flatten().collect(),
            punctured,
            name,
        })
    }

    fn validate(&self) -> Result<()> {
        self.validate_connectivity()?;
        if self.cols <= self.rows || self.punctured.len() >= self.rows {
            return Err(Error::Config(format!(
                "design rate ({} - {}) / ({} - {}) is not in (0, 1)",
                self.cols,
                self.rows,
                self.cols,
                self.punctured.len()
            )));
        }
        Ok(())
    }

    fn validate_connectivity(&self) -> Result<()> {
        for r in 0..self.rows {
            if (0..self.cols).all(|c| self.mult(r, c) == 0) {
                return Err(Error::Config(format!("check node {r} has no edges")));
            }
        }
        for c in 0..self.cols {
            if (0..self.rows).all(|r| self.mult(r, c) == 0) {
                return Err(Error::Config(format!("variable node {c} has no edges")));
            }
        }
        Ok(())
    }

    /// Parses the text asset format: optional `#` comment lines, then
    /// `rows cols`, a line of punctured column indices (or `-`), and `rows`
    /// lines of multiplicities.
    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let p = Self::parse_table(name, text)?;
        p.validate()?;
        Ok(p)
    }

    fn parse_table(name: &str, text: &str) -> Result<Self> {
        let err = |msg: String| Error::Config(format!("{name}: {msg}"));
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| err("missing header".into()))?;
        let dims: Vec<usize> = parse_numbers(header).map_err(&err)?;
        let &[rows, cols] = dims.as_slice() else {
            return Err(err(format!("header {header:?} is not `rows cols`")));
        };
        let punct_line = lines
            .next()
            .ok_or_else(|| err("missing punctured line".into()))?;
        let punctured = if punct_line == "-" {
            Vec::new()
        } else {
            parse_numbers(punct_line).map_err(&err)?
        };
        let mut mult = Vec::with_capacity(rows);
        for r in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| err(format!("missing multiplicity row {r}")))?;
            let row: Vec<u32> = parse_numbers(line).map_err(&err)?;
            if row.len() != cols {
                return Err(err(format!("row {r} has {} entries, expected {cols}", row.len())));
            }
            mult.push(row);
        }
        if let Some(extra) = lines.next() {
            return Err(err(format!("unexpected trailing line {extra:?}")));
        }
        Self::unchecked(name.to_string(), mult, punctured)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn mult(&self, r: usize, c: usize) -> u32 {
        self.mult[r * self.cols + c]
    }

    pub fn punctured(&self) -> &[usize] {
        &self.punctured
    }

    pub fn is_punctured(&self, c: usize) -> bool {
        self.punctured.binary_search(&c).is_ok()
    }

    /// Total number of edges, counting parallel edges separately.
    pub fn edge_count(&self) -> usize {
        self.mult.iter().map(|&m| m as usize).sum()
    }

    /// Every edge copy `(r, c, k)` in row-major cell order.
    pub fn edge_copies(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        (0..self.rows).flat_map(move |r| {
            (0..self.cols).flat_map(move |c| (0..self.mult(r, c)).map(move |k| (r, c, k)))
        })
    }

    /// `(cols - rows) / (cols - |punctured|)`, saturating at zero.
    pub fn design_rate(&self) -> Rate {
        Rate::new(
            self.cols.saturating_sub(self.rows) as u64,
            (self.cols - self.punctured.len()).max(1) as u64,
        )
    }

    /// Number of transmitted columns.
    pub fn transmitted_cols(&self) -> usize {
        self.cols - self.punctured.len()
    }

    fn without_last_col(&self) -> Result<Self> {
        let keep = self.cols - 1;
        let mult = (0..self.rows)
            .map(|r| (0..keep).map(|c| self.mult(r, c)).collect())
            .collect();
        let punctured = self.punctured.iter().copied().filter(|&c| c < keep).collect();
        Self::new(format!("{}-u2", self.name), mult, punctured)
    }

    fn with_appended(&self, template: &ProtoMatrix, count: usize) -> Result<Self> {
        let mult = (0..self.rows)
            .map(|r| {
                let mut row: Vec<u32> = (0..self.cols).map(|c| self.mult(r, c)).collect();
                row.extend((0..count).map(|k| template.mult(r, k % template.cols)));
                row
            })
            .collect();
        Self::new(
            format!("{}+{count}", self.name),
            mult,
            self.punctured.clone(),
        )
    }
}

fn parse_numbers<T: core::str::FromStr>(line: &str) -> core::result::Result<Vec<T>, String> {
    line.split_whitespace()
        .map(|t| t.parse().map_err(|_| format!("bad number {t:?}")))
        .collect()
}

impl fmt::Display for ProtoMatrix {
    /// Writes the asset format understood by [`ProtoMatrix::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        if self.punctured.is_empty() {
            writeln!(f, "-")?;
        } else {
            let p: Vec<String> = self.punctured.iter().map(|c| c.to_string()).collect();
            writeln!(f, "{}", p.join(" "))?;
        }
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.mult(r, c).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// The AR4JA base protograph together with its node-appending template.
///
/// The base is the rate-1/2 member (one information node beyond the rate-1/3
/// core). The core drops the base's last column; higher rates append
/// template columns after the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RateFamily {
    base: ProtoMatrix,
    template: ProtoMatrix,
}

impl RateFamily {
    /// Loads the shipped AR4JA family.
    pub fn ar4ja() -> Result<Self> {
        Self::from_assets(AR4JA_BASE, AR4JA_EXTENSION)
    }

    /// Builds a family from a base asset and an extension template asset with
    /// the same number of rows. The base must have exactly three checks and
    /// one information node beyond the rate-1/3 core.
    pub fn from_assets(base: &str, template: &str) -> Result<Self> {
        let base = ProtoMatrix::parse("ar4ja", base)?;
        let template = ProtoMatrix::parse_table("ar4ja-extension", template)?;
        if template.rows != base.rows {
            return Err(Error::Config(
                "extension template row count differs from the base".to_string(),
            ));
        }
        if (0..template.cols).any(|c| (0..template.rows).all(|r| template.mult(r, c) == 0)) {
            return Err(Error::Config(
                "extension template has an unconnected column".to_string(),
            ));
        }
        if base.design_rate() != Rate::new(1, 2) || base.rows != 3 {
            return Err(Error::Config(
                "rate family base must be a 3-check rate-1/2 protograph".to_string(),
            ));
        }
        if base.is_punctured(base.cols - 1) {
            return Err(Error::Config("last base column must be transmitted".to_string()));
        }
        Ok(RateFamily { base, template })
    }

    pub fn base(&self) -> &ProtoMatrix {
        &self.base
    }

    pub fn template(&self) -> &ProtoMatrix {
        &self.template
    }

    /// Protograph with `n_r` information nodes beyond the rate-1/3 core.
    pub fn with_additional_nodes(&self, n_r: usize) -> Result<ProtoMatrix> {
        match n_r {
            0 => self.base.without_last_col(),
            1 => Ok(self.base.clone()),
            n => self.base.with_appended(&self.template, n - 1),
        }
    }
}

/// The AR4JA rate-1/2 protomatrix from the shipped asset.
pub fn ar4ja_base() -> Result<ProtoMatrix> {
    Ok(RateFamily::ar4ja()?.base)
}

/// Rate of the family member with `n_r` additional nodes: `(n_r+1)/(n_r+3)`.
pub fn family_rate(n_r: usize) -> Rate {
    Rate::new(n_r as u64 + 1, n_r as u64 + 3)
}

/// Number of nodes to append beyond the rate-1/3 core:
/// `floor((1 - 3R) / (R - 1))`, valid for `1/3 <= R < 1`.
pub fn additional_nodes_for_rate(rate: Rate) -> Result<usize> {
    if rate < Rate::new(1, 3) || !rate.is_proper() {
        return Err(Error::UnsupportedRate(rate));
    }
    // With R = p/q the ratio is (3p - q) / (q - p), both non-negative here.
    let (p, q) = (rate.numer(), rate.denom());
    Ok(((3 * p - q) / (q - p)) as usize)
}

/// Lifting order for a target block length and the achieved length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LiftingOrder {
    pub v: usize,
    pub achieved_len: usize,
}

impl LiftingOrder {
    /// True when the achieved block length falls short of the request.
    pub fn is_short_of(&self, n: usize) -> bool {
        self.achieved_len != n
    }
}

/// `v = floor(N / (n_r + 3))`.
pub fn lifting_order(n: usize, n_r: usize) -> Result<LiftingOrder> {
    let width = n_r + 3;
    let v = n / width;
    if v == 0 {
        return Err(Error::InvalidBlockLength(format!(
            "block length {n} is shorter than the {width} transmitted protograph nodes"
        )));
    }
    if v * width != n {
        log::info!("block length {n} not divisible by {width}; using {}", v * width);
    }
    Ok(LiftingOrder {
        v,
        achieved_len: v * width,
    })
}

/// Protograph of the family whose design rate equals `rate` exactly.
pub fn extend_for_rate(family: &RateFamily, rate: Rate) -> Result<ProtoMatrix> {
    let n_r = additional_nodes_for_rate(rate)?;
    if family_rate(n_r) != rate {
        return Err(Error::UnsupportedRate(rate));
    }
    let p = family.with_additional_nodes(n_r)?;
    debug_assert_eq!(p.design_rate(), rate);
    Ok(p)
}

/// The permutation applied to one protograph edge copy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgePermutation {
    /// Row `i` of the block connects to column `(i + s) mod v`.
    Shift(u32),
    /// Row `i` of the block connects to column `perm[i]`.
    Explicit(Vec<u32>),
}

impl EdgePermutation {
    #[inline]
    pub fn apply(&self, i: usize, v: usize) -> usize {
        match self {
            EdgePermutation::Shift(s) => (i + *s as usize) % v,
            EdgePermutation::Explicit(p) => p[i] as usize,
        }
    }
}

/// One permutation per protograph edge copy, grouped by cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftAssignment {
    lifting: usize,
    cols: usize,
    cells: Vec<Vec<EdgePermutation>>,
}

impl ShiftAssignment {
    /// Cells are given row-major; `cells[r * cols + c]` lists the edge copies
    /// of cell `(r, c)`.
    pub fn new(lifting: usize, cols: usize, cells: Vec<Vec<EdgePermutation>>) -> Self {
        ShiftAssignment {
            lifting,
            cols,
            cells,
        }
    }

    /// Circulant assignment from per-cell shift lists.
    pub fn from_shifts(lifting: usize, cols: usize, shifts: Vec<Vec<u32>>) -> Self {
        let cells = shifts
            .into_iter()
            .map(|cell| cell.into_iter().map(EdgePermutation::Shift).collect())
            .collect();
        Self::new(lifting, cols, cells)
    }

    /// Every shift zero; parallel edges get `0, 1, 2, ...` to stay distinct.
    pub fn zeros(p: &ProtoMatrix, lifting: usize) -> Self {
        let shifts = (0..p.rows)
            .flat_map(|r| (0..p.cols).map(move |c| (r, c)))
            .map(|(r, c)| (0..p.mult(r, c)).collect())
            .collect();
        Self::from_shifts(lifting, p.cols, shifts)
    }

    pub fn lifting(&self) -> usize {
        self.lifting
    }

    pub fn cell(&self, r: usize, c: usize) -> &[EdgePermutation] {
        &self.cells[r * self.cols + c]
    }

    pub fn cells(&self) -> &[Vec<EdgePermutation>] {
        &self.cells
    }

    /// True when every entry is a cyclic shift.
    pub fn is_circulant(&self) -> bool {
        self.cells
            .iter()
            .flatten()
            .all(|e| matches!(e, EdgePermutation::Shift(_)))
    }

    /// Shifts of cell `(r, c)`, or `None` if any entry is an explicit permutation.
    pub fn shifts(&self, r: usize, c: usize) -> Option<Vec<u32>> {
        self.cell(r, c)
            .iter()
            .map(|e| match e {
                EdgePermutation::Shift(s) => Some(*s),
                EdgePermutation::Explicit(_) => None,
            })
            .collect()
    }

    fn validate(&self, p: &ProtoMatrix) -> Result<()> {
        let v = self.lifting;
        let bad = |msg: String| Err(Error::InvalidAssignment(msg));
        if v == 0 {
            return bad("lifting order must be at least 1".to_string());
        }
        if self.cols != p.cols || self.cells.len() != p.rows * p.cols {
            return bad(format!(
                "assignment covers {} cells, protograph has {}",
                self.cells.len(),
                p.rows * p.cols
            ));
        }
        for r in 0..p.rows {
            for c in 0..p.cols {
                let cell = self.cell(r, c);
                if cell.len() != p.mult(r, c) as usize {
                    return bad(format!(
                        "cell ({r}, {c}) has {} permutations for multiplicity {}",
                        cell.len(),
                        p.mult(r, c)
                    ));
                }
                for e in cell {
                    match e {
                        EdgePermutation::Shift(s) if *s as usize >= v => {
                            return bad(format!("shift {s} in cell ({r}, {c}) is not below {v}"));
                        }
                        EdgePermutation::Explicit(perm) => {
                            let mut seen = vec![false; v];
                            if perm.len() != v
                                || perm.iter().any(|&x| {
                                    let x = x as usize;
                                    x >= v || core::mem::replace(&mut seen[x], true)
                                })
                            {
                                return bad(format!(
                                    "cell ({r}, {c}) holds a non-bijective permutation"
                                ));
                            }
                        }
                        _ => {}
                    }
                }
                for (a, ea) in cell.iter().enumerate() {
                    for eb in &cell[a + 1..] {
                        if (0..v).any(|i| ea.apply(i, v) == eb.apply(i, v)) {
                            return bad(format!("parallel edges collide in cell ({r}, {c})"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// A lifted parity-check matrix with its generating structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QcParityCheck {
    proto: ProtoMatrix,
    shifts: ShiftAssignment,
    h: SparseMatrix,
    punctured: Vec<usize>,
    truncated: usize,
}

/// Copy-and-permute lifting of `p` by the permutations in `shifts`.
pub fn lift(p: &ProtoMatrix, shifts: &ShiftAssignment) -> Result<QcParityCheck> {
    shifts.validate(p)?;
    let v = shifts.lifting;
    let mut rows = Vec::with_capacity(p.rows * v);
    for r in 0..p.rows {
        for i in 0..v {
            let mut row = Vec::new();
            for c in 0..p.cols {
                row.extend(shifts.cell(r, c).iter().map(|e| c * v + e.apply(i, v)));
            }
            rows.push(row);
        }
    }
    let h = SparseMatrix::from_rows(p.cols * v, rows)?;
    let punctured = p
        .punctured
        .iter()
        .flat_map(|&c| c * v..(c + 1) * v)
        .collect();
    Ok(QcParityCheck {
        proto: p.clone(),
        shifts: shifts.clone(),
        h,
        punctured,
        truncated: 0,
    })
}

impl QcParityCheck {
    pub fn proto(&self) -> &ProtoMatrix {
        &self.proto
    }

    pub fn shifts(&self) -> &ShiftAssignment {
        &self.shifts
    }

    pub fn lifting(&self) -> usize {
        self.shifts.lifting
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.h
    }

    /// Lifted indices of punctured columns, ascending.
    pub fn punctured_cols(&self) -> &[usize] {
        &self.punctured
    }

    /// Trailing information columns removed after lifting.
    pub fn truncated(&self) -> usize {
        self.truncated
    }

    /// Codeword length including punctured positions.
    pub fn n_total(&self) -> usize {
        self.h.n_cols()
    }

    /// Transmitted block length.
    pub fn n_tx(&self) -> usize {
        self.h.n_cols() - self.punctured.len()
    }

    /// Design dimension `n_total - check rows`.
    pub fn k(&self) -> usize {
        self.h.n_cols().saturating_sub(self.h.n_rows())
    }

    pub fn rate(&self) -> Rate {
        Rate::new(self.k() as u64, self.n_tx().max(1) as u64)
    }

    /// True for untruncated, shift-only liftings.
    pub fn is_circulant(&self) -> bool {
        self.truncated == 0 && self.shifts.is_circulant()
    }

    /// Number of information columns still present.
    pub fn info_cols(&self) -> usize {
        self.proto.cols.saturating_sub(self.proto.rows) * self.lifting() - self.truncated
    }

    /// Removes `t` further trailing information columns.
    pub fn truncate(&self, t: usize) -> Result<Self> {
        if self.proto.punctured.iter().any(|&c| c >= self.proto.rows) {
            return Err(Error::UnsupportedStructure(
                "punctured nodes must sit in the parity columns to truncate".to_string(),
            ));
        }
        if t >= self.info_cols() {
            return Err(Error::UnsupportedStructure(format!(
                "cannot remove {t} of {} information columns",
                self.info_cols()
            )));
        }
        Ok(QcParityCheck {
            proto: self.proto.clone(),
            shifts: self.shifts.clone(),
            h: self.h.truncate_cols(self.h.n_cols() - t),
            punctured: self.punctured.clone(),
            truncated: self.truncated + t,
        })
    }

    /// Same structure, with a different (re-optimized) assignment.
    pub(crate) fn relifted(&self, shifts: &ShiftAssignment) -> Result<Self> {
        let full = lift(&self.proto, shifts)?;
        if self.truncated == 0 {
            Ok(full)
        } else {
            full.truncate(self.truncated)
        }
    }
}
