//! Circulant-permutation-matrix algebra over the shift alphabet.
//!
//! A shift value `k` in `[0, L)` names the `L x L` identity matrix cyclically
//! right-shifted `k` times; the value `-1` names the `L x L` zero block. An
//! exponent matrix is a grid of such shifts and fully describes a
//! quasi-cyclic parity-check matrix before lifting. The multi-edge variant
//! stores a multiset of shifts per cell (circulant weight >= 1).
//!
//! All values here are immutable after construction and safe to share across
//! threads.

use crate::error::{Error, Result};
use crate::gf2::BinaryMatrix;

/// Marker value for the all-zero block.
pub const ZERO_BLOCK: i64 = -1;

/// A circulant shift: `-1` for the zero block, otherwise a value in `[0, L)`.
///
/// `Shift` does not carry its circulant size; validity is always checked
/// against an explicit `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shift(i64);

impl Shift {
    /// Validates `value` against circulant size `l`. Values at or above `l`
    /// are rejected rather than reduced, to catch data errors.
    pub fn new(value: i64, l: usize) -> Result<Shift> {
        if value < ZERO_BLOCK || value >= l as i64 {
            return Err(Error::domain(format!(
                "shift {value} outside alphabet {{-1, 0, .., {}}}",
                l as i64 - 1
            )));
        }
        Ok(Shift(value))
    }

    pub const fn zero_block() -> Shift {
        Shift(ZERO_BLOCK)
    }

    pub fn value(&self) -> i64 {
        self.0
    }

    pub fn is_zero_block(&self) -> bool {
        self.0 == ZERO_BLOCK
    }
}

/// Lifts a shift to its `L x L` binary block.
///
/// A non-negative shift yields the circulant permutation matrix with a one at
/// `(i, (i + shift) mod L)` for every row `i`; the `-1` shift yields the zero
/// matrix.
pub fn cpm_from_shift(shift: Shift, l: usize) -> BinaryMatrix {
    let mut m = BinaryMatrix::zero(l, l);
    if shift.is_zero_block() {
        return m;
    }
    let s = shift.value() as usize;
    for i in 0..l {
        m.set(i, (i + s) % l, true);
    }
    m
}

/// Shift of the product of two CPM blocks: `-1` absorbs, otherwise addition
/// mod `L`. Satisfies `cpm(a) * cpm(b) = cpm(compose_shifts(a, b, L))`.
pub fn compose_shifts(a: Shift, b: Shift, l: usize) -> Result<Shift> {
    Shift::new(a.value(), l)?;
    Shift::new(b.value(), l)?;
    if a.is_zero_block() || b.is_zero_block() {
        return Ok(Shift::zero_block());
    }
    Shift::new((a.value() + b.value()) % l as i64, l)
}

/// A single out-of-alphabet entry found by [`validate_exponent`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub row: usize,
    pub col: usize,
    pub value: i64,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "entry {} at ({}, {}) outside alphabet", self.value, self.row, self.col)
    }
}

/// Reports every entry of a raw `rows x cols` grid that falls outside the
/// shift alphabet for circulant size `l`.
pub fn validate_exponent(rows: usize, cols: usize, l: usize, entries: &[i64]) -> Vec<Violation> {
    assert_eq!(entries.len(), rows * cols, "grid size mismatch");
    let mut violations = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = entries[r * cols + c];
            if v < ZERO_BLOCK || v >= l as i64 {
                violations.push(Violation { row: r, col: c, value: v });
            }
        }
    }
    violations
}

/// Integer matrix of circulant shifts; the universal descriptor of a
/// quasi-cyclic code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentMatrix {
    rows: usize,
    cols: usize,
    circulant_size: usize,
    entries: Vec<i64>,
}

impl ExponentMatrix {
    /// Validates every entry against the alphabet for `circulant_size`.
    pub fn new(rows: usize, cols: usize, circulant_size: usize, entries: Vec<i64>) -> Result<Self> {
        if rows == 0 || cols == 0 || circulant_size == 0 {
            return Err(Error::domain("exponent matrix needs rows, cols, L >= 1".to_string()));
        }
        if entries.len() != rows * cols {
            return Err(Error::domain(format!(
                "expected {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let violations = validate_exponent(rows, cols, circulant_size, &entries);
        if let Some(v) = violations.first() {
            return Err(Error::domain(format!("{v} (L = {circulant_size})")));
        }
        Ok(ExponentMatrix { rows, cols, circulant_size, entries })
    }

    pub fn from_grid(circulant_size: usize, grid: &[Vec<i64>]) -> Result<Self> {
        let rows = grid.len();
        let cols = grid.first().map_or(0, |r| r.len());
        if grid.iter().any(|r| r.len() != cols) {
            return Err(Error::domain("ragged exponent grid".to_string()));
        }
        ExponentMatrix::new(rows, cols, circulant_size, grid.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn circulant_size(&self) -> usize {
        self.circulant_size
    }

    pub fn entry(&self, r: usize, c: usize) -> i64 {
        self.entries[r * self.cols + c]
    }

    pub fn shift(&self, r: usize, c: usize) -> Shift {
        Shift(self.entry(r, c))
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// Re-runs alphabet validation; empty when the invariant holds.
    pub fn validate(&self) -> Vec<Violation> {
        validate_exponent(self.rows, self.cols, self.circulant_size, &self.entries)
    }

    /// Stacks two exponent matrices vertically. Circulant sizes and column
    /// counts must match.
    pub fn vstack(&self, other: &ExponentMatrix) -> Result<ExponentMatrix> {
        if self.cols != other.cols || self.circulant_size != other.circulant_size {
            return Err(Error::domain("vstack requires equal cols and circulant size".to_string()));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        ExponentMatrix::new(self.rows + other.rows, self.cols, self.circulant_size, entries)
    }

    /// Serializes in the repo-wide text format: `m n L` then `m` rows of
    /// whitespace-separated shifts.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.rows, self.cols, self.circulant_size);
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the text format. Lines starting with `#` and blank lines are
    /// skipped. Comma-joined (multi-edge) entries are rejected here; use
    /// [`MetExponentMatrix::parse_text`] for those.
    pub fn parse_text(text: &str) -> Result<ExponentMatrix> {
        let mut content = content_lines(text);
        let (lineno, header) = content
            .next()
            .ok_or_else(|| Error::parse(1, "missing `m n L` header".to_string()))?;
        let (rows, cols, l) = parse_header(header, lineno)?;
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let (lineno, line) = content
                .next()
                .ok_or_else(|| Error::parse(lineno + r + 1, format!("expected {rows} data rows")))?;
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != cols {
                return Err(Error::parse(
                    lineno,
                    format!("row has {} entries, expected {cols}", toks.len()),
                ));
            }
            for (c, tok) in toks.iter().enumerate() {
                if tok.contains(',') {
                    return Err(Error::parse(
                        lineno,
                        format!("column {}: multi-edge entry `{tok}` in a plain exponent matrix", c + 1),
                    ));
                }
                let v: i64 = tok.parse().map_err(|_| {
                    Error::parse(lineno, format!("column {}: `{tok}` is not an integer", c + 1))
                })?;
                entries.push(v);
            }
        }
        let violations = validate_exponent(rows, cols, l, &entries);
        if let Some(v) = violations.first() {
            return Err(Error::parse(0, format!("{v} (L = {l})")));
        }
        ExponentMatrix::new(rows, cols, l, entries)
    }
}

/// Exponent matrix whose cells hold shift multisets, for circulants of
/// weight greater than one. An empty cell is the zero block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetExponentMatrix {
    rows: usize,
    cols: usize,
    circulant_size: usize,
    cells: Vec<Vec<u64>>,
}

impl MetExponentMatrix {
    /// Cells are sorted at construction. Duplicates within a cell are kept
    /// (weight is a multiplicity); lifting rejects them since duplicate CPMs
    /// cancel over GF(2).
    pub fn new(rows: usize, cols: usize, circulant_size: usize, cells: Vec<Vec<u64>>) -> Result<Self> {
        if rows == 0 || cols == 0 || circulant_size == 0 {
            return Err(Error::domain("MET exponent matrix needs rows, cols, L >= 1".to_string()));
        }
        if cells.len() != rows * cols {
            return Err(Error::domain(format!("expected {} cells, got {}", rows * cols, cells.len())));
        }
        let mut cells = cells;
        for (idx, cell) in cells.iter_mut().enumerate() {
            cell.sort_unstable();
            if let Some(&bad) = cell.iter().find(|&&s| s >= circulant_size as u64) {
                return Err(Error::domain(format!(
                    "shift {bad} at cell ({}, {}) not below L = {circulant_size}",
                    idx / cols,
                    idx % cols
                )));
            }
        }
        Ok(MetExponentMatrix { rows, cols, circulant_size, cells })
    }

    pub fn from_grid(circulant_size: usize, grid: &[Vec<Vec<u64>>]) -> Result<Self> {
        let rows = grid.len();
        let cols = grid.first().map_or(0, |r| r.len());
        if grid.iter().any(|r| r.len() != cols) {
            return Err(Error::domain("ragged MET grid".to_string()));
        }
        MetExponentMatrix::new(rows, cols, circulant_size, grid.concat())
    }

    /// Promotes a plain exponent matrix: `-1` becomes the empty cell.
    pub fn from_exponent(e: &ExponentMatrix) -> MetExponentMatrix {
        let cells = (0..e.rows())
            .flat_map(|r| {
                (0..e.cols()).map(move |c| {
                    let v = e.entry(r, c);
                    if v == ZERO_BLOCK { Vec::new() } else { vec![v as u64] }
                })
            })
            .collect();
        MetExponentMatrix {
            rows: e.rows(),
            cols: e.cols(),
            circulant_size: e.circulant_size(),
            cells,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn circulant_size(&self) -> usize {
        self.circulant_size
    }

    /// Sorted shift multiset of cell `(r, c)`; empty means zero block.
    pub fn cell(&self, r: usize, c: usize) -> &[u64] {
        &self.cells[r * self.cols + c]
    }

    /// Circulant weight of cell `(r, c)`.
    pub fn cell_weight(&self, r: usize, c: usize) -> usize {
        self.cell(r, c).len()
    }

    /// Binary mask marking non-empty cells.
    pub fn base_graph(&self) -> BinaryMatrix {
        let mut m = BinaryMatrix::zero(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if !self.cell(r, c).is_empty() {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Serializes in the text format with comma-joined multi-edge cells.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.rows, self.cols, self.circulant_size);
        for r in 0..self.rows {
            let line: Vec<String> = (0..self.cols)
                .map(|c| {
                    let cell = self.cell(r, c);
                    if cell.is_empty() {
                        "-1".to_string()
                    } else {
                        cell.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
                    }
                })
                .collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the text format; plain entries become singleton cells and `-1`
    /// the empty cell.
    pub fn parse_text(text: &str) -> Result<MetExponentMatrix> {
        let mut content = content_lines(text);
        let (lineno, header) = content
            .next()
            .ok_or_else(|| Error::parse(1, "missing `m n L` header".to_string()))?;
        let (rows, cols, l) = parse_header(header, lineno)?;
        let mut cells = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let (lineno, line) = content
                .next()
                .ok_or_else(|| Error::parse(lineno + r + 1, format!("expected {rows} data rows")))?;
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != cols {
                return Err(Error::parse(
                    lineno,
                    format!("row has {} entries, expected {cols}", toks.len()),
                ));
            }
            for (c, tok) in toks.iter().enumerate() {
                cells.push(parse_met_cell(tok, lineno, c + 1, l)?);
            }
        }
        MetExponentMatrix::new(rows, cols, l, cells)
    }
}

fn parse_met_cell(tok: &str, lineno: usize, col: usize, l: usize) -> Result<Vec<u64>> {
    if tok == "-1" {
        return Ok(Vec::new());
    }
    tok.split(',')
        .map(|part| {
            let v: i64 = part
                .parse()
                .map_err(|_| Error::parse(lineno, format!("column {col}: `{part}` is not an integer")))?;
            if v == ZERO_BLOCK {
                return Err(Error::parse(
                    lineno,
                    format!("column {col}: -1 cannot appear inside a multi-edge cell"),
                ));
            }
            if v < 0 || v >= l as i64 {
                return Err(Error::parse(
                    lineno,
                    format!("column {col}: shift {v} outside [0, {l})"),
                ));
            }
            Ok(v as u64)
        })
        .collect()
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'))
}

fn parse_header(line: &str, lineno: usize) -> Result<(usize, usize, usize)> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() != 3 {
        return Err(Error::parse(lineno, "header must be `m n L`".to_string()));
    }
    let parse = |tok: &str, name: &str| -> Result<usize> {
        let v: usize = tok
            .parse()
            .map_err(|_| Error::parse(lineno, format!("{name} `{tok}` is not a positive integer")))?;
        if v == 0 {
            return Err(Error::parse(lineno, format!("{name} must be positive")));
        }
        Ok(v)
    };
    Ok((parse(toks[0], "m")?, parse(toks[1], "n")?, parse(toks[2], "L")?))
}
