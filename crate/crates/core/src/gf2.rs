//! Dense bit-packed GF(2) matrices.
//!
//! [`BinaryMatrix`] stores one row per run of 64-bit words and provides the
//! linear algebra the rest of the crate needs: products, rank, nullspace
//! bases and the alist interchange format for parity-check matrices.

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

/// Dense GF(2) matrix with bit-packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

impl BinaryMatrix {
    /// All-zero matrix.
    pub fn zero(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(WORD_BITS).max(1);
        BinaryMatrix {
            rows,
            cols,
            words_per_row,
            words: vec![0; rows * words_per_row],
        }
    }

    /// Identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = BinaryMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of 0/1 values. Rows must have equal length.
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = BinaryMatrix::zero(nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged row in BinaryMatrix::from_rows");
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        let word = self.words[r * self.words_per_row + c / WORD_BITS];
        (word >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let idx = r * self.words_per_row + c / WORD_BITS;
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            self.words[idx] |= mask;
        } else {
            self.words[idx] &= !mask;
        }
    }

    #[inline]
    pub fn xor_set(&mut self, r: usize, c: usize) {
        let idx = r * self.words_per_row + c / WORD_BITS;
        self.words[idx] ^= 1u64 << (c % WORD_BITS);
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.words[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    /// XORs row `src` of `other` into row `dst` of `self`. Widths must match.
    fn xor_row_from(&mut self, dst: usize, other: &BinaryMatrix, src: usize) {
        debug_assert_eq!(self.words_per_row, other.words_per_row);
        let base = dst * self.words_per_row;
        let src_words = &other.words[src * other.words_per_row..(src + 1) * other.words_per_row];
        for (k, w) in src_words.iter().enumerate() {
            self.words[base + k] ^= w;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.words_per_row {
            self.words.swap(a * self.words_per_row + k, b * self.words_per_row + k);
        }
    }

    /// Number of ones in row `r`.
    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of ones in column `c`.
    pub fn col_weight(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c)).count()
    }

    /// Total number of ones.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Column indices of the ones in row `r`, ascending.
    pub fn ones_in_row(&self, r: usize) -> Vec<usize> {
        (0..self.cols).filter(|&c| self.get(r, c)).collect()
    }

    /// Row indices of the ones in column `c`, ascending.
    pub fn ones_in_col(&self, c: usize) -> Vec<usize> {
        (0..self.rows).filter(|&r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> BinaryMatrix {
        let mut t = BinaryMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// GF(2) matrix product `self * other`.
    pub fn mul(&self, other: &BinaryMatrix) -> Result<BinaryMatrix> {
        if self.cols != other.rows {
            return Err(Error::domain(format!(
                "dimension mismatch in GF(2) product: {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BinaryMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    out.xor_row_from(i, other, k);
                }
            }
        }
        Ok(out)
    }

    /// Syndrome `self * x` for a bit vector `x` of length `cols`.
    pub fn mul_vector(&self, x: &[bool]) -> Result<Vec<bool>> {
        if x.len() != self.cols {
            return Err(Error::domain(format!(
                "vector length {} does not match {} columns",
                x.len(),
                self.cols
            )));
        }
        let packed = pack_bits(x);
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = 0u64;
                for (w, xw) in self.row_words(r).iter().zip(packed.iter()) {
                    acc ^= w & xw;
                }
                acc.count_ones() % 2 == 1
            })
            .collect())
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &BinaryMatrix) -> Result<BinaryMatrix> {
        if self.rows != other.rows {
            return Err(Error::domain("hstack requires equal row counts".to_string()));
        }
        let mut out = BinaryMatrix::zero(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    out.set(r, c, true);
                }
            }
            for c in 0..other.cols {
                if other.get(r, c) {
                    out.set(r, self.cols + c, true);
                }
            }
        }
        Ok(out)
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        let mut rank = 0;
        for col in 0..work.cols {
            if rank == work.rows {
                break;
            }
            let pivot = (rank..work.rows).find(|&r| work.get(r, col));
            let Some(pivot) = pivot else { continue };
            work.swap_rows(rank, pivot);
            let pivot_row = work.row_words(rank).to_vec();
            for r in 0..work.rows {
                if r != rank && work.get(r, col) {
                    let base = r * work.words_per_row;
                    for (k, w) in pivot_row.iter().enumerate() {
                        work.words[base + k] ^= w;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Determinant over GF(2). Errors if the matrix is not square.
    pub fn det(&self) -> Result<u8> {
        if self.rows != self.cols {
            return Err(Error::domain("determinant requires a square matrix".to_string()));
        }
        Ok(if self.rank() == self.rows { 1 } else { 0 })
    }

    /// Basis of the right nullspace `{x : self * x = 0}`, one vector per row.
    ///
    /// Returns a matrix with `cols()` columns and `cols() - rank` rows.
    pub fn nullspace_basis(&self) -> BinaryMatrix {
        let mut work = self.clone();
        let n = work.cols;
        let mut pivot_cols: Vec<usize> = Vec::new();
        let mut rank = 0;
        for col in 0..n {
            if rank == work.rows {
                break;
            }
            let pivot = (rank..work.rows).find(|&r| work.get(r, col));
            let Some(pivot) = pivot else { continue };
            work.swap_rows(rank, pivot);
            let pivot_row = work.row_words(rank).to_vec();
            for r in 0..work.rows {
                if r != rank && work.get(r, col) {
                    let base = r * work.words_per_row;
                    for (k, w) in pivot_row.iter().enumerate() {
                        work.words[base + k] ^= w;
                    }
                }
            }
            pivot_cols.push(col);
            rank += 1;
        }
        let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
        let mut basis = BinaryMatrix::zero(free_cols.len(), n);
        for (i, &f) in free_cols.iter().enumerate() {
            basis.set(i, f, true);
            for (r, &p) in pivot_cols.iter().enumerate() {
                if work.get(r, f) {
                    basis.set(i, p, true);
                }
            }
        }
        basis
    }

    /// Extracts row `r` as a bit vector.
    pub fn row_bits(&self, r: usize) -> Vec<bool> {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }

    /// Writes the matrix in alist format (MacKay's padded variant).
    ///
    /// Header is `N M` with `N = cols` (variable nodes) and `M = rows`
    /// (check nodes); adjacency lists are 1-indexed.
    pub fn to_alist(&self) -> String {
        let col_lists: Vec<Vec<usize>> = (0..self.cols).map(|c| self.ones_in_col(c)).collect();
        let row_lists: Vec<Vec<usize>> = (0..self.rows).map(|r| self.ones_in_row(r)).collect();
        let max_col = col_lists.iter().map(Vec::len).max().unwrap_or(0);
        let max_row = row_lists.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = String::new();
        out.push_str(&format!("{} {}\n", self.cols, self.rows));
        out.push_str(&format!("{} {}\n", max_col, max_row));
        out.push_str(&join_usize(col_lists.iter().map(Vec::len)));
        out.push('\n');
        out.push_str(&join_usize(row_lists.iter().map(Vec::len)));
        out.push('\n');
        for list in col_lists.iter() {
            out.push_str(&padded_line(list, max_col));
            out.push('\n');
        }
        for list in row_lists.iter() {
            out.push_str(&padded_line(list, max_row));
            out.push('\n');
        }
        out
    }

    /// Parses an alist file. Accepts both padded and unpadded variants.
    pub fn from_alist(text: &str) -> Result<BinaryMatrix> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty alist".to_string()))?;
        let header: Vec<usize> = parse_usize_list(header, 1)?;
        if header.len() != 2 {
            return Err(Error::parse(1, "alist header must be `N M`".to_string()));
        }
        let (n, m) = (header[0], header[1]);
        // max degrees and per-node degree lists are consistency-checked only
        let (_, _max) = lines
            .next()
            .ok_or_else(|| Error::parse(2, "missing degree line".to_string()))?;
        let (lineno, col_degrees) = lines
            .next()
            .ok_or_else(|| Error::parse(3, "missing column degree list".to_string()))?;
        let col_degrees = parse_usize_list(col_degrees, lineno + 1)?;
        if col_degrees.len() != n {
            return Err(Error::parse(lineno + 1, format!("expected {n} column degrees")));
        }
        let (lineno, row_degrees) = lines
            .next()
            .ok_or_else(|| Error::parse(4, "missing row degree list".to_string()))?;
        let row_degrees = parse_usize_list(row_degrees, lineno + 1)?;
        if row_degrees.len() != m {
            return Err(Error::parse(lineno + 1, format!("expected {m} row degrees")));
        }
        let mut h = BinaryMatrix::zero(m, n);
        for (c, &deg) in col_degrees.iter().enumerate() {
            let (lineno, line) = lines
                .next()
                .ok_or_else(|| Error::parse(5 + c, "missing column adjacency line".to_string()))?;
            let entries = parse_usize_list(line, lineno + 1)?;
            let nonzero: Vec<usize> = entries.into_iter().filter(|&v| v != 0).collect();
            if nonzero.len() != deg {
                return Err(Error::parse(
                    lineno + 1,
                    format!("column {c} lists {} entries, degree says {deg}", nonzero.len()),
                ));
            }
            for v in nonzero {
                if v > m {
                    return Err(Error::parse(lineno + 1, format!("row index {v} out of range")));
                }
                h.set(v - 1, c, true);
            }
        }
        // row adjacency lists are redundant; ignore whatever follows
        Ok(h)
    }
}

impl std::fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: String = (0..self.cols).map(|c| if self.get(r, c) { '1' } else { '0' }).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Packs a bit slice into 64-bit words, LSB first.
pub fn pack_bits(bits: &[bool]) -> Vec<u64> {
    let mut words = vec![0u64; bits.len().div_ceil(WORD_BITS).max(1)];
    for (i, &b) in bits.iter().enumerate() {
        if b {
            words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
        }
    }
    words
}

fn join_usize(values: impl Iterator<Item = usize>) -> String {
    values.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn padded_line(list: &[usize], width: usize) -> String {
    let mut parts: Vec<String> = list.iter().map(|v| (v + 1).to_string()).collect();
    while parts.len() < width {
        parts.push("0".to_string());
    }
    parts.join(" ")
}

fn parse_usize_list(line: &str, lineno: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| Error::parse(lineno, format!("`{tok}` is not a non-negative integer")))
        })
        .collect()
}
