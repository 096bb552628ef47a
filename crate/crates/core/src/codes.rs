//! Quasi-cyclic parity-check matrix construction.
//!
//! Plain and multi-edge lifting, tail-biting spatially-coupled assembly,
//! repeat-accumulate codes with accumulator encoding, and chord cage-graph
//! codes. Everything is a pure function from a descriptor to a matrix.

use crate::circulant::{ExponentMatrix, MetExponentMatrix, Shift};
use crate::error::{Error, Result};
use crate::gf2::BinaryMatrix;

/// Replaces every exponent entry with its `L x L` circulant block.
pub fn lift(e: &ExponentMatrix) -> BinaryMatrix {
    let l = e.circulant_size();
    let mut h = BinaryMatrix::zero(e.rows() * l, e.cols() * l);
    for br in 0..e.rows() {
        for bc in 0..e.cols() {
            let shift = e.entry(br, bc);
            if shift < 0 {
                continue;
            }
            let s = shift as usize;
            for i in 0..l {
                h.set(br * l + i, bc * l + (i + s) % l, true);
            }
        }
    }
    h
}

/// Binary mask of an exponent matrix: one where the entry is a real shift,
/// zero where it is the zero block.
pub fn base_graph(e: &ExponentMatrix) -> BinaryMatrix {
    let mut m = BinaryMatrix::zero(e.rows(), e.cols());
    for r in 0..e.rows() {
        for c in 0..e.cols() {
            if e.entry(r, c) >= 0 {
                m.set(r, c, true);
            }
        }
    }
    m
}

/// Lifts a multi-edge exponent matrix; each cell becomes the GF(2) sum of
/// its circulants.
///
/// A duplicate shift inside one cell would cancel over GF(2), silently
/// halving the circulant weight, so it is rejected instead.
pub fn lift_met(me: &MetExponentMatrix) -> Result<BinaryMatrix> {
    let l = me.circulant_size();
    for r in 0..me.rows() {
        for c in 0..me.cols() {
            let cell = me.cell(r, c);
            if cell.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::domain(format!(
                    "cell ({r}, {c}) repeats a shift; duplicate CPMs cancel over GF(2)"
                )));
            }
        }
    }
    let mut h = BinaryMatrix::zero(me.rows() * l, me.cols() * l);
    for br in 0..me.rows() {
        for bc in 0..me.cols() {
            for &s in me.cell(br, bc) {
                for i in 0..l {
                    h.xor_set(br * l + i, bc * l + (i + s as usize) % l);
                }
            }
        }
    }
    Ok(h)
}

/// Parameters of a tail-biting spatially-coupled code.
///
/// The assembled matrix has `C * coupling_multiple` block rows and
/// `W * coupling_multiple` block columns of size-`N` circulants. Each block
/// column carries a band of `W` circulants wrapping around the block rows;
/// the band anchor of column `j` is `W * (j / C) + offsets[j % C]`.
#[derive(Debug, Clone)]
pub struct ScParams {
    coupling_width: usize,     // W
    checks_per_block: usize,   // C
    circulant_size: usize,     // N
    coupling_multiple: usize,  // L
    shifts: Vec<Vec<u64>>,     // B, C rows of W shifts
    offsets: Vec<usize>,       // D
}

impl ScParams {
    pub fn new(
        coupling_width: usize,
        checks_per_block: usize,
        circulant_size: usize,
        coupling_multiple: usize,
        shifts: Vec<Vec<u64>>,
        offsets: Vec<usize>,
    ) -> Result<ScParams> {
        if coupling_width == 0 || checks_per_block == 0 || circulant_size == 0 || coupling_multiple == 0 {
            return Err(Error::domain("all SC parameters must be positive".to_string()));
        }
        if shifts.len() != checks_per_block || shifts.iter().any(|r| r.len() != coupling_width) {
            return Err(Error::domain(format!(
                "CPM-shifts matrix must be {checks_per_block} x {coupling_width}"
            )));
        }
        if let Some(&bad) = shifts.iter().flatten().find(|&&s| s >= circulant_size as u64) {
            return Err(Error::domain(format!("shift {bad} not below N = {circulant_size}")));
        }
        if offsets.len() != checks_per_block {
            return Err(Error::domain(format!("offset vector must have length {checks_per_block}")));
        }
        if offsets[0] != 0 {
            return Err(Error::domain("first offset must be 0".to_string()));
        }
        if offsets.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("offsets must be strictly increasing".to_string()));
        }
        if offsets.iter().any(|&d| d >= coupling_width) {
            return Err(Error::domain("every offset must be below the coupling width".to_string()));
        }
        Ok(ScParams {
            coupling_width,
            checks_per_block,
            circulant_size,
            coupling_multiple,
            shifts,
            offsets,
        })
    }

    /// Evenly spread offsets `d_i = i * W / C`, available when `C` divides `W`.
    pub fn even_offsets(coupling_width: usize, checks_per_block: usize) -> Result<Vec<usize>> {
        if checks_per_block == 0 || coupling_width % checks_per_block != 0 {
            return Err(Error::domain(format!(
                "even offsets need C | W, got W = {coupling_width}, C = {checks_per_block}"
            )));
        }
        Ok((0..checks_per_block).map(|i| i * coupling_width / checks_per_block).collect())
    }

    pub fn coupling_width(&self) -> usize {
        self.coupling_width
    }

    pub fn checks_per_block(&self) -> usize {
        self.checks_per_block
    }

    pub fn circulant_size(&self) -> usize {
        self.circulant_size
    }

    pub fn coupling_multiple(&self) -> usize {
        self.coupling_multiple
    }
}

/// Assembles the tail-biting spatially-coupled code described by `p`.
///
/// Column `j` receives the full shift multiset of its block class
/// `{B[j mod C][w] : w}`, laid down a wrapping diagonal band of width `W`.
/// When the band is longer than the block-row count it wraps onto itself and
/// cells collect several shifts, which is why the result is multi-edge.
pub fn sc_construct(p: &ScParams) -> MetExponentMatrix {
    let block_rows = p.checks_per_block * p.coupling_multiple;
    let block_cols = p.coupling_width * p.coupling_multiple;
    let mut cells = vec![Vec::new(); block_rows * block_cols];
    for j in 0..block_cols {
        let class = j % p.checks_per_block;
        let anchor = p.coupling_width * (j / p.checks_per_block) + p.offsets[class];
        for k in 0..p.coupling_width {
            let row = (anchor + k) % block_rows;
            let shift = p.shifts[class][(anchor + k) % p.coupling_width];
            cells[row * block_cols + j].push(shift);
        }
    }
    MetExponentMatrix::new(block_rows, block_cols, p.circulant_size, cells)
        .expect("validated parameters construct a valid MET matrix")
}

/// Repeat-accumulate code `H = [H1 | H2]` with a dual-diagonal `H2`.
#[derive(Debug, Clone)]
pub struct RaCode {
    h1: ExponentMatrix,
    accumulator_blocks: usize, // t
}

impl RaCode {
    /// `h1` supplies the systematic part; its block-row count fixes the
    /// number of dual-diagonal accumulator columns.
    pub fn new(h1: ExponentMatrix) -> RaCode {
        let accumulator_blocks = h1.rows();
        RaCode { h1, accumulator_blocks }
    }

    pub fn h1(&self) -> &ExponentMatrix {
        &self.h1
    }

    pub fn accumulator_blocks(&self) -> usize {
        self.accumulator_blocks
    }

    pub fn circulant_size(&self) -> usize {
        self.h1.circulant_size()
    }

    /// Exponent matrix of the accumulator part: identity circulants on the
    /// diagonal and first subdiagonal, zero blocks elsewhere.
    pub fn h2_exponent(&self) -> ExponentMatrix {
        let t = self.accumulator_blocks;
        let mut entries = vec![-1i64; t * t];
        for i in 0..t {
            entries[i * t + i] = 0;
            if i > 0 {
                entries[i * t + i - 1] = 0;
            }
        }
        ExponentMatrix::new(t, t, self.circulant_size(), entries)
            .expect("dual-diagonal pattern is always valid")
    }

    /// Message length accepted by [`ra_encode`].
    pub fn message_len(&self) -> usize {
        self.h1.cols() * self.circulant_size()
    }

    /// Codeword length produced by [`ra_encode`].
    pub fn codeword_len(&self) -> usize {
        (self.h1.cols() + self.accumulator_blocks) * self.circulant_size()
    }
}

/// Lifts `[H1 | H2]`. `H2` is square and invertible over GF(2) (triangular
/// with identity diagonal), so `H` has full row rank.
pub fn ra_build(code: &RaCode) -> BinaryMatrix {
    let h1 = lift(code.h1());
    let h2 = lift(&code.h2_exponent());
    h1.hstack(&h2).expect("H1 and H2 share the block row count")
}

/// Systematic encoding: `x = [message | parity]` with `H x = 0`.
///
/// The parity blocks come out of forward accumulation through the
/// dual-diagonal `H2`: `p_0 = s_0`, `p_i = s_i xor p_{i-1}`, where `s` is the
/// syndrome of the message against `H1`.
pub fn ra_encode(code: &RaCode, message: &[bool]) -> Result<Vec<bool>> {
    if message.len() != code.message_len() {
        return Err(Error::domain(format!(
            "message length {} does not match {}",
            message.len(),
            code.message_len()
        )));
    }
    let l = code.circulant_size();
    let s = lift(code.h1()).mul_vector(message)?;
    let mut parity = vec![false; code.accumulator_blocks * l];
    for block in 0..code.accumulator_blocks {
        for i in 0..l {
            let idx = block * l + i;
            parity[idx] = s[idx] ^ (block > 0 && parity[idx - l]);
        }
    }
    let mut codeword = message.to_vec();
    codeword.extend_from_slice(&parity);
    Ok(codeword)
}

/// One-row exponent matrix whose shifts are the chord offsets of a ring of
/// size `n`; lifting it gives the circulant parity matrix of the chord
/// distance graph.
pub fn chord_cage_exponent(n: usize, offsets: &[u64]) -> Result<ExponentMatrix> {
    if offsets.is_empty() {
        return Err(Error::domain("need at least one chord offset".to_string()));
    }
    let mut seen = offsets.to_vec();
    seen.sort_unstable();
    if seen.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::domain("chord offsets must be distinct".to_string()));
    }
    let entries: Vec<i64> = offsets
        .iter()
        .map(|&d| {
            Shift::new(d as i64, n).map(|s| s.value()).map_err(|_| {
                Error::domain(format!("chord offset {d} not below ring size {n}"))
            })
        })
        .collect::<Result<_>>()?;
    ExponentMatrix::new(1, offsets.len(), n, entries)
}
