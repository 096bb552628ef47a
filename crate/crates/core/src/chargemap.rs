//! Mapping charge systems on irregular grids to circulant exponent matrices
//! by dimension expansion, and the reverse geometric reading of small
//! quasi-cyclic codes.
//!
//! Distances enter as positive integers (rational positions scale to a
//! common denominator); charges become circulants and distances become
//! shifts, with least common multiples standardizing circulant sizes.

use crate::circulant::ExponentMatrix;
use crate::error::{Error, Result};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Shift pairs balanced against a circulant size `e`: each pair sums to zero
/// mod `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedPairSet {
    pub circulant_size: u64,
    pub pairs: Vec<(u64, u64)>,
}

impl BalancedPairSet {
    /// One row `[shift_1 | shift_3]` per pair, stacked as an `(e-1) x 2`
    /// exponent matrix of size `e`.
    pub fn to_exponent(&self) -> Result<ExponentMatrix> {
        let entries: Vec<i64> = self
            .pairs
            .iter()
            .flat_map(|&(a, b)| [a as i64, b as i64])
            .collect();
        ExponentMatrix::new(self.pairs.len(), 2, self.circulant_size as usize, entries)
    }
}

/// Three collinear particles: the circulant size is the summed squared
/// distance `e = R1 + R3`, and the balanced states are all nontrivial shift
/// pairs `(i, e - i)`. The zero-shift pairs describe an unconstrained
/// (infinite-charge-option) state and are excluded.
pub fn map_1d_three(r1: u64, r3: u64) -> Result<BalancedPairSet> {
    if r1 == 0 || r3 == 0 {
        return Err(Error::domain("squared distances must be positive".to_string()));
    }
    let e = r1 + r3;
    let pairs = (1..e).map(|i| (i, e - i)).collect();
    Ok(BalancedPairSet { circulant_size: e, pairs })
}

/// Four collinear particles with squared gaps `a`, `b`, `a + b`, mapped to
/// one row of four circulants of the common size `c = lcm(a+b, a+2b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FourParticleMap {
    pub circulant_size: u64,
    /// `a * c / (a + b)`, the 1-2 interaction.
    pub a_bar: u64,
    /// `b * c / (a + b)`, the 2-3 interaction.
    pub b1_bar: u64,
    /// `b * c / (a + 2b)`, the 3-4 interaction.
    pub b2_bar: u64,
    /// `(a + b) * c / (a + 2b)`, the 1-4 interaction.
    pub ab_bar: u64,
}

impl FourParticleMap {
    /// Canonical column order `(a_bar, b1_bar, b2_bar, ab_bar)`.
    pub fn shifts(&self) -> [u64; 4] {
        [self.a_bar, self.b1_bar, self.b2_bar, self.ab_bar]
    }

    pub fn to_exponent(&self) -> Result<ExponentMatrix> {
        let entries = self.shifts().iter().map(|&s| s as i64).collect();
        ExponentMatrix::new(1, 4, self.circulant_size as usize, entries)
    }
}

/// Projects the two-dimensional four-particle problem onto a line: gaps
/// `a`, `b`, `a + b` yield four shifts over the common circulant size
/// `lcm(a + b, a + 2b)`, all divisions exact by construction.
pub fn map_1d_four(a: u64, b: u64) -> Result<FourParticleMap> {
    if a == 0 || b == 0 {
        return Err(Error::domain("squared distances must be positive".to_string()));
    }
    let s13 = a + b;
    let s24 = a + 2 * b;
    let c = lcm(s13, s24);
    Ok(FourParticleMap {
        circulant_size: c,
        a_bar: a * c / s13,
        b1_bar: b * c / s13,
        b2_bar: b * c / s24,
        ab_bar: s13 * c / s24,
    })
}

/// One particle of a planar cell: an identity and its positive integer
/// projection distances to the reference axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellParticle {
    pub id: usize,
    pub x: u64,
    pub y: u64,
}

/// Interaction matrix of one planar cell: an x-row and a y-row of shifts
/// over a common circulant size, with the source particle of every column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellMap {
    pub circulant_size: u64,
    pub x_shifts: Vec<u64>,
    pub y_shifts: Vec<u64>,
    /// Particle id of each column.
    pub particles: Vec<usize>,
}

impl CellMap {
    pub fn to_exponent(&self) -> Result<ExponentMatrix> {
        let entries: Vec<i64> = self
            .x_shifts
            .iter()
            .chain(self.y_shifts.iter())
            .map(|&s| s as i64)
            .collect();
        ExponentMatrix::new(2, self.x_shifts.len(), self.circulant_size as usize, entries)
    }

    /// Text form with a provenance comment naming each column's particle.
    pub fn to_text(&self) -> String {
        let ids: Vec<String> = self.particles.iter().map(|id| id.to_string()).collect();
        let mut out = format!("# cell columns: particles {}\n", ids.join(" "));
        out.push_str(
            &self
                .to_exponent()
                .expect("cell maps always hold valid shifts")
                .to_text(),
        );
        out
    }
}

/// Maps one four-particle planar cell to its 2 x 4 interaction matrix.
///
/// Axis sums `L_x`, `L_y` set the per-axis circulant orders; the common size
/// is their least common multiple and every projection scales exactly:
/// shift `x_i * L / L_x` in the x-row, `y_i * L / L_y` in the y-row.
pub fn map_2d_cell(cell: &[CellParticle]) -> Result<CellMap> {
    if cell.len() != 4 {
        return Err(Error::domain(format!("a cell has exactly 4 particles, got {}", cell.len())));
    }
    if let Some(p) = cell.iter().find(|p| p.x == 0 || p.y == 0) {
        return Err(Error::domain(format!(
            "particle {} has a zero axis projection",
            p.id
        )));
    }
    let lx: u64 = cell.iter().map(|p| p.x).sum();
    let ly: u64 = cell.iter().map(|p| p.y).sum();
    let l = lcm(lx, ly);
    Ok(CellMap {
        circulant_size: l,
        x_shifts: cell.iter().map(|p| p.x * l / lx).collect(),
        y_shifts: cell.iter().map(|p| p.y * l / ly).collect(),
        particles: cell.iter().map(|p| p.id).collect(),
    })
}

/// Maps a chain of four-particle cells sharing particles by identity.
///
/// Every cell gets its own circulant size; a shared particle contributes a
/// column to each containing cell's matrix. Coordinates of a shared particle
/// must agree everywhere it appears.
pub fn map_coupled_cells(cells: &[Vec<CellParticle>]) -> Result<Vec<CellMap>> {
    let mut seen: std::collections::BTreeMap<usize, (u64, u64)> = std::collections::BTreeMap::new();
    for cell in cells {
        for p in cell {
            match seen.get(&p.id) {
                Some(&(x, y)) if (x, y) != (p.x, p.y) => {
                    return Err(Error::domain(format!(
                        "particle {} appears with projections ({x}, {y}) and ({}, {})",
                        p.id, p.x, p.y
                    )));
                }
                _ => {
                    seen.insert(p.id, (p.x, p.y));
                }
            }
        }
    }
    cells.iter().map(|cell| map_2d_cell(cell)).collect()
}

/// Rotation of a seven-node hexagonal cell about its first node, quantized
/// into a 2 x 7 exponent matrix of circulant size `q`.
///
/// Displacements follow `dR_x = L_x (1 - cos alpha)`, `dR_y = L_y (1 - sin
/// alpha)`; the quantum is `floor(R / q)` and shifts are the quantized
/// displacements reduced mod `q`. The center column carries shift zero on
/// both axes.
pub fn hexagonal_rotation_map(
    grid_step: f64,
    alpha: f64,
    q: u64,
    nodes: &[(f64, f64); 7],
) -> Result<ExponentMatrix> {
    if q == 0 {
        return Err(Error::domain("quantization count must be positive".to_string()));
    }
    if nodes[0] != (0.0, 0.0) {
        return Err(Error::domain("node 1 is the rotation center and must sit at the origin".to_string()));
    }
    let quantum = (grid_step / q as f64).floor();
    if quantum < 1.0 {
        return Err(Error::domain(format!(
            "quantum floor(R / q) = floor({grid_step} / {q}) is zero"
        )));
    }
    let reduce = |displacement: f64| -> i64 {
        let quantized = (displacement / quantum).floor() as i64;
        quantized.rem_euclid(q as i64)
    };
    let mut x_row = Vec::with_capacity(7);
    let mut y_row = Vec::with_capacity(7);
    for &(lx, ly) in nodes.iter() {
        x_row.push(reduce(lx * (1.0 - alpha.cos())));
        y_row.push(reduce(ly * (1.0 - alpha.sin())));
    }
    let entries: Vec<i64> = x_row.into_iter().chain(y_row).collect();
    ExponentMatrix::new(2, 7, q as usize, entries)
}

/// Barycentric coordinates of a point against a triangle: each coordinate is
/// the (signed) ratio of the sub-triangle area opposite a vertex to the full
/// area. They always sum to one; all three are positive exactly for
/// interior points.
pub fn barycentric(point: (f64, f64), triangle: &[(f64, f64); 3]) -> Result<(f64, f64, f64)> {
    let area2 = cross(triangle[0], triangle[1], triangle[2]);
    if area2 == 0.0 {
        return Err(Error::domain("degenerate triangle".to_string()));
    }
    let l1 = cross(point, triangle[1], triangle[2]) / area2;
    let l2 = cross(triangle[0], point, triangle[2]) / area2;
    let l3 = cross(triangle[0], triangle[1], point) / area2;
    Ok((l1, l2, l3))
}

/// Twice the signed area of the triangle `a b c`.
fn cross(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (c.0 - a.0) * (b.1 - a.1)
}

/// A particle read off an exponent matrix: one centered angle per block row,
/// `None` where the column holds a zero block on that axis.
pub type ParticlePoint = [Option<f64>; 2];

/// Reads a one- or two-row exponent matrix as particles on a circle or flat
/// torus: column `j` sits at angle `2 pi E[r][j] / L` per axis, reported as
/// the centered representative in `(-pi, pi]`.
pub fn geometry_from_exponent(e: &ExponentMatrix) -> Result<Vec<ParticlePoint>> {
    if e.rows() > 2 {
        return Err(Error::domain(format!(
            "geometric reading covers 1 or 2 block rows, got {}; 3-D placement is unsupported",
            e.rows()
        )));
    }
    let l = e.circulant_size() as f64;
    let angle = |shift: i64| -> Option<f64> {
        if shift < 0 {
            return None;
        }
        let theta = 2.0 * std::f64::consts::PI * shift as f64 / l;
        Some(if theta > std::f64::consts::PI {
            theta - 2.0 * std::f64::consts::PI
        } else {
            theta
        })
    };
    Ok((0..e.cols())
        .map(|j| {
            let x = angle(e.entry(0, j));
            let y = if e.rows() == 2 { angle(e.entry(1, j)) } else { None };
            [x, y]
        })
        .collect())
}
