//! Finite-geometry spherical matrices and the cycle gauge: divisibility
//! checks on radii, per-line shift-sum gauge verification, row shift
//! invariance, and radial collapse.

use crate::circulant::ExponentMatrix;
use crate::error::{Error, Result};

/// Per-condition outcome of the radius divisibility rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisibilityReport {
    /// `k mod r_i == 0` per radius.
    pub per_radius: Vec<bool>,
    /// `k mod sum(r_i) == 0`.
    pub sum_divides: bool,
    /// Witness for the general rule: `a` with `k = a * sum(r_i) * prod(r_i)`,
    /// when such a positive integer exists.
    pub general_witness: Option<u64>,
}

impl DivisibilityReport {
    /// The per-radius and sum conditions together.
    pub fn passes(&self) -> bool {
        self.sum_divides && self.per_radius.iter().all(|&b| b)
    }
}

/// Checks the collapse divisibility rules: every radius divides `k`, their
/// sum divides `k`, and in the most general form `sum * product` divides `k`
/// with witness `a`.
pub fn radius_divisibility(k: u64, radii: &[u64]) -> Result<DivisibilityReport> {
    if k == 0 {
        return Err(Error::domain("circulant size must be positive".to_string()));
    }
    if radii.is_empty() || radii.contains(&0) {
        return Err(Error::domain("radii must be positive".to_string()));
    }
    let per_radius = radii.iter().map(|&r| k % r == 0).collect();
    let sum: u64 = radii.iter().sum();
    let product = radii.iter().fold(1u128, |acc, &r| acc.saturating_mul(r as u128));
    let base = (sum as u128).saturating_mul(product);
    let general_witness = if base != 0 && (k as u128) % base == 0 {
        Some((k as u128 / base) as u64).filter(|&a| a > 0)
    } else {
        None
    };
    Ok(DivisibilityReport { per_radius, sum_divides: k % sum == 0, general_witness })
}

/// Which lines of the matrix a gauge check walks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaugeAxis {
    Rows,
    Columns,
}

/// Per-line cycle gauge: true where the shift sum along the line is a
/// multiple of the circulant size. Zero blocks are excluded from the sums.
pub fn shbf_gauge_check(e: &ExponentMatrix, axis: GaugeAxis) -> Vec<bool> {
    let l = e.circulant_size() as i64;
    let lines = match axis {
        GaugeAxis::Rows => e.rows(),
        GaugeAxis::Columns => e.cols(),
    };
    (0..lines)
        .map(|line| {
            let sum: i64 = match axis {
                GaugeAxis::Rows => (0..e.cols()).map(|c| e.entry(line, c).max(0)).sum(),
                GaugeAxis::Columns => (0..e.rows()).map(|r| e.entry(r, line).max(0)).sum(),
            };
            sum % l == 0
        })
        .collect()
}

/// Adds `multiplier * S` (with `S = L / N`, `N` the column count) to every
/// shift of one row mod `L` and reports whether the row's gauge status is
/// unchanged. The total added is a multiple of `L`, so a passing row always
/// stays passing.
pub fn row_shift_invariance(e: &ExponentMatrix, row: usize, multiplier: u64) -> Result<bool> {
    if row >= e.rows() {
        return Err(Error::domain(format!("row {row} out of range")));
    }
    let l = e.circulant_size();
    let n = e.cols();
    if l % n != 0 {
        return Err(Error::domain(format!(
            "row shift unit L / N is not integral: {l} / {n}"
        )));
    }
    let s = (l / n) as i64;
    let before = shbf_gauge_check(e, GaugeAxis::Rows)[row];
    let shifted = shift_row(e, row, (multiplier as i64) * s)?;
    let after = shbf_gauge_check(&shifted, GaugeAxis::Rows)[row];
    Ok(before == after)
}

/// Copy of `e` with `delta` added (mod `L`) to every non-zero-block shift of
/// `row`.
pub fn shift_row(e: &ExponentMatrix, row: usize, delta: i64) -> Result<ExponentMatrix> {
    let l = e.circulant_size() as i64;
    let entries: Vec<i64> = (0..e.rows())
        .flat_map(|r| {
            (0..e.cols()).map(move |c| {
                let v = e.entry(r, c);
                if r == row && v >= 0 {
                    (v + delta).rem_euclid(l)
                } else {
                    v
                }
            })
        })
        .collect();
    ExponentMatrix::new(e.rows(), e.cols(), e.circulant_size(), entries)
}

/// Spherical-coordinate matrix: a radius row, an azimuth row and a polar row
/// of `N` weight-1 circulants of size `k`, with the gauge and divisibility
/// reports taken at construction.
#[derive(Debug, Clone)]
pub struct SphericalMatrix {
    circulant_size: u64,
    radii: Vec<u64>,
    phi: Vec<u64>,
    theta: Vec<u64>,
    pub gauge_rows: Vec<bool>,
    pub divisibility: DivisibilityReport,
}

impl SphericalMatrix {
    pub fn circulant_size(&self) -> u64 {
        self.circulant_size
    }

    pub fn columns(&self) -> usize {
        self.radii.len()
    }

    pub fn radii(&self) -> &[u64] {
        &self.radii
    }

    pub fn phi(&self) -> &[u64] {
        &self.phi
    }

    pub fn theta(&self) -> &[u64] {
        &self.theta
    }

    /// The 3 x N exponent matrix (radius, phi, theta rows).
    pub fn to_exponent(&self) -> ExponentMatrix {
        let entries: Vec<i64> = self
            .radii
            .iter()
            .chain(self.phi.iter())
            .chain(self.theta.iter())
            .map(|&s| s as i64)
            .collect();
        ExponentMatrix::new(3, self.columns(), self.circulant_size as usize, entries)
            .expect("shifts were validated at construction")
    }

    /// Exponent-matrix text with a `# spherical k N` header comment.
    pub fn to_text(&self) -> String {
        format!("# spherical {} {}\n{}", self.circulant_size, self.columns(), self.to_exponent().to_text())
    }

    pub fn parse_text(text: &str) -> Result<SphericalMatrix> {
        let e = ExponentMatrix::parse_text(text)?;
        if e.rows() != 3 {
            return Err(Error::domain(format!(
                "a spherical matrix has 3 rows (r, phi, theta), got {}",
                e.rows()
            )));
        }
        let as_u64 = |row: usize| -> Result<Vec<u64>> {
            (0..e.cols())
                .map(|c| {
                    let v = e.entry(row, c);
                    if v < 0 {
                        return Err(Error::domain(
                            "spherical matrices do not contain zero blocks".to_string(),
                        ));
                    }
                    Ok(v as u64)
                })
                .collect()
        };
        build_spherical(
            &as_u64(0)?,
            &as_u64(1)?,
            &as_u64(2)?,
            e.circulant_size() as u64,
        )
    }
}

/// Assembles the 3 x N spherical matrix and attaches the gauge and radius
/// divisibility reports. Construction is non-blocking: failing checks are
/// recorded, not rejected.
pub fn build_spherical(
    radii: &[u64],
    phi_shifts: &[u64],
    theta_shifts: &[u64],
    k: u64,
) -> Result<SphericalMatrix> {
    if radii.is_empty() {
        return Err(Error::domain("need at least one column".to_string()));
    }
    if radii.len() != phi_shifts.len() || radii.len() != theta_shifts.len() {
        return Err(Error::domain("radius, phi and theta rows must have equal length".to_string()));
    }
    if k == 0 {
        return Err(Error::domain("circulant size must be positive".to_string()));
    }
    for &s in radii.iter().chain(phi_shifts).chain(theta_shifts) {
        if s >= k {
            return Err(Error::domain(format!("shift {s} not below k = {k}")));
        }
    }
    let divisibility = radius_divisibility(k, radii)?;
    let sm = SphericalMatrix {
        circulant_size: k,
        radii: radii.to_vec(),
        phi: phi_shifts.to_vec(),
        theta: theta_shifts.to_vec(),
        gauge_rows: Vec::new(),
        divisibility,
    };
    let gauge_rows = shbf_gauge_check(&sm.to_exponent(), GaugeAxis::Rows);
    Ok(SphericalMatrix { gauge_rows, ..sm })
}

/// Result of collapsing a spherical matrix along its radius row: the radius
/// becomes `N` small circulants of size `k / N`, while each angular row
/// merges into a single weight-`N` circulant sum of size `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapsedMatrix {
    pub small_circulant_size: u64,
    /// Radius shifts reduced mod `k / N`, one small CPM per column.
    pub radius_shifts: Vec<u64>,
    pub circulant_size: u64,
    /// Azimuth shifts merged into one weight-`N` cell.
    pub phi_cell: Vec<u64>,
    /// Polar shifts merged into one weight-`N` cell.
    pub theta_cell: Vec<u64>,
}

impl CollapsedMatrix {
    /// Total count of weight-1 circulant terms, preserved by the collapse.
    pub fn term_count(&self) -> usize {
        self.radius_shifts.len() + self.phi_cell.len() + self.theta_cell.len()
    }
}

impl std::fmt::Display for CollapsedMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let small: Vec<String> = self
            .radius_shifts
            .iter()
            .map(|s| format!("C{}^{}", self.small_circulant_size, s))
            .collect();
        writeln!(f, "{}", small.join(" "))?;
        let sum = |cell: &[u64]| -> String {
            cell.iter()
                .map(|s| format!("C{}^{}", self.circulant_size, s))
                .collect::<Vec<_>>()
                .join("+")
        };
        writeln!(f, "{}", sum(&self.phi_cell))?;
        writeln!(f, "{}", sum(&self.theta_cell))
    }
}

/// Collapses the radius row into size-`k / N` blocks (shift rule: `r mod
/// (k / N)`) and merges the angular rows into weight-`N` circulant sums.
/// Requires `N` to divide `k`.
pub fn collapse_radial(sm: &SphericalMatrix) -> Result<CollapsedMatrix> {
    let k = sm.circulant_size();
    let n = sm.columns() as u64;
    if k % n != 0 {
        return Err(Error::domain(format!(
            "column count {n} does not divide circulant size {k}"
        )));
    }
    let s = k / n;
    Ok(CollapsedMatrix {
        small_circulant_size: s,
        radius_shifts: sm.radii().iter().map(|&r| r % s).collect(),
        circulant_size: k,
        phi_cell: sm.phi().to_vec(),
        theta_cell: sm.theta().to_vec(),
    })
}

/// The worked six-column gauge example: carbon electron clouds under
/// spherical coordinates, circulant size 48.
pub fn carbon_matrix() -> SphericalMatrix {
    build_spherical(
        &[24, 24, 36, 36, 36, 36],
        &[1, 7, 13, 19, 25, 31],
        &[23, 17, 47, 41, 35, 29],
        48,
    )
    .expect("the carbon matrix is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisibility_mixed_outcome() {
        let report = radius_divisibility(48, &[24, 36]).unwrap();
        assert_eq!(report.per_radius, vec![true, false]);
        assert!(!report.passes());
    }

    #[test]
    fn divisibility_small_pass_with_witness() {
        let report = radius_divisibility(6, &[1, 2]).unwrap();
        assert_eq!(report.per_radius, vec![true, true]);
        assert!(report.sum_divides);
        assert!(report.passes());
        // 6 = 1 * (1 + 2) * (1 * 2)
        assert_eq!(report.general_witness, Some(1));
    }

    #[test]
    fn divisibility_general_witness_absent() {
        let report = radius_divisibility(8, &[2, 2]).unwrap();
        assert!(report.per_radius.iter().all(|&b| b));
        assert!(report.sum_divides);
        assert_eq!(report.general_witness, None); // 4 * 4 = 16 does not divide 8
    }

    #[test]
    fn gauge_passes_on_carbon_rows() {
        let carbon = carbon_matrix();
        assert_eq!(carbon.gauge_rows, vec![true, true, true]);
    }

    #[test]
    fn gauge_trivial_rows() {
        let zero = ExponentMatrix::from_grid(48, &[vec![0, 0, 0]]).unwrap();
        assert_eq!(shbf_gauge_check(&zero, GaugeAxis::Rows), vec![true]);
        let single = ExponentMatrix::from_grid(48, &[vec![1]]).unwrap();
        assert_eq!(shbf_gauge_check(&single, GaugeAxis::Rows), vec![false]);
    }

    #[test]
    fn gauge_excludes_zero_blocks() {
        let e = ExponentMatrix::from_grid(6, &[vec![2, -1, 4]]).unwrap();
        assert_eq!(shbf_gauge_check(&e, GaugeAxis::Rows), vec![true]);
    }

    #[test]
    fn gauge_columns_axis() {
        let e = ExponentMatrix::from_grid(5, &[vec![2, 1], vec![3, 3]]).unwrap();
        assert_eq!(shbf_gauge_check(&e, GaugeAxis::Columns), vec![true, false]);
    }

    #[test]
    fn gauge_invariant_under_column_permutation() {
        let carbon = carbon_matrix().to_exponent();
        let permuted = ExponentMatrix::from_grid(
            48,
            &[
                vec![36, 24, 36, 24, 36, 36],
                vec![13, 1, 19, 7, 31, 25],
                vec![47, 23, 41, 17, 29, 35],
            ],
        )
        .unwrap();
        assert_eq!(
            shbf_gauge_check(&carbon, GaugeAxis::Rows),
            shbf_gauge_check(&permuted, GaugeAxis::Rows)
        );
    }

    #[test]
    fn row_shift_carbon_phi_row() {
        let carbon = carbon_matrix().to_exponent();
        // S = 48 / 6 = 8; row 1 becomes (9, 15, 21, 27, 33, 39), sum 144
        let shifted = shift_row(&carbon, 1, 8).unwrap();
        assert_eq!(shifted.row(1), &[9, 15, 21, 27, 33, 39]);
        assert!(row_shift_invariance(&carbon, 1, 1).unwrap());
    }

    #[test]
    fn row_shift_identity_and_full_turn() {
        let carbon = carbon_matrix().to_exponent();
        assert!(row_shift_invariance(&carbon, 0, 0).unwrap());
        // multiplier N: the added total is N * N * S, still a multiple of L
        assert!(row_shift_invariance(&carbon, 0, 6).unwrap());
    }

    #[test]
    fn row_shift_requires_integral_unit() {
        let e = ExponentMatrix::from_grid(7, &[vec![1, 6]]).unwrap();
        assert!(row_shift_invariance(&e, 0, 1).is_err());
    }

    #[test]
    fn row_shift_preserves_failing_rows_too() {
        let e = ExponentMatrix::from_grid(8, &[vec![1, 2, 3, 3]]).unwrap();
        assert_eq!(shbf_gauge_check(&e, GaugeAxis::Rows), vec![false]);
        assert!(row_shift_invariance(&e, 0, 3).unwrap());
    }

    #[test]
    fn collapse_carbon_matrix() {
        let collapsed = collapse_radial(&carbon_matrix()).unwrap();
        assert_eq!(collapsed.small_circulant_size, 8);
        assert_eq!(collapsed.radius_shifts, vec![0, 0, 4, 4, 4, 4]);
        assert_eq!(collapsed.phi_cell, vec![1, 7, 13, 19, 25, 31]);
        assert_eq!(collapsed.theta_cell, vec![23, 17, 47, 41, 35, 29]);
        assert_eq!(collapsed.term_count(), 18);
    }

    #[test]
    fn collapse_preserves_term_count() {
        let sm = build_spherical(&[3, 3, 6], &[1, 2, 3], &[4, 5, 6], 9).unwrap();
        let collapsed = collapse_radial(&sm).unwrap();
        assert_eq!(collapsed.term_count(), 9);
        assert_eq!(collapsed.small_circulant_size, 3);
    }

    #[test]
    fn collapse_single_column_keeps_size() {
        let sm = build_spherical(&[4], &[2], &[3], 8).unwrap();
        let collapsed = collapse_radial(&sm).unwrap();
        assert_eq!(collapsed.small_circulant_size, 8);
        assert_eq!(collapsed.radius_shifts, vec![4]);
    }

    #[test]
    fn collapse_multiple_of_seventeen_gives_identity_blocks() {
        // k = 85, N = 5: radius shifts that are multiples of 17 collapse to
        // shift-0 blocks of size 17
        let sm = build_spherical(&[34, 34, 51, 68, 17], &[1, 2, 3, 4, 5], &[6, 7, 8, 9, 10], 85).unwrap();
        let collapsed = collapse_radial(&sm).unwrap();
        assert_eq!(collapsed.small_circulant_size, 17);
        assert_eq!(collapsed.radius_shifts, vec![0; 5]);
    }

    #[test]
    fn collapse_requires_divisibility() {
        let sm = build_spherical(&[1, 2, 3, 4], &[0, 0, 0, 0], &[0, 0, 0, 0], 10).unwrap();
        assert!(collapse_radial(&sm).is_err());
    }

    #[test]
    fn build_rejects_count_mismatch_and_range() {
        assert!(build_spherical(&[1, 2], &[1], &[1, 2], 4).is_err());
        assert!(build_spherical(&[4], &[1], &[1], 4).is_err());
    }

    #[test]
    fn build_attaches_failure_report_without_blocking() {
        let sm = build_spherical(&[1, 2], &[1, 1], &[0, 0], 9).unwrap();
        assert!(sm.gauge_rows.iter().any(|&b| !b));
        assert!(!sm.divisibility.passes());
    }

    #[test]
    fn spherical_text_roundtrip() {
        let carbon = carbon_matrix();
        let text = carbon.to_text();
        assert!(text.starts_with("# spherical 48 6\n3 6 48\n"));
        let parsed = SphericalMatrix::parse_text(&text).unwrap();
        assert_eq!(parsed.radii(), carbon.radii());
        assert_eq!(parsed.phi(), carbon.phi());
        assert_eq!(parsed.theta(), carbon.theta());
        assert_eq!(parsed.gauge_rows, carbon.gauge_rows);
    }
}
