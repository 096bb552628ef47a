//! Partition-function and permanent machinery: exact permanents, the Bethe
//! permanent by sum-product message passing, determinant normalization,
//! stable energy sums, and the bipartite marginal energy.

use crate::error::{Error, Result};

/// Dense square real matrix used by the permanent and determinant routines.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>, // row-major
}

impl SquareMatrix {
    pub fn new(n: usize, data: Vec<f64>) -> Result<SquareMatrix> {
        if data.len() != n * n {
            return Err(Error::domain(format!("expected {} entries for a {n} x {n} matrix", n * n)));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("matrix entries must be finite".to_string()));
        }
        Ok(SquareMatrix { n, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<SquareMatrix> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::domain("matrix must be square".to_string()));
        }
        SquareMatrix::new(n, rows.concat())
    }

    pub fn identity(n: usize) -> SquareMatrix {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        SquareMatrix { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    fn require_nonnegative(&self) -> Result<()> {
        if self.data.iter().any(|&v| v < 0.0) {
            return Err(Error::domain("permanent routines need non-negative entries".to_string()));
        }
        Ok(())
    }

    /// Parses a CSV body of `n` comma-separated rows.
    pub fn parse_csv(text: &str) -> Result<SquareMatrix> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row: Vec<f64> = line
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::parse(lineno + 1, format!("`{tok}` is not a number")))
                })
                .collect::<Result<_>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::parse(1, "empty matrix".to_string()));
        }
        SquareMatrix::from_rows(&rows)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

pub const BRUTEFORCE_PERMANENT_GUARD: usize = 9;
pub const RYSER_PERMANENT_GUARD: usize = 20;

/// Permanent by explicit permutation enumeration. Oracle-grade, `n <= 9`.
pub fn permanent_bruteforce(a: &SquareMatrix) -> Result<f64> {
    a.require_nonnegative()?;
    if a.size() > BRUTEFORCE_PERMANENT_GUARD {
        return Err(Error::resource(
            "brute-force permanent guard",
            format!("n = {} exceeds {BRUTEFORCE_PERMANENT_GUARD}", a.size()),
        ));
    }
    fn expand(a: &SquareMatrix, row: usize, used: u32, partial: f64, total: &mut f64) {
        if row == a.size() {
            *total += partial;
            return;
        }
        for col in 0..a.size() {
            if used & (1 << col) == 0 {
                let v = a.get(row, col);
                if v != 0.0 {
                    expand(a, row + 1, used | (1 << col), partial * v, total);
                }
            }
        }
    }
    // the empty product makes perm of the 0x0 matrix 1, consistent with Ryser
    let mut total = 0.0;
    expand(a, 0, 0, 1.0, &mut total);
    Ok(total)
}

/// Permanent by Ryser's inclusion-exclusion with Gray-code column updates,
/// `n <= 20`.
pub fn permanent_ryser(a: &SquareMatrix) -> Result<f64> {
    a.require_nonnegative()?;
    let n = a.size();
    if n > RYSER_PERMANENT_GUARD {
        return Err(Error::resource(
            "Ryser permanent guard",
            format!("n = {n} exceeds {RYSER_PERMANENT_GUARD}"),
        ));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let mut row_sums = vec![0.0; n];
    let mut gray: u64 = 0;
    let mut total = 0.0;
    for k in 1u64..(1u64 << n) {
        let bit = k.trailing_zeros() as usize;
        let entering = gray & (1 << bit) == 0;
        gray ^= 1 << bit;
        for (i, rs) in row_sums.iter_mut().enumerate() {
            let v = a.get(i, bit);
            if entering {
                *rs += v;
            } else {
                *rs -= v;
            }
        }
        let product: f64 = row_sums.iter().product();
        if gray.count_ones() % 2 == 0 {
            total += product;
        } else {
            total -= product;
        }
    }
    if n % 2 == 0 {
        Ok(total)
    } else {
        Ok(-total)
    }
}

/// Options for [`bethe_permanent`].
#[derive(Debug, Clone, Copy)]
pub struct BetheOptions {
    /// Fraction of the fresh update mixed into each message, in `(0, 1]`.
    pub damping: f64,
    /// Convergence threshold on the max-norm message residual.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for BetheOptions {
    fn default() -> Self {
        BetheOptions { damping: 0.5, tol: 1e-8, max_iter: 1000 }
    }
}

/// Result of a Bethe-permanent run.
#[derive(Debug, Clone)]
pub struct BetheReport {
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
    pub final_residual: f64,
    /// Max-norm residual after each iteration, for convergence CSV reports.
    pub residuals: Vec<f64>,
}

impl BetheReport {
    /// CSV body `iter,residual`.
    pub fn residuals_csv(&self) -> String {
        let mut out = String::from("iter,residual\n");
        for (i, r) in self.residuals.iter().enumerate() {
            out.push_str(&format!("{},{}\n", i + 1, r));
        }
        out
    }
}

/// Entries below this are lifted before message passing to keep the updates
/// finite; an approximation knob, not an exactness claim.
pub const BETHE_ENTRY_FLOOR: f64 = 1e-12;

/// Bethe permanent of a non-negative matrix by sum-product message passing
/// on the complete bipartite permanent factor graph.
///
/// Messages are the one/zero belief ratios `alpha_ij = 1 / sum_{k != j}
/// w_ik beta_ik` (rows) and symmetrically `beta` (columns), iterated in log
/// space with geometric damping; the residual is the max-norm change of the
/// log messages, which makes the threshold scale-free. On convergence the
/// value is `exp(-F_Bethe)` at the fixed-point beliefs, which lower-bounds
/// the true permanent.
pub fn bethe_permanent(a: &SquareMatrix, opts: &BetheOptions) -> Result<BetheReport> {
    a.require_nonnegative()?;
    if !(opts.damping > 0.0 && opts.damping <= 1.0) {
        return Err(Error::domain("damping must lie in (0, 1]".to_string()));
    }
    let n = a.size();
    if n == 0 {
        return Err(Error::domain("Bethe permanent needs n >= 1".to_string()));
    }
    let log_w: Vec<f64> = a.data.iter().map(|&v| v.max(BETHE_ENTRY_FLOOR).ln()).collect();
    if n == 1 {
        // the single variable is pinned to one by both constraints
        return Ok(BetheReport {
            value: log_w[0].exp(),
            converged: true,
            iterations: 0,
            final_residual: 0.0,
            residuals: Vec::new(),
        });
    }

    let mut log_alpha = vec![0.0; n * n]; // row constraint -> variable
    let mut log_beta = vec![0.0; n * n]; // column constraint -> variable
    let mut residuals = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    // -ln sum exp(terms), the log form of the reciprocal-sum update
    let neg_log_sum_exp = |terms: &mut dyn Iterator<Item = f64>| -> f64 {
        let terms: Vec<f64> = terms.collect();
        let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let s: f64 = terms.iter().map(|t| (t - m).exp()).sum();
        -(m + s.ln())
    };
    while iterations < opts.max_iter {
        iterations += 1;
        let mut residual: f64 = 0.0;
        let mut next = log_alpha.clone();
        for i in 0..n {
            for j in 0..n {
                let fresh = neg_log_sum_exp(
                    &mut (0..n).filter(|&k| k != j).map(|k| log_w[i * n + k] + log_beta[i * n + k]),
                );
                let updated = (1.0 - opts.damping) * log_alpha[i * n + j] + opts.damping * fresh;
                residual = residual.max((updated - log_alpha[i * n + j]).abs());
                next[i * n + j] = updated;
            }
        }
        log_alpha = next;
        let mut next = log_beta.clone();
        for i in 0..n {
            for j in 0..n {
                let fresh = neg_log_sum_exp(
                    &mut (0..n).filter(|&k| k != i).map(|k| log_w[k * n + j] + log_alpha[k * n + j]),
                );
                let updated = (1.0 - opts.damping) * log_beta[i * n + j] + opts.damping * fresh;
                residual = residual.max((updated - log_beta[i * n + j]).abs());
                next[i * n + j] = updated;
            }
        }
        log_beta = next;
        residuals.push(residual);
        if residual <= opts.tol {
            converged = true;
            break;
        }
    }

    // beliefs gamma_ij = P(x_ij = 1), a logistic of the log odds
    let mut free_energy = 0.0;
    for idx in 0..n * n {
        let log_odds = log_w[idx] + log_alpha[idx] + log_beta[idx];
        let gamma = 1.0 / (1.0 + (-log_odds).exp());
        free_energy += xlnx(gamma) - gamma * log_w[idx] - xlnx(1.0 - gamma);
    }
    let final_residual = residuals.last().copied().unwrap_or(0.0);
    Ok(BetheReport {
        value: (-free_energy).exp(),
        converged,
        iterations,
        final_residual,
        residuals,
    })
}

fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Normalization constant `Z = 1 / |det(W)|`; the determinant comes from LU
/// factorization with partial pivoting. Singular matrices are rejected.
pub fn det_normalization(w: &SquareMatrix) -> Result<f64> {
    let det = det_lu(w);
    if det == 0.0 || !det.is_finite() {
        return Err(Error::numeric("weight matrix is singular".to_string()));
    }
    Ok(1.0 / det.abs())
}

fn det_lu(m: &SquareMatrix) -> f64 {
    let n = m.size();
    let mut a = m.data.clone();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x * n + col].abs().total_cmp(&a[y * n + col].abs()))
            .expect("non-empty range");
        if a[pivot * n + col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for j in 0..n {
                a.swap(col * n + j, pivot * n + j);
            }
            det = -det;
        }
        det *= a[col * n + col];
        for r in col + 1..n {
            let factor = a[r * n + col] / a[col * n + col];
            for j in col..n {
                a[r * n + j] -= factor * a[col * n + j];
            }
        }
    }
    det
}

/// Stable partition sum `Z = sum exp(-E)` over an energy list.
///
/// Energies are sorted (total order) before the log-sum-exp reduction, so
/// the result is bit-identical under permutation of the input. When `Z`
/// itself over- or underflows the double range the returned value saturates;
/// use [`log_partition_from_energies`] for the always-finite logarithm.
pub fn partition_from_energies(energies: &[f64]) -> Result<f64> {
    Ok(log_partition_from_energies(energies)?.exp())
}

/// `ln Z` for the same sum, computed without overflow.
pub fn log_partition_from_energies(energies: &[f64]) -> Result<f64> {
    if energies.is_empty() {
        return Err(Error::domain("energy list must be non-empty".to_string()));
    }
    let mut sorted = energies.to_vec();
    sorted.sort_by(f64::total_cmp);
    let max_term = sorted.iter().map(|&e| -e).fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = sorted.iter().map(|&e| (-e - max_term).exp()).sum();
    Ok(max_term + sum.ln())
}

/// Weights and biases of the bipartite (visible, hidden, input) energy
/// model.
#[derive(Debug, Clone)]
pub struct RbmParams {
    visible: usize,
    hidden: usize,
    input: usize,
    w_vh: Vec<f64>, // visible x hidden
    w_vx: Vec<f64>, // visible x input
    b_v: Vec<f64>,
    b_h: Vec<f64>,
}

impl RbmParams {
    pub fn new(
        visible: usize,
        hidden: usize,
        input: usize,
        w_vh: Vec<f64>,
        w_vx: Vec<f64>,
        b_v: Vec<f64>,
        b_h: Vec<f64>,
    ) -> Result<RbmParams> {
        if w_vh.len() != visible * hidden {
            return Err(Error::domain("W^vh must be visible x hidden".to_string()));
        }
        if w_vx.len() != visible * input {
            return Err(Error::domain("W^vx must be visible x input".to_string()));
        }
        if b_v.len() != visible || b_h.len() != hidden {
            return Err(Error::domain("bias lengths must match unit counts".to_string()));
        }
        Ok(RbmParams { visible, hidden, input, w_vh, w_vx, b_v, b_h })
    }

    pub fn hidden(&self) -> usize {
        self.hidden
    }

    fn w_vh_at(&self, v: usize, h: usize) -> f64 {
        self.w_vh[v * self.hidden + h]
    }

    fn w_vx_at(&self, v: usize, x: usize) -> f64 {
        self.w_vx[v * self.input + x]
    }

    /// Argument of the `j`-th softplus term: the column product
    /// `v' W^vh_{.j}` plus the row product `W^vh_{j.} x` plus the hidden
    /// bias. The row product reuses W^vh exactly as the model is written,
    /// which forces `|x| = |h|` and `|h| <= |v|`.
    fn hidden_argument(&self, j: usize, v: &[bool], x: &[bool]) -> f64 {
        let col: f64 = (0..self.visible).filter(|&i| v[i]).map(|i| self.w_vh_at(i, j)).sum();
        let row: f64 = (0..self.hidden).filter(|&k| x[k]).map(|k| self.w_vh_at(j, k)).sum();
        col + row + self.b_h[j]
    }
}

/// Marginal energy of the bipartite model:
/// `sum_j softplus(v' W^vh_{.j} + W^vh_{j.} x + b^h_j) + v' W^vx x + v' b^v`.
///
/// Equals `log sum_h exp(-E_joint(v, h, x))` for the joint energy whose
/// hidden units see exactly the softplus arguments.
pub fn rbm_marginal_energy(theta: &RbmParams, v: &[bool], x: &[bool]) -> Result<f64> {
    if v.len() != theta.visible {
        return Err(Error::domain(format!(
            "visible vector length {} does not match {}",
            v.len(),
            theta.visible
        )));
    }
    if x.len() != theta.input || x.len() != theta.hidden {
        return Err(Error::domain(format!(
            "input vector length {} must equal the input and hidden counts ({}, {})",
            x.len(),
            theta.input,
            theta.hidden
        )));
    }
    if theta.hidden > theta.visible {
        return Err(Error::domain(format!(
            "the row product W^vh_(j.) x needs |h| <= |v|, got {} > {}",
            theta.hidden, theta.visible
        )));
    }
    let mut energy = 0.0;
    for j in 0..theta.hidden {
        energy += softplus(theta.hidden_argument(j, v, x));
    }
    for i in 0..theta.visible {
        if !v[i] {
            continue;
        }
        energy += theta.b_v[i];
        for k in 0..theta.input {
            if x[k] {
                energy += theta.w_vx_at(i, k);
            }
        }
    }
    Ok(energy)
}

/// Joint energy whose hidden marginalization reproduces
/// [`rbm_marginal_energy`]; exposed for oracle-style cross checks.
pub fn rbm_joint_energy(theta: &RbmParams, v: &[bool], h: &[bool], x: &[bool]) -> Result<f64> {
    if h.len() != theta.hidden {
        return Err(Error::domain("hidden vector length mismatch".to_string()));
    }
    let mut e = 0.0;
    for j in 0..theta.hidden {
        if h[j] {
            e -= theta.hidden_argument(j, v, x);
        }
    }
    for i in 0..theta.visible {
        if !v[i] {
            continue;
        }
        e -= theta.b_v[i];
        for k in 0..theta.input {
            if x[k] {
                e -= theta.w_vx_at(i, k);
            }
        }
    }
    Ok(e)
}

fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}
