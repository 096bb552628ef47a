//! Boltzmann machine and Ising energies, exact partition functions at desk
//! scale, and syndrome-based code energy landscapes.
//!
//! The inverse temperature is fixed at one throughout. Exact enumeration
//! visits states in index order, so sums are bit-reproducible.

use crate::error::{Error, Result};
use crate::gf2::{pack_bits, BinaryMatrix};

/// Bias vector and strictly upper-triangular weight matrix defining the
/// energy `E(x) = -b'x - x'Wx` over binary unit values.
#[derive(Debug, Clone)]
pub struct BoltzmannParams {
    n: usize,
    bias: Vec<f64>,
    weights: Vec<f64>, // row-major n x n, zero on and below the diagonal
}

/// Unit counts above this refuse exact enumeration.
pub const DEFAULT_BM_GUARD: usize = 24;

/// When the worst-case energy magnitude exceeds this, partition sums switch
/// to the running log-sum-exp path.
const STABLE_SUM_ENERGY_BOUND: f64 = 30.0;

impl BoltzmannParams {
    /// `weights` is the full `n x n` matrix; entries on or below the
    /// diagonal must be zero.
    pub fn new(bias: Vec<f64>, weights: Vec<f64>) -> Result<BoltzmannParams> {
        let n = bias.len();
        if weights.len() != n * n {
            return Err(Error::domain(format!("weight matrix must be {n} x {n}")));
        }
        for i in 0..n {
            for j in 0..=i {
                if weights[i * n + j] != 0.0 {
                    return Err(Error::domain(format!(
                        "weight ({i}, {j}) must be zero: W is strictly upper triangular"
                    )));
                }
            }
        }
        if bias.iter().chain(weights.iter()).any(|v| !v.is_finite()) {
            return Err(Error::domain("parameters must be finite".to_string()));
        }
        Ok(BoltzmannParams { n, bias, weights })
    }

    /// Builds from sparse `(i, j, w)` pairs with `i < j`.
    pub fn from_pairs(bias: Vec<f64>, pairs: &[(usize, usize, f64)]) -> Result<BoltzmannParams> {
        let n = bias.len();
        let mut weights = vec![0.0; n * n];
        for &(i, j, w) in pairs {
            if i >= j || j >= n {
                return Err(Error::domain(format!("weight pair ({i}, {j}) needs i < j < {n}")));
            }
            weights[i * n + j] = w;
        }
        BoltzmannParams::new(bias, weights)
    }

    pub fn units(&self) -> usize {
        self.n
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n + j]
    }

    /// Upper bound on `|E(x)|` over all configurations.
    fn energy_bound(&self) -> f64 {
        self.bias.iter().map(|b| b.abs()).sum::<f64>()
            + self.weights.iter().map(|w| w.abs()).sum::<f64>()
    }

    /// Serializes as plain text: `N`, the biases, then one `i j w` triple
    /// per non-zero weight (row-major order).
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        let biases: Vec<String> = self.bias.iter().map(|b| b.to_string()).collect();
        out.push_str(&biases.join(" "));
        out.push('\n');
        for i in 0..self.n {
            for j in i + 1..self.n {
                let w = self.weight(i, j);
                if w != 0.0 {
                    out.push_str(&format!("{i} {j} {w}\n"));
                }
            }
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<BoltzmannParams> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (lineno, first) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing unit count".to_string()))?;
        let n: usize = first
            .parse()
            .map_err(|_| Error::parse(lineno, format!("`{first}` is not a unit count")))?;
        let (lineno, bias_line) = lines
            .next()
            .ok_or_else(|| Error::parse(lineno + 1, "missing bias line".to_string()))?;
        let bias: Vec<f64> = bias_line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|_| Error::parse(lineno, format!("bias `{tok}` is not a number")))
            })
            .collect::<Result<_>>()?;
        if bias.len() != n {
            return Err(Error::parse(lineno, format!("expected {n} biases, got {}", bias.len())));
        }
        let mut pairs = Vec::new();
        for (lineno, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(Error::parse(lineno, "weight line must be `i j w`".to_string()));
            }
            let i: usize = toks[0]
                .parse()
                .map_err(|_| Error::parse(lineno, format!("`{}` is not an index", toks[0])))?;
            let j: usize = toks[1]
                .parse()
                .map_err(|_| Error::parse(lineno, format!("`{}` is not an index", toks[1])))?;
            let w: f64 = toks[2]
                .parse()
                .map_err(|_| Error::parse(lineno, format!("`{}` is not a number", toks[2])))?;
            pairs.push((i, j, w));
        }
        BoltzmannParams::from_pairs(bias, &pairs)
    }
}

fn check_config(theta: &BoltzmannParams, x: &[bool]) -> Result<()> {
    if x.len() != theta.units() {
        return Err(Error::domain(format!(
            "configuration length {} does not match {} units",
            x.len(),
            theta.units()
        )));
    }
    Ok(())
}

/// Energy `E(x) = -b'x - x'Wx` of a 0/1 configuration.
pub fn bm_energy(theta: &BoltzmannParams, x: &[bool]) -> Result<f64> {
    check_config(theta, x)?;
    let mut e = 0.0;
    for i in 0..theta.n {
        if !x[i] {
            continue;
        }
        e -= theta.bias[i];
        for j in i + 1..theta.n {
            if x[j] {
                e -= theta.weight(i, j);
            }
        }
    }
    Ok(e)
}

fn check_guard_value(theta: &BoltzmannParams, guard: usize) -> Result<()> {
    if theta.units() > guard {
        return Err(Error::resource(
            "exact enumeration guard",
            format!("{} units exceed guard {guard}", theta.units()),
        ));
    }
    Ok(())
}

fn check_guard(theta: &BoltzmannParams) -> Result<()> {
    check_guard_value(theta, DEFAULT_BM_GUARD)
}

/// Visits all `2^N` states in index order, handing each energy to `f`.
///
/// Energies are maintained incrementally: stepping the state index flips its
/// trailing bit run, and each flip adjusts the energy by the local field.
fn for_each_energy(theta: &BoltzmannParams, mut f: impl FnMut(f64)) {
    let n = theta.n;
    // symmetrized couplings so a single row gives the local field
    let mut sym = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            sym[i * n + j] = theta.weights[i * n + j] + theta.weights[j * n + i];
        }
    }
    let mut x = vec![false; n];
    let mut energy = 0.0;
    f(energy);
    for state in 1u64..(1u64 << n) {
        let flips = state ^ (state - 1);
        for bit in 0..n {
            if (flips >> bit) & 1 == 0 {
                continue;
            }
            // local field of `bit` against the other current values
            let mut field = theta.bias[bit];
            for j in 0..n {
                if j != bit && x[j] {
                    field += sym[bit * n + j];
                }
            }
            if x[bit] {
                energy += field;
            } else {
                energy -= field;
            }
            x[bit] = !x[bit];
        }
        f(energy);
    }
}

/// Exact partition function `Z = sum over all configurations of exp(-E)`.
///
/// Uses direct summation when energies are guaranteed small, otherwise a
/// running log-sum-exp accumulator. Either way states are reduced in index
/// order.
pub fn bm_partition_exact(theta: &BoltzmannParams) -> Result<f64> {
    Ok(bm_log_partition(theta)?.value())
}

/// Exact log-partition with overflow-free accumulation.
pub fn bm_log_partition(theta: &BoltzmannParams) -> Result<LogSum> {
    bm_log_partition_guarded(theta, DEFAULT_BM_GUARD)
}

/// [`bm_log_partition`] with an explicit unit-count guard, for callers that
/// deliberately raise the enumeration limit.
pub fn bm_log_partition_guarded(theta: &BoltzmannParams, guard: usize) -> Result<LogSum> {
    check_guard_value(theta, guard)?;
    if theta.energy_bound() <= STABLE_SUM_ENERGY_BOUND {
        let mut z = 0.0;
        for_each_energy(theta, |e| z += (-e).exp());
        Ok(LogSum::Direct(z))
    } else {
        let mut acc = RunningLogSumExp::new();
        for_each_energy(theta, |e| acc.add(-e));
        Ok(LogSum::Log(acc.log_value()))
    }
}

/// Partition value carried either directly or in log space.
#[derive(Debug, Clone, Copy)]
pub enum LogSum {
    Direct(f64),
    Log(f64),
}

impl LogSum {
    pub fn value(&self) -> f64 {
        match *self {
            LogSum::Direct(z) => z,
            LogSum::Log(lz) => lz.exp(),
        }
    }

    pub fn ln(&self) -> f64 {
        match *self {
            LogSum::Direct(z) => z.ln(),
            LogSum::Log(lz) => lz,
        }
    }
}

/// Running log-sum-exp accumulator: exact order-dependent sum of
/// `exp(term)` values scaled by a floating maximum.
pub struct RunningLogSumExp {
    max: f64,
    scaled_sum: f64,
}

impl RunningLogSumExp {
    pub fn new() -> RunningLogSumExp {
        RunningLogSumExp { max: f64::NEG_INFINITY, scaled_sum: 0.0 }
    }

    pub fn add(&mut self, term: f64) {
        if term <= self.max {
            self.scaled_sum += (term - self.max).exp();
        } else {
            self.scaled_sum = self.scaled_sum * (self.max - term).exp() + 1.0;
            self.max = term;
        }
    }

    pub fn log_value(&self) -> f64 {
        if self.scaled_sum == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled_sum.ln()
        }
    }
}

impl Default for RunningLogSumExp {
    fn default() -> Self {
        Self::new()
    }
}

/// Gibbs probability `exp(-E(x)) / Z`.
pub fn bm_prob(theta: &BoltzmannParams, x: &[bool]) -> Result<f64> {
    check_config(theta, x)?;
    let log_z = bm_log_partition(theta)?.ln();
    let e = bm_energy(theta, x)?;
    Ok((-e - log_z).exp())
}

/// Probabilities of all `2^N` configurations in state-index order, with the
/// partition function computed once. Entry `i` equals `bm_prob` of the
/// configuration whose bit `b` is `(i >> b) & 1`.
pub fn bm_all_probs(theta: &BoltzmannParams) -> Result<Vec<f64>> {
    let log_z = bm_log_partition(theta)?.ln();
    let mut probs = Vec::with_capacity(1 << theta.units());
    for_each_energy(theta, |e| probs.push((-e - log_z).exp()));
    Ok(probs)
}

/// Index partition of units into visible (input/output) and hidden roles.
#[derive(Debug, Clone)]
pub struct UnitRoles {
    pub visible: Vec<usize>,
    pub hidden: Vec<usize>,
}

impl UnitRoles {
    pub fn new(n: usize, hidden: Vec<usize>) -> Result<UnitRoles> {
        let mut seen = vec![false; n];
        for &h in &hidden {
            if h >= n {
                return Err(Error::domain(format!("hidden index {h} out of range")));
            }
            if seen[h] {
                return Err(Error::domain(format!("hidden index {h} repeated")));
            }
            seen[h] = true;
        }
        let visible = (0..n).filter(|&i| !seen[i]).collect();
        Ok(UnitRoles { visible, hidden })
    }
}

/// Marginal probability of a visible assignment, by restricted enumeration
/// over the hidden indices.
pub fn bm_marginal_prob(theta: &BoltzmannParams, roles: &UnitRoles, visible_values: &[bool]) -> Result<f64> {
    check_guard(theta)?;
    if visible_values.len() != roles.visible.len() {
        return Err(Error::domain(format!(
            "expected {} visible values, got {}",
            roles.visible.len(),
            visible_values.len()
        )));
    }
    let mut x = vec![false; theta.units()];
    for (&idx, &v) in roles.visible.iter().zip(visible_values.iter()) {
        x[idx] = v;
    }
    let h = roles.hidden.len();
    let mut numerator = RunningLogSumExp::new();
    for mask in 0u64..(1u64 << h) {
        for (bit, &idx) in roles.hidden.iter().enumerate() {
            x[idx] = (mask >> bit) & 1 == 1;
        }
        numerator.add(-bm_energy(theta, &x)?);
    }
    Ok((numerator.log_value() - bm_log_partition(theta)?.ln()).exp())
}

/// Ising system: binary connectivity and symmetric couplings on its support.
#[derive(Debug, Clone)]
pub struct IsingSystem {
    n: usize,
    connect: Vec<bool>,
    coupling: Vec<f64>,
}

impl IsingSystem {
    pub fn new(n: usize, connect: Vec<bool>, coupling: Vec<f64>) -> Result<IsingSystem> {
        if connect.len() != n * n || coupling.len() != n * n {
            return Err(Error::domain(format!("connectivity and coupling must be {n} x {n}")));
        }
        for i in 0..n {
            for j in 0..n {
                if connect[i * n + j] != connect[j * n + i] {
                    return Err(Error::domain(format!("connectivity must be symmetric at ({i}, {j})")));
                }
                if connect[i * n + j] && !coupling[i * n + j].is_finite() {
                    return Err(Error::domain(format!("coupling ({i}, {j}) must be finite")));
                }
                if connect[i * n + j] && coupling[i * n + j] != coupling[j * n + i] {
                    return Err(Error::domain(format!(
                        "coupling must be symmetric on the support at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(IsingSystem { n, connect, coupling })
    }

    /// Fully connected system with a constant coupling.
    pub fn complete(n: usize, j: f64) -> IsingSystem {
        let mut connect = vec![true; n * n];
        for i in 0..n {
            connect[i * n + i] = false;
        }
        IsingSystem::new(n, connect, vec![j; n * n]).expect("complete system is valid")
    }

    pub fn spins(&self) -> usize {
        self.n
    }
}

/// Ising energy `sum over connected unordered pairs i < j of J_ij s_i s_j`.
/// Spins must be plus or minus one.
pub fn ising_energy(sys: &IsingSystem, spins: &[i8]) -> Result<f64> {
    if spins.len() != sys.n {
        return Err(Error::domain(format!(
            "spin vector length {} does not match {} sites",
            spins.len(),
            sys.n
        )));
    }
    if spins.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::domain("spins must be +1 or -1".to_string()));
    }
    let mut e = 0.0;
    for i in 0..sys.n {
        for j in i + 1..sys.n {
            if sys.connect[i * sys.n + j] {
                e += sys.coupling[i * sys.n + j] * f64::from(spins[i]) * f64::from(spins[j]);
            }
        }
    }
    Ok(e)
}

/// Number of parity checks of `H` left unsatisfied by `x`: zero exactly on
/// codewords, so codewords are the minima of this landscape.
pub fn syndrome_energy(h: &BinaryMatrix, x: &[bool]) -> Result<usize> {
    if x.len() != h.cols() {
        return Err(Error::domain(format!(
            "vector length {} does not match {} columns",
            x.len(),
            h.cols()
        )));
    }
    Ok(h.mul_vector(x)?.iter().filter(|&&b| b).count())
}

/// Outcome of [`codeword_minima_check`].
#[derive(Debug, Clone)]
pub struct MinimaReport {
    pub codewords_checked: u64,
    /// Columns of weight zero; flipping such a bit costs nothing, so the
    /// minima there are not strict.
    pub zero_weight_columns: Vec<usize>,
    /// Codeword indices (in enumeration order) with non-zero energy. Always
    /// empty for a correct landscape; kept for reporting symmetry.
    pub nonzero_energy_codewords: Vec<u64>,
}

impl MinimaReport {
    /// True when every codeword sits at energy zero and every single-bit
    /// move costs energy.
    pub fn all_strict(&self) -> bool {
        self.zero_weight_columns.is_empty() && self.nonzero_energy_codewords.is_empty()
    }
}

pub const DEFAULT_MINIMA_GUARD: usize = 16;

/// Verifies over the full codebook that codewords have syndrome energy zero
/// and that each single-bit neighbor has strictly positive energy.
///
/// The neighbor energy of flipping bit `i` equals the weight of column `i`
/// (syndromes are linear), so strictness reduces to the absence of zero
/// columns; the column scan reports them and the codeword sweep confirms the
/// zero-energy floor directly.
pub fn codeword_minima_check(h: &BinaryMatrix, dim_guard: usize) -> Result<MinimaReport> {
    let basis = h.nullspace_basis();
    let dim = basis.rows();
    if dim > dim_guard {
        return Err(Error::resource(
            "nullspace dimension guard",
            format!("dimension {dim} exceeds guard {dim_guard}"),
        ));
    }
    let zero_weight_columns: Vec<usize> = (0..h.cols()).filter(|&c| h.col_weight(c) == 0).collect();
    let words = h.cols().div_ceil(64).max(1);
    let basis_words: Vec<Vec<u64>> = (0..dim).map(|r| pack_bits(&basis.row_bits(r))).collect();
    let mut acc = vec![0u64; words];
    let mut nonzero_energy_codewords = Vec::new();
    let total: u64 = 1u64 << dim;
    for k in 0..total {
        if k > 0 {
            let flip = k.trailing_zeros() as usize;
            for (w, bw) in acc.iter_mut().zip(basis_words[flip].iter()) {
                *w ^= bw;
            }
        }
        let bits: Vec<bool> = (0..h.cols()).map(|c| (acc[c / 64] >> (c % 64)) & 1 == 1).collect();
        if syndrome_energy(h, &bits)? != 0 {
            nonzero_energy_codewords.push(k);
        }
    }
    Ok(MinimaReport {
        codewords_checked: total,
        zero_weight_columns,
        nonzero_energy_codewords,
    })
}
