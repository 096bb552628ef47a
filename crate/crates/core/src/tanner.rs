//! Tanner-graph analysis: girth by BFS and by the algebraic circulant cycle
//! condition, trapping-set enumeration, exhaustive minimum distance, and
//! multigraph export.

use crate::circulant::{ExponentMatrix, MetExponentMatrix};
use crate::error::{Error, Result};
use crate::gf2::{pack_bits, BinaryMatrix};

/// Bipartite graph of a parity-check matrix: one check node per row, one
/// variable node per column, one edge per one-entry.
#[derive(Debug, Clone)]
pub struct TannerGraph {
    check_adj: Vec<Vec<usize>>,
    var_adj: Vec<Vec<usize>>,
}

impl TannerGraph {
    pub fn n_checks(&self) -> usize {
        self.check_adj.len()
    }

    pub fn n_vars(&self) -> usize {
        self.var_adj.len()
    }

    pub fn n_edges(&self) -> usize {
        self.check_adj.iter().map(Vec::len).sum()
    }

    /// Variables adjacent to check `c`, ascending.
    pub fn check_neighbors(&self, c: usize) -> &[usize] {
        &self.check_adj[c]
    }

    /// Checks adjacent to variable `v`, ascending.
    pub fn var_neighbors(&self, v: usize) -> &[usize] {
        &self.var_adj[v]
    }
}

pub fn build_tanner(h: &BinaryMatrix) -> TannerGraph {
    let check_adj = (0..h.rows()).map(|r| h.ones_in_row(r)).collect();
    let var_adj = (0..h.cols()).map(|c| h.ones_in_col(c)).collect();
    TannerGraph { check_adj, var_adj }
}

/// Girth of the Tanner graph by breadth-first search; `None` when the graph
/// is acyclic. Always even and at least 4 for a bipartite simple graph.
///
/// For every edge, the shortest cycle through it is one plus the shortest
/// path between its endpoints avoiding the edge itself; the minimum over all
/// edges is the girth.
pub fn girth_bfs(h: &BinaryMatrix) -> Option<usize> {
    let g = build_tanner(h);
    let n_checks = g.n_checks();
    let total = n_checks + g.n_vars();
    // nodes 0..n_checks are checks, the rest variables
    let neighbors = |node: usize| -> &[usize] {
        if node < n_checks {
            g.check_neighbors(node)
        } else {
            g.var_neighbors(node - n_checks)
        }
    };
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; total];
    for c in 0..n_checks {
        for &v in g.check_neighbors(c) {
            let start = c;
            let goal = n_checks + v;
            dist.fill(usize::MAX);
            dist[start] = 0;
            let mut queue = std::collections::VecDeque::from([start]);
            'bfs: while let Some(node) = queue.pop_front() {
                if let Some(b) = best {
                    if dist[node] + 1 >= b {
                        break 'bfs;
                    }
                }
                for &nb_local in neighbors(node) {
                    let nb = if node < n_checks { n_checks + nb_local } else { nb_local };
                    // skip the removed edge in both directions
                    if (node == start && nb == goal) || (node == goal && nb == start) {
                        continue;
                    }
                    if dist[nb] == usize::MAX {
                        dist[nb] = dist[node] + 1;
                        if nb == goal {
                            break 'bfs;
                        }
                        queue.push_back(nb);
                    }
                }
            }
            if dist[goal] != usize::MAX {
                let cycle = dist[goal] + 1;
                if best.map_or(true, |b| cycle < b) {
                    best = Some(cycle);
                }
            }
        }
    }
    best
}

/// Outcome of the algebraic girth computation, which searches closed
/// alternating walks up to a length cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GirthResult {
    Girth(usize),
    /// Cycles exist but none of length at most the cap satisfied the shift
    /// condition.
    ExceedsCap(usize),
    /// The base graph is a forest, so every lift is acyclic.
    Acyclic,
}

/// Default search cap on cycle length for [`cycle_condition_girth`].
pub const DEFAULT_GIRTH_CAP: usize = 12;

/// Girth from the exponent matrix alone: the smallest `2l` for which some
/// closed alternating walk through non-zero cells has alternating shift sum
/// divisible by `L`.
///
/// Walks alternate row moves and column moves, may revisit cells, but may
/// not reuse the cell they just left (that would retrace the same lifted
/// edge). Walks longer than `cap` are not searched.
pub fn cycle_condition_girth(e: &ExponentMatrix, cap: usize) -> GirthResult {
    let cells: Vec<(usize, usize, i64)> = (0..e.rows())
        .flat_map(|r| (0..e.cols()).map(move |c| (r, c, e.entry(r, c))))
        .filter(|&(_, _, v)| v >= 0)
        .collect();
    if base_is_forest(e, &cells) {
        return GirthResult::Acyclic;
    }
    let l = e.circulant_size() as i64;
    // same-row and same-column neighbor lists per cell
    let row_mates: Vec<Vec<usize>> = cells
        .iter()
        .enumerate()
        .map(|(i, &(r, _, _))| {
            cells
                .iter()
                .enumerate()
                .filter(|&(j, &(r2, _, _))| j != i && r2 == r)
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    let col_mates: Vec<Vec<usize>> = cells
        .iter()
        .enumerate()
        .map(|(i, &(_, c, _))| {
            cells
                .iter()
                .enumerate()
                .filter(|&(j, &(_, c2, _))| j != i && c2 == c)
                .map(|(j, _)| j)
                .collect()
        })
        .collect();

    for half_len in 2..=cap / 2 {
        for start in 0..cells.len() {
            if walk_closes(
                &cells, &row_mates, &col_mates, l, start, start, cells[start].2 % l, 1, 2 * half_len,
            ) {
                return GirthResult::Girth(2 * half_len);
            }
        }
    }
    GirthResult::ExceedsCap(cap)
}

/// Depth-first search over alternating walks. `depth` counts cells placed so
/// far; cell signs alternate starting positive, and odd moves are row moves.
fn walk_closes(
    cells: &[(usize, usize, i64)],
    row_mates: &[Vec<usize>],
    col_mates: &[Vec<usize>],
    l: i64,
    start: usize,
    current: usize,
    sum: i64,
    depth: usize,
    target: usize,
) -> bool {
    if depth == target {
        // closing move is a column move back to the start cell
        return current != start
            && cells[current].1 == cells[start].1
            && sum.rem_euclid(l) == 0;
    }
    let mates = if depth % 2 == 1 { &row_mates[current] } else { &col_mates[current] };
    let sign = if depth % 2 == 1 { -1 } else { 1 };
    for &next in mates {
        // the closing move must exist: the last cell shares the start column
        if depth + 1 == target && cells[next].1 != cells[start].1 {
            continue;
        }
        if walk_closes(
            cells,
            row_mates,
            col_mates,
            l,
            start,
            next,
            sum + sign * cells[next].2,
            depth + 1,
            target,
        ) {
            return true;
        }
    }
    false
}

/// True when the base bipartite graph (rows and columns as nodes, non-zero
/// cells as edges) has no cycle.
fn base_is_forest(e: &ExponentMatrix, cells: &[(usize, usize, i64)]) -> bool {
    let mut parent: Vec<usize> = (0..e.rows() + e.cols()).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    for &(r, c, _) in cells {
        let a = find(&mut parent, r);
        let b = find(&mut parent, e.rows() + c);
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

/// A set of `a` variable nodes inducing `b` odd-degree checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrappingSet {
    pub variables: Vec<usize>,
    pub odd_checks: Vec<usize>,
}

impl TrappingSet {
    pub fn a(&self) -> usize {
        self.variables.len()
    }

    pub fn b(&self) -> usize {
        self.odd_checks.len()
    }
}

/// Enumeration limits for trapping-set search.
#[derive(Debug, Clone, Copy)]
pub struct TsSearchLimits {
    pub a_max: usize,
    pub b_max: usize,
    /// Maximum number of variable subsets examined.
    pub budget: u64,
    pub threads: usize,
}

pub const DEFAULT_TS_BUDGET: u64 = 2_000_000;

impl TsSearchLimits {
    pub fn new(a_max: usize, b_max: usize) -> TsSearchLimits {
        TsSearchLimits { a_max, b_max, budget: DEFAULT_TS_BUDGET, threads: 1 }
    }

    pub fn with_budget(mut self, budget: u64) -> TsSearchLimits {
        self.budget = budget;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> TsSearchLimits {
        self.threads = threads.max(1);
        self
    }
}

/// Exhaustively lists every trapping set TS(a, b) with `a <= a_max`,
/// `b <= b_max` whose induced variable subgraph is connected (variables
/// adjacent when they share a check). Disconnected unions are covered by
/// their components.
///
/// Results are sorted by `(a, b, variables)` regardless of thread count.
pub fn find_trapping_sets(h: &BinaryMatrix, limits: &TsSearchLimits) -> Result<Vec<TrappingSet>> {
    let n = h.cols();
    let a_max = limits.a_max.min(n);
    let work: u64 = (1..=a_max).map(|k| binomial(n as u64, k as u64)).sum();
    if work > limits.budget {
        return Err(Error::resource(
            "trapping-set subset budget",
            format!("{work} subsets exceed budget {}", limits.budget),
        ));
    }
    // packed column bitsets over checks: syndrome of a subset is their XOR
    let m_words = h.rows().div_ceil(64).max(1);
    let columns: Vec<Vec<u64>> = (0..n)
        .map(|c| {
            let bits: Vec<bool> = (0..h.rows()).map(|r| h.get(r, c)).collect();
            pack_bits(&bits)
        })
        .collect();
    // variable adjacency via shared checks
    let n_words = n.div_ceil(64).max(1);
    let mut var_adj = vec![vec![0u64; n_words]; n];
    for r in 0..h.rows() {
        let ones = h.ones_in_row(r);
        for &a in &ones {
            for &b in &ones {
                if a != b {
                    var_adj[a][b / 64] |= 1 << (b % 64);
                }
            }
        }
    }

    let run_range = |first_lo: usize, first_hi: usize| -> Vec<TrappingSet> {
        let mut found = Vec::new();
        let mut subset = Vec::with_capacity(a_max);
        for first in first_lo..first_hi {
            subset.push(first);
            collect_sets(
                h, &columns, &var_adj, m_words, n, a_max, limits.b_max, &mut subset, &mut found,
            );
            subset.pop();
        }
        found
    };

    let mut results = if limits.threads <= 1 || n < 2 {
        run_range(0, n)
    } else {
        let threads = limits.threads.min(n);
        let chunk = n.div_ceil(threads);
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    let lo = t * chunk;
                    let hi = ((t + 1) * chunk).min(n);
                    scope.spawn(move || run_range(lo, hi))
                })
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
        })
    };
    results.sort_by(|x, y| {
        (x.a(), x.b(), &x.variables).cmp(&(y.a(), y.b(), &y.variables))
    });
    Ok(results)
}

/// Extends `subset` (kept sorted ascending) with larger variable indices,
/// recording each connected subset whose odd-check count passes the filter.
#[allow(clippy::too_many_arguments)]
fn collect_sets(
    h: &BinaryMatrix,
    columns: &[Vec<u64>],
    var_adj: &[Vec<u64>],
    m_words: usize,
    n: usize,
    a_max: usize,
    b_max: usize,
    subset: &mut Vec<usize>,
    found: &mut Vec<TrappingSet>,
) {
    if is_connected(subset, var_adj) {
        let mut syndrome = vec![0u64; m_words];
        for &v in subset.iter() {
            for (w, cw) in syndrome.iter_mut().zip(columns[v].iter()) {
                *w ^= cw;
            }
        }
        let b: usize = syndrome.iter().map(|w| w.count_ones() as usize).sum();
        if b <= b_max {
            let odd_checks = (0..h.rows())
                .filter(|&r| (syndrome[r / 64] >> (r % 64)) & 1 == 1)
                .collect();
            found.push(TrappingSet { variables: subset.clone(), odd_checks });
        }
    }
    if subset.len() == a_max {
        return;
    }
    let last = *subset.last().expect("subset is never empty here");
    for next in last + 1..n {
        subset.push(next);
        collect_sets(h, columns, var_adj, m_words, n, a_max, b_max, subset, found);
        subset.pop();
    }
}

fn is_connected(subset: &[usize], var_adj: &[Vec<u64>]) -> bool {
    if subset.len() <= 1 {
        return true;
    }
    let mut visited = vec![false; subset.len()];
    let mut stack = vec![0usize];
    visited[0] = true;
    let mut seen = 1;
    while let Some(i) = stack.pop() {
        let adj = &var_adj[subset[i]];
        for (j, &v) in subset.iter().enumerate() {
            if !visited[j] && (adj[v / 64] >> (v % 64)) & 1 == 1 {
                visited[j] = true;
                seen += 1;
                stack.push(j);
            }
        }
    }
    seen == subset.len()
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc.min(u64::MAX as u128) as u64
}

/// CSV report of trapping sets: `a,b,variables` with the variable indices
/// space-separated inside the third field.
pub fn trapping_sets_csv(sets: &[TrappingSet]) -> String {
    let mut out = String::from("a,b,variables\n");
    for ts in sets {
        let vars: Vec<String> = ts.variables.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("{},{},{}\n", ts.a(), ts.b(), vars.join(" ")));
    }
    out
}

/// Minimum-distance result; `Trivial` means the nullspace is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinDistance {
    Trivial,
    Distance(usize),
}

pub const DEFAULT_DMIN_GUARD: usize = 24;

/// Minimum Hamming weight over non-zero codewords of `H`, by nullspace basis
/// extraction and exhaustive span enumeration (Gray-code order).
pub fn min_distance_exhaustive(h: &BinaryMatrix, dim_guard: usize) -> Result<MinDistance> {
    let basis = h.nullspace_basis();
    let dim = basis.rows();
    if dim == 0 {
        return Ok(MinDistance::Trivial);
    }
    if dim > dim_guard {
        return Err(Error::resource(
            "nullspace dimension guard",
            format!("dimension {dim} exceeds guard {dim_guard}"),
        ));
    }
    let words = h.cols().div_ceil(64).max(1);
    let basis_words: Vec<Vec<u64>> = (0..dim).map(|r| pack_bits(&basis.row_bits(r))).collect();
    let mut acc = vec![0u64; words];
    let mut best = usize::MAX;
    for k in 1u64..(1u64 << dim) {
        let flip = k.trailing_zeros() as usize;
        for (w, bw) in acc.iter_mut().zip(basis_words[flip].iter()) {
            *w ^= bw;
        }
        let weight: usize = acc.iter().map(|w| w.count_ones() as usize).sum();
        if weight < best {
            best = weight;
        }
    }
    Ok(MinDistance::Distance(best))
}

/// DOT description of the block multigraph of a multi-edge matrix: one node
/// per block row (`c*`) and block column (`v*`), one edge per shift with the
/// shift as label. Ordering is deterministic.
pub fn export_multigraph(me: &MetExponentMatrix) -> String {
    let mut out = String::from("graph met {\n");
    for r in 0..me.rows() {
        out.push_str(&format!("  c{r};\n"));
    }
    for c in 0..me.cols() {
        out.push_str(&format!("  v{c};\n"));
    }
    for r in 0..me.rows() {
        for c in 0..me.cols() {
            for &s in me.cell(r, c) {
                out.push_str(&format!("  c{r} -- v{c} [label=\"{s}\"];\n"));
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circulant::ExponentMatrix;
    use crate::codes::lift;

    #[test]
    fn tanner_counts_for_introductory_matrix() {
        let h = BinaryMatrix::from_rows(&[
            vec![1, 0, 1, 1, 1],
            vec![1, 1, 0, 0, 0],
            vec![0, 1, 1, 1, 1],
        ]);
        let g = build_tanner(&h);
        assert_eq!(g.n_vars(), 5);
        assert_eq!(g.n_checks(), 3);
        assert_eq!(g.n_edges(), 10);
    }

    #[test]
    fn tanner_identity_and_zero() {
        let g = build_tanner(&BinaryMatrix::identity(3));
        assert_eq!(g.n_edges(), 3);
        for v in 0..3 {
            assert_eq!(g.var_neighbors(v), &[v]);
        }
        let z = build_tanner(&BinaryMatrix::zero(2, 4));
        assert_eq!(z.n_edges(), 0);
    }

    #[test]
    fn girth_bfs_tree_is_acyclic() {
        // a path: v0 - c0 - v1 - c1 - v2
        let h = BinaryMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1]]);
        assert_eq!(girth_bfs(&h), None);
    }

    #[test]
    fn girth_bfs_all_ones_two_by_two() {
        let h = BinaryMatrix::from_rows(&[vec![1, 1], vec![1, 1]]);
        assert_eq!(girth_bfs(&h), Some(4));
    }

    #[test]
    fn cycle_condition_all_zero_shifts() {
        let e = ExponentMatrix::from_grid(1, &[vec![0, 0], vec![0, 0]]).unwrap();
        assert_eq!(cycle_condition_girth(&e, DEFAULT_GIRTH_CAP), GirthResult::Girth(4));
    }

    #[test]
    fn cycle_condition_forced_double_loop() {
        // the 4-walk sum is 1 mod 2; going around twice reaches 8
        let e = ExponentMatrix::from_grid(2, &[vec![0, 0], vec![0, 1]]).unwrap();
        assert_eq!(cycle_condition_girth(&e, DEFAULT_GIRTH_CAP), GirthResult::Girth(8));
        assert_eq!(girth_bfs(&lift(&e)), Some(8));
    }

    #[test]
    fn cycle_condition_single_row_is_acyclic() {
        let e = ExponentMatrix::from_grid(9, &[vec![0, 5, 7]]).unwrap();
        assert_eq!(cycle_condition_girth(&e, DEFAULT_GIRTH_CAP), GirthResult::Acyclic);
        assert_eq!(girth_bfs(&lift(&e)), None);
    }

    #[test]
    fn cycle_condition_matches_bfs_on_three_particle_code() {
        let e = ExponentMatrix::from_grid(7, &[vec![1, 2, 4], vec![6, 5, 3]]).unwrap();
        let bfs = girth_bfs(&lift(&e)).expect("this code has cycles");
        assert_eq!(cycle_condition_girth(&e, DEFAULT_GIRTH_CAP), GirthResult::Girth(bfs));
    }

    fn ts44_fixture() -> BinaryMatrix {
        // an 8-cycle on four variables plus one private degree-1 check each
        BinaryMatrix::from_rows(&[
            vec![1, 1, 0, 0],
            vec![0, 1, 1, 0],
            vec![0, 0, 1, 1],
            vec![1, 0, 0, 1],
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
        ])
    }

    #[test]
    fn trapping_sets_single_variables_have_b_equal_column_weight() {
        let h = ts44_fixture();
        let sets = find_trapping_sets(&h, &TsSearchLimits::new(1, 8)).unwrap();
        assert_eq!(sets.len(), 4);
        for ts in sets {
            assert_eq!(ts.a(), 1);
            assert_eq!(ts.b(), h.col_weight(ts.variables[0]));
        }
    }

    #[test]
    fn trapping_sets_find_ts44_from_eight_cycle() {
        let h = ts44_fixture();
        let sets = find_trapping_sets(&h, &TsSearchLimits::new(4, 4)).unwrap();
        let ts44: Vec<_> = sets.iter().filter(|t| t.a() == 4 && t.b() == 4).collect();
        assert_eq!(ts44.len(), 1);
        assert_eq!(ts44[0].variables, vec![0, 1, 2, 3]);
        // the odd checks are exactly the four private ones
        assert_eq!(ts44[0].odd_checks, vec![4, 5, 6, 7]);
    }

    #[test]
    fn trapping_sets_reject_disconnected_subsets() {
        // two independent edges: v0-c0-v1 and v2-c1-v3
        let h = BinaryMatrix::from_rows(&[vec![1, 1, 0, 0], vec![0, 0, 1, 1]]);
        let sets = find_trapping_sets(&h, &TsSearchLimits::new(4, 8)).unwrap();
        assert!(sets.iter().all(|t| t.a() <= 2));
        assert!(sets.iter().any(|t| t.variables == vec![0, 1] && t.b() == 0));
        assert!(!sets.iter().any(|t| t.variables == vec![0, 2]));
    }

    #[test]
    fn trapping_sets_b_recomputation_matches() {
        let e = ExponentMatrix::from_grid(5, &[vec![0, 1, 2], vec![3, 0, 4]]).unwrap();
        let h = lift(&e);
        let sets = find_trapping_sets(&h, &TsSearchLimits::new(3, 10)).unwrap();
        assert!(!sets.is_empty());
        for ts in &sets {
            let mut count = vec![0usize; h.rows()];
            for &v in &ts.variables {
                for r in h.ones_in_col(v) {
                    count[r] += 1;
                }
            }
            let odd: Vec<usize> = (0..h.rows()).filter(|&r| count[r] % 2 == 1).collect();
            assert_eq!(odd, ts.odd_checks);
        }
    }

    #[test]
    fn trapping_sets_deterministic_across_threads() {
        let e = ExponentMatrix::from_grid(4, &[vec![0, 1, 2, 3], vec![1, 3, 0, 2]]).unwrap();
        let h = lift(&e);
        let single = find_trapping_sets(&h, &TsSearchLimits::new(3, 6)).unwrap();
        let multi = find_trapping_sets(&h, &TsSearchLimits::new(3, 6).with_threads(4)).unwrap();
        assert_eq!(single, multi);
    }

    #[test]
    fn trapping_sets_budget_guard() {
        let h = BinaryMatrix::identity(10);
        let err = find_trapping_sets(&h, &TsSearchLimits::new(3, 3).with_budget(5)).unwrap_err();
        match err {
            Error::Resource { guard, .. } => assert!(guard.contains("budget")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn min_distance_identity_is_trivial() {
        assert_eq!(
            min_distance_exhaustive(&BinaryMatrix::identity(4), DEFAULT_DMIN_GUARD).unwrap(),
            MinDistance::Trivial
        );
    }

    #[test]
    fn min_distance_repetition_code() {
        let mut h = BinaryMatrix::zero(4, 5);
        for i in 0..4 {
            h.set(i, i, true);
            h.set(i, i + 1, true);
        }
        assert_eq!(
            min_distance_exhaustive(&h, DEFAULT_DMIN_GUARD).unwrap(),
            MinDistance::Distance(5)
        );
    }

    #[test]
    fn min_distance_guard_fires() {
        let h = BinaryMatrix::zero(1, 30);
        assert!(matches!(
            min_distance_exhaustive(&h, 24),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn min_distance_equals_smallest_codeword_trapping_set() {
        let e = ExponentMatrix::from_grid(3, &[vec![0, 1, 2], vec![1, 2, 0]]).unwrap();
        let h = lift(&e);
        let d = match min_distance_exhaustive(&h, DEFAULT_DMIN_GUARD).unwrap() {
            MinDistance::Distance(d) => d,
            MinDistance::Trivial => panic!("code has codewords"),
        };
        let sets = find_trapping_sets(&h, &TsSearchLimits::new(d, 0)).unwrap();
        let smallest_codeword = sets.iter().filter(|t| t.b() == 0).map(|t| t.a()).min();
        assert_eq!(smallest_codeword, Some(d));
    }

    #[test]
    fn multigraph_export_parallel_edges() {
        let me = MetExponentMatrix::from_grid(9, &[vec![vec![1, 2, 7]]]).unwrap();
        let dot = export_multigraph(&me);
        assert_eq!(dot.matches("c0 -- v0").count(), 3);
        assert!(dot.contains("[label=\"7\"]"));
    }

    #[test]
    fn multigraph_export_empty_cells() {
        let me = MetExponentMatrix::from_grid(4, &[vec![vec![], vec![]]]).unwrap();
        let dot = export_multigraph(&me);
        assert!(!dot.contains("--"));
        assert!(dot.contains("c0;"));
        assert!(dot.contains("v1;"));
    }

    #[test]
    fn multigraph_export_eq5_shape() {
        let me = MetExponentMatrix::from_grid(
            40,
            &[
                vec![vec![1, 2, 7], vec![9], vec![23], vec![], vec![]],
                vec![vec![12, 37], vec![19], vec![], vec![32], vec![11, 12]],
                vec![vec![], vec![], vec![33], vec![], vec![]],
            ],
        )
        .unwrap();
        let dot = export_multigraph(&me);
        // one edge per shift: cell cardinalities sum to 12
        assert_eq!(dot.matches(" -- ").count(), 12);
        for c in 0..3 {
            assert!(dot.contains(&format!("c{c};")));
        }
        for v in 0..5 {
            assert!(dot.contains(&format!("v{v};")));
        }
    }
}
