//! Coulomb force computation and equilibrium verification on the circle and
//! torus, with fixed-step relaxation.
//!
//! Interaction is screened: on a circle each particle feels only its two arc
//! neighbors; on a torus each grid node feels the eight nodes of its
//! surrounding multicell, through squared axis-projected distances. The
//! Coulomb constant is one.

use crate::error::{Error, Result};

/// Particles with positive charges at arc positions on a circle.
#[derive(Debug, Clone)]
pub struct CircleSystem {
    circumference: f64,
    charges: Vec<f64>,
    positions: Vec<f64>,
}

impl CircleSystem {
    /// Positions are reduced into `[0, circumference)` at construction.
    pub fn new(circumference: f64, particles: &[(f64, f64)]) -> Result<CircleSystem> {
        if !(circumference > 0.0) || !circumference.is_finite() {
            return Err(Error::domain("circumference must be positive".to_string()));
        }
        let mut charges = Vec::with_capacity(particles.len());
        let mut positions = Vec::with_capacity(particles.len());
        for &(q, pos) in particles {
            if !(q > 0.0) || !q.is_finite() {
                return Err(Error::domain("charges must be positive".to_string()));
            }
            if !pos.is_finite() {
                return Err(Error::domain("positions must be finite".to_string()));
            }
            charges.push(q);
            positions.push(pos.rem_euclid(circumference));
        }
        Ok(CircleSystem { circumference, charges, positions })
    }

    pub fn circumference(&self) -> f64 {
        self.circumference
    }

    pub fn len(&self) -> usize {
        self.charges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charges.is_empty()
    }

    pub fn charge(&self, i: usize) -> f64 {
        self.charges[i]
    }

    pub fn position(&self, i: usize) -> f64 {
        self.positions[i]
    }

    /// Counterclockwise arc gaps between successive particles in sorted
    /// order, as `(particle index, gap to next)`.
    pub fn sorted_gaps(&self) -> Result<Vec<(usize, f64)>> {
        let order = self.sorted_order()?;
        let n = order.len();
        Ok((0..n)
            .map(|k| {
                let here = self.positions[order[k]];
                let next = self.positions[order[(k + 1) % n]];
                let mut gap = next - here;
                if k + 1 == n {
                    gap += self.circumference;
                }
                (order[k], gap)
            })
            .collect())
    }

    fn sorted_order(&self) -> Result<Vec<usize>> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.positions[a].total_cmp(&self.positions[b]));
        for k in 0..order.len() {
            let a = self.positions[order[k]];
            let b = self.positions[order[(k + 1) % order.len()]];
            if a == b && order.len() > 1 {
                return Err(Error::domain(format!(
                    "coincident particles at position {a}"
                )));
            }
        }
        Ok(order)
    }
}

/// Net force on every particle plus the max-norm, one row per particle.
#[derive(Debug, Clone)]
pub struct ForceReport {
    /// Force components per particle: one column on the circle (tangential),
    /// two on the torus (X1 and X2 projections).
    pub components: Vec<Vec<f64>>,
}

impl ForceReport {
    pub fn max_norm(&self) -> f64 {
        self.components
            .iter()
            .flat_map(|row| row.iter().map(|f| f.abs()))
            .fold(0.0, f64::max)
    }
}

/// Equilibrium test: true when the max-norm force does not exceed `tol`
/// (inclusive).
pub fn is_equilibrium(report: &ForceReport, tol: f64) -> bool {
    report.max_norm() <= tol
}

/// Screened tangential force per particle: only the two arc neighbors act,
/// `F_i = q_i q_right / d_r^2 - q_i q_left / d_l^2` with counterclockwise
/// distances.
pub fn circle_net_forces(sys: &CircleSystem) -> Result<ForceReport> {
    if sys.len() < 2 {
        return Err(Error::domain("need at least two particles".to_string()));
    }
    let order = sys.sorted_order()?;
    let n = order.len();
    let mut components = vec![vec![0.0]; n];
    for k in 0..n {
        let i = order[k];
        let right = order[(k + 1) % n];
        let left = order[(k + n - 1) % n];
        let d_r = arc_gap(sys, i, right);
        let d_l = arc_gap(sys, left, i);
        let f = sys.charge(i) * sys.charge(right) / (d_r * d_r)
            - sys.charge(i) * sys.charge(left) / (d_l * d_l);
        components[i][0] = f;
    }
    Ok(ForceReport { components })
}

/// Counterclockwise arc distance from particle `from` to particle `to`.
fn arc_gap(sys: &CircleSystem, from: usize, to: usize) -> f64 {
    let mut gap = sys.position(to) - sys.position(from);
    if gap <= 0.0 {
        gap += sys.circumference();
    }
    gap
}

/// Grid of charged particles on a flat torus; node `(a, b)` of the
/// `nx x ny` grid interacts with the eight surrounding nodes.
#[derive(Debug, Clone)]
pub struct TorusSystem {
    period_x: f64,
    period_y: f64,
    nx: usize,
    ny: usize,
    charges: Vec<f64>,
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl TorusSystem {
    /// `particles` holds `(charge, x, y)` in row-major grid order, `nx * ny`
    /// entries; positions are wrapped into the fundamental domain.
    pub fn new(
        period_x: f64,
        period_y: f64,
        nx: usize,
        ny: usize,
        particles: &[(f64, f64, f64)],
    ) -> Result<TorusSystem> {
        if !(period_x > 0.0) || !(period_y > 0.0) {
            return Err(Error::domain("torus periods must be positive".to_string()));
        }
        if nx < 3 || ny < 3 {
            return Err(Error::domain(
                "multicell neighborhoods need at least a 3 x 3 grid".to_string(),
            ));
        }
        if particles.len() != nx * ny {
            return Err(Error::domain(format!(
                "expected {} particles for a {nx} x {ny} grid",
                nx * ny
            )));
        }
        let mut charges = Vec::with_capacity(particles.len());
        let mut xs = Vec::with_capacity(particles.len());
        let mut ys = Vec::with_capacity(particles.len());
        for &(q, x, y) in particles {
            if !(q > 0.0) || !q.is_finite() {
                return Err(Error::domain("charges must be positive".to_string()));
            }
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::domain("positions must be finite".to_string()));
            }
            charges.push(q);
            xs.push(x.rem_euclid(period_x));
            ys.push(y.rem_euclid(period_y));
        }
        Ok(TorusSystem { period_x, period_y, nx, ny, charges, xs, ys })
    }

    /// Uniform grid of unit charges with spacing `period / n` per axis.
    pub fn uniform_grid(period_x: f64, period_y: f64, nx: usize, ny: usize) -> Result<TorusSystem> {
        let sx = period_x / nx as f64;
        let sy = period_y / ny as f64;
        let particles: Vec<(f64, f64, f64)> = (0..ny)
            .flat_map(|b| (0..nx).map(move |a| (1.0, a as f64 * sx, b as f64 * sy)))
            .collect();
        TorusSystem::new(period_x, period_y, nx, ny, &particles)
    }

    pub fn grid_dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn len(&self) -> usize {
        self.charges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charges.is_empty()
    }

    pub fn charge(&self, idx: usize) -> f64 {
        self.charges[idx]
    }

    pub fn position(&self, idx: usize) -> (f64, f64) {
        (self.xs[idx], self.ys[idx])
    }

    fn index(&self, a: isize, b: isize) -> usize {
        let a = a.rem_euclid(self.nx as isize) as usize;
        let b = b.rem_euclid(self.ny as isize) as usize;
        b * self.nx + a
    }

    /// Minimal-image displacement from node `from` to node `to`.
    fn wrap_delta(&self, from: usize, to: usize) -> (f64, f64) {
        let dx = wrap_half(self.xs[to] - self.xs[from], self.period_x);
        let dy = wrap_half(self.ys[to] - self.ys[from], self.period_y);
        (dx, dy)
    }
}

fn wrap_half(delta: f64, period: f64) -> f64 {
    let mut d = delta.rem_euclid(period);
    if d >= period / 2.0 {
        d -= period;
    }
    d
}

/// Multicell force projections for every node of the torus grid.
///
/// For node 0 with the eight neighbors numbered counterclockwise from the
/// lower-left, the projections are
/// `F_X1 = q0 (q1/rx1^2 + q8/rx8^2 + q7/rx7^2 - q3/rx3^2 - q4/rx4^2 - q5/rx5^2)` and
/// `F_X2 = q0 (q1/ry1^2 + q2/ry2^2 + q3/ry3^2 - q5/ry5^2 - q6/ry6^2 - q7/ry7^2)`,
/// where `rx`, `ry` are the axis projections of the neighbor distances.
/// Any zero projection on a term the equations include is a domain error.
pub fn torus_net_forces(sys: &TorusSystem) -> Result<ForceReport> {
    let mut components = vec![vec![0.0, 0.0]; sys.len()];
    // neighbor offsets numbered 1..=8: SW, S, SE, E, NE, N, NW, W
    const OFFSETS: [(isize, isize); 8] =
        [(-1, -1), (0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0)];
    // X1 signs per neighbor number (0 = absent from the equation)
    const X1_SIGN: [f64; 8] = [1.0, 0.0, -1.0, -1.0, -1.0, 0.0, 1.0, 1.0];
    const X2_SIGN: [f64; 8] = [1.0, 1.0, 1.0, 0.0, -1.0, -1.0, -1.0, 0.0];
    for b in 0..sys.ny as isize {
        for a in 0..sys.nx as isize {
            let center = sys.index(a, b);
            let q0 = sys.charge(center);
            let mut fx = 0.0;
            let mut fy = 0.0;
            for (k, &(da, db)) in OFFSETS.iter().enumerate() {
                let nb = sys.index(a + da, b + db);
                let qn = sys.charge(nb);
                let (dx, dy) = sys.wrap_delta(center, nb);
                if X1_SIGN[k] != 0.0 {
                    if dx == 0.0 {
                        return Err(Error::domain(format!(
                            "zero x-projection between grid nodes ({a}, {b}) and neighbor {}",
                            k + 1
                        )));
                    }
                    fx += X1_SIGN[k] * qn / (dx * dx);
                }
                if X2_SIGN[k] != 0.0 {
                    if dy == 0.0 {
                        return Err(Error::domain(format!(
                            "zero y-projection between grid nodes ({a}, {b}) and neighbor {}",
                            k + 1
                        )));
                    }
                    fy += X2_SIGN[k] * qn / (dy * dy);
                }
            }
            components[center] = vec![q0 * fx, q0 * fy];
        }
    }
    Ok(ForceReport { components })
}

/// Charge system on either supported geometry.
#[derive(Debug, Clone)]
pub enum ChargeSystem {
    Circle(CircleSystem),
    Torus(TorusSystem),
}

impl ChargeSystem {
    pub fn net_forces(&self) -> Result<ForceReport> {
        match self {
            ChargeSystem::Circle(c) => circle_net_forces(c),
            ChargeSystem::Torus(t) => torus_net_forces(t),
        }
    }
}

/// Relaxation settings: fixed-step force descent with step halving whenever
/// a move would raise the screened interaction energy.
#[derive(Debug, Clone, Copy)]
pub struct RelaxOptions {
    pub step: f64,
    pub max_iters: usize,
    pub tol: f64,
    /// Trajectory snapshots are kept every `trajectory_stride` iterations
    /// (the initial and final states always are).
    pub trajectory_stride: usize,
}

impl RelaxOptions {
    pub fn new(step: f64, max_iters: usize, tol: f64) -> RelaxOptions {
        RelaxOptions { step, max_iters, tol, trajectory_stride: 1 }
    }
}

/// One recorded relaxation state.
#[derive(Debug, Clone)]
pub struct TrajectoryPoint {
    pub iteration: usize,
    /// Per particle: position components then force components.
    pub rows: Vec<Vec<f64>>,
}

/// Relaxation outcome; `converged` is false when the iteration or step-size
/// budget ran out first.
#[derive(Debug, Clone)]
pub struct RelaxOutcome {
    pub system: ChargeSystem,
    pub converged: bool,
    pub iterations: usize,
    pub trajectory: Vec<TrajectoryPoint>,
}

impl RelaxOutcome {
    /// Trajectory CSV: `iteration,particle,position...,force...`.
    pub fn trajectory_csv(&self) -> String {
        let two_d = matches!(self.system, ChargeSystem::Torus(_));
        let mut out = String::from(if two_d {
            "iteration,particle,x,y,fx,fy\n"
        } else {
            "iteration,particle,position,force\n"
        });
        for point in &self.trajectory {
            for (p, row) in point.rows.iter().enumerate() {
                let vals: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                out.push_str(&format!("{},{},{}\n", point.iteration, p, vals.join(",")));
            }
        }
        out
    }
}

/// Gradient descent on particle positions along the net forces until the
/// force max-norm is within `tol` or the budget runs out.
pub fn relax(sys: &ChargeSystem, opts: &RelaxOptions) -> Result<RelaxOutcome> {
    if !(opts.step > 0.0) {
        return Err(Error::domain("relaxation step must be positive".to_string()));
    }
    match sys {
        ChargeSystem::Circle(c) => relax_circle(c, opts),
        ChargeSystem::Torus(t) => relax_torus(t, opts),
    }
}

/// Screened interaction energy on the circle: `sum q_i q_next / gap`.
fn circle_energy(sys: &CircleSystem) -> Result<f64> {
    let order = sys.sorted_order()?;
    let n = order.len();
    let mut u = 0.0;
    for k in 0..n {
        let i = order[k];
        let j = order[(k + 1) % n];
        u += sys.charge(i) * sys.charge(j) / arc_gap(sys, i, j);
    }
    Ok(u)
}

fn snapshot(iteration: usize, positions: &[Vec<f64>], forces: &ForceReport) -> TrajectoryPoint {
    let rows = positions
        .iter()
        .zip(forces.components.iter())
        .map(|(p, f)| p.iter().chain(f.iter()).copied().collect())
        .collect();
    TrajectoryPoint { iteration, rows }
}

fn relax_circle(start: &CircleSystem, opts: &RelaxOptions) -> Result<RelaxOutcome> {
    let mut sys = start.clone();
    let mut step = opts.step;
    let stride = opts.trajectory_stride.max(1);
    let mut trajectory = Vec::new();
    let mut energy = circle_energy(&sys)?;
    let mut converged = false;
    let mut iterations = 0;
    loop {
        let forces = circle_net_forces(&sys)?;
        if iterations % stride == 0 {
            let positions: Vec<Vec<f64>> = (0..sys.len()).map(|i| vec![sys.position(i)]).collect();
            trajectory.push(snapshot(iterations, &positions, &forces));
        }
        if is_equilibrium(&forces, opts.tol) {
            converged = true;
            break;
        }
        if iterations >= opts.max_iters {
            break;
        }
        // descend along the counterclockwise force, halving on energy increase
        let mut moved = false;
        while step > f64::MIN_POSITIVE {
            let candidate_positions: Vec<f64> = (0..sys.len())
                .map(|i| {
                    // the reported force is rightward-positive; flip for ccw
                    (sys.position(i) - step * forces.components[i][0])
                        .rem_euclid(sys.circumference())
                })
                .collect();
            let particles: Vec<(f64, f64)> = candidate_positions
                .iter()
                .enumerate()
                .map(|(i, &p)| (sys.charge(i), p))
                .collect();
            let candidate = match CircleSystem::new(sys.circumference(), &particles) {
                Ok(c) => c,
                Err(_) => {
                    step *= 0.5;
                    continue;
                }
            };
            match circle_energy(&candidate) {
                // a few ulps of slack so rounding noise near the minimum
                // does not shrink the step forever
                Ok(e) if e <= energy + 4.0 * f64::EPSILON * energy.abs() => {
                    sys = candidate;
                    energy = e;
                    moved = true;
                    break;
                }
                _ => step *= 0.5,
            }
        }
        if !moved {
            break; // step underflowed; flag non-convergence
        }
        iterations += 1;
    }
    let forces = circle_net_forces(&sys)?;
    let positions: Vec<Vec<f64>> = (0..sys.len()).map(|i| vec![sys.position(i)]).collect();
    if trajectory.last().map_or(true, |t| t.iteration != iterations) {
        trajectory.push(snapshot(iterations, &positions, &forces));
    }
    Ok(RelaxOutcome { system: ChargeSystem::Circle(sys), converged, iterations, trajectory })
}

/// Screened multicell energy on the torus: `q q' / |dx|` over horizontal and
/// diagonal pairs plus `q q' / |dy|` over vertical and diagonal pairs, each
/// unordered pair once. Its negative gradient reproduces the projection
/// equations while every neighbor stays on its expected side.
fn torus_energy(sys: &TorusSystem) -> Result<f64> {
    const HALF: [(isize, isize); 4] = [(1, 0), (1, 1), (0, 1), (-1, 1)]; // E, NE, N, NW
    let mut u = 0.0;
    for b in 0..sys.ny as isize {
        for a in 0..sys.nx as isize {
            let center = sys.index(a, b);
            for &(da, db) in HALF.iter() {
                let nb = sys.index(a + da, b + db);
                let (dx, dy) = sys.wrap_delta(center, nb);
                let qq = sys.charge(center) * sys.charge(nb);
                if da != 0 {
                    if dx == 0.0 {
                        return Err(Error::domain("zero x-projection in torus energy".to_string()));
                    }
                    u += qq / dx.abs();
                }
                if db != 0 {
                    if dy == 0.0 {
                        return Err(Error::domain("zero y-projection in torus energy".to_string()));
                    }
                    u += qq / dy.abs();
                }
            }
        }
    }
    Ok(u)
}

fn relax_torus(start: &TorusSystem, opts: &RelaxOptions) -> Result<RelaxOutcome> {
    let mut sys = start.clone();
    let mut step = opts.step;
    let stride = opts.trajectory_stride.max(1);
    let mut trajectory = Vec::new();
    let mut energy = torus_energy(&sys)?;
    let mut converged = false;
    let mut iterations = 0;
    loop {
        let forces = torus_net_forces(&sys)?;
        if iterations % stride == 0 {
            let positions: Vec<Vec<f64>> = (0..sys.len())
                .map(|i| {
                    let (x, y) = sys.position(i);
                    vec![x, y]
                })
                .collect();
            trajectory.push(snapshot(iterations, &positions, &forces));
        }
        if is_equilibrium(&forces, opts.tol) {
            converged = true;
            break;
        }
        if iterations >= opts.max_iters {
            break;
        }
        let mut moved = false;
        while step > f64::MIN_POSITIVE {
            let particles: Vec<(f64, f64, f64)> = (0..sys.len())
                .map(|i| {
                    let (x, y) = sys.position(i);
                    (
                        sys.charge(i),
                        x + step * forces.components[i][0],
                        y + step * forces.components[i][1],
                    )
                })
                .collect();
            let (nx, ny) = sys.grid_dims();
            let candidate = match TorusSystem::new(sys.period_x, sys.period_y, nx, ny, &particles) {
                Ok(c) => c,
                Err(_) => {
                    step *= 0.5;
                    continue;
                }
            };
            match torus_energy(&candidate) {
                Ok(e) if e <= energy + 4.0 * f64::EPSILON * energy.abs() => {
                    sys = candidate;
                    energy = e;
                    moved = true;
                    break;
                }
                _ => step *= 0.5,
            }
        }
        if !moved {
            break;
        }
        iterations += 1;
    }
    let forces = torus_net_forces(&sys)?;
    let positions: Vec<Vec<f64>> = (0..sys.len())
        .map(|i| {
            let (x, y) = sys.position(i);
            vec![x, y]
        })
        .collect();
    if trajectory.last().map_or(true, |t| t.iteration != iterations) {
        trajectory.push(snapshot(iterations, &positions, &forces));
    }
    Ok(RelaxOutcome { system: ChargeSystem::Torus(sys), converged, iterations, trajectory })
}

/// Force-report CSV: `particle,components...`.
pub fn force_report_csv(report: &ForceReport) -> String {
    let two_d = report.components.first().map_or(false, |r| r.len() == 2);
    let mut out = String::from(if two_d { "particle,fx,fy\n" } else { "particle,force\n" });
    for (i, row) in report.components.iter().enumerate() {
        let vals: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("{},{}\n", i, vals.join(",")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn equal_charges_circle(positions: &[f64], circumference: f64) -> CircleSystem {
        let particles: Vec<(f64, f64)> = positions.iter().map(|&p| (1.0, p)).collect();
        CircleSystem::new(circumference, &particles).unwrap()
    }

    #[test]
    fn two_opposite_charges_balance() {
        let sys = equal_charges_circle(&[0.0, 2.0], 4.0);
        let report = circle_net_forces(&sys).unwrap();
        assert_eq!(report.max_norm(), 0.0);
    }

    #[test]
    fn six_equally_spaced_charges_balance() {
        let positions: Vec<f64> = (0..6).map(|i| i as f64).collect();
        let sys = equal_charges_circle(&positions, 6.0);
        let report = circle_net_forces(&sys).unwrap();
        assert!(report.max_norm() < 1e-12);
    }

    #[test]
    fn two_charges_unequal_gaps_force_magnitude() {
        // gaps 1 and 3 on a circumference-4 circle: |F| = 1/1 - 1/9 = 8/9
        let sys = equal_charges_circle(&[0.0, 1.0], 4.0);
        let report = circle_net_forces(&sys).unwrap();
        for row in &report.components {
            assert!((row[0].abs() - 8.0 / 9.0).abs() < 1e-15);
        }
    }

    #[test]
    fn lemma_one_both_directions() {
        // equal charges: zero force iff the two gaps agree
        for (left, right) in [(1.5, 1.5), (1.0, 2.0), (0.25, 3.75)] {
            let c = left + right;
            let sys = equal_charges_circle(&[0.0, left], c);
            let report = circle_net_forces(&sys).unwrap();
            if (left - right).abs() < 1e-15 {
                assert_eq!(report.max_norm(), 0.0);
            } else {
                assert!(report.max_norm() > 0.0);
            }
        }
    }

    #[test]
    fn coincident_positions_rejected() {
        let sys = CircleSystem::new(4.0, &[(1.0, 1.0), (1.0, 5.0)]).unwrap();
        // 5 wraps onto 1
        assert!(circle_net_forces(&sys).is_err());
    }

    #[test]
    fn equilibrium_tolerance_is_inclusive() {
        let report = ForceReport { components: vec![vec![1e-9]] };
        assert!(is_equilibrium(&report, 1e-9));
        assert!(!is_equilibrium(&report, 1e-10));
        let zero = ForceReport { components: vec![vec![0.0]] };
        assert!(is_equilibrium(&zero, 1e-300));
    }

    #[test]
    fn rotation_leaves_forces_unchanged() {
        let positions = [0.3, 1.1, 2.9, 3.4];
        let sys = equal_charges_circle(&positions, 5.0);
        let base = circle_net_forces(&sys).unwrap().max_norm();
        for delta in [0.17, 1.91, 4.2] {
            let rotated: Vec<f64> = positions.iter().map(|p| p + delta).collect();
            let rotated = equal_charges_circle(&rotated, 5.0);
            let norm = circle_net_forces(&rotated).unwrap().max_norm();
            assert!((norm - base).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_torus_grid_is_in_equilibrium() {
        let sys = TorusSystem::uniform_grid(4.0, 4.0, 4, 4).unwrap();
        let report = torus_net_forces(&sys).unwrap();
        assert!(report.max_norm() < 1e-9);
    }

    #[test]
    fn skewed_uniform_torus_grid_is_in_equilibrium() {
        // rows sheared by two spacings per row; the total shear wraps
        // cleanly (4 * 2 = 0 mod 4) and the projections cancel pairwise
        let particles: Vec<(f64, f64, f64)> = (0..4)
            .flat_map(|b| (0..4).map(move |a| (1.0, (a + 2 * b) as f64, b as f64)))
            .collect();
        let sys = TorusSystem::new(4.0, 4.0, 4, 4, &particles).unwrap();
        let report = torus_net_forces(&sys).unwrap();
        assert!(report.max_norm() < 1e-9);
    }

    #[test]
    fn perturbed_torus_node_feels_force() {
        let mut particles: Vec<(f64, f64, f64)> = (0..4)
            .flat_map(|b| (0..4).map(move |a| (1.0, a as f64, b as f64)))
            .collect();
        particles[5].1 += 0.01; // node (1, 1) off by 1% of the spacing
        let sys = TorusSystem::new(4.0, 4.0, 4, 4, &particles).unwrap();
        let report = torus_net_forces(&sys).unwrap();

        // independent evaluation of the X1 projection at the moved node:
        // left column at dx = -1.01, right column at dx = 0.99
        let expected_fx = 3.0 / (1.01 * 1.01) - 3.0 / (0.99 * 0.99);
        assert!((report.components[5][0] - expected_fx).abs() < 1e-12);
        assert!(report.max_norm() > 1e-3);
    }

    #[test]
    fn torus_zero_projection_is_domain_error() {
        // two grid columns share an x coordinate, so a diagonal term divides by zero
        let particles: Vec<(f64, f64, f64)> = (0..3)
            .flat_map(|b| [0.0, 0.0, 2.0].into_iter().map(move |x| (1.0, x, b as f64)))
            .collect();
        let sys = TorusSystem::new(3.0, 3.0, 3, 3, &particles).unwrap();
        assert!(torus_net_forces(&sys).is_err());
    }

    #[test]
    fn relax_uniform_circle_converges_immediately() {
        let positions: Vec<f64> = (0..5).map(|i| i as f64).collect();
        let sys = ChargeSystem::Circle(equal_charges_circle(&positions, 5.0));
        let out = relax(&sys, &RelaxOptions::new(1e-3, 100, 1e-9)).unwrap();
        assert!(out.converged);
        assert_eq!(out.iterations, 0);
    }

    #[test]
    fn relax_four_charges_to_quarter_spacing() {
        // angles 0, 80, 180, 260 on a 360-circumference circle
        let sys = equal_charges_circle(&[0.0, 80.0, 180.0, 260.0], 360.0);
        let out = relax(
            &ChargeSystem::Circle(sys),
            &RelaxOptions { step: 3e4, max_iters: 200_000, tol: 1e-10, trajectory_stride: 10_000 },
        )
        .unwrap();
        assert!(out.converged, "did not converge in {} iterations", out.iterations);
        let ChargeSystem::Circle(relaxed) = out.system else { panic!() };
        let gaps = relaxed.sorted_gaps().unwrap();
        for (_, gap) in gaps {
            assert!((gap - 90.0).abs() < 1e-4, "gap {gap}");
        }
    }

    #[test]
    fn relax_uniform_torus_is_identity() {
        let sys = TorusSystem::uniform_grid(4.0, 4.0, 4, 4).unwrap();
        let before: Vec<(f64, f64)> = (0..16).map(|i| sys.position(i)).collect();
        let out = relax(&ChargeSystem::Torus(sys), &RelaxOptions::new(1e-3, 50, 1e-9)).unwrap();
        assert!(out.converged);
        assert_eq!(out.iterations, 0);
        let ChargeSystem::Torus(after) = out.system else { panic!() };
        for (i, &(x, y)) in before.iter().enumerate() {
            assert_eq!(after.position(i), (x, y));
        }
    }

    #[test]
    fn trajectory_csv_shape() {
        let sys = equal_charges_circle(&[0.0, 1.0, 2.2], 6.0);
        let out = relax(&ChargeSystem::Circle(sys), &RelaxOptions::new(1e-2, 50, 1e-6)).unwrap();
        let csv = out.trajectory_csv();
        assert!(csv.starts_with("iteration,particle,position,force\n"));
        assert!(csv.lines().count() > 3);
    }
}
