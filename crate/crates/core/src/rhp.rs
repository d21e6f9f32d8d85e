//! Collocation solver for 2×2 Riemann–Hilbert problems
//! `Φ⁺ = Φ⁻G` on a union of straight arcs, `Φ → I` at infinity.
//!
//! With `Φ = I + C U`, the density solves `U - C⁻(U)(G - I) = G - I`.
//! Unknowns are the values of `U` at each arc's Chebyshev nodes; the two
//! rows of the matrix equation share one LU factorization.

use crate::cauchy::{kernel_row, node_row, Side, Target};
use crate::contours::ContourSet;
use crate::error::{Error, Result};
use crate::mat2::Mat2;
use faer::linalg::solvers::Solve;
use faer::{c64, Mat};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Jump data: `jump(arc, t, z)` is `G` at the point `z = arc.map(t)`.
pub trait JumpEvaluator {
    fn jump(&self, arc: usize, t: f64, z: C64) -> Mat2;
}

impl<F: Fn(usize, f64, C64) -> Mat2> JumpEvaluator for F {
    fn jump(&self, arc: usize, t: f64, z: C64) -> Mat2 {
        self(arc, t, z)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    /// Residual target for adaptive refinement.
    pub tolerance: f64,
    /// Maximum number of per-arc doublings.
    pub max_refinements: usize,
    /// Off-node probes per arc for the residual.
    pub probes: usize,
    /// Largest acceptable 1-norm condition estimate.
    pub cond_limit: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tolerance: 1e-10, max_refinements: 3, probes: 8, cond_limit: 1e12 }
    }
}

/// A solved problem: per-arc node values of `U`.
#[derive(Clone, Debug)]
pub struct RHSolution {
    pub contours: ContourSet,
    pub values: Vec<Vec<Mat2>>,
    /// Largest probe residual `‖Φ⁺ - Φ⁻G‖/(1 + ‖G‖)`.
    pub residual: f64,
    pub arc_residuals: Vec<f64>,
    pub cond_estimate: f64,
    pub refinements: usize,
}

fn apply_row(row: &[C64], vals: &[Mat2]) -> Mat2 {
    let mut m = [[C64::default(); 2]; 2];
    for (w, v) in row.iter().zip(vals) {
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] += w * v.0[i][j];
            }
        }
    }
    Mat2(m)
}

impl RHSolution {
    /// `Φ(z)` off the contour.
    pub fn phi(&self, z: C64) -> Result<Mat2> {
        let mut out = Mat2::IDENTITY;
        for (arc, vals) in self.contours.arcs.iter().zip(&self.values) {
            out = out + apply_row(&kernel_row(arc, Target::Point(z))?, vals);
        }
        Ok(out)
    }

    /// One-sided boundary value at an interior parameter of arc `k`.
    pub fn phi_boundary(&self, k: usize, t: f64, side: Side) -> Result<Mat2> {
        let z = self.contours.arcs[k].map(t);
        let mut out = Mat2::IDENTITY;
        for (i, (arc, vals)) in self.contours.arcs.iter().zip(&self.values).enumerate() {
            let target = if i == k { Target::OnArc { t, side } } else { Target::Point(z) };
            out = out + apply_row(&kernel_row(arc, target)?, vals);
        }
        Ok(out)
    }

    /// `Φ₁ = -(1/2πi) ∫_Γ U`, the `1/z` coefficient of `Φ`.
    pub fn first_moment(&self) -> Mat2 {
        crate::cauchy::total_first_moment(&self.contours, &self.values)
    }

    pub fn total_nodes(&self) -> usize {
        self.contours.total_count()
    }
}

/// Probe parameters strictly inside `(-1, 1)`, away from the nodes.
fn probe_params(probes: usize) -> Vec<f64> {
    (0..probes).map(|i| 0.999 * (PI * (i as f64 + 0.5) / probes as f64).cos()).collect()
}

fn arc_residual(sol: &RHSolution, jumps: &dyn JumpEvaluator, k: usize, probes: usize) -> Result<f64> {
    let arc = sol.contours.arcs[k];
    let mut r: f64 = 0.0;
    for t in probe_params(probes) {
        let g = jumps.jump(k, t, arc.map(t));
        let p = sol.phi_boundary(k, t, Side::Plus)?;
        let m = sol.phi_boundary(k, t, Side::Minus)?;
        r = r.max((p - m * g).max_abs() / (1.0 + g.max_abs()));
    }
    Ok(r)
}

/// Largest probe residual over all arcs.
pub fn residual(sol: &RHSolution, jumps: &dyn JumpEvaluator, probes: usize) -> Result<f64> {
    let mut r: f64 = 0.0;
    for k in 0..sol.contours.len() {
        r = r.max(arc_residual(sol, jumps, k, probes)?);
    }
    Ok(r)
}

/// Solve with default options.
pub fn solve(contours: &ContourSet, jumps: &dyn JumpEvaluator) -> Result<RHSolution> {
    solve_with(contours, jumps, &SolverOptions::default())
}

/// Solve, doubling the node count of arcs whose residual exceeds the
/// tolerance, at most `max_refinements` times.
pub fn solve_with(contours: &ContourSet, jumps: &dyn JumpEvaluator, opts: &SolverOptions) -> Result<RHSolution> {
    let mut set = contours.clone();
    let mut refinements = 0;
    loop {
        let (values, cond_estimate) = solve_once(&set, jumps, opts)?;
        let mut sol = RHSolution {
            contours: set.clone(),
            values,
            residual: 0.0,
            arc_residuals: Vec::new(),
            cond_estimate,
            refinements,
        };
        let mut res = Vec::with_capacity(set.len());
        for k in 0..set.len() {
            res.push(arc_residual(&sol, jumps, k, opts.probes)?);
        }
        sol.residual = res.iter().copied().fold(0.0, f64::max);
        sol.arc_residuals = res;
        if sol.residual <= opts.tolerance || refinements >= opts.max_refinements {
            return Ok(sol);
        }
        for (arc, r) in set.arcs.iter_mut().zip(&sol.arc_residuals) {
            if *r > opts.tolerance {
                arc.count *= 2;
            }
        }
        refinements += 1;
    }
}

fn solve_once(set: &ContourSet, jumps: &dyn JumpEvaluator, opts: &SolverOptions) -> Result<(Vec<Vec<Mat2>>, f64)> {
    let off = set.offsets();
    let nt = set.total_count();
    if nt == 0 {
        return Ok((Vec::new(), 1.0));
    }
    // jumps minus identity at every node
    let mut h = Vec::with_capacity(nt);
    for (k, arc) in set.arcs.iter().enumerate() {
        for (t, z) in arc.params().into_iter().zip(arc.nodes()) {
            let g = jumps.jump(k, t, z);
            if !g.is_finite() {
                return Err(Error::Geometry(format!("non-finite jump at {z}")));
            }
            h.push(g - Mat2::IDENTITY);
        }
    }
    // Cauchy minus-boundary operator on node values
    let mut kmat = vec![C64::default(); nt * nt];
    for (ka, ta) in set.arcs.iter().enumerate() {
        for j in 0..ta.count {
            let p = off[ka] + j;
            for (kb, sb) in set.arcs.iter().enumerate() {
                let row = if ka == kb {
                    kernel_row(sb, Target::SelfNode { index: j, side: Side::Minus })?
                } else {
                    node_row(sb, ta, j)?
                };
                kmat[p * nt + off[kb]..p * nt + off[kb + 1]].copy_from_slice(&row);
            }
        }
    }
    let n2 = 2 * nt;
    let a = Mat::<c64>::from_fn(n2, n2, |i, j| {
        let (p, c) = (i / 2, i % 2);
        let (q, d) = (j / 2, j % 2);
        let v = -kmat[p * nt + q] * h[p].0[d][c];
        if i == j {
            v + 1.0
        } else {
            v
        }
    });
    let rhs = Mat::<c64>::from_fn(n2, 2, |i, r| h[i / 2].0[r][i % 2]);
    let lu = a.partial_piv_lu();
    let x = lu.solve(&rhs);
    let cond = cond_estimate(&a, &lu);
    if !(cond <= opts.cond_limit) {
        return Err(Error::IllPosed { cond });
    }
    let mut values = Vec::with_capacity(set.len());
    for (k, arc) in set.arcs.iter().enumerate() {
        let mut v = Vec::with_capacity(arc.count);
        for j in 0..arc.count {
            let q = off[k] + j;
            v.push(Mat2::new(x[(2 * q, 0)], x[(2 * q + 1, 0)], x[(2 * q, 1)], x[(2 * q + 1, 1)]));
        }
        values.push(v);
    }
    Ok((values, cond))
}

/// Hager–Higham estimate of the 1-norm condition number from an LU.
fn cond_estimate(a: &Mat<c64>, lu: &faer::linalg::solvers::PartialPivLu<c64>) -> f64 {
    let n = a.nrows();
    let mut norm_a: f64 = 0.0;
    for j in 0..n {
        let s: f64 = (0..n).map(|i| a[(i, j)].norm()).sum();
        norm_a = norm_a.max(s);
    }
    let mut x = Mat::<c64>::from_fn(n, 1, |_, _| c64::new(1.0 / n as f64, 0.0));
    let mut est = 0.0;
    for _ in 0..5 {
        let y = lu.solve(&x);
        est = (0..n).map(|i| y[(i, 0)].norm()).sum::<f64>();
        let xi = Mat::<c64>::from_fn(n, 1, |i, _| {
            let v = y[(i, 0)];
            if v.norm() > 0.0 {
                v / v.norm()
            } else {
                c64::new(1.0, 0.0)
            }
        });
        let z = lu.solve_adjoint(&xi);
        let (mut jmax, mut zmax) = (0, 0.0);
        let mut ztx = 0.0;
        for i in 0..n {
            let zi = z[(i, 0)];
            if zi.norm() > zmax {
                zmax = zi.norm();
                jmax = i;
            }
            ztx += (zi.conj() * x[(i, 0)]).re;
        }
        if zmax <= ztx {
            break;
        }
        x = Mat::<c64>::zeros(n, 1);
        x[(jmax, 0)] = c64::new(1.0, 0.0);
    }
    norm_a * est
}

/// Largest deviation from the identity of the cyclic product of jumps at
/// points where arcs meet, and of single jumps at free arc endpoints.
pub fn junction_defect(set: &ContourSet, jumps: &dyn JumpEvaluator) -> f64 {
    struct End {
        z: C64,
        arc: usize,
        t: f64,
        dir: C64,
        outgoing: bool,
    }
    let mut ends = Vec::new();
    for (k, a) in set.arcs.iter().enumerate() {
        ends.push(End { z: a.start(), arc: k, t: -1.0, dir: a.alpha, outgoing: true });
        ends.push(End { z: a.end(), arc: k, t: 1.0, dir: -a.alpha, outgoing: false });
    }
    let mut used = vec![false; ends.len()];
    let mut worst: f64 = 0.0;
    for i in 0..ends.len() {
        if used[i] {
            continue;
        }
        let mut group: Vec<&End> = Vec::new();
        for j in i..ends.len() {
            if !used[j] && (ends[j].z - ends[i].z).norm() <= 1e-12 * ends[i].z.norm().max(1.0) {
                used[j] = true;
                group.push(&ends[j]);
            }
        }
        group.sort_by(|p, q| p.dir.arg().partial_cmp(&q.dir.arg()).unwrap());
        let mut prod = Mat2::IDENTITY;
        for e in &group {
            let g = jumps.jump(e.arc, e.t, e.z);
            prod = prod * if e.outgoing { g } else { g.inv() };
        }
        worst = worst.max((prod - Mat2::IDENTITY).max_abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contours::{AffineArc, ArcLabel};

    fn circle(r: f64, pieces: usize, count: usize) -> ContourSet {
        let angs: Vec<f64> = (0..=pieces).map(|k| 2.0 * PI * k as f64 / pieces as f64).collect();
        ContourSet::polygon(C64::default(), r, &angs, 1, count, ArcLabel::Other).unwrap()
    }

    #[test]
    fn identity_jump_gives_zero() {
        let set = circle(1.0, 4, 12);
        let jump = |_: usize, _: f64, _: C64| Mat2::IDENTITY;
        let sol = solve(&set, &jump).unwrap();
        assert!(sol.values.iter().flatten().all(|u| *u == Mat2::ZERO));
        assert_eq!(sol.phi(C64::new(0.3, 0.2)).unwrap(), Mat2::IDENTITY);
        assert!(residual(&sol, &jump, 8).unwrap() < 1e-14);
        assert_eq!(sol.first_moment(), Mat2::ZERO);
    }

    #[test]
    fn constant_jump_on_closed_circle() {
        let g0 = Mat2::real(2.0, 0.0, 0.0, 0.5);
        let set = circle(0.7, 6, 16);
        let jump = move |_: usize, _: f64, _: C64| g0;
        let sol = solve(&set, &jump).unwrap();
        for u in sol.values.iter().flatten() {
            assert!((*u - (g0 - Mat2::IDENTITY)).max_abs() < 1e-13);
        }
        assert!(sol.residual <= 1e-13);
        assert!(residual(&sol, &jump, 8).unwrap() <= sol.residual);
        assert!((sol.phi(C64::new(0.1, 0.2)).unwrap() - g0).max_abs() < 1e-13);
        assert!((sol.phi(C64::new(2.0, -1.0)).unwrap() - Mat2::IDENTITY).max_abs() < 1e-13);
        assert!(sol.first_moment().max_abs() < 1e-13);
    }

    #[test]
    fn conjugated_jump_conjugates_solution() {
        let g0 = Mat2::new(C64::new(1.5, 0.2), C64::new(0.3, 0.0), C64::new(-0.1, 0.4), C64::new(0.8, 0.0));
        let c = Mat2::real(1.0, 2.0, 0.5, 3.0);
        let set = circle(1.0, 5, 14);
        let s1 = solve(&set, &move |_: usize, _: f64, _: C64| g0).unwrap();
        let s2 = solve(&set, &move |_: usize, _: f64, _: C64| c * g0 * c.inv()).unwrap();
        for z in [C64::new(0.2, 0.1), C64::new(1.5, 1.5)] {
            let p1 = c * s1.phi(z).unwrap() * c.inv();
            assert!((p1 - s2.phi(z).unwrap()).max_abs() < 1e-12);
        }
    }

    fn gaussian_line(count: usize) -> (ContourSet, impl Fn(usize, f64, C64) -> Mat2) {
        let set = ContourSet::single(AffineArc::segment(C64::new(-7.0, 0.0), C64::new(7.0, 0.0), count).unwrap(), ArcLabel::RayRight);
        let jump = |_: usize, _: f64, z: C64| Mat2::new(C64::from(1.0), (-z * z).exp(), C64::default(), C64::from(1.0));
        (set, jump)
    }

    #[test]
    fn triangular_gaussian_jump_matches_quadrature() {
        let (set, jump) = gaussian_line(40);
        let sol = solve(&set, &jump).unwrap();
        assert!(sol.residual <= 1e-10);
        // oracle: composite Simpson on [-7, 7] of (1/2πi) e^{-s²}/(s - z)
        let z = C64::new(1.0, 1.0);
        let m = 20000;
        let h = 14.0 / m as f64;
        let mut acc = C64::default();
        for i in 0..=m {
            let s = -7.0 + h * i as f64;
            let w = if i == 0 || i == m { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * (-s * s).exp() / (s - z);
        }
        let want = acc * h / 3.0 / C64::new(0.0, 2.0 * PI);
        let got = sol.phi(z).unwrap().get(0, 1);
        assert!((got - want).norm() < 1e-10, "{got} {want}");
        let m1 = sol.first_moment().get(0, 1);
        let exact = C64::new(0.0, PI.sqrt() / (2.0 * PI));
        assert!((m1 - exact).norm() < 1e-10);
    }

    #[test]
    fn refinement_doubles_underresolved_arcs() {
        let (set, jump) = gaussian_line(10);
        let sol = solve(&set, &jump).unwrap();
        assert!(sol.refinements > 0);
        assert!(sol.contours.arcs[0].count > 10);
        assert!(sol.residual < 1e-10);
    }

    #[test]
    fn splitting_an_arc_does_not_move_phi() {
        let (set, jump) = gaussian_line(60);
        let mut split = ContourSet::new();
        split.push(AffineArc::segment(C64::new(-7.0, 0.0), C64::new(0.0, 0.0), 40).unwrap(), ArcLabel::Other);
        split.push(AffineArc::segment(C64::new(0.0, 0.0), C64::new(7.0, 0.0), 40).unwrap(), ArcLabel::Other);
        let a = solve(&set, &jump).unwrap();
        let b = solve(&split, &jump).unwrap();
        for z in [C64::new(0.5, 0.5), C64::new(-2.0, -0.3)] {
            assert!((a.phi(z).unwrap() - b.phi(z).unwrap()).max_abs() < 1e-10);
        }
    }

    #[test]
    fn junction_defect_of_constant_loop() {
        let g0 = Mat2::real(2.0, 1.0, 0.0, 0.5);
        let set = circle(1.0, 4, 8);
        assert!(junction_defect(&set, &move |_: usize, _: f64, _: C64| g0) < 1e-15);
    }
}
