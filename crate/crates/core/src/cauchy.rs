//! Cauchy transforms of Chebyshev interpolants on straight arcs.
//!
//! For an arc `s = αt + β` and node values `f`, the transform at `z` is
//! `(1/2πi) Σ_k c_k I_k(ζ)` with `ζ = (z - β)/α`, `c` the Chebyshev
//! coefficients of `f` and `I_k(ζ) = ∫_{-1}^{1} T_k(t)/(t - ζ) dt`.
//! The `I_k` obey `I_{k+1} = 2ζ I_k - I_{k-1} + 2m_k` with `m_k = ∫T_k`.
//! Forward recurrence is used near the arc; away from it the same relation
//! is solved as a boundary-value problem (backward elimination), which is
//! stable where the forward sweep would amplify rounding.

use crate::chebyshev::t_integral;
use crate::contours::{AffineArc, ContourSet};
use crate::error::{Error, Result};
use crate::mat2::Mat2;
use num_complex::Complex64 as C64;
use std::collections::HashMap;
use std::f64::consts::{LN_2, PI};
use std::sync::{Arc, Mutex, OnceLock};

/// Boundary side: `Plus` is the left of the arc's orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}

const TWO_PI_I: C64 = C64::new(0.0, 2.0 * PI);

/// `|ζ + √(ζ-1)√(ζ+1)|`, at least one; the growth rate of the recurrence.
fn growth(zeta: C64) -> f64 {
    let r = (zeta + (zeta - 1.0).sqrt() * (zeta + 1.0).sqrt()).norm();
    if r < 1.0 {
        1.0 / r
    } else {
        r
    }
}

fn log_ratio(zeta: C64) -> C64 {
    ((zeta - 1.0) / (zeta + 1.0)).ln()
}

/// `I_0 … I_{n-1}` at a point off `[-1, 1]`.
pub fn basis_transform(zeta: C64, n: usize) -> Vec<C64> {
    let l = log_ratio(zeta);
    let r = growth(zeta);
    if n <= 2 || (n as f64) * r.log10() < 4.0 {
        forward(zeta, l, n)
    } else {
        backward(zeta, l, n, r)
    }
}

fn forward(zeta: C64, l: C64, n: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(n);
    out.push(l);
    if n > 1 {
        out.push(zeta * l + 2.0);
    }
    for k in 1..n.saturating_sub(1) {
        let next = 2.0 * zeta * out[k] - out[k - 1] + 2.0 * t_integral(k);
        out.push(next);
    }
    out
}

fn backward(zeta: C64, l: C64, n: usize, r: f64) -> Vec<C64> {
    // rows k = 1..K of  -I_{k-1} + 2ζ I_k - I_{k+1} = -2 m_k  with I_{K+1} = 0
    let k_max = n + (40.0 / r.log10()).ceil() as usize + 10;
    let mut d = vec![C64::default(); k_max + 1];
    let mut rhs = vec![C64::default(); k_max + 1];
    d[1] = 2.0 * zeta;
    rhs[1] = l - 2.0 * t_integral(1);
    for k in 2..=k_max {
        d[k] = 2.0 * zeta - 1.0 / d[k - 1];
        rhs[k] = -2.0 * t_integral(k) + rhs[k - 1] / d[k - 1];
    }
    let mut i = vec![C64::default(); k_max + 2];
    i[k_max] = rhs[k_max] / d[k_max];
    for k in (1..k_max).rev() {
        i[k] = (rhs[k] + i[k + 1]) / d[k];
    }
    i[0] = l;
    i.truncate(n);
    i
}

/// `P_k(x) = ∫ (T_k(t) - T_k(x))/(t - x) dt`, the regular part of `I_k`.
pub fn poly_part(x: C64, n: usize) -> Vec<C64> {
    let mut out = vec![C64::default(); n];
    if n > 1 {
        out[1] = C64::from(2.0);
    }
    for k in 1..n.saturating_sub(1) {
        out[k + 1] = 2.0 * x * out[k] - out[k - 1] + 2.0 * t_integral(k);
    }
    out
}

fn cheb_t(n: usize, x: f64) -> Vec<f64> {
    let mut t = vec![0.0; n];
    if n > 0 {
        t[0] = 1.0;
    }
    if n > 1 {
        t[1] = x;
    }
    for k in 2..n {
        t[k] = 2.0 * x * t[k - 1] - t[k - 2];
    }
    t
}

/// `T_k(x)(log((1-x)/(1+x)) ± iπ) + P_k(x)` at an interior parameter.
fn basis_boundary(x: f64, n: usize, side: Side) -> Vec<C64> {
    let l = C64::new(((1.0 - x) / (1.0 + x)).ln(), side.sign() * PI);
    let p = poly_part(C64::from(x), n);
    cheb_t(n, x).iter().zip(p).map(|(t, p)| l * t + p).collect()
}

/// Finite-part transform at an endpoint of the arc (`end = ±1`), where the
/// logarithm's imaginary part is fixed by the approach angle `arg`.
fn basis_endpoint(arc: &AffineArc, end: f64, arg: f64, n: usize) -> Vec<C64> {
    let la = arc.alpha.norm().ln();
    let re = if end > 0.0 { -la - LN_2 } else { la + LN_2 };
    let l = C64::new(re, arg);
    let p = poly_part(C64::from(end), n);
    (0..n)
        .map(|k| {
            let t = if end > 0.0 || k % 2 == 0 { 1.0 } else { -1.0 };
            l * t + p[k]
        })
        .collect()
}

fn v2c_cache() -> &'static Mutex<HashMap<usize, Arc<Vec<f64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<f64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Row-major `n×n` matrix taking node values to Chebyshev coefficients.
pub fn values_to_coeffs_matrix(n: usize) -> Arc<Vec<f64>> {
    if let Some(m) = v2c_cache().lock().unwrap().get(&n) {
        return m.clone();
    }
    let mut m = vec![0.0; n * n];
    if n == 1 {
        m[0] = 1.0;
    } else {
        let h = (n - 1) as f64;
        for k in 0..n {
            for q in 0..n {
                let wq = if q == 0 || q == n - 1 { 0.5 } else { 1.0 };
                let wk = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                m[k * n + q] = 2.0 / h * wq * wk * sign * (PI * ((k * q) % (2 * (n - 1))) as f64 / h).cos();
            }
        }
    }
    let m = Arc::new(m);
    v2c_cache().lock().unwrap().insert(n, m.clone());
    m
}

/// Combine a basis row with the values→coefficients map and the `1/2πi`.
fn to_node_weights(basis: &[C64]) -> Vec<C64> {
    let n = basis.len();
    let m = values_to_coeffs_matrix(n);
    let mut w = vec![C64::default(); n];
    for (k, bk) in basis.iter().enumerate() {
        let row = &m[k * n..(k + 1) * n];
        for (wq, &mq) in w.iter_mut().zip(row) {
            *wq += bk * mq;
        }
    }
    for wq in &mut w {
        *wq /= TWO_PI_I;
    }
    w
}

fn on_arc(arc: &AffineArc, z: C64) -> bool {
    let zeta = arc.unmap(z);
    zeta.im.abs() <= 1e-13 * (1.0 + zeta.norm()) && zeta.re.abs() <= 1.0 + 1e-13
}

fn same_point(z: C64, w: C64) -> bool {
    (z - w).norm() <= 1e-12 * z.norm().max(1.0)
}

/// Where a transform is evaluated.
#[derive(Clone, Copy, Debug)]
pub enum Target {
    /// A point off the source arc.
    Point(C64),
    /// One-sided limit at an interior parameter of the source arc itself.
    OnArc { t: f64, side: Side },
    /// One-sided limit at node `index` of the source arc itself.
    SelfNode { index: usize, side: Side },
    /// A point approached along a direction, used when it may coincide with
    /// an endpoint of the source arc (arcs meeting at a junction).
    Approach { z: C64, direction: C64 },
}

/// Weights `w` such that the transform of node values `f` equals `Σ w_q f_q`.
pub fn kernel_row(arc: &AffineArc, target: Target) -> Result<Vec<C64>> {
    let n = arc.count;
    let basis = match target {
        Target::Point(z) => {
            if on_arc(arc, z) {
                return Err(Error::SideRequired);
            }
            basis_transform(arc.unmap(z), n)
        }
        Target::OnArc { t, side } => {
            if t <= -1.0 || t >= 1.0 {
                return Err(Error::InvalidArgument(format!("parameter {t} is not interior")));
            }
            basis_boundary(t, n, side)
        }
        Target::SelfNode { index, side } => {
            if index >= n {
                return Err(Error::InvalidArgument(format!("node {index} out of range")));
            }
            if n == 1 {
                basis_boundary(0.0, 1, side)
            } else if index == 0 {
                basis_endpoint(arc, -1.0, side.sign() * PI, n)
            } else if index == n - 1 {
                basis_endpoint(arc, 1.0, side.sign() * PI, n)
            } else {
                basis_boundary(arc.params()[index], n, side)
            }
        }
        Target::Approach { z, direction } => {
            if same_point(z, arc.end()) {
                basis_endpoint(arc, 1.0, (direction / arc.alpha).arg(), n)
            } else if same_point(z, arc.start()) {
                basis_endpoint(arc, -1.0, (-arc.alpha / direction).arg(), n)
            } else if on_arc(arc, z) {
                return Err(Error::Geometry("target lies inside another arc".into()));
            } else {
                basis_transform(arc.unmap(z), n)
            }
        }
    };
    Ok(to_node_weights(&basis))
}

fn dot(w: &[C64], v: &[C64]) -> C64 {
    w.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn check_len(values: &[C64], arc: &AffineArc) -> Result<()> {
    if values.len() != arc.count {
        return Err(Error::InvalidArgument(format!("{} values for an arc with {} nodes", values.len(), arc.count)));
    }
    Ok(())
}

/// Cauchy transform of the interpolant of `values` at `z` off the arc.
pub fn cauchy_off(values: &[C64], arc: &AffineArc, z: C64) -> Result<C64> {
    check_len(values, arc)?;
    Ok(dot(&kernel_row(arc, Target::Point(z))?, values))
}

/// One-sided boundary value at node `node_index` of the arc.
pub fn cauchy_boundary(values: &[C64], arc: &AffineArc, node_index: usize, side: Side) -> Result<C64> {
    check_len(values, arc)?;
    Ok(dot(&kernel_row(arc, Target::SelfNode { index: node_index, side })?, values))
}

/// Dense block mapping node values of `contours.arcs[source]` to transform
/// values at the nodes of `contours.arcs[target]` (row-major).
#[derive(Clone, Debug)]
pub struct CauchyKernelBlock {
    pub source: usize,
    pub target: usize,
    pub side: Option<Side>,
    pub rows: usize,
    pub cols: usize,
    pub matrix: Vec<C64>,
}

impl CauchyKernelBlock {
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.matrix[i * self.cols + j]
    }
}

/// Unit tangent pointing from node `index` into its own arc, for end nodes.
pub fn inward_direction(arc: &AffineArc, index: usize) -> C64 {
    let u = arc.alpha / arc.alpha.norm();
    if index == 0 {
        u
    } else {
        -u
    }
}

/// Row of the transform of `source` at node `index` of `target_arc`.
pub fn node_row(source: &AffineArc, target_arc: &AffineArc, index: usize) -> Result<Vec<C64>> {
    let z = target_arc.nodes()[index];
    if index == 0 || index + 1 == target_arc.count {
        kernel_row(source, Target::Approach { z, direction: inward_direction(target_arc, index) })
    } else {
        kernel_row(source, Target::Approach { z, direction: target_arc.alpha })
    }
}

/// All blocks for the boundary value on `side` (diagonal blocks) together
/// with the off-diagonal blocks.
pub fn assemble_blocks(contours: &ContourSet, side: Side) -> Result<Vec<CauchyKernelBlock>> {
    let mut out = Vec::with_capacity(contours.len() * contours.len());
    for (ti, ta) in contours.arcs.iter().enumerate() {
        for (si, sa) in contours.arcs.iter().enumerate() {
            let mut matrix = Vec::with_capacity(ta.count * sa.count);
            for j in 0..ta.count {
                let row = if si == ti {
                    kernel_row(sa, Target::SelfNode { index: j, side })?
                } else {
                    node_row(sa, ta, j)?
                };
                matrix.extend(row);
            }
            out.push(CauchyKernelBlock {
                source: si,
                target: ti,
                side: if si == ti { Some(side) } else { None },
                rows: ta.count,
                cols: sa.count,
                matrix,
            });
        }
    }
    Ok(out)
}

/// `∫_arc interpolant(s) ds` by Clenshaw–Curtis in the arc parameter.
pub fn arc_integral(values: &[C64], arc: &AffineArc) -> C64 {
    let w = crate::chebyshev::cc_weights(arc.count);
    arc.alpha * values.iter().zip(&w).map(|(v, w)| v * w).sum::<C64>()
}

/// `-(1/2πi) Σ_arcs ∫ U`, for per-arc node values of a 2×2 density.
pub fn total_first_moment(contours: &ContourSet, values: &[Vec<Mat2>]) -> Mat2 {
    let mut tot = Mat2::ZERO;
    for (arc, vals) in contours.arcs.iter().zip(values) {
        let w = crate::chebyshev::cc_weights(arc.count);
        let mut s = Mat2::ZERO;
        for (v, wq) in vals.iter().zip(&w) {
            s = s + v.scale(C64::from(*wq));
        }
        tot = tot + s.scale(arc.alpha);
    }
    tot.scale(-1.0 / TWO_PI_I)
}
