//! Gaussian quadrature from Jacobi rows (Golub–Welsch), the weight's total
//! mass `μ₀`, and integration.

use crate::chebyshev::clenshaw_curtis;
use crate::error::{Error, Result};
use crate::jacobi::JacobiRows;
use crate::scaling::WeightSpec;
use serde::Serialize;

/// `Q` value past which `e^{-Q}` underflows.
const Q_CUTOFF: f64 = 750.0;

#[derive(Clone, Debug, Serialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub mu0: f64,
    pub order: usize,
}

/// The `n×n` section: diagonal `a_0..a_{n-1}`, off-diagonal `√b_1..√b_{n-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.abs_diff(j) {
            0 => self.diag[i],
            1 => self.off[i.min(j)],
            _ => 0.0,
        }
    }
}

pub fn jacobi_matrix(rows: &JacobiRows, n: usize) -> Result<Tridiagonal> {
    if n == 0 || n > rows.len() {
        return Err(Error::InvalidArgument(format!("order {n} with {} rows", rows.len())));
    }
    let mut off = Vec::with_capacity(n - 1);
    for k in 1..n {
        let b = rows.b[k];
        if !(b > 0.0) {
            return Err(Error::InvalidCoefficient(b));
        }
        off.push(b.sqrt());
    }
    let diag = rows.a[..n].to_vec();
    if diag.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("non-finite diagonal".into()));
    }
    Ok(Tridiagonal { diag, off })
}

/// Implicit-shift QL on a symmetric tridiagonal matrix, accumulating only
/// the first component of each eigenvector. Returns `(λ_j, v_j[0])`.
pub fn tridiagonal_eigen(t: &Tridiagonal) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = t.diag.len();
    let mut d = t.diag.clone();
    let mut e = t.off.clone();
    e.push(0.0);
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Eigen);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok((d, z))
}

/// Nodes are the eigenvalues of `J_n`, weights `μ₀ v_j[0]²`.
pub fn golub_welsch(rows: &JacobiRows, n: usize, mu0: f64) -> Result<QuadratureRule> {
    if !(mu0 > 0.0) {
        return Err(Error::InvalidArgument(format!("μ₀ = {mu0}")));
    }
    let (lam, v) = tridiagonal_eigen(&jacobi_matrix(rows, n)?)?;
    let mut pairs: Vec<(f64, f64)> = lam.into_iter().zip(v).map(|(x, v0)| (x, mu0 * v0 * v0)).collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    Ok(QuadratureRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
        mu0,
        order: n,
    })
}

/// `[-R_l, R_r]` outside which `e^{-Q}` underflows.
pub fn support_window(weight: &WeightSpec) -> Result<(f64, f64)> {
    let edge = |dir: f64| -> Result<f64> {
        let mut r = 1.0;
        while weight.q_real(dir * r) < Q_CUTOFF {
            r *= 2.0;
            if r > 1e8 {
                return Err(Error::NonNormalizable(weight.name()));
            }
        }
        let mut lo = 0.0;
        let mut hi = r;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if weight.q_real(dir * mid) < Q_CUTOFF {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(hi)
    };
    Ok((-edge(-1.0)?, edge(1.0)?))
}

/// `∫ f ω` by Clenshaw–Curtis with `count` points on the support window.
pub fn weighted_cc<F: Fn(f64) -> f64>(weight: &WeightSpec, f: F, count: usize) -> Result<f64> {
    let (lo, hi) = support_window(weight)?;
    clenshaw_curtis(|x| f(x) * weight.weight(x), lo, hi, count)
}

/// `μ₀ = ∫ e^{-Q}`, doubling the grid until two values agree to 1e-13.
pub fn mu0(weight: &WeightSpec) -> Result<f64> {
    let (lo, hi) = support_window(weight)?;
    let mut count = 65;
    let mut prev = clenshaw_curtis(|x| weight.weight(x), lo, hi, count)?;
    while count < (1 << 20) {
        count = 2 * count - 1;
        let next = clenshaw_curtis(|x| weight.weight(x), lo, hi, count)?;
        if (next - prev).abs() <= 1e-13 * next.abs() {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Convergence(format!("μ₀ for {}", weight.name())))
}

/// `Σ f(x_j) ω_j`.
pub fn integrate<F: Fn(f64) -> f64>(rule: &QuadratureRule, f: F) -> Result<f64> {
    let mut s = 0.0;
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::Evaluation { point: x, value: v });
        }
        s += v * w;
    }
    Ok(s)
}
