//! Recurrence coefficients: extraction from solved problems, the per-row
//! and batch drivers, the Stieltjes baseline and polynomial evaluation.
//!
//! Rows are `π_{n+1} = (x - a_n)π_n - b_n π_{n-1}`; `b[0]` stores `μ₀` and
//! `log_gamma[n] = log γ_n` with `γ_n⁻¹ = ∫ π_n² ω`.

use crate::equilibrium::{compute_equilibrium, EquilibriumMeasure};
use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::opdeform::{build_phi_rhp, parametrix_moment, DeformationParams};
use crate::rhp;
use crate::scaling::{scale, unscale_rows, ScalingParams, WeightSpec};
use num_complex::Complex64 as C64;
use serde::Serialize;
use std::f64::consts::PI;
use std::time::Instant;

/// Smallest row served by the Riemann–Hilbert route.
pub const N_MIN: usize = 8;
/// Stieltjes points used for rows below `N_MIN`.
pub const STIELTJES_M: usize = 4000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Rh,
    Stieltjes,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Rh => "rh",
            Method::Stieltjes => "stieltjes",
        }
    }
}

/// `Y₁(n) = E⁻¹ core E`, `E = diag(e^{nℓ/2}, e^{-nℓ/2})`, kept unexpanded.
#[derive(Clone, Copy, Debug)]
pub struct YMoment {
    pub core: Mat2,
    /// `nℓ`.
    pub log_scale: f64,
    pub n: usize,
    pub n_big: usize,
}

impl YMoment {
    /// The full matrix; fails when `e^{±nℓ}` overflows.
    pub fn y1(&self) -> Result<Mat2> {
        let e = self.log_scale.exp();
        let m = Mat2::new(self.core.get(0, 0), self.core.get(0, 1) / e, self.core.get(1, 0) * e, self.core.get(1, 1));
        if !m.is_finite() || e == 0.0 {
            return Err(Error::Overflow(format!("e^{{nℓ}} with nℓ = {}", self.log_scale)));
        }
        Ok(m)
    }

    /// `log γ_{n-1,N}` from `(Y₁)₂₁ = -2πi γ_{n-1,N}`.
    pub fn log_gamma(&self) -> Result<f64> {
        let g = -self.core.get(1, 0) / C64::new(0.0, 2.0 * PI);
        if !(g.re > 0.0) || g.im.abs() > 1e-8 * g.re {
            return Err(Error::Extraction(format!("γ factor {g} is not positive real")));
        }
        Ok(self.log_scale + g.re.ln())
    }
}

/// `Y₁(n) = E⁻¹(Φ₁ + N₁ + diag(n g₁, -n g₁))E`.
pub fn assemble_y1(phi1: Mat2, n1: Mat2, g1: C64, ell: f64, n: usize, n_big: usize) -> YMoment {
    let ng = g1 * n as f64;
    YMoment { core: phi1 + n1 + Mat2::diag(ng, -ng), log_scale: n as f64 * ell, n, n_big }
}

/// Scaled `(a_n, b_n)` from `Y₁(n)` and `Y₁(n+1)` at the same `N`.
pub fn extract_coeffs(y_n: &YMoment, y_np1: &YMoment) -> Result<(f64, f64)> {
    if y_n.n_big != y_np1.n_big || y_np1.n != y_n.n + 1 {
        return Err(Error::Extraction("moments from different problems".into()));
    }
    let a = y_n.core.get(0, 0) - y_np1.core.get(0, 0);
    let b = y_n.core.get(0, 1) * y_n.core.get(1, 0);
    let tol = 1e-8 * (1.0 + b.norm() + a.norm());
    if a.im.abs() > tol || b.im.abs() > tol {
        return Err(Error::Extraction(format!("imaginary residue in a = {a}, b = {b}")));
    }
    if !(b.re > 0.0) {
        return Err(Error::Extraction(format!("b = {} is not positive", b.re)));
    }
    Ok((a.re, b.re))
}

/// One row from the Riemann–Hilbert route.
#[derive(Clone, Debug)]
pub struct RowResult {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub log_gamma_prev: f64,
    pub log_gamma: f64,
    pub scaling: ScalingParams,
    pub residual: f64,
    pub nodes: usize,
    pub seconds: f64,
}

fn solve_moment(measure: &EquilibriumMeasure, deg: usize, n_big: usize, params: &DeformationParams) -> Result<(YMoment, f64, usize)> {
    let problem = build_phi_rhp(measure, deg, params)?;
    let sol = rhp::solve(&problem.contours, &problem)?;
    let y = assemble_y1(sol.first_moment(), parametrix_moment(measure.a, measure.b), measure.g1, measure.ell, deg, n_big);
    Ok((y, sol.residual, sol.total_nodes()))
}

/// Row `n` with `N = n`: `(a_n, b_n)`, `γ_{n-1}` and `γ_n`.
pub fn row(weight: &WeightSpec, n: usize, params: &DeformationParams) -> Result<RowResult> {
    row_warm(weight, n, params, None)
}

/// As [`row`], warm-starting the scaling root-finder from `(α, β)`.
pub fn row_warm(weight: &WeightSpec, n: usize, params: &DeformationParams, warm: Option<(f64, f64)>) -> Result<RowResult> {
    let run = || -> Result<RowResult> {
        if n == 0 {
            return Err(Error::InvalidArgument("the RH route needs n ≥ 1".into()));
        }
        let start = Instant::now();
        let sp = scale(weight, n, warm)?;
        let field = sp.field(weight);
        let m_n = compute_equilibrium(field.clone(), 1.0, (-1.0, 1.0))?;
        let m_np1 = compute_equilibrium(field, n as f64 / (n + 1) as f64, (m_n.a, m_n.b))?;
        let (y_n, r1, k1) = solve_moment(&m_n, n, n, params)?;
        let (y_np1, r2, k2) = solve_moment(&m_np1, n + 1, n, params)?;
        let (a_s, b_s) = extract_coeffs(&y_n, &y_np1)?;
        let (a, b) = unscale_rows(a_s, b_s, &sp)?;
        let la = sp.alpha.ln();
        let log_gamma_prev = y_n.log_gamma()? + (1.0 - 2.0 * n as f64) * la;
        let log_gamma = y_np1.log_gamma()? - (1.0 + 2.0 * n as f64) * la;
        Ok(RowResult {
            n,
            a,
            b,
            log_gamma_prev,
            log_gamma,
            scaling: sp,
            residual: r1.max(r2),
            nodes: k1.max(k2),
            seconds: start.elapsed().as_secs_f64(),
        })
    };
    run().map_err(|e| Error::Row { n, source: Box::new(e) })
}

/// Rows `0..count` of the Jacobi operator.
#[derive(Clone, Debug)]
pub struct JacobiRows {
    pub weight: WeightSpec,
    pub a: Vec<f64>,
    /// `b[0] = μ₀`, then `b_1, b_2, …`.
    pub b: Vec<f64>,
    pub log_gamma: Vec<f64>,
    pub mu0: f64,
    pub methods: Vec<Method>,
    pub row_seconds: Vec<f64>,
    /// Probe residual of the solved problems, zero for baseline rows.
    pub residuals: Vec<f64>,
    pub failures: Vec<(usize, String)>,
    pub warnings: Vec<String>,
}

impl JacobiRows {
    /// Rows from known coefficients; `b[0]` must be `μ₀`.
    pub fn from_coefficients(weight: WeightSpec, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return Err(Error::InvalidArgument("a and b must have equal nonzero length".into()));
        }
        if let Some(&bad) = b.iter().find(|&&x| !(x > 0.0)) {
            return Err(Error::InvalidCoefficient(bad));
        }
        let mut lg = Vec::with_capacity(b.len());
        let mut acc = 0.0;
        for &bk in &b {
            acc += bk.ln();
            lg.push(-acc);
        }
        let count = a.len();
        Ok(JacobiRows {
            weight,
            mu0: b[0],
            a,
            b,
            log_gamma: lg,
            methods: vec![Method::Stieltjes; count],
            row_seconds: vec![0.0; count],
            residuals: vec![0.0; count],
            failures: Vec::new(),
            warnings: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// Largest relative defect of `γ_n⁻¹ = b_n ⋯ b_1 μ₀` over the rows.
    pub fn gamma_defect(&self) -> f64 {
        let mut acc = 0.0;
        let mut worst: f64 = 0.0;
        for (n, &bk) in self.b.iter().enumerate() {
            acc += bk.ln();
            if self.log_gamma[n].is_finite() {
                worst = worst.max((self.log_gamma[n] + acc).exp_m1().abs());
            }
        }
        worst
    }
}

/// `L > 0` with `min(Q(L), Q(-L)) = 36`, the map scale for the baseline.
fn stieltjes_scale(weight: &WeightSpec) -> f64 {
    let f = |l: f64| weight.q_real(l).min(weight.q_real(-l)) - 36.0;
    let (mut lo, mut hi) = (1.0, 1.0);
    while f(lo) > 0.0 && lo > 1e-6 {
        lo /= 2.0;
    }
    while f(hi) < 0.0 && hi < 1e6 {
        hi *= 2.0;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Discretized Stieltjes procedure: the trapezoid rule in `t` on
/// `x = L t/(1 - t²)` with `M` interior points, orthonormal vectors.
pub fn stieltjes_rows(weight: &WeightSpec, count: usize, m: usize) -> Result<JacobiRows> {
    if count == 0 || m < 2 {
        return Err(Error::InvalidArgument(format!("count = {count}, M = {m}")));
    }
    let start = Instant::now();
    let l = stieltjes_scale(weight);
    let h = 2.0 / (m + 1) as f64;
    let mut xs = Vec::with_capacity(m);
    let mut ws = Vec::with_capacity(m);
    for j in 1..=m {
        let t = -1.0 + h * j as f64;
        let x = l * t / (1.0 - t * t);
        let w = (-weight.q_real(x)).exp() * l * (1.0 + t * t) / (1.0 - t * t).powi(2) * h;
        if w > 0.0 && w.is_finite() {
            xs.push(x);
            ws.push(w);
        }
    }
    let mu: f64 = ws.iter().sum();
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::NonNormalizable(weight.name()));
    }
    let mut a = Vec::with_capacity(count);
    let mut b = vec![mu];
    let mut q0 = vec![0.0; xs.len()];
    let mut q1 = vec![1.0 / mu.sqrt(); xs.len()];
    let mut sb = 0.0;
    for n in 0..count {
        let an: f64 = (0..xs.len()).map(|i| ws[i] * xs[i] * q1[i] * q1[i]).sum();
        a.push(an);
        if n + 1 == count {
            break;
        }
        let v: Vec<f64> = (0..xs.len()).map(|i| (xs[i] - an) * q1[i] - sb * q0[i]).collect();
        let bn: f64 = (0..xs.len()).map(|i| ws[i] * v[i] * v[i]).sum();
        if !(bn > 0.0) {
            return Err(Error::InvalidCoefficient(bn));
        }
        b.push(bn);
        sb = bn.sqrt();
        q0 = q1;
        q1 = v.into_iter().map(|x| x / sb).collect();
    }
    let mut rows = JacobiRows::from_coefficients(weight.clone(), a, b)?;
    if m < 2 * count {
        rows.warnings.push(format!("M = {m} below 2·count = {}", 2 * count));
    }
    let per = start.elapsed().as_secs_f64() / count as f64;
    rows.row_seconds = vec![per; count];
    Ok(rows)
}

/// Rows `0..count`: the baseline below `N_MIN`, the RH route above.
/// With `threads > 1` contiguous blocks of rows run concurrently.
pub fn rows(weight: &WeightSpec, count: usize, params: &DeformationParams, threads: usize) -> Result<JacobiRows> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be positive".into()));
    }
    let mu0 = crate::quad::mu0(weight)?;
    let base = stieltjes_rows(weight, count.min(N_MIN), STIELTJES_M)?;
    let mut out = base.clone();
    out.mu0 = mu0;
    out.b[0] = mu0;
    // baseline γ from the product identity with the accurate μ₀
    let mut acc = 0.0;
    for n in 0..out.b.len() {
        acc += out.b[n].ln();
        out.log_gamma[n] = -acc;
    }
    if count <= N_MIN {
        return Ok(out);
    }
    let idx: Vec<usize> = (N_MIN..count).collect();
    let threads = threads.max(1).min(idx.len());
    let chunk = idx.len().div_ceil(threads);
    let run_block = |block: &[usize]| -> Vec<Result<RowResult>> {
        let mut warm = None;
        block
            .iter()
            .map(|&n| {
                let r = row_warm(weight, n, params, warm);
                if let Ok(rr) = &r {
                    warm = Some((rr.scaling.alpha, rr.scaling.beta));
                }
                r
            })
            .collect()
    };
    let results: Vec<Result<RowResult>> = if threads == 1 {
        run_block(&idx)
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = idx.chunks(chunk).map(|c| s.spawn(move || run_block(c))).collect();
            handles.into_iter().flat_map(|h| h.join().expect("row worker panicked")).collect()
        })
    };
    for (n, r) in idx.into_iter().zip(results) {
        match r {
            Ok(rr) => {
                out.a.push(rr.a);
                out.b.push(rr.b);
                out.log_gamma.push(rr.log_gamma);
                out.methods.push(Method::Rh);
                out.row_seconds.push(rr.seconds);
                out.residuals.push(rr.residual);
            }
            Err(e) => {
                out.a.push(f64::NAN);
                out.b.push(f64::NAN);
                out.log_gamma.push(f64::NAN);
                out.methods.push(Method::Rh);
                out.row_seconds.push(f64::NAN);
                out.residuals.push(f64::NAN);
                out.failures.push((n, e.to_string()));
            }
        }
    }
    Ok(out)
}

/// Monic `π_n(x)` by the forward recurrence.
pub fn eval_orthopoly(rows: &JacobiRows, n: usize, x: f64) -> Result<f64> {
    if n > rows.len() {
        return Err(Error::InvalidArgument(format!("π_{n} needs {n} rows, have {}", rows.len())));
    }
    let (mut p0, mut p1) = (0.0, 1.0);
    for k in 0..n {
        let bk = if k == 0 { 0.0 } else { rows.b[k] };
        let p2 = (x - rows.a[k]) * p1 - bk * p0;
        p0 = p1;
        p1 = p2;
    }
    Ok(p1)
}
