//! Chebyshev-T series on affine domains: transforms, Clenshaw evaluation,
//! differentiation, adaptive fitting and Clenshaw–Curtis quadrature.
//!
//! Grids are second-kind (extrema) points ordered ascending,
//! `x_j = -cos(πj/(n-1))`, so both endpoints are always sampled.

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Relative size below which trailing coefficients are dropped.
pub const CHOP_TOL: f64 = 1e-14;
/// Largest grid the adaptive fitter will try.
pub const MAX_FIT_COUNT: usize = (1 << 16) + 1;

/// The affine map `t ↦ alpha·t + beta` from `[-1, 1]` onto a domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineMap {
    pub alpha: C64,
    pub beta: C64,
}

impl AffineMap {
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a == b {
            return Err(Error::InvalidDomain(format!("[{a}, {b}]")));
        }
        Ok(AffineMap { alpha: C64::from((b - a) / 2.0), beta: C64::from((a + b) / 2.0) })
    }

    pub fn unit() -> Self {
        AffineMap { alpha: C64::new(1.0, 0.0), beta: C64::new(0.0, 0.0) }
    }

    pub fn map(&self, t: C64) -> C64 {
        self.alpha * t + self.beta
    }

    pub fn unmap(&self, z: C64) -> C64 {
        (z - self.beta) / self.alpha
    }
}

/// A Chebyshev-T series living on an affine domain.
#[derive(Clone, Debug, PartialEq)]
pub struct ChebSeries {
    pub coeffs: Vec<C64>,
    pub domain: AffineMap,
}

impl ChebSeries {
    pub fn new(coeffs: Vec<C64>, domain: AffineMap) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("empty coefficient sequence".into()));
        }
        Ok(ChebSeries { coeffs, domain })
    }

    pub fn from_real(coeffs: &[f64], domain: AffineMap) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| C64::from(c)).collect(), domain)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, z: C64) -> C64 {
        clenshaw(&self.coeffs, self.domain.unmap(z))
    }
}

/// `count` second-kind points on `[-1, 1]`, ascending.
pub fn unit_points(count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![0.0];
    }
    let m = (count - 1) as f64;
    (0..count)
        .map(|j| {
            // symmetric evaluation keeps x_{n-1-j} = -x_j exactly
            let k = 2 * j as i64 - (count as i64 - 1);
            (PI * k as f64 / (2.0 * m)).sin()
        })
        .collect()
}

/// `count` second-kind Chebyshev points mapped onto `[a, b]`, ascending.
pub fn cheb_points(count: usize, a: f64, b: f64) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be positive".into()));
    }
    let map = AffineMap::interval(a, b)?;
    let (h, c) = (map.alpha.re, map.beta.re);
    let mut pts: Vec<f64> = unit_points(count).into_iter().map(|t| h * t + c).collect();
    if count > 1 {
        pts[0] = a;
        pts[count - 1] = b;
    }
    Ok(pts)
}

/// `y_k = v_0/2 + (-1)^k v_{n-1}/2 + Σ_{j=1}^{n-2} v_j cos(πjk/(n-1))`.
fn dct1(v: &[C64]) -> Vec<C64> {
    let n = v.len();
    if n == 1 {
        return v.to_vec();
    }
    let m = n - 1;
    if m.is_power_of_two() && n > 8 {
        let len = 2 * m;
        let mut buf: Vec<C64> = Vec::with_capacity(len);
        buf.extend_from_slice(v);
        for j in (1..m).rev() {
            buf.push(v[j]);
        }
        let fft = FftPlanner::new().plan_fft_forward(len);
        fft.process(&mut buf);
        buf.truncate(n);
        for y in &mut buf {
            *y *= 0.5;
        }
        return buf;
    }
    let period = 2 * m;
    let table: Vec<f64> = (0..period).map(|i| (PI * i as f64 / m as f64).cos()).collect();
    (0..n)
        .map(|k| {
            let mut s = 0.5 * (v[0] + if k % 2 == 0 { v[m] } else { -v[m] });
            let mut idx = 0;
            for vj in &v[1..m] {
                idx += k;
                if idx >= period {
                    idx -= period;
                }
                s += vj * table[idx];
            }
            s
        })
        .collect()
}

/// Interpolant coefficients from values at the ascending second-kind grid.
pub fn vals_to_coeffs(values: &[C64]) -> Result<Vec<C64>> {
    let n = values.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty value sequence".into()));
    }
    if n == 1 {
        return Ok(values.to_vec());
    }
    let scale = 2.0 / (n - 1) as f64;
    let mut c = dct1(values);
    for (k, ck) in c.iter_mut().enumerate() {
        *ck *= if k % 2 == 0 { scale } else { -scale };
    }
    c[0] *= 0.5;
    c[n - 1] *= 0.5;
    Ok(c)
}

/// Real-valued convenience wrapper of [`vals_to_coeffs`].
pub fn vals_to_coeffs_real(values: &[f64]) -> Result<Vec<f64>> {
    let v: Vec<C64> = values.iter().map(|&x| C64::from(x)).collect();
    Ok(vals_to_coeffs(&v)?.into_iter().map(|c| c.re).collect())
}

/// Values at the matching grid; inverse of [`vals_to_coeffs`].
pub fn coeffs_to_vals(series: &ChebSeries) -> Result<Vec<C64>> {
    let c = &series.coeffs;
    let n = c.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty coefficient sequence".into()));
    }
    if n == 1 {
        return Ok(c.clone());
    }
    let mut e: Vec<C64> = c
        .iter()
        .enumerate()
        .map(|(k, &ck)| if k % 2 == 0 { ck } else { -ck })
        .collect();
    e[0] *= 2.0;
    e[n - 1] *= 2.0;
    Ok(dct1(&e))
}

/// Clenshaw evaluation of `Σ c_k T_k(t)` at a complex point of the unit domain.
pub fn clenshaw(c: &[C64], t: C64) -> C64 {
    let mut b1 = C64::new(0.0, 0.0);
    let mut b2 = C64::new(0.0, 0.0);
    for &ck in c.iter().skip(1).rev() {
        let b0 = ck + 2.0 * t * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    c.first().copied().unwrap_or_default() + t * b1 - b2
}

/// Real Clenshaw evaluation.
pub fn clenshaw_real(c: &[f64], t: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &ck in c.iter().skip(1).rev() {
        let b0 = ck + 2.0 * t * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    c.first().copied().unwrap_or(0.0) + t * b1 - b2
}

/// Value of the series at `z` (polynomial extension off the domain).
pub fn eval_series(series: &ChebSeries, z: C64) -> C64 {
    series.eval(z)
}

/// Derivative coefficients on the unit domain (no chain-rule factor).
pub fn diff_coeffs<T>(c: &[T]) -> Vec<T>
where
    T: Copy + Default + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
{
    let n = c.len();
    if n <= 1 {
        return vec![T::default()];
    }
    let mut d = vec![T::default(); n + 1];
    for k in (1..n).rev() {
        d[k - 1] = d[k + 1] + c[k] * (2.0 * k as f64);
    }
    d.truncate(n - 1);
    d[0] = d[0] * 0.5;
    d
}

/// Derivative of a series, including the chain-rule factor `1/alpha`.
pub fn diff_series(series: &ChebSeries) -> ChebSeries {
    let s = 1.0 / series.domain.alpha;
    let coeffs = diff_coeffs(&series.coeffs).into_iter().map(|c| c * s).collect();
    ChebSeries { coeffs, domain: series.domain }
}

/// Antiderivative on the unit domain with zero constant term.
pub fn integrate_coeffs(c: &[C64]) -> Vec<C64> {
    let n = c.len();
    let mut out = vec![C64::new(0.0, 0.0); n + 1];
    let get = |k: usize| if k < n { c[k] } else { C64::new(0.0, 0.0) };
    for k in 1..=n {
        let lower = if k == 1 { 2.0 * get(0) } else { get(k - 1) };
        out[k] = (lower - get(k + 1)) / (2.0 * k as f64);
    }
    out
}

/// `∫_{-1}^{1} T_k(t) dt`.
pub fn t_integral(k: usize) -> f64 {
    if k % 2 == 1 {
        0.0
    } else {
        let k = k as f64;
        2.0 / (1.0 - k * k)
    }
}

/// Drop trailing coefficients below `tol` relative to the largest one.
pub fn chop<T: Copy + Into<C64>>(c: &mut Vec<T>, tol: f64) {
    let big = c.iter().map(|&x| x.into().norm()).fold(0.0, f64::max);
    while c.len() > 1 && c.last().map(|&x| x.into().norm()).unwrap_or(0.0) <= tol * big {
        c.pop();
    }
}

/// Adaptive Chebyshev fit of a real function on `[a, b]`: the grid is
/// refined (17, 33, 65, …) until the tail is negligible, then chopped.
pub fn fit_real<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> Result<Vec<f64>> {
    let mut count = 17;
    loop {
        let pts = cheb_points(count, a, b)?;
        let mut vals = Vec::with_capacity(count);
        for &x in &pts {
            let v = f(x);
            if !v.is_finite() {
                return Err(Error::Evaluation { point: x, value: v });
            }
            vals.push(v);
        }
        let mut c = vals_to_coeffs_real(&vals)?;
        let big = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let tail = c[count - 3..].iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if big == 0.0 {
            return Ok(vec![0.0]);
        }
        if tail <= CHOP_TOL * big {
            chop(&mut c, CHOP_TOL);
            return Ok(c);
        }
        if count >= MAX_FIT_COUNT {
            return Err(Error::Convergence(format!(
                "Chebyshev fit on [{a}, {b}] unresolved with {count} points"
            )));
        }
        count = 2 * count - 1;
    }
}

/// Clenshaw–Curtis approximation of `∫_a^b f`.
pub fn clenshaw_curtis<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, count: usize) -> Result<f64> {
    let pts = cheb_points(count, a, b)?;
    let mut vals = Vec::with_capacity(count);
    for &x in &pts {
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::Evaluation { point: x, value: v });
        }
        vals.push(v);
    }
    let c = vals_to_coeffs_real(&vals)?;
    let s: f64 = c.iter().enumerate().map(|(k, ck)| ck * t_integral(k)).sum();
    Ok(s * (b - a) / 2.0)
}

/// Quadrature weights on `[-1, 1]` for the `n`-point grid, i.e. the row
/// vector mapping node values to the integral of their interpolant.
pub fn cc_weights(n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![2.0];
    }
    let m = (n - 1) as f64;
    (0..n)
        .map(|j| {
            let theta = PI * j as f64 / m;
            let mut s = 0.0;
            for k in (0..n).step_by(2) {
                let wk = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
                s += wk * t_integral(k) * (k as f64 * theta).cos();
            }
            let wj = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
            2.0 / m * wj * s
        })
        .collect()
}
