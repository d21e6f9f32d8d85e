//! Single-interval equilibrium measures for an external field `r·V`, the
//! log potential `g`, the Lagrange constant `ℓ` and the phase
//! `φ = r·V - ℓ - 2g`.
//!
//! With `c_k` the Chebyshev coefficients of `r·V'` on `[a, b]`, the support
//! solves `c₀ = 0`, `c₁ = 8/(b - a)` and the density is
//! `ψ(x) = Σ d_k sin(kθ)`, `x = m(cos θ)`, `d_k = c_k/(2π)`.

use crate::cauchy::Side;
use crate::chebyshev::{fit_real, AffineMap, ChebSeries};
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

/// Newton iteration cap for the support endpoints.
pub const MAX_NEWTON: usize = 50;
/// Edge coefficients below this mark a degenerate endpoint.
pub const DEGENERATE_TOL: f64 = 1e-8;

/// An external field, analytic near the real axis.
pub trait Field: Send + Sync {
    fn value(&self, z: C64) -> C64;
    fn deriv(&self, x: f64) -> f64;
}

/// A polynomial field `Σ q_k x^k`.
#[derive(Clone, Debug)]
pub struct PolyField(pub Vec<f64>);

impl Field for PolyField {
    fn value(&self, z: C64) -> C64 {
        self.0.iter().rev().fold(C64::default(), |acc, &q| acc * z + q)
    }

    fn deriv(&self, x: f64) -> f64 {
        self.0.iter().enumerate().skip(1).rev().fold(0.0, |acc, (k, &q)| acc * x + k as f64 * q)
    }
}

#[derive(Clone)]
pub struct EquilibriumMeasure {
    pub a: f64,
    pub b: f64,
    /// `d_0, d_1, …`; `d_0` is the (vanishing) endpoint residual.
    pub density_coeffs: Vec<f64>,
    pub ell: f64,
    pub g1: C64,
    pub ratio: f64,
    pub vprime_coeffs: ChebSeries,
    pub iterations: usize,
    pub field: Arc<dyn Field>,
}

impl fmt::Debug for EquilibriumMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EquilibriumMeasure")
            .field("a", &self.a)
            .field("b", &self.b)
            .field("ell", &self.ell)
            .field("g1", &self.g1)
            .field("ratio", &self.ratio)
            .field("terms", &self.density_coeffs.len())
            .field("iterations", &self.iterations)
            .finish()
    }
}

fn support_residual(field: &dyn Field, ratio: f64, a: f64, b: f64) -> Result<([f64; 2], f64)> {
    let c = fit_real(|x| ratio * field.deriv(x), a, b)?;
    let c0 = c[0];
    let c1 = c.get(1).copied().unwrap_or(0.0);
    let scale = c.iter().fold(8.0 / (b - a), |m, x| m.max(x.abs()));
    Ok(([c0, c1 - 8.0 / (b - a)], scale))
}

/// Newton solve for the support, then density, `ℓ` and `g₁`.
pub fn compute_equilibrium(field: Arc<dyn Field>, ratio: f64, initial: (f64, f64)) -> Result<EquilibriumMeasure> {
    if !(ratio > 0.0) {
        return Err(Error::InvalidArgument(format!("ratio {ratio} must be positive")));
    }
    let (mut a, mut b) = initial;
    if !(a < b) {
        return Err(Error::InvalidDomain(format!("[{a}, {b}]")));
    }
    let f = field.as_ref();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < MAX_NEWTON {
        let (r, scale) = support_residual(f, ratio, a, b)?;
        if r[0].abs().max(r[1].abs()) <= 1e-14 * scale {
            converged = true;
            break;
        }
        iterations += 1;
        let h = 1e-7 * a.abs().max(b.abs()).max(1.0);
        let mut jac = [[0.0; 2]; 2];
        for j in 0..2 {
            let (dp, dm) = if j == 0 { ((a + h, b), (a - h, b)) } else { ((a, b + h), (a, b - h)) };
            let fp = support_residual(f, ratio, dp.0, dp.1)?.0;
            let fm = support_residual(f, ratio, dm.0, dm.1)?.0;
            for i in 0..2 {
                jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if !(det.abs() > 0.0) || !det.is_finite() {
            return Err(Error::NoSingleInterval { iterations });
        }
        let mut da = (jac[1][1] * r[0] - jac[0][1] * r[1]) / det;
        let mut db = (jac[0][0] * r[1] - jac[1][0] * r[0]) / det;
        // keep the interval nondegenerate
        while b - db <= a - da {
            da /= 2.0;
            db /= 2.0;
        }
        a -= da;
        b -= db;
        let width = a.abs() + b.abs();
        if da.abs().max(db.abs()) <= 1e-15 * width {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoSingleInterval { iterations });
    }
    let c = fit_real(|x| ratio * f.deriv(x), a, b)?;
    let density_coeffs: Vec<f64> = c.iter().map(|ck| ck / (2.0 * PI)).collect();
    let d2 = density_coeffs.get(2).copied().unwrap_or(0.0);
    let g1 = C64::from(-((a + b) / 2.0 + PI * (b - a) * (b - a) * d2 / 16.0));
    let vprime_coeffs = ChebSeries::from_real(&c, AffineMap::interval(a, b)?)?;
    let mut m = EquilibriumMeasure {
        a,
        b,
        density_coeffs,
        ell: 0.0,
        g1,
        ratio,
        vprime_coeffs,
        iterations,
        field,
    };
    m.ell = ratio * m.field.value(C64::from(b)).re - 2.0 * m.g_eval(C64::from(b), Some(Side::Plus))?.re;
    let scale = m.density_coeffs.iter().fold(0.0f64, |s, d| s.max(d.abs()));
    for i in 1..200 {
        let x = a + (b - a) * i as f64 / 200.0;
        if m.density(x)? < -1e-12 * scale.max(1.0) {
            return Err(Error::MultiInterval { x });
        }
    }
    Ok(m)
}

impl EquilibriumMeasure {
    fn zeta(&self, z: C64) -> C64 {
        (2.0 * z - (self.a + self.b)) / (self.b - self.a)
    }

    /// `ρ(ζ) = ζ - √(ζ-1)√(ζ+1)` and `log ρ`, with one-sided values on the
    /// cut `ζ < 1`.
    fn rho(&self, z: C64, side: Option<Side>) -> Result<(C64, C64)> {
        let zeta = self.zeta(z);
        if zeta.im == 0.0 && zeta.re < 1.0 {
            let s = side.ok_or(Error::SideRequired)?.sign();
            let x = zeta.re;
            if x > -1.0 {
                let rho = C64::new(x, -s * (1.0 - x * x).sqrt());
                return Ok((rho, rho.ln()));
            }
            let rho = C64::from(x + (x * x - 1.0).sqrt());
            return Ok((rho, C64::new((-rho.re).ln(), -s * PI)));
        }
        let rho = 1.0 / (zeta + (zeta - 1.0).sqrt() * (zeta + 1.0).sqrt());
        Ok((rho, rho.ln()))
    }

    /// `g(z) = ∫ log(z - x) dμ(x)`; points on `(-∞, b)` need a side.
    pub fn g_eval(&self, z: C64, side: Option<Side>) -> Result<C64> {
        let (rho, lr) = self.rho(z, side)?;
        let d = &self.density_coeffs;
        let mut acc = C64::default();
        if d.len() > 1 {
            acc += d[1] * (rho * rho / 4.0 - lr / 2.0);
        }
        let mut pk = rho; // ρ^{k-1}
        for (k, &dk) in d.iter().enumerate().skip(2) {
            let kf = k as f64;
            acc += dk * (pk * rho * rho / (2.0 * (kf + 1.0)) - pk / (2.0 * (kf - 1.0)));
            pk *= rho;
        }
        Ok(C64::from(((self.b - self.a) / 4.0).ln()) + PI * (self.b - self.a) / 2.0 * acc)
    }

    /// `φ(z) = r·V(z) - ℓ - 2g(z)`.
    pub fn phase(&self, z: C64, side: Option<Side>) -> Result<C64> {
        Ok(self.ratio * self.field.value(z) - self.ell - 2.0 * self.g_eval(z, side)?)
    }

    /// Density `ψ(x)` on the support.
    pub fn density(&self, x: f64) -> Result<f64> {
        let slack = 1e-14 * (self.b - self.a);
        if !(x >= self.a - slack && x <= self.b + slack) {
            return Err(Error::Domain(format!("{x} outside [{}, {}]", self.a, self.b)));
        }
        let t = (self.zeta(C64::from(x)).re).clamp(-1.0, 1.0);
        let th = t.acos();
        Ok(self.density_coeffs.iter().enumerate().skip(1).map(|(k, d)| d * (k as f64 * th).sin()).sum())
    }

    /// `(c_a, c_b)` with `φ ≈ c (z - endpoint)^{3/2}` near each edge.
    pub fn edge_coefficients(&self) -> (f64, f64) {
        let mut sb = 0.0;
        let mut sa = 0.0;
        for (k, d) in self.density_coeffs.iter().enumerate().skip(1) {
            sb += k as f64 * d;
            sa += if k % 2 == 1 { 1.0 } else { -1.0 } * k as f64 * d;
        }
        let f = 8.0 * PI / 3.0 / (self.b - self.a).sqrt();
        (f * sa, f * sb)
    }

    /// Contour scaling exponent per endpoint: 2/3, or 2/7 where the
    /// `3/2`-power term vanishes.
    pub fn scaling_exponents(&self) -> (f64, f64) {
        let (ca, cb) = self.edge_coefficients();
        let e = |c: f64| if c.abs() < DEGENERATE_TOL { 2.0 / 7.0 } else { 2.0 / 3.0 };
        (e(ca), e(cb))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebyshev::clenshaw_curtis;
    use std::f64::consts::SQRT_2;

    fn eq(coeffs: &[f64], ratio: f64) -> EquilibriumMeasure {
        compute_equilibrium(Arc::new(PolyField(coeffs.to_vec())), ratio, (-1.0, 1.0)).unwrap()
    }

    /// `∫ f(x) ψ(x) dx` by the trapezoid rule in `θ`, exact for smooth `f`.
    fn against_density(m: &EquilibriumMeasure, f: impl Fn(f64) -> C64) -> C64 {
        let n = 2000;
        let mut s = C64::default();
        for j in 1..n {
            let th = PI * j as f64 / n as f64;
            let x = (m.a + m.b) / 2.0 + (m.b - m.a) / 2.0 * th.cos();
            s += f(x) * m.density(x).unwrap() * th.sin();
        }
        s * PI / n as f64 * (m.b - m.a) / 2.0
    }

    #[test]
    fn gaussian_field() {
        let m = eq(&[0.0, 0.0, 1.0], 1.0);
        assert!((m.b - SQRT_2).abs() < 1e-12 && (m.a + SQRT_2).abs() < 1e-12);
        assert!((m.density(0.0).unwrap() - SQRT_2 / PI).abs() < 1e-12);
        assert!(m.g1.norm() < 1e-14);
        assert!(m.iterations <= 20);
        for x in [-1.0, 0.3, 1.2] {
            assert!((m.density(x).unwrap() - (2.0 - x * x).sqrt() / PI).abs() < 1e-12);
        }
        let (ca, cb) = m.edge_coefficients();
        assert!((ca - cb).abs() < 1e-12 && cb > 2.0);
    }

    #[test]
    fn quartic_field() {
        let m = eq(&[0.0, 0.0, 0.0, 0.0, 1.0], 1.0);
        let want = (4.0f64 / 3.0).powf(0.25);
        assert!((m.b - want).abs() < 1e-12);
        assert!((m.a + m.b).abs() < 1e-12);
    }

    #[test]
    fn density_invariants() {
        for coeffs in [vec![0.0, 0.3, 1.0, 0.0, 0.5], vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]] {
            let m = eq(&coeffs, 0.9);
            let mass = clenshaw_curtis(|x| m.density(x).unwrap(), m.a, m.b, 2049).unwrap();
            assert!((mass - 1.0).abs() < 1e-6);
            let mass = against_density(&m, |_| C64::from(1.0));
            assert!((mass.re - 1.0).abs() < 1e-12);
            assert!((m.density_coeffs[1] * PI * (m.b - m.a) / 4.0 - 1.0).abs() < 1e-13);
            assert!(m.density(m.a).unwrap().abs() < 1e-12 && m.density(m.b).unwrap().abs() < 1e-12);
            assert!(m.density_coeffs[0].abs() < 1e-12);
            // variational equality and exterior inequality
            for i in 1..40 {
                let x = m.a + (m.b - m.a) * i as f64 / 40.0;
                let gp = m.g_eval(C64::from(x), Some(Side::Plus)).unwrap();
                let gm = m.g_eval(C64::from(x), Some(Side::Minus)).unwrap();
                let v = m.ratio * m.field.value(C64::from(x));
                assert!((gp + gm + m.ell - v).norm() < 1e-10);
            }
            for x in [m.a - 0.5, m.a - 0.01, m.b + 0.01, m.b + 0.5] {
                let side = Some(Side::Plus);
                let gp = m.g_eval(C64::from(x), side).unwrap();
                let gm = m.g_eval(C64::from(x), Some(Side::Minus)).unwrap();
                let v = m.ratio * m.field.value(C64::from(x));
                assert!((gp + gm + m.ell - v).re < 0.0);
            }
            // g₁ = -∫x dμ
            let mean = against_density(&m, C64::from);
            assert!((m.g1 + mean).norm() < 1e-12);
        }
    }

    #[test]
    fn g_matches_quadrature() {
        let m = eq(&[0.0, 0.0, 1.0], 1.0);
        let z = C64::from(10.0);
        let g = m.g_eval(z, None).unwrap();
        assert!((g - z.ln()).norm() <= 0.011);
        let want = against_density(&m, |x| (z - x).ln());
        assert!((g - want).norm() < 1e-11);
        let m = eq(&[0.0, 0.4, 1.0, 0.2, 0.3], 1.0);
        // 20 upper half plane points, off the support's neighbourhood
        for i in 0..20 {
            let z = C64::new(-3.0 + 0.3 * i as f64, 0.3 + 0.2 * (i % 5) as f64);
            let want = against_density(&m, |x| (z - x).ln());
            assert!((m.g_eval(z, None).unwrap() - want).norm() < 1e-10, "{z}");
        }
        for z in [C64::new(-2.0, 0.01), C64::new(3.0, 4.0)] {
            let want = against_density(&m, |x| (z - x).ln());
            assert!((m.g_eval(z, None).unwrap() - want).norm() < 1e-10, "{z}");
        }
    }

    #[test]
    fn g_branch_structure() {
        let m = eq(&[0.0, 0.4, 1.0, 0.2, 0.3], 1.0);
        let x = C64::from(m.a - 1.0);
        let jump = m.g_eval(x, Some(Side::Plus)).unwrap() - m.g_eval(x, Some(Side::Minus)).unwrap();
        assert!((jump - C64::new(0.0, 2.0 * PI)).norm() < 1e-11);
        assert!(matches!(m.g_eval(x, None), Err(Error::SideRequired)));
        let z = C64::new(1e6, 0.0);
        let g1 = z * (m.g_eval(z, None).unwrap() - z.ln());
        assert!((g1 - m.g1).norm() < 1e-6);
        // one-sided limits agree with nearby off-axis values
        let x = 0.5 * (m.a + m.b) + 0.1;
        let up = m.g_eval(C64::new(x, 1e-12), None).unwrap();
        assert!((up - m.g_eval(C64::from(x), Some(Side::Plus)).unwrap()).norm() < 1e-9);
    }

    #[test]
    fn phase_properties() {
        let m = eq(&[0.0, 0.0, 1.0], 1.0);
        assert!(m.phase(C64::from(m.b), Some(Side::Plus)).unwrap().norm() < 1e-10);
        assert!(m.phase(C64::from(m.b + 0.5), None).unwrap().re > 0.0);
        assert!(m.phase(C64::from(m.a - 0.5), Some(Side::Plus)).unwrap().re > 0.0);
        for x in [-1.0, 0.0, 0.7] {
            let p = m.phase(C64::from(x), Some(Side::Plus)).unwrap();
            let q = m.phase(C64::from(x), Some(Side::Minus)).unwrap();
            assert!((p + q).norm() < 1e-10);
        }
        // φ ≈ c_b (z - b)^{3/2}
        let (_, cb) = m.edge_coefficients();
        let h = 1e-4;
        let p = m.phase(C64::from(m.b + h), None).unwrap().re;
        assert!((p / h.powf(1.5) / cb - 1.0).abs() < 1e-3);
        assert_eq!(m.scaling_exponents(), (2.0 / 3.0, 2.0 / 3.0));
    }

    #[test]
    fn even_field_is_symmetric() {
        let m = eq(&[0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 2.0], 1.3);
        assert!((m.a + m.b).abs() < 1e-12);
        assert!(matches!(m.density(m.b + 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn double_well_is_rejected() {
        let r = compute_equilibrium(Arc::new(PolyField(vec![0.0, 0.0, -6.0, 0.0, 1.0])), 1.0, (-1.0, 1.0));
        assert!(matches!(r, Err(Error::MultiInterval { .. }) | Err(Error::NoSingleInterval { .. })));
    }
}
