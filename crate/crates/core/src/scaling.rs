//! Weights `e^{-Q(x)}` and their rescaling to varying form
//! `V_N(x) = Q(αx + β)/N`, plus the map of recurrence rows back.

use crate::chebyshev::fit_real;
use crate::equilibrium::Field;
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use std::fmt;
use std::sync::Arc;

pub type ComplexFn = Arc<dyn Fn(C64) -> C64 + Send + Sync>;

#[derive(Clone)]
pub enum WeightKind {
    /// `Q(x) = Σ q_k x^k`.
    Polynomial(Vec<f64>),
    /// `Q(x) = cosh x`.
    Cosh,
    /// `Q(x) = x² + sin x`.
    X2Sin,
    /// User-supplied `Q` and `Q'`.
    Custom { name: String, q: ComplexFn, dq: ComplexFn },
}

#[derive(Clone)]
pub struct WeightSpec {
    pub kind: WeightKind,
    pub symmetric: bool,
}

impl fmt::Debug for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightSpec({})", self.name())
    }
}

fn poly_eval(c: &[f64], z: C64) -> C64 {
    c.iter().rev().fold(C64::default(), |acc, &q| acc * z + q)
}

fn poly_deriv(c: &[f64], z: C64) -> C64 {
    c.iter().enumerate().skip(1).rev().fold(C64::default(), |acc, (k, &q)| acc * z + k as f64 * q)
}

impl WeightSpec {
    /// `e^{-x²}`.
    pub fn hermite() -> Self {
        WeightSpec { kind: WeightKind::Polynomial(vec![0.0, 0.0, 1.0]), symmetric: true }
    }

    /// `e^{-Q}` for polynomial `Q` of even degree with positive leading coefficient.
    pub fn polynomial(coeffs: Vec<f64>) -> Result<Self> {
        let mut c = coeffs;
        while c.len() > 1 && c.last() == Some(&0.0) {
            c.pop();
        }
        let m = c.len() - 1;
        if m < 2 || m % 2 == 1 || !(c[m] > 0.0) || c.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonNormalizable(format!("polynomial {c:?} needs even degree ≥ 2 and positive leading coefficient")));
        }
        let symmetric = c.iter().skip(1).step_by(2).all(|&x| x == 0.0);
        Ok(WeightSpec { kind: WeightKind::Polynomial(c), symmetric })
    }

    pub fn cosh() -> Self {
        WeightSpec { kind: WeightKind::Cosh, symmetric: true }
    }

    pub fn x2sin() -> Self {
        WeightSpec { kind: WeightKind::X2Sin, symmetric: false }
    }

    pub fn custom(name: &str, q: ComplexFn, dq: ComplexFn, symmetric: bool) -> Self {
        WeightSpec { kind: WeightKind::Custom { name: name.into(), q, dq }, symmetric }
    }

    pub fn name(&self) -> String {
        match &self.kind {
            WeightKind::Polynomial(c) if c == &[0.0, 0.0, 1.0] => "hermite".into(),
            WeightKind::Polynomial(c) => {
                let parts: Vec<String> = c.iter().map(|x| format!("{x}")).collect();
                format!("poly:{}", parts.join(","))
            }
            WeightKind::Cosh => "cosh".into(),
            WeightKind::X2Sin => "x2sin".into(),
            WeightKind::Custom { name, .. } => name.clone(),
        }
    }

    pub fn q(&self, z: C64) -> C64 {
        match &self.kind {
            WeightKind::Polynomial(c) => poly_eval(c, z),
            WeightKind::Cosh => z.cosh(),
            WeightKind::X2Sin => z * z + z.sin(),
            WeightKind::Custom { q, .. } => q(z),
        }
    }

    pub fn dq(&self, z: C64) -> C64 {
        match &self.kind {
            WeightKind::Polynomial(c) => poly_deriv(c, z),
            WeightKind::Cosh => z.sinh(),
            WeightKind::X2Sin => 2.0 * z + z.cos(),
            WeightKind::Custom { dq, .. } => dq(z),
        }
    }

    pub fn q_real(&self, x: f64) -> f64 {
        match &self.kind {
            WeightKind::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &q| acc * x + q),
            WeightKind::Cosh => x.cosh(),
            WeightKind::X2Sin => x * x + x.sin(),
            WeightKind::Custom { q, .. } => q(C64::from(x)).re,
        }
    }

    /// `ω(x) = e^{-Q(x)}`.
    pub fn weight(&self, x: f64) -> f64 {
        (-self.q_real(x)).exp()
    }

    pub fn polynomial_degree(&self) -> Option<usize> {
        match &self.kind {
            WeightKind::Polynomial(c) => Some(c.len() - 1),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingParams {
    pub n_big: usize,
    pub alpha: f64,
    pub beta: f64,
    /// `log N / log α`, diagnostic only.
    pub m: f64,
}

/// `V_N(x) = Q(αx + β)/N`.
#[derive(Clone, Debug)]
pub struct ScaledField {
    pub weight: WeightSpec,
    pub params: ScalingParams,
}

impl Field for ScaledField {
    fn value(&self, z: C64) -> C64 {
        let p = &self.params;
        self.weight.q(p.alpha * z + p.beta) / p.n_big as f64
    }

    fn deriv(&self, x: f64) -> f64 {
        let p = &self.params;
        p.alpha * self.weight.dq(C64::from(p.alpha * x + p.beta)).re / p.n_big as f64
    }
}

impl ScalingParams {
    fn new(n_big: usize, alpha: f64, beta: f64) -> Self {
        let m = if (alpha - 1.0).abs() > 1e-12 { (n_big as f64).ln() / alpha.ln() } else { f64::NAN };
        ScalingParams { n_big, alpha, beta, m }
    }

    pub fn field(&self, weight: &WeightSpec) -> Arc<dyn Field> {
        Arc::new(ScaledField { weight: weight.clone(), params: *self })
    }
}

/// `α = N^{1/m}`, `β = 0` for a degree-`m` polynomial.
pub fn scale_polynomial(weight: &WeightSpec, n_big: usize) -> Result<ScalingParams> {
    let m = weight
        .polynomial_degree()
        .ok_or_else(|| Error::NonNormalizable(format!("{} is not a polynomial weight", weight.name())))?;
    if n_big == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    if let WeightKind::Polynomial(c) = &weight.kind {
        if m < 2 || m % 2 == 1 || !(c[m] > 0.0) {
            return Err(Error::NonNormalizable(weight.name()));
        }
    }
    Ok(ScalingParams::new(n_big, (n_big as f64).powf(1.0 / m as f64), 0.0))
}

/// `(c₀, c₁ - 4)` for `V_N'` on `[-1, 1]`; zero iff the support is `[-1, 1]`.
fn entire_residual(weight: &WeightSpec, n_big: usize, alpha: f64, beta: f64) -> Result<[f64; 2]> {
    let f = ScaledField { weight: weight.clone(), params: ScalingParams::new(n_big, alpha, beta) };
    let c = fit_real(|x| f.deriv(x), -1.0, 1.0)?;
    Ok([c[0], c.get(1).copied().unwrap_or(0.0) - 4.0])
}

/// Root-find `(α, β)` so that `V_N` has equilibrium support `[-1, 1]`.
pub fn scale_entire(weight: &WeightSpec, n_big: usize, warm: Option<(f64, f64)>) -> Result<ScalingParams> {
    if n_big == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let (mut alpha, mut beta) = warm.unwrap_or((1.0, 0.0));
    if !(alpha > 0.0) {
        alpha = 1.0;
    }
    let fail = |s: &str| Error::ScalingFailure(format!("{} at N = {n_big}: {s}", weight.name()));
    if weight.symmetric {
        let f = |a: f64| entire_residual(weight, n_big, a, 0.0).map(|r| r[1]);
        // bracket c₁(α) = 4, c₁ increasing in α
        let (mut lo, mut hi) = (alpha, alpha);
        let (mut flo, mut fhi) = (f(lo)?, f(hi)?);
        let mut k = 0;
        while flo > 0.0 {
            lo /= 2.0;
            flo = f(lo)?;
            k += 1;
            if k > 200 {
                return Err(fail("no lower bracket"));
            }
        }
        while fhi < 0.0 {
            hi *= 2.0;
            fhi = f(hi)?;
            k += 1;
            if k > 200 {
                return Err(fail("no upper bracket"));
            }
        }
        if flo == 0.0 {
            return Ok(ScalingParams::new(n_big, lo, 0.0));
        }
        if fhi == 0.0 {
            return Ok(ScalingParams::new(n_big, hi, 0.0));
        }
        // Illinois false position
        let mut side = 0;
        for _ in 0..200 {
            let x = (lo * fhi - hi * flo) / (fhi - flo);
            let x = if x > lo && x < hi { x } else { 0.5 * (lo + hi) };
            let fx = f(x)?;
            if fx.abs() <= 1e-14 * 4.0 || (hi - lo) <= 1e-15 * hi {
                return Ok(ScalingParams::new(n_big, x, 0.0));
            }
            if fx < 0.0 {
                lo = x;
                flo = fx;
                if side == -1 {
                    fhi /= 2.0;
                }
                side = -1;
            } else {
                hi = x;
                fhi = fx;
                if side == 1 {
                    flo /= 2.0;
                }
                side = 1;
            }
        }
        return Err(fail("bracketed solve stalled"));
    }
    // damped Newton on (α, β)
    for _ in 0..100 {
        let r = entire_residual(weight, n_big, alpha, beta)?;
        if r[0].abs().max(r[1].abs()) <= 1e-13 {
            return Ok(ScalingParams::new(n_big, alpha, beta));
        }
        let h = 1e-7 * alpha.max(1.0);
        let mut jac = [[0.0; 2]; 2];
        for j in 0..2 {
            let (ap, bp, am, bm) = if j == 0 {
                (alpha + h, beta, alpha - h, beta)
            } else {
                (alpha, beta + h, alpha, beta - h)
            };
            let fp = entire_residual(weight, n_big, ap, bp)?;
            let fm = entire_residual(weight, n_big, am, bm)?;
            for i in 0..2 {
                jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if !(det.abs() > 0.0) || !det.is_finite() {
            return Err(fail("singular Jacobian"));
        }
        let da = (jac[1][1] * r[0] - jac[0][1] * r[1]) / det;
        let db = (jac[0][0] * r[1] - jac[1][0] * r[0]) / det;
        let norm0 = r[0].abs().max(r[1].abs());
        let mut step = 1.0;
        loop {
            let (na, nb) = (alpha - step * da, beta - step * db);
            if na > 0.0 {
                if let Ok(rn) = entire_residual(weight, n_big, na, nb) {
                    if rn[0].abs().max(rn[1].abs()) < norm0 || step < 1e-3 {
                        alpha = na;
                        beta = nb;
                        break;
                    }
                }
            }
            step /= 2.0;
            if step < 1e-6 {
                return Err(fail("line search failed"));
            }
        }
        if (step * da).abs().max((step * db).abs()) <= 1e-15 * alpha.max(1.0) {
            return Ok(ScalingParams::new(n_big, alpha, beta));
        }
    }
    Err(fail("Newton did not converge"))
}

/// Polynomial weights scale exactly; everything else by root-finding.
pub fn scale(weight: &WeightSpec, n_big: usize, warm: Option<(f64, f64)>) -> Result<ScalingParams> {
    match weight.kind {
        WeightKind::Polynomial(_) => scale_polynomial(weight, n_big),
        _ => scale_entire(weight, n_big, warm),
    }
}

/// `b = b_N α²`, `a = a_N α + β`.
pub fn unscale_rows(a_scaled: f64, b_scaled: f64, params: &ScalingParams) -> Result<(f64, f64)> {
    if !(b_scaled > 0.0) {
        return Err(Error::InvalidCoefficient(b_scaled));
    }
    Ok((a_scaled * params.alpha + params.beta, b_scaled * params.alpha * params.alpha))
}

/// Number of Chebyshev coefficients needed to resolve `V_N'` on `[-1, 1]`.
pub fn chebyshev_length(weight: &WeightSpec, params: &ScalingParams) -> Result<usize> {
    let f = ScaledField { weight: weight.clone(), params: *params };
    Ok(fit_real(|x| f.deriv(x), -1.0, 1.0)?.len())
}
