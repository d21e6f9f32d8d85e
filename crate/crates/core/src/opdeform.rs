//! The deformed problem for `Φ`: lens arcs, real-axis rays and two small
//! polygonal circles about the support endpoints, with jumps built from
//! the global parametrix `N` and sector-constant local parametrices.

use crate::cauchy::Side;
use crate::contours::{scale_contour, truncate_contour, AffineArc, ArcLabel, ContourSet};
use crate::equilibrium::EquilibriumMeasure;
use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::rhp::JumpEvaluator;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug)]
pub struct DeformationParams {
    /// Lens angle at `b`; `None` picks π/3, or 2π/7 at a degenerate edge.
    pub theta_b: Option<f64>,
    /// Lens angle at `a`.
    pub theta_a: Option<f64>,
    /// Pre-scale circle radius; `None` derives it from the edge behaviour
    /// of the phase so that `n|φ| ≈ 2` on the circle.
    pub r0: Option<f64>,
    pub epsilon_trunc: f64,
    /// Truncation grid points per unit parameter length.
    pub grid_density: usize,
    pub lens_nodes: usize,
    /// Nodes per circle arc.
    pub circle_nodes: usize,
    /// Arcs per polygon piece.
    pub circle_sides: usize,
    /// Initial lens stub length in circle radii.
    pub stub_factor: f64,
}

impl Default for DeformationParams {
    fn default() -> Self {
        DeformationParams {
            theta_b: None,
            theta_a: None,
            r0: None,
            epsilon_trunc: 1e-14,
            grid_density: 200,
            lens_nodes: 24,
            circle_nodes: 24,
            circle_sides: 2,
            stub_factor: 3.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    A,
    B,
}

/// `ν(z) = ((z-b)/(z-a))^{1/4}`, cut on `[a, b]`.
pub fn nu(z: C64, a: f64, b: f64, side: Option<Side>) -> Result<C64> {
    if z.im == 0.0 && z.re > a && z.re < b {
        let s = side.ok_or(Error::SideRequired)?.sign();
        let w = ((z.re - b) / (z.re - a)).abs().powf(0.25);
        return Ok(w * C64::from_polar(1.0, s * PI / 4.0));
    }
    Ok(((z - b) / (z - a)).powf(0.25))
}

/// `N(z) = (1/2ν)[[1, i], [-i, 1]] + (ν/2)[[1, -i], [i, 1]]`.
pub fn global_parametrix(z: C64, a: f64, b: f64, side: Option<Side>) -> Result<Mat2> {
    let v = nu(z, a, b, side)?;
    let p = 0.5 / v;
    let q = 0.5 * v;
    Ok(Mat2::new(p + q, I * (p - q), -I * (p - q), p + q))
}

/// `N₁`, the `1/z` coefficient of `N`.
pub fn parametrix_moment(a: f64, b: f64) -> Mat2 {
    let s = (b - a) / 4.0;
    Mat2::new(C64::default(), I * s, -I * s, C64::default())
}

/// Sector-constant prefactor of the local parametrix; `ang = arg(z - c)`
/// in `(-π, π]`.
fn sector_matrix(endpoint: Endpoint, ang: f64, theta: f64) -> Mat2 {
    let lower = Mat2::real(1.0, 0.0, -1.0, 1.0);
    let upper = Mat2::real(1.0, -1.0, 0.0, 1.0);
    let swap = Mat2::real(0.0, -1.0, 1.0, 1.0);
    match endpoint {
        Endpoint::B => {
            if (0.0..PI - theta).contains(&ang) {
                Mat2::IDENTITY
            } else if ang >= PI - theta {
                lower
            } else if ang <= -PI + theta {
                swap
            } else {
                upper
            }
        }
        Endpoint::A => {
            if (0.0..theta).contains(&ang) {
                lower
            } else if ang >= theta {
                Mat2::IDENTITY
            } else if ang < -theta {
                upper
            } else {
                swap
            }
        }
    }
}

/// One deformed problem for degree `n`.
#[derive(Clone, Debug)]
pub struct PhiRhp {
    pub contours: ContourSet,
    pub measure: EquilibriumMeasure,
    pub n: usize,
    pub radius_a: f64,
    pub radius_b: f64,
    pub theta_a: f64,
    pub theta_b: f64,
    /// Lens stub length measured from each endpoint.
    pub stub: f64,
}

impl PhiRhp {
    fn center(&self, e: Endpoint) -> f64 {
        match e {
            Endpoint::A => self.measure.a,
            Endpoint::B => self.measure.b,
        }
    }

    fn theta(&self, e: Endpoint) -> f64 {
        match e {
            Endpoint::A => self.theta_a,
            Endpoint::B => self.theta_b,
        }
    }

    fn phase(&self, z: C64, side: Side) -> C64 {
        self.measure.phase(z, Some(side)).unwrap_or(C64::new(f64::NAN, 0.0))
    }

    fn n_pair(&self, z: C64, side: Side) -> (Mat2, Mat2) {
        let m = &self.measure;
        match global_parametrix(z, m.a, m.b, Some(side)) {
            Ok(n) => (n, n.inv_unimodular()),
            Err(_) => (Mat2::IDENTITY.scale(C64::new(f64::NAN, 0.0)), Mat2::IDENTITY),
        }
    }

    /// `P(z) = M_sector · diag(e^{nφ/2}, e^{-nφ/2})` near an endpoint.
    pub fn local_parametrix(&self, z: C64, endpoint: Endpoint, side: Side) -> Result<Mat2> {
        let c = C64::from(self.center(endpoint));
        let r = match endpoint {
            Endpoint::A => self.radius_a,
            Endpoint::B => self.radius_b,
        };
        if (z - c).norm() > r * (1.0 + 1e-12) {
            return Err(Error::Domain(format!("{z} outside the disc of radius {r} about {c}")));
        }
        let ang = if z.im == 0.0 && z.re < c.re {
            side.sign() * PI
        } else {
            (z - c).arg()
        };
        let h = self.n as f64 * self.measure.phase(z, Some(side))? / 2.0;
        Ok(sector_matrix(endpoint, ang, self.theta(endpoint)) * Mat2::diag(h.exp(), (-h).exp()))
    }

    /// Jump on a labelled arc at `z`; `toward` breaks ties at circle
    /// vertices by nudging into the arc.
    pub fn jump_at(&self, label: ArcLabel, z: C64, toward: C64) -> Mat2 {
        let nf = self.n as f64;
        match label {
            ArcLabel::LensUpper | ArcLabel::LensLower => {
                let side = if label == ArcLabel::LensUpper { Side::Plus } else { Side::Minus };
                let (n, ni) = self.n_pair(z, side);
                let e = (nf * self.phase(z, side)).exp();
                n * Mat2::new(C64::from(1.0), C64::default(), e, C64::from(1.0)) * ni
            }
            ArcLabel::RayLeft | ArcLabel::RayRight => {
                let (n, ni) = self.n_pair(z, Side::Plus);
                let e = (-nf * self.phase(z, Side::Plus)).exp();
                n * Mat2::new(C64::from(1.0), e, C64::default(), C64::from(1.0)) * ni
            }
            ArcLabel::CircleA | ArcLabel::CircleB => {
                let endpoint = if label == ArcLabel::CircleA { Endpoint::A } else { Endpoint::B };
                let c = C64::from(self.center(endpoint));
                let w = z + 1e-9 * (toward - z);
                let side = if w.im >= 0.0 { Side::Plus } else { Side::Minus };
                let m = sector_matrix(endpoint, (w - c).arg(), self.theta(endpoint));
                let h = nf * self.phase(z, side) / 2.0;
                let pinv = Mat2::diag((-h).exp(), h.exp()) * m.inv_unimodular();
                self.n_pair(z, side).0 * pinv
            }
            _ => Mat2::IDENTITY,
        }
    }

    fn jump_norm(&self, label: ArcLabel, z: C64) -> f64 {
        let g = self.jump_at(label, z, z);
        let d = (g - Mat2::IDENTITY).max_abs();
        if d.is_nan() {
            f64::INFINITY
        } else {
            d
        }
    }
}

impl JumpEvaluator for PhiRhp {
    fn jump(&self, arc: usize, _t: f64, z: C64) -> Mat2 {
        self.jump_at(self.contours.labels[arc], z, self.contours.arcs[arc].beta)
    }
}

fn edge_radius(c: f64, exponent: f64, n: usize, r0: Option<f64>) -> f64 {
    let nf = n as f64;
    match r0 {
        Some(r0) => r0 * nf.powf(-exponent),
        None if (exponent - 2.0 / 3.0).abs() < 1e-12 => (2.0 / (nf * c.abs())).powf(2.0 / 3.0),
        None => nf.powf(-exponent),
    }
}

/// Build the deformed problem for `Φ` at degree `n`.
pub fn build_phi_rhp(measure: &EquilibriumMeasure, n: usize, params: &DeformationParams) -> Result<PhiRhp> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let (a, b) = (measure.a, measure.b);
    let (ca, cb) = measure.edge_coefficients();
    let (ea, eb) = measure.scaling_exponents();
    let auto_theta = |e: f64| if e < 0.5 { 2.0 * PI / 7.0 } else { PI / 3.0 };
    let theta_a = params.theta_a.unwrap_or(auto_theta(ea));
    let theta_b = params.theta_b.unwrap_or(auto_theta(eb));
    for th in [theta_a, theta_b] {
        if !(th > 0.0 && th < PI / 2.0) {
            return Err(Error::Geometry(format!("lens angle {th} outside (0, π/2)")));
        }
    }
    if let Some(r0) = params.r0 {
        if !(r0 > 0.0) {
            return Err(Error::Geometry(format!("radius {r0} must be positive")));
        }
    }
    // template radii are clamped so that scaled discs stay disjoint
    let clamp = (b - a) / 4.0;
    let nf = n as f64;
    let tmpl = |c: f64, e: f64| edge_radius(c, e, n, params.r0).min(clamp) * nf.powf(e);
    let (ta, tb) = (tmpl(ca, ea), tmpl(cb, eb));
    let (radius_a, radius_b) = (ta * nf.powf(-ea), tb * nf.powf(-eb));
    if radius_a + radius_b >= b - a {
        return Err(Error::Geometry("endpoint discs overlap".into()));
    }
    let sides = params.circle_sides.max(1);
    let cn = params.circle_nodes;
    let tb_angles = [-(PI - theta_b), 0.0, PI - theta_b, PI + theta_b];
    let ta_angles = [theta_a, PI, 2.0 * PI - theta_a, 2.0 * PI + theta_a];
    let circ_b = ContourSet::polygon(C64::default(), tb, &tb_angles, sides, cn, ArcLabel::CircleB)?;
    let circ_a = ContourSet::polygon(C64::default(), ta, &ta_angles, sides, cn, ArcLabel::CircleA)?;
    let circ_b = scale_contour(&circ_b, C64::from(b), eb, n, false)?;
    let circ_a = scale_contour(&circ_a, C64::from(a), ea, n, false)?;
    // lens attachment points are polygon vertices
    let a_up = circ_a.arcs[0].start();
    let a_dn = circ_a.arcs[2 * sides].start();
    let b_up = circ_b.arcs[2 * sides].start();
    let b_dn = circ_b.arcs[0].start();
    let right = circ_b.arcs[sides].start();
    let left = circ_a.arcs[sides].start();

    let mut rhp = PhiRhp {
        contours: ContourSet::new(),
        measure: measure.clone(),
        n,
        radius_a,
        radius_b,
        theta_a,
        theta_b,
        stub: 0.0,
    };
    let eps = params.epsilon_trunc;
    let smax = 0.45 * (b - a) / 2.0 / theta_a.max(theta_b).cos();
    let mut sl = (params.stub_factor * radius_a.max(radius_b)).min(smax);
    let ua = C64::from_polar(1.0, theta_a);
    let ub = C64::from_polar(1.0, PI - theta_b);
    // stubs grow until the whole connector between them is negligible
    let connector_jump = |sl: f64| {
        let (qa, qb) = (a + sl * ua, b + sl * ub);
        (0..=64).map(|k| rhp.jump_norm(ArcLabel::LensUpper, qa + (qb - qa) * (k as f64 / 64.0))).fold(0.0, f64::max)
    };
    while sl < smax && connector_jump(sl) > eps {
        sl = (sl * 1.5).min(smax);
    }
    // lower the lens while e^{nφ} grows anywhere on it (entire V off the axis)
    let growth = |sl: f64| {
        let (qa, qb) = (a + sl * ua, b + sl * ub);
        let stub_a = (0..=32).map(|k| a + (radius_a + (sl - radius_a) * k as f64 / 32.0) * ua);
        let stub_b = (0..=32).map(|k| b + (radius_b + (sl - radius_b) * k as f64 / 32.0) * ub);
        let conn = (0..=64).map(|k| qa + (qb - qa) * (k as f64 / 64.0));
        stub_a
            .chain(stub_b)
            .chain(conn)
            .map(|z| measure.phase(z, None).map_or(f64::INFINITY, |p| nf * p.re))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let floor = 1.5 * radius_a.max(radius_b);
    while sl > floor && growth(sl) > 0.0 {
        sl = (sl * 0.8).max(floor);
    }
    let keep_connector = connector_jump(sl) > eps;
    rhp.stub = sl;
    let mut raw: Vec<(AffineArc, ArcLabel)> = Vec::new();
    let ln = params.lens_nodes;
    for (label, pa, pb, da, db) in [
        (ArcLabel::LensUpper, a_up, b_up, ua, ub),
        (ArcLabel::LensLower, a_dn, b_dn, ua.conj(), ub.conj()),
    ] {
        let (qa, qb) = (a + sl * da, b + sl * db);
        if (qa - a).norm() > (pa - a).norm() {
            raw.push((AffineArc::segment(pa, qa, ln)?, label));
        }
        if keep_connector {
            raw.push((AffineArc::segment(qa, qb, ln)?, label));
        }
        if (qb - b).norm() > (pb - b).norm() {
            raw.push((AffineArc::segment(qb, pb, ln)?, label));
        }
    }
    let mut len = 2.0;
    while rhp.jump_norm(ArcLabel::RayRight, right + len) > eps && len < 100.0 {
        len *= 2.0;
    }
    raw.push((AffineArc::segment(right, right + len, ln)?, ArcLabel::RayRight));
    let mut len = 2.0;
    while rhp.jump_norm(ArcLabel::RayLeft, left - len) > eps && len < 100.0 {
        len *= 2.0;
    }
    raw.push((AffineArc::segment(left - len, left, ln)?, ArcLabel::RayLeft));

    let mut set = ContourSet::new();
    set.extend(circ_b);
    set.extend(circ_a);
    for (arc, label) in raw {
        for piece in truncate_contour(&arc, |z| rhp.jump_norm(label, z), eps, params.grid_density) {
            set.push(piece, label);
        }
    }
    rhp.contours = set;
    Ok(rhp)
}
