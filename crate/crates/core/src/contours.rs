//! Oriented straight arcs as affine images of `[-1, 1]`, contour sets with
//! role labels, adaptive truncation of near-identity jumps and endpoint
//! scaling of contour templates.

use crate::chebyshev::unit_points;
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;

/// `{alpha·t + beta : t ∈ [-1, 1]}` traversed with increasing `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineArc {
    pub alpha: C64,
    pub beta: C64,
    pub count: usize,
}

impl AffineArc {
    pub fn new(alpha: C64, beta: C64, count: usize) -> Result<Self> {
        if alpha.norm() == 0.0 || !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(Error::Geometry("arc scale must be finite and nonzero".into()));
        }
        if count == 0 {
            return Err(Error::InvalidArgument("collocation count must be positive".into()));
        }
        Ok(AffineArc { alpha, beta, count })
    }

    /// The segment from `start` to `end`.
    pub fn segment(start: C64, end: C64, count: usize) -> Result<Self> {
        Self::new((end - start) / 2.0, (end + start) / 2.0, count)
    }

    pub fn map(&self, t: f64) -> C64 {
        self.alpha * t + self.beta
    }

    pub fn unmap(&self, z: C64) -> C64 {
        (z - self.beta) / self.alpha
    }

    pub fn start(&self) -> C64 {
        self.beta - self.alpha
    }

    pub fn end(&self) -> C64 {
        self.beta + self.alpha
    }

    pub fn length(&self) -> f64 {
        2.0 * self.alpha.norm()
    }

    /// Parameter values of the collocation nodes.
    pub fn params(&self) -> Vec<f64> {
        unit_points(self.count)
    }

    /// Collocation nodes; the end nodes are the exact endpoints.
    pub fn nodes(&self) -> Vec<C64> {
        let mut z: Vec<C64> = self.params().into_iter().map(|t| self.map(t)).collect();
        if self.count > 1 {
            z[0] = self.start();
            z[self.count - 1] = self.end();
        }
        z
    }

    pub fn with_count(&self, count: usize) -> Self {
        AffineArc { count, ..*self }
    }

    /// Same point set traversed the other way.
    pub fn reversed(&self) -> Self {
        AffineArc { alpha: -self.alpha, ..*self }
    }
}

/// Role of an arc in the deformed problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArcLabel {
    LensUpper,
    LensLower,
    CircleA,
    CircleB,
    RayLeft,
    RayRight,
    Band,
    Other,
}

/// A collection of labelled arcs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ContourSet {
    pub arcs: Vec<AffineArc>,
    pub labels: Vec<ArcLabel>,
}

impl ContourSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(arc: AffineArc, label: ArcLabel) -> Self {
        ContourSet { arcs: vec![arc], labels: vec![label] }
    }

    pub fn push(&mut self, arc: AffineArc, label: ArcLabel) {
        self.arcs.push(arc);
        self.labels.push(label);
    }

    pub fn extend(&mut self, other: ContourSet) {
        self.arcs.extend(other.arcs);
        self.labels.extend(other.labels);
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn total_count(&self) -> usize {
        self.arcs.iter().map(|a| a.count).sum()
    }

    /// Offsets of each arc's first node in the global node numbering.
    pub fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.len() + 1);
        let mut s = 0;
        off.push(0);
        for a in &self.arcs {
            s += a.count;
            off.push(s);
        }
        off
    }

    /// Polygonal approximation of the counterclockwise circle `|z - c| = r`
    /// with vertices at the given increasing angles (the last one closing
    /// the loop), each piece split into `sides` straight arcs.
    pub fn polygon(center: C64, radius: f64, angles: &[f64], sides: usize, count: usize, label: ArcLabel) -> Result<Self> {
        let mut set = ContourSet::new();
        let on_axis = |ang: f64| {
            let f = (ang / std::f64::consts::PI).fract().abs();
            !(1e-14..=1.0 - 1e-14).contains(&f)
        };
        let vertex = |ang: f64| {
            let p = center + C64::from_polar(radius, ang);
            if on_axis(ang) {
                C64::new(p.re, center.im)
            } else {
                p
            }
        };
        let closes = angles.len() > 1
            && (angles[angles.len() - 1] - angles[0] - 2.0 * std::f64::consts::PI).abs() < 1e-12;
        let last = angles.len().saturating_sub(2);
        for (i, w) in angles.windows(2).enumerate() {
            for k in 0..sides {
                let t0 = w[0] + (w[1] - w[0]) * k as f64 / sides as f64;
                let t1 = w[0] + (w[1] - w[0]) * (k + 1) as f64 / sides as f64;
                let z1 = if closes && i == last && k + 1 == sides { vertex(angles[0]) } else { vertex(t1) };
                set.push(AffineArc::segment(vertex(t0), z1, count)?, label);
            }
        }
        Ok(set)
    }
}

/// Algorithm 1: replace `arc` by the sub-arcs on which the jump is not
/// within `epsilon` of the identity.
///
/// The uniform grid `t_j = 2j/M - 1`, `j = 0..=M`, `M = ⌈(|α|+1)·N_grid⌉`
/// is scanned for sign changes of `‖G - I‖ - ε`; crossings are placed at cell
/// midpoints and paired in order. Sub-arcs that reach the parent's ends keep
/// those endpoints exactly.
pub fn truncate_contour<F: Fn(C64) -> f64>(arc: &AffineArc, jump_norm: F, epsilon: f64, grid_density: usize) -> Vec<AffineArc> {
    let m = ((arc.alpha.norm() + 1.0) * grid_density as f64).ceil() as usize;
    let t = |j: usize| 2.0 * j as f64 / m as f64 - 1.0;
    let vals: Vec<f64> = (0..=m).map(|j| jump_norm(arc.map(t(j))) - epsilon).collect();
    let mut s: Vec<f64> = Vec::new();
    if vals[0] >= 0.0 {
        s.push(-1.0);
    }
    for j in 0..m {
        if vals[j] * vals[j + 1] < 0.0 {
            s.push(0.5 * (t(j) + t(j + 1)));
        }
    }
    if s.len() % 2 == 1 {
        s.push(1.0);
    }
    s.chunks(2)
        .map(|p| {
            let za = if p[0] <= -1.0 { arc.start() } else { arc.map(p[0]) };
            let zb = if p[1] >= 1.0 { arc.end() } else { arc.map(p[1]) };
            AffineArc { alpha: (zb - za) / 2.0, beta: (zb + za) / 2.0, count: arc.count }
        })
        .filter(|a| a.alpha.norm() > 0.0)
        .collect()
}

/// `±n^{-rate}·template + endpoint`, the sign negative when `reflect`.
pub fn scale_contour(template: &ContourSet, endpoint: C64, rate: f64, n: usize, reflect: bool) -> Result<ContourSet> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    // admissible rates are 2/(3+4λ) for λ = 0, 1, 2, …
    let lambda = (2.0 / rate - 3.0) / 4.0;
    if !(rate > 0.0) || lambda < -1e-9 || (lambda - lambda.round()).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("unsupported scaling rate {rate}")));
    }
    let s = (n as f64).powf(-rate) * if reflect { -1.0 } else { 1.0 };
    let arcs = template
        .arcs
        .iter()
        .map(|a| AffineArc { alpha: a.alpha * s, beta: a.beta * s + endpoint, count: a.count })
        .collect();
    Ok(ContourSet { arcs, labels: template.labels.clone() })
}
