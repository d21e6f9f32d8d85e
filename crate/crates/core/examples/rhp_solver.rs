//! A scalar-triangular Riemann–Hilbert problem on a segment: the jump
//! [[1, e^{-z²}], [0, 1]] has the Cauchy transform of e^{-z²} as solution.

use num_complex::Complex64 as C64;
use rhjacobi::contours::{AffineArc, ArcLabel, ContourSet};
use rhjacobi::mat2::Mat2;
use rhjacobi::rhp::solve;

fn main() -> rhjacobi::Result<()> {
    let set = ContourSet::single(AffineArc::segment(C64::new(-7.0, 0.0), C64::new(7.0, 0.0), 12)?, ArcLabel::Other);
    let jump = |_: usize, _: f64, z: C64| Mat2::new(C64::from(1.0), (-z * z).exp(), C64::default(), C64::from(1.0));
    let sol = solve(&set, &jump)?;
    println!("nodes {} after {} refinements, residual {:.1e}, condition {:.1e}", sol.total_nodes(), sol.refinements, sol.residual, sol.cond_estimate);
    let m1 = sol.first_moment().get(0, 1);
    let exact = C64::new(0.0, std::f64::consts::PI.sqrt() / (2.0 * std::f64::consts::PI));
    println!("first moment {m1:.15}, exact {exact:.15}");
    for z in [C64::new(0.0, 1.0), C64::new(2.0, -0.5)] {
        println!("Phi({z}) upper-right entry {:.15}", sol.phi(z)?.get(0, 1));
    }
    Ok(())
}
