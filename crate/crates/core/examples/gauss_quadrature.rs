//! Gaussian quadrature for e^{-x⁸}: rule sizes up to 200 against a
//! Clenshaw–Curtis reference.

use rhjacobi::jacobi::rows;
use rhjacobi::opdeform::DeformationParams;
use rhjacobi::quad::{golub_welsch, integrate, weighted_cc};
use rhjacobi::scaling::WeightSpec;

fn main() -> rhjacobi::Result<()> {
    let w = WeightSpec::polynomial(vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0])?;
    let f = |x: f64| (40.0 * x).cos().powi(2) / (25.0 * x * x + 1.0);
    let reference = weighted_cc(&w, f, 10_000)?;
    let r = rows(&w, 200, &DeformationParams::default(), 1)?;
    println!("reference {reference:.16}");
    for n in (20..=200).step_by(20) {
        let rule = golub_welsch(&r, n, r.mu0)?;
        let v = integrate(&rule, f)?;
        println!("n={n:>3}  value {v:.16}  error {:.1e}  largest node {:.6}", (v - reference).abs(), rule.nodes[n - 1]);
    }
    Ok(())
}
