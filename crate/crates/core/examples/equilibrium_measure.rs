//! Equilibrium measure for V(x) = x⁴: support, density, Lagrange constant
//! and the g-function.

use num_complex::Complex64 as C64;
use rhjacobi::cauchy::Side;
use rhjacobi::equilibrium::{compute_equilibrium, PolyField};
use std::sync::Arc;

fn main() -> rhjacobi::Result<()> {
    let m = compute_equilibrium(Arc::new(PolyField(vec![0.0, 0.0, 0.0, 0.0, 1.0])), 1.0, (-1.0, 1.0))?;
    println!("support [{:.15}, {:.15}] after {} Newton steps", m.a, m.b, m.iterations);
    println!("expected b = (4/3)^(1/4) = {:.15}", (4.0f64 / 3.0).powf(0.25));
    println!("ell = {:.15}, g1 = {:.3e}", m.ell, m.g1);
    for x in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        println!("psi({x:>4}) = {:.12}", m.density(x)?);
    }
    // g⁺ + g⁻ + ℓ - V vanishes on the support and is negative outside
    for x in [0.3, 1.5] {
        let s = m.g_eval(C64::from(x), Some(Side::Plus))? + m.g_eval(C64::from(x), Some(Side::Minus))?;
        println!("x = {x}: g+ + g- + ell - V = {:.2e}", s.re + m.ell - x.powi(4));
    }
    let (ca, cb) = m.edge_coefficients();
    println!("edge coefficients {ca:.6} {cb:.6}, contour exponents {:?}", m.scaling_exponents());
    Ok(())
}
