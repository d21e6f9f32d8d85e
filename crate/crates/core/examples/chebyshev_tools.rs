//! Chebyshev interpolation and Clenshaw–Curtis quadrature.

use num_complex::Complex64 as C64;
use rhjacobi::chebyshev::{cheb_points, clenshaw_curtis, clenshaw_real, fit_real, vals_to_coeffs};

fn main() -> rhjacobi::Result<()> {
    println!("points {:?}", cheb_points(5, 0.0, 2.0)?);
    let vals: Vec<C64> = cheb_points(5, -1.0, 1.0)?.iter().map(|&x| C64::from(2.0 * x * x - 1.0)).collect();
    println!("T_2 coefficients {:?}", vals_to_coeffs(&vals)?.iter().map(|c| c.re).collect::<Vec<_>>());
    let c = fit_real(f64::exp, -1.0, 1.0)?;
    println!("exp needs {} coefficients; exp(0.3) error {:.1e}", c.len(), (clenshaw_real(&c, 0.3) - 0.3f64.exp()).abs());
    let i = clenshaw_curtis(|x| (-x * x).exp(), -8.0, 8.0, 129)?;
    println!("integral of e^(-x^2) {i:.16}, error {:.1e}", (i - std::f64::consts::PI.sqrt()).abs());
    Ok(())
}
