//! Recurrence coefficients of e^{-x²} from the Riemann–Hilbert route,
//! checked against the closed form b_n = n/2.

use rhjacobi::jacobi::rows;
use rhjacobi::opdeform::DeformationParams;
use rhjacobi::scaling::WeightSpec;

fn main() -> rhjacobi::Result<()> {
    let w = WeightSpec::hermite();
    let r = rows(&w, 101, &DeformationParams::default(), 1)?;
    println!("{:>4} {:>22} {:>10} {:>8} {:>9}", "n", "b_n", "rel err", "method", "seconds");
    for n in (0..r.len()).step_by(10) {
        let err = if n == 0 { (r.b[0] / std::f64::consts::PI.sqrt() - 1.0).abs() } else { (r.b[n] / (n as f64 / 2.0) - 1.0).abs() };
        println!("{n:>4} {:>22.16} {err:>10.1e} {:>8} {:>9.3}", r.b[n], r.methods[n].as_str(), r.row_seconds[n]);
    }
    println!("normalization defect {:.1e}", r.gamma_defect());
    Ok(())
}
