//! The discretized Stieltjes procedure for e^{-x²}: accuracy against the
//! number of discretization points M.

use rhjacobi::jacobi::stieltjes_rows;
use rhjacobi::scaling::WeightSpec;

fn main() -> rhjacobi::Result<()> {
    let w = WeightSpec::hermite();
    let count = 100;
    for m in [50, 100, 200, 1000, 2000] {
        let r = stieltjes_rows(&w, count, m)?;
        let worst = (1..count).map(|n| (r.b[n] / (n as f64 / 2.0) - 1.0).abs()).fold(0.0, f64::max);
        let first_bad = (1..count).find(|&n| (r.b[n] / (n as f64 / 2.0) - 1.0).abs() > 1e-6);
        println!("M={m:>5}: max rel err {worst:.1e}, first row above 1e-6: {first_bad:?}");
    }
    Ok(())
}
