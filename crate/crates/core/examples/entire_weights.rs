//! Entire weights e^{-cosh x} and e^{-x²-sin x}: scaling parameters and
//! recurrence coefficients.

use rhjacobi::jacobi::rows;
use rhjacobi::opdeform::DeformationParams;
use rhjacobi::scaling::{chebyshev_length, scale, WeightSpec};

fn main() -> rhjacobi::Result<()> {
    for w in [WeightSpec::cosh(), WeightSpec::x2sin()] {
        println!("{}", w.name());
        for n_big in [16, 64, 256] {
            let sp = scale(&w, n_big, None)?;
            println!("  N={n_big:>4}: alpha {:.10} beta {:+.10} Chebyshev length {}", sp.alpha, sp.beta, chebyshev_length(&w, &sp)?);
        }
        let r = rows(&w, 40, &DeformationParams::default(), 1)?;
        for n in [1, 10, 20, 39] {
            println!("  a_{n} = {:+.15}  b_{n} = {:.15}  ({})", r.a[n], r.b[n], r.methods[n].as_str());
        }
    }
    Ok(())
}
