//! The deformed contour for e^{-x⁴} at n = 40: arcs kept after truncation
//! and the probe residual of the solved problem.

use rhjacobi::equilibrium::compute_equilibrium;
use rhjacobi::opdeform::{build_phi_rhp, DeformationParams};
use rhjacobi::rhp::{junction_defect, solve};
use rhjacobi::scaling::{scale, WeightSpec};

fn main() -> rhjacobi::Result<()> {
    let w = WeightSpec::polynomial(vec![0.0, 0.0, 0.0, 0.0, 1.0])?;
    let n = 40;
    let sp = scale(&w, n, None)?;
    let m = compute_equilibrium(sp.field(&w), 1.0, (-1.0, 1.0))?;
    let p = build_phi_rhp(&m, n, &DeformationParams::default())?;
    println!("circle radii a {:.4} b {:.4}, lens stub {:.4}", p.radius_a, p.radius_b, p.stub);
    for (arc, label) in p.contours.arcs.iter().zip(&p.contours.labels) {
        println!("{label:?}: {:.4} -> {:.4} ({} nodes)", arc.start(), arc.end(), arc.count);
    }
    println!("junction defect {:.1e}", junction_defect(&p.contours, &p));
    let sol = solve(&p.contours, &p)?;
    println!("residual {:.1e} with {} nodes", sol.residual, sol.total_nodes());
    Ok(())
}
