//! Bisection for the critical coupling of the scalar equation.

use std::f64::consts::PI;

use graph_vortex::analysis::estimate_lambda_c_scalar;
use graph_vortex::generators::{torus, Randomize};
use graph_vortex::solver::{critical_lower_bound, scalar_threshold};
use graph_vortex::{IterationOptions, VortexSet};

fn main() -> graph_vortex::Result<()> {
    let g = torus(8, 8, Randomize::default())?;
    for vortices in [vec![("0_0", 1.0)], vec![("0_0", 1.0), ("4_4", 1.0)]] {
        let vp = VortexSet::new(&g, &vortices)?;
        let bracket = estimate_lambda_c_scalar(&g, &vp, PI / 40.0, 50.0 * PI, 1e-3, &IterationOptions::default())?;
        println!(
            "N = {}: λ_c in ({:.5}, {:.5}] after {} probes; lower bound 16πN/|V| = {:.5}, closed-form threshold {:.3}",
            vp.total(),
            bracket.lo,
            bracket.hi,
            bracket.probes.len(),
            critical_lower_bound(&g, &vp),
            scalar_threshold(&g, &vp),
        );
        if bracket.tentative {
            println!("  (tentative: some probe hit the iteration budget)");
        }
    }
    Ok(())
}
