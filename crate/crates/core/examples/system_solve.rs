//! Maximal solution of the coupled vortex system on an 8×8 torus.
//!
//! Run with `cargo run --release --example system_solve -- [lambda]`.

use graph_vortex::generators::{torus, Randomize};
use graph_vortex::solver::{background_pair, iterate_system, system_sandwich, system_threshold};
use graph_vortex::{IterationOptions, ModelParams, VortexSet};

fn main() -> graph_vortex::Result<()> {
    let lambda: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1.0e4);
    let g = torus(8, 8, Randomize::default())?;
    let vm = VortexSet::new(&g, &[("0_0", 1.0)])?;
    let vn = VortexSet::new(&g, &[("4_4", 1.0)])?;
    let params = ModelParams::new(1.0, 2.0, lambda)?;

    let bg = background_pair(&g, &vm, &vn)?;
    println!("background: u0 in [{:.4}, {:.4}]", bg.u0.min(), bg.u0.max());
    println!("closed-form sub-solution exists for lambda >= {:.3}", system_threshold(&g, &params, &vm, &vn));

    let sol = iterate_system(&g, &params, &bg, &vm, &vn, &IterationOptions::default())?;
    let report = &sol.report;
    println!(
        "{} after {} iterates (K = {:.4e}), residual {:.3e}, monotone: {}",
        report.outcome, report.iterations, report.shift, report.final_residual, report.monotone
    );
    println!(
        "offsets: u + u0 in [{:.3e}, {:.3e}], v + v0 in [{:.3e}, {:.3e}]",
        sol.offset_u.min(),
        sol.offset_u.max(),
        sol.offset_v.min(),
        sol.offset_v.max()
    );
    if let Some(c) = system_sandwich(&g, &params, &vm, &vn) {
        let dist = sol.offset_u.sup_norm().max(sol.offset_v.sup_norm());
        println!("sandwich: sup distance {dist:.6e} <= c(lambda) = {c:.6e}: {}", dist <= c);
    }
    Ok(())
}
