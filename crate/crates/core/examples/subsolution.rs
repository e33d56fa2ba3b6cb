//! The closed-form sub-solution and the oracle that certifies it.

use graph_vortex::generators::{torus, Randomize};
use graph_vortex::solver::{background_pair, check_subsolution, iterate_system, subsolution_system, system_threshold};
use graph_vortex::{IterationOptions, ModelParams, VortexSet};

fn main() -> graph_vortex::Result<()> {
    let g = torus(8, 8, Randomize::default())?;
    let vm = VortexSet::new(&g, &[("0_0", 1.0)])?;
    let vn = VortexSet::new(&g, &[("4_4", 1.0)])?;
    let bg = background_pair(&g, &vm, &vn)?;

    let probe = ModelParams::new(0.5, 1.75, 1.0)?;
    let threshold = system_threshold(&g, &probe, &vm, &vn);
    println!("closed-form threshold: {threshold:.4}");

    for factor in [0.5, 1.01, 4.0] {
        let params = probe.with_lambda(threshold * factor)?;
        match subsolution_system(&g, &params, &bg, &vm, &vn) {
            Ok((u, v, c)) => {
                let ok = check_subsolution(&g, &params, &bg, &vm, &vn, &u, &v)?;
                let sol = iterate_system(&g, &params, &bg, &vm, &vn, &IterationOptions::default())?;
                let above = sol.offset_u.min() >= -c && sol.offset_v.min() >= -c;
                println!(
                    "λ = {:9.4}: c = {c:.4}, accepted {ok}, solution {} and above it: {above}",
                    params.lambda(),
                    sol.report.outcome
                );
            }
            Err(e) => println!("λ = {:9.4}: {e}", params.lambda()),
        }
    }

    // the background itself, raised by one, is not a sub-solution
    let params = probe.with_lambda(threshold * 4.0)?;
    let (u, v) = (bg.u0.map(|x| 1.0 - x), bg.v0.map(|x| 1.0 - x));
    println!("(-u0 + 1, -v0 + 1) accepted: {}", check_subsolution(&g, &params, &bg, &vm, &vn, &u, &v)?);
    Ok(())
}
