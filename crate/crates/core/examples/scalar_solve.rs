//! The scalar equation `Δu = λ e^{ū0+u}(e^{ū0+u} - 1) + 4πN/|V|` on an 8×8 torus.
//!
//! Run with `cargo run --release --example scalar_solve -- [lambda]`.

use graph_vortex::generators::{torus, Randomize};
use graph_vortex::solver::{
    background_scalar, iterate_scalar, scalar_flux_integral, scalar_sandwich, scalar_threshold,
};
use graph_vortex::{IterationOptions, VortexSet};

fn main() -> graph_vortex::Result<()> {
    let lambda: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1.0e4);
    let g = torus(8, 8, Randomize::default())?;
    let vp = VortexSet::new(&g, &[("0_0", 1.0)])?;
    let bg = background_scalar(&g, &vp)?;

    let sol = iterate_scalar(&g, lambda, &bg, &vp, &IterationOptions::default())?;
    println!(
        "{} after {} iterates, residual {:.3e}",
        sol.report.outcome, sol.report.iterations, sol.report.final_residual
    );
    println!("∫λf dμ + 4πN = {:e}", scalar_flux_integral(&g, &sol) + 4.0 * std::f64::consts::PI * vp.total());
    match scalar_sandwich(&g, lambda, &vp) {
        Some(c) => println!("offsets in [{:.6e}, {:.3e}], c(λ) = {c:.6e}", sol.offset.min(), sol.offset.max()),
        None => println!("λ is below the closed-form threshold {:.3}", scalar_threshold(&g, &vp)),
    }
    Ok(())
}
