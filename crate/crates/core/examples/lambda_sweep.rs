//! λ sweep with the O(1/λ) decay of `‖u_λ + u0‖∞` and the distributional error.

use graph_vortex::analysis::{decay_rate, lambda_sweep, sweep_csv};
use graph_vortex::generators::{torus, Randomize};
use graph_vortex::{IterationOptions, ModelParams, VortexSet};

fn main() -> graph_vortex::Result<()> {
    let g = torus(8, 8, Randomize::default())?;
    let vm = VortexSet::new(&g, &[("0_0", 1.0)])?;
    let vn = VortexSet::new(&g, &[("4_4", 1.0)])?;
    let lambdas: Vec<f64> = (0..=8).map(|k| 10f64.powf(3.0 + 0.25 * k as f64)).collect();
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());

    let records =
        lambda_sweep(&g, &ModelParams::new(1.0, 2.0, 1e3)?, &vm, &vn, &lambdas, &IterationOptions::default(), jobs)?;
    print!("{}", sweep_csv(&records));
    println!("decay rate of sup_dist_u:  {:.4}", decay_rate(&records, |r| r.sup_dist_u)?);
    println!("decay rate of dist_err_1:  {:.4}", decay_rate(&records, |r| r.dist_err_1)?);
    println!("all within c(λ): {}", records.iter().all(|r| r.within_bound()));
    Ok(())
}
