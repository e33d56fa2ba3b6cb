//! Mean-zero background solves carrying the vortex data, and the shifted
//! resolvent with its maximum principle.

use graph_vortex::generators::{torus, Randomize};
use graph_vortex::graph::{integrate, mu_laplacian};
use graph_vortex::linops::ShiftedSystem;
use graph_vortex::model::vortex_rhs;
use graph_vortex::solver::{background_pair, check_max_principle};
use graph_vortex::{VertexFunction, VortexSet};

fn main() -> graph_vortex::Result<()> {
    let g = torus(8, 8, Randomize { mu: true, weights: true, seed: 11 })?;
    let vm = VortexSet::new(&g, &[("0_0", 1.0), ("2_5", 2.0)])?;
    let vn = VortexSet::new(&g, &[("6_6", 1.0)])?;
    let bg = background_pair(&g, &vm, &vn)?;

    let (constant, dirac) = vortex_rhs(&g, &vm);
    let rhs = dirac.map(|d| d + constant);
    let defect = mu_laplacian(&g, &bg.u0)?.sub(&rhs).sup_norm();
    println!(
        "u0 in [{:.4}, {:.4}], ∫u0 dμ = {:e}, defect {defect:e}",
        bg.u0.min(),
        bg.u0.max(),
        integrate(&g, &bg.u0)?
    );
    println!("v0 in [{:.4}, {:.4}]", bg.v0.min(), bg.v0.max());

    // (Δ - K) u = f with f ≥ 0 forces u ≤ 0
    let system = ShiftedSystem::new(&g, 3.0)?;
    let f = VertexFunction::new((0..g.num_vertices()).map(|i| (i % 5) as f64).collect())?;
    let u = system.solve(&f)?;
    println!("resolvent: max u = {:e}, verdict {:?}", u.max(), check_max_principle(&g, &u, 3.0)?);
    Ok(())
}
