//! The μ-Laplacian, gradient form and integral on a small weighted graph.

use graph_vortex::graph::{dirac, gradient_form, integrate, mu_laplacian, sobolev_norm};
use graph_vortex::{VertexFunction, WeightedGraph};

fn main() -> graph_vortex::Result<()> {
    // a path a - b - c with unequal measures and weights
    let g = WeightedGraph::new(
        vec![("a".into(), 1.0), ("b".into(), 2.0), ("c".into(), 0.5)],
        vec![("a".into(), "b".into(), 1.0), ("b".into(), "c".into(), 3.0)],
    )?;
    let u = VertexFunction::new(vec![0.0, 1.0, 4.0])?;
    let v = VertexFunction::new(vec![1.0, -1.0, 2.0])?;

    let lu = mu_laplacian(&g, &u)?;
    println!("Δu       = {:?}", lu.values());
    println!("Γ(u, v)  = {:?}", gradient_form(&g, &u, &v)?.values());
    println!("∫Δu dμ   = {:e}", integrate(&g, &lu)?);

    // summation by parts: ∫ v Δu dμ = -∫ Γ(u, v) dμ
    let lhs = integrate(&g, &v.zip_map(&lu, |a, b| a * b))?;
    let rhs = -integrate(&g, &gradient_form(&g, &u, &v)?)?;
    println!("∫vΔu dμ  = {lhs}, -∫Γ(u,v) dμ = {rhs}");
    println!("‖u‖_W1,2 = {:.6}", sobolev_norm(&g, &u)?);

    let d = dirac(&g, "c")?;
    println!("δ_c      = {:?}, ∫δ_c dμ = {}", d.values(), integrate(&g, &d)?);
    Ok(())
}
