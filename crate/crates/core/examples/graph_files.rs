//! Writing and reading the JSON graph, vortex and solution files.

use graph_vortex::generators::{random, Randomize};
use graph_vortex::model::VortexFile;
use graph_vortex::solver::{background_pair, iterate_system, SolutionFile};
use graph_vortex::{IterationOptions, ModelParams, VortexSet, WeightedGraph};

fn main() -> graph_vortex::Result<()> {
    let dir = std::env::temp_dir().join("graph-vortex-files");
    std::fs::create_dir_all(&dir)?;

    let g = random(12, 0.3, Randomize { mu: true, weights: true, seed: 7 })?;
    std::fs::write(dir.join("graph.json"), g.to_json())?;
    let vm = VortexSet::new(&g, &[("v0", 1.0)])?;
    let vn = VortexSet::new(&g, &[("v3", 2.0)])?;
    std::fs::write(dir.join("vortices.json"), VortexFile::system(&g, &vm, &vn).to_json())?;

    let g = WeightedGraph::load(dir.join("graph.json"))?;
    let (vm, vn) = VortexFile::load(dir.join("vortices.json"))?.system_sets(&g)?;
    let params = ModelParams::new(1.0, 3.0, 500.0)?;
    let bg = background_pair(&g, &vm, &vn)?;
    let sol = iterate_system(&g, &params, &bg, &vm, &vn, &IterationOptions::default())?;
    let file = SolutionFile::from_system(&g, &params, &bg, &vm, &vn, &sol)?;
    std::fs::write(dir.join("solution.json"), file.to_json())?;

    let back = SolutionFile::load(dir.join("solution.json"))?;
    println!("wrote {} ({} vertices, {} edges)", dir.display(), g.num_vertices(), g.num_edges());
    println!("solution: {} after {} iterates, residual {:?}", back.outcome, back.iterations, back.residual);
    println!("lossless round trip: {}", back == file);
    Ok(())
}
