//! Standard graph families used by the examples, tests and `gv gen`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

const RANDOM_RETRIES: usize = 1000;

/// Controls whether vertex measures and edge weights are drawn from (0.5, 2.0].
#[derive(Debug, Clone, Copy, Default)]
pub struct Randomize {
    pub mu: bool,
    pub weights: bool,
    pub seed: u64,
}

fn draw(rng: &mut ChaCha8Rng) -> f64 {
    // gen::<f64>() is in [0, 1), so this lands in (0.5, 2.0]
    2.0 - 1.5 * rng.gen::<f64>()
}

fn finish(
    names: Vec<String>,
    edges: Vec<(usize, usize)>,
    randomize: Randomize,
    rng: &mut ChaCha8Rng,
) -> Result<WeightedGraph> {
    let mu: Vec<f64> = names.iter().map(|_| if randomize.mu { draw(rng) } else { 1.0 }).collect();
    let edges = edges
        .into_iter()
        .map(|(a, b)| (names[a].clone(), names[b].clone(), if randomize.weights { draw(rng) } else { 1.0 }))
        .collect();
    WeightedGraph::new(names.into_iter().zip(mu).collect(), edges)
}

fn grid_name(r: usize, c: usize) -> String {
    format!("{r}_{c}")
}

fn grid(rows: usize, cols: usize, wrap: bool, randomize: Randomize) -> Result<WeightedGraph> {
    if rows < 2 || cols < 2 {
        return Err(Error::InvalidParameter(format!("grid size must be at least 2x2, got {rows}x{cols}")));
    }
    let id = |r: usize, c: usize| r * cols + c;
    let names = (0..rows).flat_map(|r| (0..cols).map(move |c| grid_name(r, c))).collect();
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            } else if wrap && cols > 2 {
                edges.push((id(r, c), id(r, 0)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            } else if wrap && rows > 2 {
                edges.push((id(r, c), id(0, c)));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(randomize.seed);
    finish(names, edges, randomize, &mut rng)
}

/// Rectangular grid with 4-neighbour connectivity; vertex ids are `"{row}_{col}"`.
pub fn lattice(rows: usize, cols: usize, randomize: Randomize) -> Result<WeightedGraph> {
    grid(rows, cols, false, randomize)
}

/// Periodic grid. A side of length 2 wraps onto an existing edge and adds nothing.
pub fn torus(rows: usize, cols: usize, randomize: Randomize) -> Result<WeightedGraph> {
    grid(rows, cols, true, randomize)
}

pub fn complete(n: usize, randomize: Randomize) -> Result<WeightedGraph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("complete graph needs n >= 2, got {n}")));
    }
    let names = (0..n).map(|i| format!("v{i}")).collect();
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(randomize.seed);
    finish(names, edges, randomize, &mut rng)
}

/// Erdős–Rényi `G(n, p)`, redrawn until connected.
pub fn random(n: usize, p: f64, randomize: Randomize) -> Result<WeightedGraph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("random graph needs n >= 2, got {n}")));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!("edge probability must lie in (0, 1], got {p}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(randomize.seed);
    for _ in 0..RANDOM_RETRIES {
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|_| rng.gen::<f64>() < p).collect();
        let names = (0..n).map(|i| format!("v{i}")).collect();
        match finish(names, edges, randomize, &mut rng) {
            Ok(g) => return Ok(g),
            Err(Error::Disconnected) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::InvalidParameter(format!("no connected G({n}, {p}) sample after {RANDOM_RETRIES} attempts")))
}
