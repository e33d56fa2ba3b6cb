//! Finite weighted graphs and the discrete differential operators on them.
//!
//! A [`WeightedGraph`] carries a positive vertex measure `mu` and symmetric
//! positive edge weights. Every [`VertexFunction`] is a dense array aligned
//! with the graph's vertex ordering, which is fixed at construction.
//!
//! The operators follow the usual conventions for analysis on graphs:
//!
//! ```text
//! Δu(x)      = 1/μ(x) Σ_{y~x} ω_xy (u(y) - u(x))
//! Γ(u,v)(x)  = 1/(2μ(x)) Σ_{y~x} ω_xy (u(y) - u(x)) (v(y) - v(x))
//! ∫_V u dμ   = Σ_x μ(x) u(x)
//! ```

use std::collections::{HashMap, HashSet, VecDeque};
use std::fs;
use std::ops::{Deref, Index};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Real-valued function on the vertex set of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexFunction(Vec<f64>);

impl VertexFunction {
    /// Wraps `values`, rejecting non-finite entries.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self(values))
    }

    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self(vec![c; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn sup_norm(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self(self.0.iter().map(|&x| f(x)).collect())
    }

    /// Pointwise combination; panics on length mismatch, callers check first.
    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.len(), other.len(), "vertex function length mismatch");
        Self(self.0.iter().zip(&other.0).map(|(&a, &b)| f(a, b)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|x| s * x)
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x)
    }
}

impl Deref for VertexFunction {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl Index<usize> for VertexFunction {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl From<VertexFunction> for Vec<f64> {
    fn from(f: VertexFunction) -> Self {
        f.0
    }
}

/// Connected finite graph with vertex measure and symmetric edge weights.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    mu: Vec<f64>,
    // one entry per unordered pair, i < j
    edges: Vec<(usize, usize, f64)>,
    adjacency: Vec<Vec<(usize, f64)>>,
    volume: f64,
}

impl WeightedGraph {
    /// Builds a graph from named vertices and weighted edges.
    ///
    /// Rejects duplicate ids, `mu <= 0`, `w <= 0`, self-loops, duplicate
    /// edges and disconnected graphs.
    pub fn new(vertices: Vec<(String, f64)>, edges: Vec<(String, String, f64)>) -> Result<Self> {
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, (id, _)) in vertices.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex id `{id}`")));
            }
        }
        let lookup = |id: &str| index.get(id).copied().ok_or_else(|| Error::UnknownVertex(id.to_string()));
        let indexed = edges.iter().map(|(a, b, w)| Ok((lookup(a)?, lookup(b)?, *w))).collect::<Result<Vec<_>>>()?;
        let (ids, mu): (Vec<String>, Vec<f64>) = vertices.into_iter().unzip();
        Self::assemble(ids, index, mu, indexed)
    }

    /// Builds a graph on vertices `v0, v1, ...` from index pairs.
    pub fn from_indexed(mu: Vec<f64>, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let ids: Vec<String> = (0..mu.len()).map(|i| format!("v{i}")).collect();
        let index = ids.iter().cloned().enumerate().map(|(i, id)| (id, i)).collect();
        Self::assemble(ids, index, mu, edges)
    }

    fn assemble(
        ids: Vec<String>,
        index: HashMap<String, usize>,
        mu: Vec<f64>,
        edges: Vec<(usize, usize, f64)>,
    ) -> Result<Self> {
        let n = mu.len();
        if n == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        if let Some(i) = mu.iter().position(|m| !(m.is_finite() && *m > 0.0)) {
            return Err(Error::InvalidGraph(format!("measure at `{}` must be positive, got {}", ids[i], mu[i])));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut stored = Vec::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); n];
        for (a, b, w) in edges {
            if a >= n || b >= n {
                return Err(Error::UnknownVertex(format!("index {}", a.max(b))));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at `{}`", ids[a])));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidGraph(format!(
                    "edge `{}`-`{}` must have positive weight, got {w}",
                    ids[a], ids[b]
                )));
            }
            let key = (a.min(b), a.max(b));
            if !seen.insert(key) {
                return Err(Error::InvalidGraph(format!("duplicate edge `{}`-`{}`", ids[a], ids[b])));
            }
            stored.push((key.0, key.1, w));
            adjacency[a].push((b, w));
            adjacency[b].push((a, w));
        }
        let volume = mu.iter().sum();
        let graph = Self { ids, index, mu, edges: stored, adjacency, volume };
        if !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(graph)
    }

    pub fn num_vertices(&self) -> usize {
        self.mu.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    /// Edges as `(i, j, w)` with `i < j`, one per unordered pair.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn neighbors(&self, x: usize) -> &[(usize, f64)] {
        &self.adjacency[x]
    }

    /// `|V| = ∫_V 1 dμ`.
    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// `max_x 1/μ(x)`.
    pub fn eta(&self) -> f64 {
        self.mu.iter().fold(0.0, |m, &x| m.max(1.0 / x))
    }

    /// Breadth-first reachability from vertex 0.
    pub fn is_connected(&self) -> bool {
        let n = self.num_vertices();
        let mut visited = vec![false; n];
        let mut queue = VecDeque::from([0]);
        visited[0] = true;
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &self.adjacency[x] {
                if !visited[y] {
                    visited[y] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count == n
    }

    pub fn check_len(&self, u: &[f64]) -> Result<()> {
        if u.len() == self.num_vertices() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.num_vertices(), found: u.len() })
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(text)?;
        Self::new(
            file.vertices.into_iter().map(|v| (v.id, v.mu)).collect(),
            file.edges.into_iter().map(|e| (e.a, e.b, e.w)).collect(),
        )
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            vertices: self.ids.iter().zip(&self.mu).map(|(id, &mu)| VertexEntry { id: id.clone(), mu }).collect(),
            edges: self
                .edges
                .iter()
                .map(|&(a, b, w)| EdgeEntry { a: self.ids[a].clone(), b: self.ids[b].clone(), w })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("graph serialization is infallible")
    }
}

/// On-disk graph description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<EdgeEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexEntry {
    pub id: String,
    pub mu: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub a: String,
    pub b: String,
    pub w: f64,
}

/// The μ-Laplacian `Δu`.
pub fn mu_laplacian(g: &WeightedGraph, u: &VertexFunction) -> Result<VertexFunction> {
    g.check_len(u)?;
    Ok(laplacian_raw(g, u))
}

pub(crate) fn laplacian_raw(g: &WeightedGraph, u: &[f64]) -> VertexFunction {
    let values = (0..g.num_vertices())
        .map(|x| {
            let ux = u[x];
            let s: f64 = g.neighbors(x).iter().map(|&(y, w)| w * (u[y] - ux)).sum();
            s / g.mu[x]
        })
        .collect();
    VertexFunction(values)
}

/// The gradient form `Γ(u, v)`.
pub fn gradient_form(g: &WeightedGraph, u: &VertexFunction, v: &VertexFunction) -> Result<VertexFunction> {
    g.check_len(u)?;
    g.check_len(v)?;
    let values = (0..g.num_vertices())
        .map(|x| {
            let s: f64 = g.neighbors(x).iter().map(|&(y, w)| w * (u[y] - u[x]) * (v[y] - v[x])).sum();
            s / (2.0 * g.mu[x])
        })
        .collect();
    Ok(VertexFunction(values))
}

/// `|∇u| = sqrt(Γ(u, u))`.
pub fn grad_norm(g: &WeightedGraph, u: &VertexFunction) -> Result<VertexFunction> {
    Ok(gradient_form(g, u, u)?.map(f64::sqrt))
}

/// `∫_V u dμ`.
pub fn integrate(g: &WeightedGraph, u: &VertexFunction) -> Result<f64> {
    g.check_len(u)?;
    Ok(integrate_raw(g, u))
}

pub(crate) fn integrate_raw(g: &WeightedGraph, u: &[f64]) -> f64 {
    g.mu.iter().zip(u).map(|(m, x)| m * x).sum()
}

/// `(∫_V |∇u|² + u² dμ)^{1/2}`.
pub fn sobolev_norm(g: &WeightedGraph, u: &VertexFunction) -> Result<f64> {
    let gamma = gradient_form(g, u, u)?;
    let density = gamma.zip_map(u, |gm, x| gm + x * x);
    Ok(integrate_raw(g, &density).sqrt())
}

/// Dirac mass at `p`, normalized so that `∫ δ_p dμ = 1`.
pub fn dirac(g: &WeightedGraph, p: &str) -> Result<VertexFunction> {
    let i = g.vertex_index(p)?;
    Ok(dirac_at(g, i))
}

pub(crate) fn dirac_at(g: &WeightedGraph, i: usize) -> VertexFunction {
    let mut values = vec![0.0; g.num_vertices()];
    values[i] = 1.0 / g.mu[i];
    VertexFunction(values)
}
