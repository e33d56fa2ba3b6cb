//! Model parameters, vortex data and the Chern–Simons nonlinearities.
//!
//! With `p = e^u - 1` and `q = e^v - 1` the two coupled nonlinearities
//!
//! ```text
//! f1(u,v) = a(b-a)e^u - b(b-a)e^v + a²e^{2u} - ab e^{2v} + b(b-a)e^{u+v}
//! f2(u,v) = -b(b-a)e^u + a(b-a)e^v - ab e^{2u} + a²e^{2v} + b(b-a)e^{u+v}
//! ```
//!
//! expand without a constant term:
//!
//! ```text
//! f1 = (a²+b²) p - 2ab q + a² p² - ab q² + b(b-a) p q
//! f2 = (a²+b²) q - 2ab p + a² q² - ab p² + b(b-a) p q
//! ```
//!
//! Evaluating through `expm1` keeps full relative precision when `u` and `v`
//! are tiny, which is exactly where the iteration spends its time.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{VertexFunction, WeightedGraph};

/// Default relative margin of the iteration shift over its lower bound.
pub const DEFAULT_K_MARGIN: f64 = 0.1;

/// Coupling constants `(a, b, λ)` with `b > a > 0` and `λ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    a: f64,
    b: f64,
    lambda: f64,
}

impl ModelParams {
    pub fn new(a: f64, b: f64, lambda: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a > 0.0 && b > a) {
            return Err(Error::InvalidParameter(format!("need b > a > 0, got a = {a}, b = {b}")));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
        }
        Ok(Self { a, b, lambda })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.a, self.b, lambda)
    }

    /// Pointwise `(f1(u,v), f2(u,v))`.
    #[inline]
    pub fn nonlinearity_at(&self, u: f64, v: f64) -> (f64, f64) {
        let (a, b) = (self.a, self.b);
        let p = u.exp_m1();
        let q = v.exp_m1();
        let lin = a * a + b * b;
        let cross = 2.0 * a * b;
        let mixed = b * (b - a) * p * q;
        let f1 = lin * p - cross * q + a * a * p * p - a * b * q * q + mixed;
        let f2 = lin * q - cross * p + a * a * q * q - a * b * p * p + mixed;
        (f1, f2)
    }

    /// Scale against which rounding in the nonlinearity is measured: the
    /// largest sum of absolute term values over `f1`, `f2`, in both the
    /// exponential and the `expm1` expansion. Near zero the exponential terms
    /// cancel; far below zero the `expm1` terms do.
    pub fn term_magnitude(&self, u: f64, v: f64) -> f64 {
        let (a, b) = (self.a, self.b);
        let (eu, ev) = (u.exp(), v.exp());
        let joint = b * (b - a) * eu * ev;
        let s1 = a * (b - a) * eu + b * (b - a) * ev + a * a * eu * eu + a * b * ev * ev + joint;
        let s2 = b * (b - a) * eu + a * (b - a) * ev + a * b * eu * eu + a * a * ev * ev + joint;
        let (p, q) = (u.exp_m1().abs(), v.exp_m1().abs());
        let lin = a * a + b * b;
        let mixed = b * (b - a) * p * q;
        let m1 = lin * p + 2.0 * a * b * q + a * a * p * p + a * b * q * q + mixed;
        let m2 = lin * q + 2.0 * a * b * p + a * a * q * q + a * b * p * p + mixed;
        s1.max(s2).max(m1).max(m2)
    }
}

/// `f1(u, v)` evaluated pointwise.
pub fn f1(params: &ModelParams, u: &VertexFunction, v: &VertexFunction) -> Result<VertexFunction> {
    check_pair(u, v)?;
    Ok(u.zip_map(v, |x, y| params.nonlinearity_at(x, y).0))
}

/// `f2(u, v)` evaluated pointwise.
pub fn f2(params: &ModelParams, u: &VertexFunction, v: &VertexFunction) -> Result<VertexFunction> {
    check_pair(u, v)?;
    Ok(u.zip_map(v, |x, y| params.nonlinearity_at(x, y).1))
}

fn check_pair(u: &VertexFunction, v: &VertexFunction) -> Result<()> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: u.len(), found: v.len() });
    }
    Ok(())
}

/// `e^w (e^w - 1)` at a point.
#[inline]
pub fn scalar_nonlinearity_at(w: f64) -> f64 {
    w.exp() * w.exp_m1()
}

/// `e^w (e^w - 1)` pointwise; the coupling `λ` is applied by the caller.
pub fn scalar_f(w: &VertexFunction) -> VertexFunction {
    w.map(scalar_nonlinearity_at)
}

/// Iteration shift `2λ((a+b)(b-a) + 2a²)(1 + margin)`.
///
/// The bracket bounds `λ ∂f1/∂u` (and `λ ∂f2/∂v`) on the region where both
/// arguments are nonpositive.
pub fn lipschitz_k(params: &ModelParams, margin: f64) -> Result<f64> {
    if !(margin.is_finite() && margin >= 0.0) {
        return Err(Error::InvalidParameter(format!("K margin must be nonnegative, got {margin}")));
    }
    let (a, b) = (params.a, params.b);
    Ok(2.0 * params.lambda * ((a + b) * (b - a) + 2.0 * a * a) * (1.0 + margin))
}

/// Scalar iteration shift `2λ(1 + margin) + 1`.
pub fn scalar_k(lambda: f64, margin: f64) -> Result<f64> {
    if !(margin.is_finite() && margin >= 0.0) {
        return Err(Error::InvalidParameter(format!("K margin must be nonnegative, got {margin}")));
    }
    Ok(2.0 * lambda * (1.0 + margin) + 1.0)
}

/// Vortex points with positive multiplicities, indexed into a graph.
///
/// Repeated vertices are merged by summing their multiplicities.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VortexSet {
    // sorted by vertex index
    points: Vec<(usize, f64)>,
}

/// The scalar equation uses the same representation.
pub type ScalarVortexSet = VortexSet;

impl VortexSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(g: &WeightedGraph, points: &[(&str, f64)]) -> Result<Self> {
        let indexed = points.iter().map(|&(id, m)| Ok((g.vertex_index(id)?, m))).collect::<Result<Vec<_>>>()?;
        Self::from_indices(g, &indexed)
    }

    pub fn from_indices(g: &WeightedGraph, points: &[(usize, f64)]) -> Result<Self> {
        let mut merged: BTreeMap<usize, f64> = BTreeMap::new();
        for &(i, m) in points {
            if i >= g.num_vertices() {
                return Err(Error::UnknownVertex(format!("index {i}")));
            }
            if !(m.is_finite() && m > 0.0) {
                return Err(Error::InvalidParameter(format!("multiplicity must be positive, got {m}")));
            }
            *merged.entry(i).or_insert(0.0) += m;
        }
        Ok(Self { points: merged.into_iter().collect() })
    }

    pub fn points(&self) -> &[(usize, f64)] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Total multiplicity `N`.
    pub fn total(&self) -> f64 {
        self.points.iter().map(|&(_, m)| m).sum()
    }

    /// Multiplicity at vertex index `x` (zero when absent).
    pub fn mass_at(&self, x: usize) -> f64 {
        self.points.iter().find(|&&(i, _)| i == x).map_or(0.0, |&(_, m)| m)
    }

    /// `4π Σ_j m_j δ_{p_j}`.
    pub fn dirac_term(&self, g: &WeightedGraph) -> VertexFunction {
        let mut out = VertexFunction::zeros(g.num_vertices()).into_vec();
        for &(i, m) in &self.points {
            out[i] += 4.0 * PI * m / g.mu()[i];
        }
        VertexFunction::from_raw(out)
    }

    /// `4πN/|V|`.
    pub fn flux_density(&self, g: &WeightedGraph) -> f64 {
        4.0 * PI * self.total() / g.volume()
    }

    fn to_entries(&self, g: &WeightedGraph) -> Vec<VortexEntry> {
        self.points.iter().map(|&(i, m)| VortexEntry { vertex: g.ids()[i].clone(), mult: m }).collect()
    }

    fn from_entries(g: &WeightedGraph, entries: &[VortexEntry]) -> Result<Self> {
        let points: Vec<(&str, f64)> = entries.iter().map(|e| (e.vertex.as_str(), e.mult)).collect();
        Self::new(g, &points)
    }
}

/// Right side of the background problem: `(-4πN/|V|, 4π Σ m_j δ_{p_j})`.
pub fn vortex_rhs(g: &WeightedGraph, vortices: &VortexSet) -> (f64, VertexFunction) {
    (-vortices.flux_density(g), vortices.dirac_term(g))
}

/// One entry of a vortex file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VortexEntry {
    pub vertex: String,
    pub mult: f64,
}

/// On-disk vortex description: `m`/`n` for the coupled system, `p` for the scalar equation.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct VortexFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<VortexEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<VortexEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<VortexEntry>>,
}

impl VortexFile {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    pub fn system(g: &WeightedGraph, vm: &VortexSet, vn: &VortexSet) -> Self {
        Self { m: Some(vm.to_entries(g)), n: Some(vn.to_entries(g)), p: None }
    }

    pub fn scalar(g: &WeightedGraph, vp: &ScalarVortexSet) -> Self {
        Self { m: None, n: None, p: Some(vp.to_entries(g)) }
    }

    /// The `(m, n)` sets; a missing key reads as no vortices.
    pub fn system_sets(&self, g: &WeightedGraph) -> Result<(VortexSet, VortexSet)> {
        let read = |e: &Option<Vec<VortexEntry>>| VortexSet::from_entries(g, e.as_deref().unwrap_or(&[]));
        Ok((read(&self.m)?, read(&self.n)?))
    }

    pub fn scalar_set(&self, g: &WeightedGraph) -> Result<ScalarVortexSet> {
        VortexSet::from_entries(g, self.p.as_deref().unwrap_or(&[]))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("vortex serialization is infallible")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::integrate;

    /// Direct five-term evaluation, used as an independent oracle.
    fn f1_direct(a: f64, b: f64, u: f64, v: f64) -> f64 {
        a * (b - a) * u.exp() - b * (b - a) * v.exp() + a * a * (2.0 * u).exp() - a * b * (2.0 * v).exp()
            + b * (b - a) * (u + v).exp()
    }

    fn f2_direct(a: f64, b: f64, u: f64, v: f64) -> f64 {
        -b * (b - a) * u.exp() + a * (b - a) * v.exp() - a * b * (2.0 * u).exp()
            + a * a * (2.0 * v).exp()
            + b * (b - a) * (u + v).exp()
    }

    fn pair() -> WeightedGraph {
        WeightedGraph::from_indexed(vec![1.0, 1.0], vec![(0, 1, 1.0)]).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(1.0, 2.0, 1.0).is_ok());
        assert!(ModelParams::new(2.0, 2.0, 1.0).is_err());
        assert!(ModelParams::new(0.0, 2.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, 2.0, 0.0).is_err());
    }

    #[test]
    fn nonlinearity_reference_values() {
        let p = ModelParams::new(1.0, 2.0, 1.0).unwrap();
        assert_eq!(p.nonlinearity_at(0.0, 0.0), (0.0, 0.0));
        let ln2 = 2f64.ln();
        let (a, b) = p.nonlinearity_at(ln2, ln2);
        assert!((a - 2.0).abs() < 1e-14 && (b - 2.0).abs() < 1e-14);
        let (f, _) = p.nonlinearity_at(0.0, ln2);
        assert!((f + 6.0).abs() < 1e-14);
    }

    #[test]
    fn expanded_form_matches_direct_form() {
        let p = ModelParams::new(0.7, 1.9, 1.0).unwrap();
        for &u in &[-3.0, -0.5, 0.0, 0.4, 1.2] {
            for &v in &[-2.0, -0.1, 0.0, 0.3, 0.9] {
                let (x, y) = p.nonlinearity_at(u, v);
                assert!((x - f1_direct(0.7, 1.9, u, v)).abs() < 1e-12);
                assert!((y - f2_direct(0.7, 1.9, u, v)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn scalar_values() {
        assert_eq!(scalar_nonlinearity_at(0.0), 0.0);
        assert!((scalar_nonlinearity_at(2f64.ln()) - 2.0).abs() < 1e-15);
        assert!((scalar_nonlinearity_at(-(2f64.ln())) + 0.25).abs() < 1e-15);
    }

    #[test]
    fn shift_bounds() {
        let p = ModelParams::new(1.0, 2.0, 1.0).unwrap();
        assert!((lipschitz_k(&p, 0.0).unwrap() - 10.0).abs() < 1e-12);
        assert!((lipschitz_k(&p, 0.1).unwrap() - 11.0).abs() < 1e-12);
        let p2 = p.with_lambda(2.0).unwrap();
        assert!((lipschitz_k(&p2, 0.1).unwrap() - 22.0).abs() < 1e-12);
        assert!((scalar_k(1.0, 0.1).unwrap() - 3.2).abs() < 1e-12);
    }

    #[test]
    fn vortex_rhs_examples() {
        let g = pair();
        let (c, d) = vortex_rhs(&g, &VortexSet::empty());
        assert_eq!(c, 0.0);
        assert_eq!(d.sup_norm(), 0.0);

        let vm = VortexSet::new(&g, &[("v0", 1.0)]).unwrap();
        let (c, d) = vortex_rhs(&g, &vm);
        assert!((c + 2.0 * PI).abs() < 1e-15);
        assert!((d[0] - 4.0 * PI).abs() < 1e-15 && d[1] == 0.0);
        let total = d.map(|x| x + c);
        assert!(integrate(&g, &total).unwrap().abs() < 1e-12);
    }

    #[test]
    fn vortices_merge_and_validate() {
        let g = pair();
        let vm = VortexSet::new(&g, &[("v1", 1.0), ("v0", 0.5), ("v1", 2.0)]).unwrap();
        assert_eq!(vm.points(), &[(0, 0.5), (1, 3.0)]);
        assert_eq!(vm.total(), 3.5);
        assert!(VortexSet::new(&g, &[("v0", 0.0)]).is_err());
        assert!(matches!(VortexSet::new(&g, &[("zz", 1.0)]), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn vortex_file_round_trip() {
        let g = pair();
        let text = r#"{"m":[{"vertex":"v0","mult":1.0}],"n":[{"vertex":"v1","mult":2.0}]}"#;
        let file: VortexFile = serde_json::from_str(text).unwrap();
        let (vm, vn) = file.system_sets(&g).unwrap();
        assert_eq!(vm.total(), 1.0);
        assert_eq!(vn.points(), &[(1, 2.0)]);
        let back: VortexFile = serde_json::from_str(&VortexFile::system(&g, &vm, &vn).to_json()).unwrap();
        assert_eq!(back.system_sets(&g).unwrap(), (vm, vn));
        let scalar: VortexFile = serde_json::from_str(r#"{"p":[{"vertex":"v1","mult":1.0}]}"#).unwrap();
        assert_eq!(scalar.scalar_set(&g).unwrap().total(), 1.0);
    }
}
