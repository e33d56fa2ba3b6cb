//! Background solves, the monotone iteration and its verification oracles.
//!
//! Writing a solution of the vortex system as `û = u0 + u`, where `u0` is the
//! mean-zero background carrying the Dirac data, leaves the smooth problem
//!
//! ```text
//! Δu = λ f1(u + u0, v + v0) + 4πN1/|V|
//! Δv = λ f2(u + u0, v + v0) + 4πN2/|V|
//! ```
//!
//! which is solved by the monotone scheme started at `(-u0, -v0)`:
//!
//! ```text
//! (Δ - K) u_{n+1} = λ f1(u_n + u0, v_n + v0) - K u_n + 4πN1/|V|
//! ```
//!
//! The iterates decrease strictly at every vertex and converge to the maximal
//! solution whenever a sub-solution exists.
//!
//! Internally the state is the offset `w = u + u0` (which starts at zero) and
//! each step solves for the increment, `(Δ - K) δ = -r` with `r` the current
//! defect. This is the same scheme algebraically, but the offsets far from a
//! vortex can be many orders of magnitude below `u0`, and only the offset
//! representation keeps their sign and the strictness of the decrease visible
//! in floating point.

use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use log::debug;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{integrate_raw, laplacian_raw, VertexFunction, WeightedGraph};
use crate::linops::{PoissonSolver, ShiftedSystem};
use crate::model::{
    lipschitz_k, scalar_k, scalar_nonlinearity_at, vortex_rhs, ModelParams, ScalarVortexSet, VortexSet,
    DEFAULT_K_MARGIN,
};

/// Relative slack accepted by [`check_subsolution`], measured against the
/// magnitude of the terms being compared at each vertex.
pub const SUBSOLUTION_SLACK: f64 = 1e-10;

/// Relative tolerance used by [`check_max_principle`].
pub const MAX_PRINCIPLE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationOptions {
    pub step_tol: f64,
    pub residual_tol: f64,
    pub max_iter: usize,
    pub divergence_floor: f64,
    pub k_margin: f64,
}

impl Default for IterationOptions {
    fn default() -> Self {
        Self {
            step_tol: 1e-12,
            residual_tol: 1e-9,
            max_iter: 10_000,
            divergence_floor: 50.0,
            k_margin: DEFAULT_K_MARGIN,
        }
    }
}

impl IterationOptions {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be positive, got {x}")))
            }
        };
        positive("step_tol", self.step_tol)?;
        positive("residual_tol", self.residual_tol)?;
        positive("divergence_floor", self.divergence_floor)?;
        positive("k_margin", self.k_margin)?;
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Converged,
    Diverged,
    MaxIterations,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Converged => "Converged",
            Outcome::Diverged => "Diverged",
            Outcome::MaxIterations => "MaxIterations",
        })
    }
}

impl FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Converged" => Ok(Outcome::Converged),
            "Diverged" => Ok(Outcome::Diverged),
            "MaxIterations" => Ok(Outcome::MaxIterations),
            other => Err(Error::InvalidParameter(format!("unknown outcome `{other}`"))),
        }
    }
}

/// What happened during one monotone iteration run.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationReport {
    pub outcome: Outcome,
    /// Index of the final iterate; the starting point is iterate 1.
    pub iterations: usize,
    /// `max(‖u_{n+1} - u_n‖∞, ‖v_{n+1} - v_n‖∞)` for every applied step.
    pub step_history: Vec<f64>,
    /// Sup-norm defect of the target equation at the final iterate.
    pub final_residual: f64,
    /// Every step larger than `step_tol` decreased every component at every vertex.
    pub monotone: bool,
    pub shift: f64,
    pub k_margin: f64,
}

impl IterationReport {
    pub fn converged(&self) -> bool {
        self.outcome == Outcome::Converged
    }
}

/// Mean-zero background functions `(u0, v0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BackgroundPair {
    pub u0: VertexFunction,
    pub v0: VertexFunction,
}

/// Solves `Δu0 = -4πN1/|V| + 4π Σ m_j δ_{p_j}` and the analogous equation for `v0`.
pub fn background_pair(g: &WeightedGraph, vm: &VortexSet, vn: &VortexSet) -> Result<BackgroundPair> {
    let solver = PoissonSolver::new(g)?;
    let solve = |vs: &VortexSet| {
        let (constant, dirac) = vortex_rhs(g, vs);
        solver.solve(&dirac.map(|d| d + constant))
    };
    Ok(BackgroundPair { u0: solve(vm)?, v0: solve(vn)? })
}

/// Scalar background `ū0` with `Δū0 = -4πN/|V| + 4π Σ δ_{p_j}`.
pub fn background_scalar(g: &WeightedGraph, vp: &ScalarVortexSet) -> Result<VertexFunction> {
    let (constant, dirac) = vortex_rhs(g, vp);
    PoissonSolver::new(g)?.solve(&dirac.map(|d| d + constant))
}

/// Converged (or abandoned) state of the system iteration.
#[derive(Debug, Clone)]
pub struct SystemSolution {
    pub u: VertexFunction,
    pub v: VertexFunction,
    /// `u + u0`, accumulated directly rather than recovered by subtraction.
    pub offset_u: VertexFunction,
    /// `v + v0`.
    pub offset_v: VertexFunction,
    pub lambda: f64,
    pub report: IterationReport,
}

/// Converged (or abandoned) state of the scalar iteration.
#[derive(Debug, Clone)]
pub struct ScalarSolution {
    pub u: VertexFunction,
    /// `u + ū0`.
    pub offset: VertexFunction,
    pub lambda: f64,
    pub report: IterationReport,
}

fn sup(fs: &[VertexFunction]) -> f64 {
    fs.iter().map(VertexFunction::sup_norm).fold(0.0, f64::max)
}

/// Shared driver for the monotone scheme on offsets `w`, starting at `w = 0`.
///
/// `defect(w)` returns the per-component defect `r` of the target equation;
/// each step solves `(Δ - K) δ = -r`. `literal(w)` evaluates the defect in the
/// caller's original variables for the convergence certificate.
fn monotone_run(
    g: &WeightedGraph,
    shift: f64,
    components: usize,
    opts: &IterationOptions,
    defect: impl Fn(&[VertexFunction]) -> Vec<VertexFunction>,
    literal: impl Fn(&[VertexFunction]) -> Result<f64>,
) -> Result<(Vec<VertexFunction>, IterationReport)> {
    opts.validate()?;
    let system = ShiftedSystem::new(g, shift)?;
    let n = g.num_vertices();
    let mut w = vec![VertexFunction::zeros(n); components];
    let mut report = IterationReport {
        outcome: Outcome::MaxIterations,
        iterations: 1,
        step_history: Vec::new(),
        final_residual: f64::NAN,
        monotone: true,
        shift,
        k_margin: opts.k_margin,
    };

    for iterate in 1..=opts.max_iter {
        report.iterations = iterate;
        let r = defect(&w);
        let residual = sup(&r);
        if !residual.is_finite() {
            report.outcome = Outcome::Diverged;
            break;
        }
        let deltas = r.iter().map(|ri| system.solve(&ri.neg())).collect::<Result<Vec<_>>>()?;
        let step = sup(&deltas);
        if step <= opts.step_tol && residual <= opts.residual_tol {
            let certified = literal(&w)?;
            if certified <= opts.residual_tol {
                report.outcome = Outcome::Converged;
                report.final_residual = certified;
                return Ok((w, report));
            }
            debug!("iterate {iterate}: offset defect {residual:e} but literal defect {certified:e}");
        }
        if iterate == opts.max_iter {
            break;
        }

        let strict = w.iter().zip(&deltas).all(|(wi, di)| wi.iter().zip(di.iter()).all(|(&x, &d)| x + d < x));
        if step > opts.step_tol && !strict {
            debug!("iterate {iterate}: step {step:e} is not a strict pointwise decrease");
            report.monotone = false;
        }
        report.step_history.push(step);
        for (wi, di) in w.iter_mut().zip(&deltas) {
            *wi = wi.add(di);
        }
        report.iterations = iterate + 1;
        let lowest = w.iter().map(VertexFunction::min).fold(f64::INFINITY, f64::min);
        if !(lowest >= -opts.divergence_floor) {
            report.outcome = Outcome::Diverged;
            break;
        }
    }
    report.final_residual = literal(&w).unwrap_or(f64::NAN);
    Ok((w, report))
}

fn check_background(g: &WeightedGraph, bg: &BackgroundPair) -> Result<()> {
    g.check_len(&bg.u0)?;
    g.check_len(&bg.v0)
}

/// Runs the monotone iteration for the coupled system.
///
/// Non-convergence is reported through `report.outcome`, not as an error.
pub fn iterate_system(
    g: &WeightedGraph,
    params: &ModelParams,
    bg: &BackgroundPair,
    vm: &VortexSet,
    vn: &VortexSet,
    opts: &IterationOptions,
) -> Result<SystemSolution> {
    check_background(g, bg)?;
    let lambda = params.lambda();
    let shift = lipschitz_k(params, opts.k_margin)?;
    let dirac_m = vm.dirac_term(g);
    let dirac_n = vn.dirac_term(g);

    let defect = |w: &[VertexFunction]| {
        let (wu, wv) = (&w[0], &w[1]);
        let (lu, lv) = (laplacian_raw(g, wu), laplacian_raw(g, wv));
        let mut ru = Vec::with_capacity(wu.len());
        let mut rv = Vec::with_capacity(wu.len());
        for x in 0..wu.len() {
            let (a, b) = params.nonlinearity_at(wu[x], wv[x]);
            ru.push(lu[x] - dirac_m[x] - lambda * a);
            rv.push(lv[x] - dirac_n[x] - lambda * b);
        }
        vec![VertexFunction::from_raw(ru), VertexFunction::from_raw(rv)]
    };
    let literal = |w: &[VertexFunction]| {
        let (r1, r2) = residual_system(g, params, bg, vm, vn, &w[0].sub(&bg.u0), &w[1].sub(&bg.v0))?;
        Ok(r1.max(r2))
    };

    let (mut w, report) = monotone_run(g, shift, 2, opts, defect, literal)?;
    let offset_v = w.pop().expect("two components");
    let offset_u = w.pop().expect("two components");
    Ok(SystemSolution { u: offset_u.sub(&bg.u0), v: offset_v.sub(&bg.v0), offset_u, offset_v, lambda, report })
}

/// Runs the monotone iteration for `Δu = λ e^{ū0+u}(e^{ū0+u} - 1) + 4πN/|V|`.
pub fn iterate_scalar(
    g: &WeightedGraph,
    lambda: f64,
    bg_scalar: &VertexFunction,
    vp: &ScalarVortexSet,
    opts: &IterationOptions,
) -> Result<ScalarSolution> {
    g.check_len(bg_scalar)?;
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    let shift = scalar_k(lambda, opts.k_margin)?;
    let dirac = vp.dirac_term(g);

    let defect = |w: &[VertexFunction]| {
        let lw = laplacian_raw(g, &w[0]);
        let r = (0..lw.len()).map(|x| lw[x] - dirac[x] - lambda * scalar_nonlinearity_at(w[0][x])).collect();
        vec![VertexFunction::from_raw(r)]
    };
    let literal = |w: &[VertexFunction]| residual_scalar(g, lambda, bg_scalar, vp, &w[0].sub(bg_scalar));

    let (mut w, report) = monotone_run(g, shift, 1, opts, defect, literal)?;
    let offset = w.pop().expect("one component");
    Ok(ScalarSolution { u: offset.sub(bg_scalar), offset, lambda, report })
}

/// `‖Δu - λ f1(u+u0, v+v0) - 4πN1/|V|‖∞` and the matching `f2` defect.
pub fn residual_system(
    g: &WeightedGraph,
    params: &ModelParams,
    bg: &BackgroundPair,
    vm: &VortexSet,
    vn: &VortexSet,
    u: &VertexFunction,
    v: &VertexFunction,
) -> Result<(f64, f64)> {
    check_background(g, bg)?;
    g.check_len(u)?;
    g.check_len(v)?;
    let (lu, lv) = (laplacian_raw(g, u), laplacian_raw(g, v));
    let (c1, c2) = (vm.flux_density(g), vn.flux_density(g));
    let lambda = params.lambda();
    let (mut r1, mut r2) = (0.0f64, 0.0f64);
    for x in 0..u.len() {
        let (a, b) = params.nonlinearity_at(u[x] + bg.u0[x], v[x] + bg.v0[x]);
        r1 = r1.max((lu[x] - lambda * a - c1).abs());
        r2 = r2.max((lv[x] - lambda * b - c2).abs());
    }
    Ok((r1, r2))
}

/// `‖Δu - λ e^{ū0+u}(e^{ū0+u} - 1) - 4πN/|V|‖∞`.
pub fn residual_scalar(
    g: &WeightedGraph,
    lambda: f64,
    bg_scalar: &VertexFunction,
    vp: &ScalarVortexSet,
    u: &VertexFunction,
) -> Result<f64> {
    g.check_len(bg_scalar)?;
    g.check_len(u)?;
    let lu = laplacian_raw(g, u);
    let c = vp.flux_density(g);
    Ok((0..u.len())
        .map(|x| (lu[x] - lambda * scalar_nonlinearity_at(u[x] + bg_scalar[x]) - c).abs())
        .fold(0.0, f64::max))
}

/// Closed-form sub-solution constant `c = -ln((1 + sqrt(1 - 16π N η / Λ)) / 2)`.
///
/// `Λ` is `λ(a-b)²` for the system and `λ` for the scalar equation. Returns
/// `None` when the square root is undefined.
pub fn sandwich_constant(mass: f64, eta: f64, effective_lambda: f64) -> Option<f64> {
    let mut x = 16.0 * PI * mass * eta / effective_lambda;
    if !(x <= 1.0 + 1e-12) {
        return None;
    }
    x = x.min(1.0);
    let s = (1.0 - x).sqrt();
    // 1 - (1+s)/2 = x / (2(1+s)) without cancellation
    Some(-(-x / (2.0 * (1.0 + s))).ln_1p())
}

/// Smallest λ for which the closed-form system sub-solution exists:
/// `16π max(N1, N2) η / (a-b)²`.
pub fn system_threshold(g: &WeightedGraph, params: &ModelParams, vm: &VortexSet, vn: &VortexSet) -> f64 {
    let mass = vm.total().max(vn.total());
    16.0 * PI * mass * g.eta() / (params.a() - params.b()).powi(2)
}

/// Smallest λ for which the closed-form scalar sub-solution exists: `16πNη`.
pub fn scalar_threshold(g: &WeightedGraph, vp: &ScalarVortexSet) -> f64 {
    16.0 * PI * vp.total() * g.eta()
}

/// Known lower bound `16πN/|V|` on the critical coupling of the scalar equation.
pub fn critical_lower_bound(g: &WeightedGraph, vp: &ScalarVortexSet) -> f64 {
    16.0 * PI * vp.total() / g.volume()
}

/// `c(λ)` for the system, if λ admits the closed-form sub-solution.
pub fn system_sandwich(g: &WeightedGraph, params: &ModelParams, vm: &VortexSet, vn: &VortexSet) -> Option<f64> {
    let mass = vm.total().max(vn.total());
    sandwich_constant(mass, g.eta(), params.lambda() * (params.a() - params.b()).powi(2))
}

/// `c(λ)` for the scalar equation, if λ admits the closed-form sub-solution.
pub fn scalar_sandwich(g: &WeightedGraph, lambda: f64, vp: &ScalarVortexSet) -> Option<f64> {
    sandwich_constant(vp.total(), g.eta(), lambda)
}

/// Sub-solution `(-u0 - c, -v0 - c, c)` of the shifted system.
pub fn subsolution_system(
    g: &WeightedGraph,
    params: &ModelParams,
    bg: &BackgroundPair,
    vm: &VortexSet,
    vn: &VortexSet,
) -> Result<(VertexFunction, VertexFunction, f64)> {
    check_background(g, bg)?;
    let c = system_sandwich(g, params, vm, vn).ok_or_else(|| {
        Error::Precondition(format!(
            "lambda = {} is below the sub-solution threshold {}",
            params.lambda(),
            system_threshold(g, params, vm, vn)
        ))
    })?;
    Ok((bg.u0.map(|x| -x - c), bg.v0.map(|x| -x - c), c))
}

/// Sub-solution `(-ū0 - c, c)` of the shifted scalar equation.
pub fn subsolution_scalar(
    g: &WeightedGraph,
    lambda: f64,
    bg_scalar: &VertexFunction,
    vp: &ScalarVortexSet,
) -> Result<(VertexFunction, f64)> {
    g.check_len(bg_scalar)?;
    let c = scalar_sandwich(g, lambda, vp).ok_or_else(|| {
        Error::Precondition(format!(
            "lambda = {lambda} is below the sub-solution threshold {}",
            scalar_threshold(g, vp)
        ))
    })?;
    Ok((bg_scalar.map(|x| -x - c), c))
}

/// Tests `Δu₋ ≥ λ f1(u₋+u0, v₋+v0) + 4πN1/|V|` and the `f2` inequality at every vertex.
///
/// A vertex passes when its slack is at least `-SUBSOLUTION_SLACK` times the
/// magnitude of the quantities compared there.
pub fn check_subsolution(
    g: &WeightedGraph,
    params: &ModelParams,
    bg: &BackgroundPair,
    vm: &VortexSet,
    vn: &VortexSet,
    u_minus: &VertexFunction,
    v_minus: &VertexFunction,
) -> Result<bool> {
    check_background(g, bg)?;
    g.check_len(u_minus)?;
    g.check_len(v_minus)?;
    let (lu, lv) = (laplacian_raw(g, u_minus), laplacian_raw(g, v_minus));
    let (c1, c2) = (vm.flux_density(g), vn.flux_density(g));
    let lambda = params.lambda();
    Ok((0..g.num_vertices()).all(|x| {
        let (su, sv) = (u_minus[x] + bg.u0[x], v_minus[x] + bg.v0[x]);
        let (a, b) = params.nonlinearity_at(su, sv);
        let scale = lambda * params.term_magnitude(su, sv);
        let ok1 = lu[x] - lambda * a - c1 >= -SUBSOLUTION_SLACK * (1.0 + lu[x].abs() + c1 + scale);
        let ok2 = lv[x] - lambda * b - c2 >= -SUBSOLUTION_SLACK * (1.0 + lv[x].abs() + c2 + scale);
        ok1 && ok2
    }))
}

/// Scalar analogue of [`check_subsolution`].
pub fn check_subsolution_scalar(
    g: &WeightedGraph,
    lambda: f64,
    bg_scalar: &VertexFunction,
    vp: &ScalarVortexSet,
    u_minus: &VertexFunction,
) -> Result<bool> {
    g.check_len(bg_scalar)?;
    g.check_len(u_minus)?;
    let lu = laplacian_raw(g, u_minus);
    let c = vp.flux_density(g);
    Ok((0..g.num_vertices()).all(|x| {
        let s = u_minus[x] + bg_scalar[x];
        let scale = lambda * (s.exp() + (2.0 * s).exp());
        lu[x] - lambda * scalar_nonlinearity_at(s) - c >= -SUBSOLUTION_SLACK * (1.0 + lu[x].abs() + c + scale)
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxPrincipleVerdict {
    /// `Δu - Ku ≥ 0` everywhere and `u ≤ 0` everywhere.
    PremiseHoldsAndNonpositive,
    /// `Δu - Ku ≥ 0` everywhere yet `u > 0` somewhere. Unreachable for a
    /// correct operator and solver.
    PremiseHoldsAndViolated,
    /// `Δu - Ku < 0` somewhere.
    PremiseFails,
}

/// Evaluates the discrete maximum principle for `u` and shift `K > 0`.
///
/// With `ε = MAX_PRINCIPLE_TOLERANCE · (‖Δu‖∞ + K‖u‖∞)`, the premise is
/// `Δu - Ku ≥ -ε` and the conclusion is `u ≤ 2ε/K`, which is what the
/// principle yields for the premise relaxed by `ε`.
pub fn check_max_principle(g: &WeightedGraph, u: &VertexFunction, shift: f64) -> Result<MaxPrincipleVerdict> {
    g.check_len(u)?;
    if !(shift.is_finite() && shift > 0.0) {
        return Err(Error::InvalidParameter(format!("shift K must be positive, got {shift}")));
    }
    let lap = laplacian_raw(g, u);
    let eps = MAX_PRINCIPLE_TOLERANCE * (lap.sup_norm() + shift * u.sup_norm());
    let premise = lap.iter().zip(u.iter()).all(|(&l, &x)| l - shift * x >= -eps);
    if !premise {
        return Ok(MaxPrincipleVerdict::PremiseFails);
    }
    if u.max() <= 2.0 * eps / shift {
        Ok(MaxPrincipleVerdict::PremiseHoldsAndNonpositive)
    } else {
        Ok(MaxPrincipleVerdict::PremiseHoldsAndViolated)
    }
}

/// `∫ λ f1(u+u0, v+v0) dμ` and `∫ λ f2(u+u0, v+v0) dμ`, evaluated on the offsets.
pub fn flux_integrals(g: &WeightedGraph, params: &ModelParams, solution: &SystemSolution) -> (f64, f64) {
    let lambda = params.lambda();
    let (mut i1, mut i2) = (0.0, 0.0);
    for x in 0..g.num_vertices() {
        let (a, b) = params.nonlinearity_at(solution.offset_u[x], solution.offset_v[x]);
        i1 += g.mu()[x] * lambda * a;
        i2 += g.mu()[x] * lambda * b;
    }
    (i1, i2)
}

/// `∫ λ e^{w}(e^{w} - 1) dμ` for a scalar solution.
pub fn scalar_flux_integral(g: &WeightedGraph, solution: &ScalarSolution) -> f64 {
    let density = solution.offset.map(|w| solution.lambda * scalar_nonlinearity_at(w));
    integrate_raw(g, &density)
}

/// On-disk solution: `v` is absent for the scalar equation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub u: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<f64>>,
    pub lambda: f64,
    pub residual: Vec<f64>,
    pub iterations: usize,
    pub outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
}

impl SolutionFile {
    pub fn from_system(
        g: &WeightedGraph,
        params: &ModelParams,
        bg: &BackgroundPair,
        vm: &VortexSet,
        vn: &VortexSet,
        solution: &SystemSolution,
    ) -> Result<Self> {
        let (r1, r2) = residual_system(g, params, bg, vm, vn, &solution.u, &solution.v)?;
        Ok(Self {
            u: solution.u.values().to_vec(),
            v: Some(solution.v.values().to_vec()),
            lambda: solution.lambda,
            residual: vec![r1, r2],
            iterations: solution.report.iterations,
            outcome: solution.report.outcome.to_string(),
            a: Some(params.a()),
            b: Some(params.b()),
        })
    }

    pub fn from_scalar(
        g: &WeightedGraph,
        bg_scalar: &VertexFunction,
        vp: &ScalarVortexSet,
        solution: &ScalarSolution,
    ) -> Result<Self> {
        let r = residual_scalar(g, solution.lambda, bg_scalar, vp, &solution.u)?;
        Ok(Self {
            u: solution.u.values().to_vec(),
            v: None,
            lambda: solution.lambda,
            residual: vec![r],
            iterations: solution.report.iterations,
            outcome: solution.report.outcome.to_string(),
            a: None,
            b: None,
        })
    }

    pub fn is_scalar(&self) -> bool {
        self.v.is_none()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solution serialization is infallible")
    }
}
