//! λ sweeps, decay-rate fits and bisection for the critical coupling.

use std::fmt::Write as _;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::model::{ModelParams, ScalarVortexSet, VortexSet};
use crate::solver::{
    background_pair, background_scalar, critical_lower_bound, iterate_scalar, iterate_system, residual_system,
    system_sandwich, IterationOptions, Outcome, SystemSolution,
};

/// Hard cap on bisection steps, far above what any sane tolerance needs.
const MAX_BISECTIONS: usize = 200;

/// One λ probe of a sweep. Distances and errors are absent for runs that did not converge.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub lambda: f64,
    pub outcome: Outcome,
    pub iterations: usize,
    /// `‖u_λ + u0‖∞`.
    pub sup_dist_u: Option<f64>,
    /// `‖v_λ + v0‖∞`.
    pub sup_dist_v: Option<f64>,
    /// Sub-solution constant `c(λ)`, when λ is above the closed-form threshold.
    pub bound_c: Option<f64>,
    pub dist_err_1: Option<f64>,
    pub dist_err_2: Option<f64>,
    pub residual_1: f64,
    pub residual_2: f64,
}

impl SweepRecord {
    /// Distances stay below `c(λ)` wherever both are present.
    pub fn within_bound(&self) -> bool {
        match (self.bound_c, self.sup_dist_u, self.sup_dist_v) {
            (Some(c), Some(du), Some(dv)) => du <= c && dv <= c,
            _ => true,
        }
    }
}

/// Distance of `λ f_i(u+u0, v+v0)` from `-4π Σ m_j δ_{p_j}` tested against
/// every vertex indicator:
///
/// ```text
/// e1 = max_x | μ(x) λ f1(x) + 4π m(x) |
/// ```
///
/// The indicators span all test functions, so this is the full weak error.
pub fn distributional_error(
    g: &WeightedGraph,
    params: &ModelParams,
    solution: &SystemSolution,
    vm: &VortexSet,
    vn: &VortexSet,
) -> Result<(f64, f64)> {
    if !solution.report.converged() {
        return Err(Error::NotConverged(solution.report.outcome));
    }
    g.check_len(&solution.offset_u)?;
    let lambda = params.lambda();
    let (mut e1, mut e2) = (0.0f64, 0.0f64);
    for x in 0..g.num_vertices() {
        let (a, b) = params.nonlinearity_at(solution.offset_u[x], solution.offset_v[x]);
        let mu = g.mu()[x];
        e1 = e1.max((mu * lambda * a + 4.0 * std::f64::consts::PI * vm.mass_at(x)).abs());
        e2 = e2.max((mu * lambda * b + 4.0 * std::f64::consts::PI * vn.mass_at(x)).abs());
    }
    Ok((e1, e2))
}

fn record_for(
    g: &WeightedGraph,
    params: &ModelParams,
    vm: &VortexSet,
    vn: &VortexSet,
    bg: &crate::solver::BackgroundPair,
    opts: &IterationOptions,
) -> Result<SweepRecord> {
    let solution = iterate_system(g, params, bg, vm, vn, opts)?;
    let (residual_1, residual_2) = residual_system(g, params, bg, vm, vn, &solution.u, &solution.v)?;
    let converged = solution.report.converged();
    let errors = if converged { Some(distributional_error(g, params, &solution, vm, vn)?) } else { None };
    info!("lambda = {:e}: {} after {} iterates", params.lambda(), solution.report.outcome, solution.report.iterations);
    Ok(SweepRecord {
        lambda: params.lambda(),
        outcome: solution.report.outcome,
        iterations: solution.report.iterations,
        sup_dist_u: converged.then(|| solution.offset_u.sup_norm()),
        sup_dist_v: converged.then(|| solution.offset_v.sup_norm()),
        bound_c: system_sandwich(g, params, vm, vn),
        dist_err_1: errors.map(|e| e.0),
        dist_err_2: errors.map(|e| e.1),
        residual_1,
        residual_2,
    })
}

/// Solves the system at every λ in `lambdas` (ascending), reusing one background.
///
/// Probes run on up to `jobs` threads; records come back in λ order.
pub fn lambda_sweep(
    g: &WeightedGraph,
    params_base: &ModelParams,
    vm: &VortexSet,
    vn: &VortexSet,
    lambdas: &[f64],
    opts: &IterationOptions,
    jobs: usize,
) -> Result<Vec<SweepRecord>> {
    if lambdas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter("lambdas must be strictly ascending".into()));
    }
    let params = lambdas.iter().map(|&l| params_base.with_lambda(l)).collect::<Result<Vec<_>>>()?;
    let bg = background_pair(g, vm, vn)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    pool.install(|| params.par_iter().map(|p| record_for(g, p, vm, vn, &bg, opts)).collect())
}

/// Least-squares slope of `ln(field)` against `ln(λ)` over converged records.
pub fn decay_rate(records: &[SweepRecord], field: impl Fn(&SweepRecord) -> Option<f64>) -> Result<f64> {
    let points: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.outcome == Outcome::Converged)
        .filter_map(|r| field(r).filter(|&y| y > 0.0).map(|y| (r.lambda.ln(), y.ln())))
        .collect();
    if points.len() < 3 {
        return Err(Error::Precondition(format!(
            "decay rate needs at least 3 converged records with positive values, got {}",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

fn csv_num(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => format!("{v:.16e}"),
        _ => String::new(),
    }
}

/// Sweep table with 17 significant digits; missing values are empty cells.
pub fn sweep_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(
        "lambda,outcome,iterations,sup_dist_u,sup_dist_v,bound_c,dist_err_1,dist_err_2,residual_1,residual_2\n",
    );
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            csv_num(Some(r.lambda)),
            r.outcome,
            r.iterations,
            csv_num(r.sup_dist_u),
            csv_num(r.sup_dist_v),
            csv_num(r.bound_c),
            csv_num(r.dist_err_1),
            csv_num(r.dist_err_2),
            csv_num(Some(r.residual_1)),
            csv_num(Some(r.residual_2)),
        );
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probe {
    pub lambda: f64,
    pub outcome: Outcome,
}

/// Bracket `lo < λ_c ≤ hi` for the scalar equation.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaCBracket {
    /// Largest probed λ that did not converge.
    pub lo: f64,
    /// Smallest probed λ that converged.
    pub hi: f64,
    pub probes: Vec<Probe>,
    /// Some probe exhausted its iteration budget and was counted as a failure.
    pub tentative: bool,
    /// Every failing probe lies below every converging one.
    pub consistent: bool,
}

impl LambdaCBracket {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn to_json(&self) -> String {
        let file = BracketFile {
            lo: self.lo,
            hi: self.hi,
            probes: self
                .probes
                .iter()
                .map(|p| ProbeEntry { lambda: p.lambda, outcome: p.outcome.to_string() })
                .collect(),
            tentative: self.tentative || !self.consistent,
        };
        serde_json::to_string_pretty(&file).expect("bracket serialization is infallible")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BracketFile {
    pub lo: f64,
    pub hi: f64,
    pub probes: Vec<ProbeEntry>,
    pub tentative: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeEntry {
    pub lambda: f64,
    pub outcome: String,
}

/// Bisects on the outcome of the scalar iteration until `hi - lo ≤ width_tol`.
///
/// `lo0` must fail and `hi0` must converge. `MaxIterations` counts as failure
/// and marks the bracket tentative.
pub fn estimate_lambda_c_scalar(
    g: &WeightedGraph,
    vp: &ScalarVortexSet,
    lo0: f64,
    hi0: f64,
    width_tol: f64,
    opts: &IterationOptions,
) -> Result<LambdaCBracket> {
    if !(lo0 > 0.0 && lo0 < hi0 && hi0.is_finite()) {
        return Err(Error::Bracket(format!("need 0 < lo < hi, got ({lo0}, {hi0})")));
    }
    if !(width_tol > 0.0) {
        return Err(Error::InvalidParameter(format!("width tolerance must be positive, got {width_tol}")));
    }
    let bg = background_scalar(g, vp)?;
    let mut probes = Vec::new();
    let mut probe = |lambda: f64| -> Result<Outcome> {
        let outcome = iterate_scalar(g, lambda, &bg, vp, opts)?.report.outcome;
        info!("lambda = {lambda:e}: {outcome}");
        probes.push(Probe { lambda, outcome });
        Ok(outcome)
    };

    if probe(lo0)? == Outcome::Converged {
        return Err(Error::Bracket(format!("the iteration converges at the lower end {lo0}")));
    }
    if probe(hi0)? != Outcome::Converged {
        return Err(Error::Bracket(format!("the iteration does not converge at the upper end {hi0}")));
    }
    let (mut lo, mut hi) = (lo0, hi0);
    let mut steps = 0;
    while hi - lo > width_tol {
        if steps == MAX_BISECTIONS {
            return Err(Error::Bracket(format!("bisection budget of {MAX_BISECTIONS} steps exhausted")));
        }
        steps += 1;
        let mid = 0.5 * (lo + hi);
        if probe(mid)? == Outcome::Converged {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    let tentative = probes.iter().any(|p| p.outcome == Outcome::MaxIterations);
    let highest_failure =
        probes.iter().filter(|p| p.outcome != Outcome::Converged).map(|p| p.lambda).fold(f64::MIN, f64::max);
    let lowest_success =
        probes.iter().filter(|p| p.outcome == Outcome::Converged).map(|p| p.lambda).fold(f64::MAX, f64::min);
    let consistent = highest_failure < lowest_success;
    if tentative {
        warn!("some probes hit the iteration budget; the bracket is tentative");
    }
    if !consistent {
        warn!("probe outcomes are not monotone in lambda; the bracket is unreliable");
    }
    let bound = critical_lower_bound(g, vp);
    if hi < bound {
        return Err(Error::CriticalBound { hi, bound });
    }
    Ok(LambdaCBracket { lo, hi, probes, tentative, consistent })
}
