//! The `gv` command-line driver.
//!
//! Exit codes: 0 success, 2 input error, 3 non-convergence, 4 internal solver
//! failure. Diagnostics go to stderr at the level named by `GV_LOG`
//! (`error`, `info` or `debug`; default `info`).

use std::f64::consts::PI;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{error, info, warn};

use crate::analysis::{decay_rate, estimate_lambda_c_scalar, lambda_sweep, sweep_csv};
use crate::error::{Error, Result};
use crate::generators::{self, Randomize};
use crate::graph::{integrate_raw, WeightedGraph};
use crate::model::{scalar_nonlinearity_at, ModelParams, ScalarVortexSet, VortexFile, VortexSet};
use crate::solver::{
    background_pair, background_scalar, iterate_scalar, iterate_system, residual_scalar, residual_system,
    scalar_sandwich, system_sandwich, IterationOptions, Outcome, SolutionFile,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;

/// Relative tolerance of the integral identity in `check`.
const IDENTITY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "gv", version, about = "Vortex equations on finite weighted graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated graph file.
    Gen(GenArgs),
    /// Solve the system (or the scalar equation) for one λ.
    Solve(SolveArgs),
    /// Solve over a list of λ values and write a CSV table.
    Sweep(SweepArgs),
    /// Bracket the critical coupling of the scalar equation by bisection.
    LambdaC(LambdaCArgs),
    /// Re-verify a stored solution.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphKind {
    Lattice,
    Torus,
    Complete,
    Random,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GraphKind,
    /// Rows (lattice, torus) or vertex count (complete, random).
    #[arg(long, short = 'n', default_value_t = 8)]
    pub size: usize,
    /// Columns for lattice and torus; defaults to `--size`.
    #[arg(long)]
    pub cols: Option<usize>,
    /// Edge probability for random graphs.
    #[arg(long, short = 'p', default_value_t = 0.3)]
    pub p: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Draw vertex measures from (0.5, 2.0].
    #[arg(long)]
    pub random_mu: bool,
    /// Draw edge weights from (0.5, 2.0].
    #[arg(long)]
    pub random_weights: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct IterArgs {
    #[arg(long, default_value_t = IterationOptions::default().step_tol)]
    pub step_tol: f64,
    #[arg(long, default_value_t = IterationOptions::default().residual_tol)]
    pub residual_tol: f64,
    #[arg(long, default_value_t = IterationOptions::default().max_iter)]
    pub max_iter: usize,
    #[arg(long, default_value_t = IterationOptions::default().k_margin)]
    pub k_margin: f64,
}

impl IterArgs {
    fn options(&self) -> Result<IterationOptions> {
        let opts = IterationOptions {
            step_tol: self.step_tol,
            residual_tol: self.residual_tol,
            max_iter: self.max_iter,
            k_margin: self.k_margin,
            ..IterationOptions::default()
        };
        opts.validate()?;
        Ok(opts)
    }
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub vortices: PathBuf,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
}

impl ProblemArgs {
    fn load(&self) -> Result<(WeightedGraph, VortexFile)> {
        let g = WeightedGraph::load(&self.graph)?;
        let vortices = VortexFile::load(&self.vortices)?;
        Ok((g, vortices))
    }

    fn params(&self, lambda: f64) -> Result<ModelParams> {
        match (self.a, self.b) {
            (Some(a), Some(b)) => ModelParams::new(a, b, lambda),
            _ => Err(Error::InvalidParameter("the system needs both --a and --b".into())),
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long)]
    pub lambda: f64,
    /// Solve the scalar equation with the `p` vortices instead of the system.
    #[arg(long)]
    pub scalar: bool,
    #[command(flatten)]
    pub iter: IterArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Comma-separated, strictly ascending.
    #[arg(long, value_delimiter = ',', required = true)]
    pub lambdas: Vec<f64>,
    #[command(flatten)]
    pub iter: IterArgs,
    /// Worker threads for independent λ probes.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct LambdaCArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub vortices: PathBuf,
    /// Initial bracket `lo,hi`: `lo` must fail and `hi` must converge.
    #[arg(long, value_delimiter = ',', required = true)]
    pub bracket: Vec<f64>,
    #[arg(long, default_value_t = 1e-2)]
    pub width_tol: f64,
    #[command(flatten)]
    pub iter: IterArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub vortices: PathBuf,
    #[arg(long)]
    pub solution: PathBuf,
    /// Residual bound a stored solution must meet.
    #[arg(long, default_value_t = IterationOptions::default().residual_tol)]
    pub residual_tol: f64,
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NotConverged(_) | Error::Bracket(_) | Error::CriticalBound { .. } => EXIT_NOT_CONVERGED,
        Error::SolverFailure(_) => EXIT_SOLVER,
        _ => EXIT_INPUT,
    }
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or("GV_LOG", "info");
    // a second call (tests drive `run` repeatedly) keeps the first logger
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

/// Parses `args` (including the program name) and runs the command, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            error!("{e}");
            exit_code(&e)
        }
    }
}

fn execute(command: &Command) -> Result<i32> {
    match command {
        Command::Gen(args) => cmd_gen(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::LambdaC(args) => cmd_lambda_c(args),
        Command::Check(args) => cmd_check(args),
    }
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents)?;
    info!("wrote {}", path.display());
    Ok(())
}

fn outcome_code(outcome: Outcome) -> i32 {
    if outcome == Outcome::Converged {
        EXIT_OK
    } else {
        error!("outcome: {outcome}");
        EXIT_NOT_CONVERGED
    }
}

pub fn cmd_gen(args: &GenArgs) -> Result<i32> {
    let randomize = Randomize { mu: args.random_mu, weights: args.random_weights, seed: args.seed };
    let n = args.size;
    let g = match args.kind {
        GraphKind::Lattice => generators::lattice(n, args.cols.unwrap_or(n), randomize)?,
        GraphKind::Torus => generators::torus(n, args.cols.unwrap_or(n), randomize)?,
        GraphKind::Complete => generators::complete(n, randomize)?,
        GraphKind::Random => generators::random(n, args.p, randomize)?,
    };
    println!("{} vertices, {} edges", g.num_vertices(), g.num_edges());
    write(&args.out, &g.to_json())?;
    Ok(EXIT_OK)
}

pub fn cmd_solve(args: &SolveArgs) -> Result<i32> {
    let (g, vortices) = args.problem.load()?;
    let opts = args.iter.options()?;
    let lambda = args.lambda;

    let (file, outcome) = if args.scalar {
        let vp = vortices.scalar_set(&g)?;
        let bg = background_scalar(&g, &vp)?;
        let sol = iterate_scalar(&g, lambda, &bg, &vp, &opts)?;
        let file = SolutionFile::from_scalar(&g, &bg, &vp, &sol)?;
        summarize(&sol.report, &file.residual);
        let dist = sol.offset.sup_norm();
        sandwich_line(dist, scalar_sandwich(&g, lambda, &vp));
        (file, sol.report.outcome)
    } else {
        let (vm, vn) = vortices.system_sets(&g)?;
        let params = args.problem.params(lambda)?;
        let bg = background_pair(&g, &vm, &vn)?;
        let sol = iterate_system(&g, &params, &bg, &vm, &vn, &opts)?;
        let file = SolutionFile::from_system(&g, &params, &bg, &vm, &vn, &sol)?;
        summarize(&sol.report, &file.residual);
        let dist = sol.offset_u.sup_norm().max(sol.offset_v.sup_norm());
        sandwich_line(dist, system_sandwich(&g, &params, &vm, &vn));
        (file, sol.report.outcome)
    };
    write(&args.out, &file.to_json())?;
    Ok(outcome_code(outcome))
}

fn summarize(report: &crate::solver::IterationReport, residual: &[f64]) {
    let residual: Vec<String> = residual.iter().map(|r| format!("{r:.3e}")).collect();
    println!("outcome:    {}", report.outcome);
    println!("iterations: {}", report.iterations);
    println!("shift K:    {:.6e}", report.shift);
    println!("residual:   {}", residual.join(", "));
    println!("monotone:   {}", report.monotone);
}

fn sandwich_line(dist: f64, c: Option<f64>) {
    match c {
        Some(c) => println!("sandwich:   sup distance {dist:.6e} <= c = {c:.6e} (margin {:.6e})", c - dist),
        None => println!("sandwich:   sup distance {dist:.6e}; lambda is below the closed-form threshold"),
    }
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<i32> {
    let (g, vortices) = args.problem.load()?;
    let (vm, vn) = vortices.system_sets(&g)?;
    let first = *args.lambdas.first().ok_or_else(|| Error::InvalidParameter("empty lambda list".into()))?;
    let params = args.problem.params(first)?;
    let records = lambda_sweep(&g, &params, &vm, &vn, &args.lambdas, &args.iter.options()?, args.jobs)?;
    write(&args.out, &sweep_csv(&records))?;

    for r in &records {
        println!("lambda {:>12.6e}: {:<13} {:>6} iterates", r.lambda, r.outcome.to_string(), r.iterations);
    }
    match decay_rate(&records, |r| r.sup_dist_u) {
        Ok(rate) => println!("decay rate of sup_dist_u: {rate:.6}"),
        Err(e) => warn!("no decay rate: {e}"),
    }
    let all = records.iter().all(|r| r.outcome == Outcome::Converged);
    Ok(if all { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

pub fn cmd_lambda_c(args: &LambdaCArgs) -> Result<i32> {
    let g = WeightedGraph::load(&args.graph)?;
    let vp = VortexFile::load(&args.vortices)?.scalar_set(&g)?;
    let &[lo, hi] = args.bracket.as_slice() else {
        return Err(Error::InvalidParameter(format!("--bracket takes `lo,hi`, got {} values", args.bracket.len())));
    };
    let bracket = estimate_lambda_c_scalar(&g, &vp, lo, hi, args.width_tol, &args.iter.options()?)?;
    write(&args.out, &bracket.to_json())?;
    println!("lambda_c in ({:.10e}, {:.10e}] after {} probes", bracket.lo, bracket.hi, bracket.probes.len());
    if bracket.tentative || !bracket.consistent {
        warn!("the bracket is tentative");
    }
    Ok(EXIT_OK)
}

/// One named pass/fail line of `check`.
struct Verdict {
    name: &'static str,
    pass: bool,
    detail: String,
}

pub fn cmd_check(args: &CheckArgs) -> Result<i32> {
    let g = WeightedGraph::load(&args.graph)?;
    let vortices = VortexFile::load(&args.vortices)?;
    let file = SolutionFile::load(&args.solution)?;
    g.check_len(&file.u)?;
    if let Some(v) = &file.v {
        g.check_len(v)?;
    }
    file.outcome.parse::<Outcome>()?;

    let verdicts = if file.is_scalar() {
        check_scalar(&g, &vortices.scalar_set(&g)?, &file, args.residual_tol)?
    } else {
        let (vm, vn) = vortices.system_sets(&g)?;
        check_system(&g, &vm, &vn, &file, args.residual_tol)?
    };
    for v in &verdicts {
        println!("{} {:<10} {}", if v.pass { "PASS" } else { "FAIL" }, v.name, v.detail);
    }
    Ok(if verdicts.iter().all(|v| v.pass) { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

fn residual_verdict(r: f64, tol: f64) -> Verdict {
    Verdict { name: "residual", pass: r <= tol, detail: format!("{r:.3e} (tolerance {tol:.1e})") }
}

/// `-c - tol ≤ w ≤ tol` for every offset `w = u + u0`; the upper end is
/// strict in exact arithmetic, `tol` absorbs the rounding of the sum.
fn sandwich_verdict(offsets: &[Vec<f64>], backgrounds: &[&[f64]], c: Option<f64>) -> Verdict {
    let tol = 4.0 * f64::EPSILON * backgrounds.iter().flat_map(|b| b.iter()).fold(1.0_f64, |m, x| m.max(x.abs()));
    let hi = offsets.iter().flatten().fold(f64::MIN, |m, &x| m.max(x));
    let lo = offsets.iter().flatten().fold(f64::MAX, |m, &x| m.min(x));
    let upper = hi <= tol;
    match c {
        Some(c) => Verdict {
            name: "sandwich",
            pass: upper && lo >= -c - tol,
            detail: format!("offsets in [{lo:.6e}, {hi:.6e}], c = {c:.6e}"),
        },
        None => Verdict {
            name: "sandwich",
            pass: upper,
            detail: format!("offsets <= {hi:.6e}; lower bound unavailable below threshold"),
        },
    }
}

/// `|∫λf + 4πN| ≤ tol`; the residual certificate already implies a defect of
/// at most `|V|·residual_tol`, so that is accepted too.
fn identity_verdict(name: &'static str, integral: f64, total: f64, volume: f64, residual_tol: f64) -> Verdict {
    let defect = (integral + 4.0 * PI * total).abs();
    let tol = (IDENTITY_TOLERANCE * 4.0 * PI * total).max(volume * residual_tol);
    Verdict { name, pass: defect <= tol, detail: format!("|integral + 4piN| = {defect:.3e} (tolerance {tol:.1e})") }
}

fn outcome_verdict(outcome: &str) -> Verdict {
    Verdict { name: "outcome", pass: outcome == Outcome::Converged.to_string(), detail: outcome.to_string() }
}

fn check_system(
    g: &WeightedGraph,
    vm: &VortexSet,
    vn: &VortexSet,
    file: &SolutionFile,
    residual_tol: f64,
) -> Result<Vec<Verdict>> {
    let (a, b) = match (file.a, file.b) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::InvalidParameter("system solution file lacks `a` and `b`".into())),
    };
    let params = ModelParams::new(a, b, file.lambda)?;
    let bg = background_pair(g, vm, vn)?;
    let u = crate::graph::VertexFunction::new(file.u.clone())?;
    let v = crate::graph::VertexFunction::new(file.v.clone().unwrap_or_default())?;
    let (r1, r2) = residual_system(g, &params, &bg, vm, vn, &u, &v)?;

    let wu: Vec<f64> = u.iter().zip(bg.u0.iter()).map(|(x, y)| x + y).collect();
    let wv: Vec<f64> = v.iter().zip(bg.v0.iter()).map(|(x, y)| x + y).collect();
    let (mut i1, mut i2) = (0.0, 0.0);
    for x in 0..g.num_vertices() {
        let (f1, f2) = params.nonlinearity_at(wu[x], wv[x]);
        i1 += g.mu()[x] * params.lambda() * f1;
        i2 += g.mu()[x] * params.lambda() * f2;
    }
    let c = system_sandwich(g, &params, vm, vn);
    Ok(vec![
        residual_verdict(r1.max(r2), residual_tol),
        sandwich_verdict(&[wu, wv], &[&bg.u0, &bg.v0], c),
        identity_verdict("identity-1", i1, vm.total(), g.volume(), residual_tol),
        identity_verdict("identity-2", i2, vn.total(), g.volume(), residual_tol),
        outcome_verdict(&file.outcome),
    ])
}

fn check_scalar(
    g: &WeightedGraph,
    vp: &ScalarVortexSet,
    file: &SolutionFile,
    residual_tol: f64,
) -> Result<Vec<Verdict>> {
    let bg = background_scalar(g, vp)?;
    let u = crate::graph::VertexFunction::new(file.u.clone())?;
    let r = residual_scalar(g, file.lambda, &bg, vp, &u)?;
    let w = u.add(&bg);
    let integral = integrate_raw(g, &w.map(|x| file.lambda * scalar_nonlinearity_at(x)));
    let c = scalar_sandwich(g, file.lambda, vp);
    Ok(vec![
        residual_verdict(r, residual_tol),
        sandwich_verdict(&[w.into_vec()], &[&bg], c),
        identity_verdict("identity", integral, vp.total(), g.volume(), residual_tol),
        outcome_verdict(&file.outcome),
    ])
}
