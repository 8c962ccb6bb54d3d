use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use nehari_core::calculus::check_ibp;
use nehari_core::convergence::sweep;
use nehari_core::io::{format_significant, graph_hash, parse_graph, parse_potential};
use nehari_core::variational::{
    check_bounds, lower_bounds, solve_dirichlet, solve_ground_state, ProblemParams, Solution,
    SolverConfig,
};
use nehari_core::{validate_assumptions, Domain, Graph, Potential, VertexFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

/// Ground states of Δ²u − Δu + (λa+1)u = |u|^{p−2}u on weighted graphs.
#[derive(Parser)]
#[command(name = "nehari", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print graph statistics and the potential-well report.
    Info(InputArgs),
    /// Check the integration-by-parts identities on random functions.
    Verify(VerifyArgs),
    /// Ground state of the full problem for one λ.
    Solve(SolveArgs),
    /// Ground state of the Dirichlet problem on a vertex set.
    SolveDirichlet(DirichletArgs),
    /// Ground states along a λ ladder, compared with the Dirichlet limit.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Graph file.
    #[arg(long)]
    graph: PathBuf,
    /// Potential file of `vertex <id> <a>` lines; overrides an inline potential.
    #[arg(long)]
    potential: Option<PathBuf>,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, env = "NEHARI_TOL", default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 20_000)]
    max_iter: usize,
    #[arg(long, default_value_t = 8)]
    n_starts: usize,
    #[arg(long, env = "NEHARI_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    step_init: f64,
    #[arg(long, default_value_t = 0.5)]
    backtrack_factor: f64,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            tol: self.tol,
            max_iter: self.max_iter,
            n_starts: self.n_starts,
            seed: self.seed,
            step_init: self.step_init,
            backtrack_factor: self.backtrack_factor,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Include solution fields in JSON sweep reports.
    #[arg(long)]
    emit_fields: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Domain for the local identities: comma-separated vertex ids, or `well`.
    #[arg(long)]
    omega: Option<String>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, env = "NEHARI_SEED", default_value_t = 0)]
    seed: u64,
    /// Largest accepted relative residual.
    #[arg(long, default_value_t = 1e-10)]
    threshold: f64,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    p: f64,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct DirichletArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Comma-separated vertex ids, or `well` for the zero set of the potential.
    #[arg(long, default_value = "well")]
    omega: String,
    #[arg(long)]
    p: f64,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    p: f64,
    /// Increasing λ values, e.g. `1,10,...,1e4` for a geometric ladder.
    #[arg(long)]
    lambdas: String,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    out: OutputArgs,
}

/// Expands `a,b,...,c` into the geometric ladder `a, b, b·r, …, c` with
/// `r = b/a`. Plain lists pass through.
fn parse_lambdas(spec: &str) -> Result<Vec<f64>> {
    let toks: Vec<&str> = spec.split(',').map(str::trim).collect();
    let mut out: Vec<f64> = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        if toks[i] == "..." {
            if out.len() < 2 || i + 1 >= toks.len() {
                bail!("'...' needs two values before it and one after");
            }
            let (a, b) = (out[out.len() - 2], out[out.len() - 1]);
            let end: f64 = toks[i + 1].parse().with_context(|| format!("bad lambda '{}'", toks[i + 1]))?;
            let ratio = b / a;
            if !(ratio > 1.0) {
                bail!("'...' needs an increasing pair before it");
            }
            let mut next = b * ratio;
            while next < end * (1.0 - 1e-9) {
                out.push(next);
                next *= ratio;
            }
            out.push(end);
            i += 2;
        } else {
            out.push(toks[i].parse().with_context(|| format!("bad lambda '{}'", toks[i]))?);
            i += 1;
        }
    }
    Ok(out)
}

fn load(input: &InputArgs) -> Result<(Graph, Option<Potential>)> {
    let text = std::fs::read_to_string(&input.graph)
        .with_context(|| format!("reading {}", input.graph.display()))?;
    let file = parse_graph(&text).with_context(|| format!("in {}", input.graph.display()))?;
    let potential = match &input.potential {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            Some(parse_potential(&text, &file.graph).with_context(|| format!("in {}", path.display()))?)
        }
        None => file.potential,
    };
    Ok((file.graph, potential))
}

fn require_potential(a: Option<Potential>) -> Result<Potential> {
    a.context("this command needs a potential (inline column or --potential)")
}

fn parse_omega(spec: &str, g: &Graph, a: Option<&Potential>) -> Result<Domain> {
    if spec == "well" {
        let a = a.context("--omega well needs a potential")?;
        return Ok(a.well_domain(g)?);
    }
    let vertices = spec
        .split(',')
        .map(|t| g.vertex(t.trim()))
        .collect::<nehari_core::Result<Vec<_>>>()?;
    Ok(Domain::new(g, &vertices)?)
}

fn emit(out: &OutputArgs, text: &str) -> Result<()> {
    match &out.output {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn field_csv(g: &Graph, u: &VertexFunction) -> String {
    let mut s = String::from("vertex,u\n");
    for x in 0..g.n_vertices() {
        s.push_str(&format!("{},{}\n", g.label(x), format_significant(u[x], 12)));
    }
    s
}

fn solution_report(
    g: &Graph,
    a: Option<&Potential>,
    sol: &Solution,
    problem: serde_json::Value,
    cfg: &SolverConfig,
    p: f64,
) -> Result<String> {
    let doc = json!({
        "graph_hash": graph_hash(g, a),
        "config": cfg,
        "problem": problem,
        "labels": g.labels(),
        "solution": sol,
        "bounds": lower_bounds(g, p)?,
        "bound_check": check_bounds(g, sol, p)?,
    });
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

fn status(converged: bool) -> ExitCode {
    if converged {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn info(args: &InputArgs) -> Result<ExitCode> {
    let (g, a) = load(args)?;
    println!("vertices        {}", g.n_vertices());
    println!("edges           {}", g.n_edges());
    println!("mu_min          {}", g.mu_min());
    println!("max weight sum  {}", g.max_weight_sum());
    println!("diameter        {}", g.diameter());
    println!("graph hash      {}", graph_hash(&g, a.as_ref()));
    if let Some(a) = &a {
        let r = validate_assumptions(&g, a)?;
        let well: Vec<&str> = r.well.iter().map(|&x| g.label(x)).collect();
        println!("well            {}", well.join(","));
        println!("well connected  {}", r.well_connected);
        if let Some(m) = r.min_outside_well {
            println!("min a off well  {m}");
        }
        let rings: Vec<String> = r.ring_minima.iter().map(|v| v.to_string()).collect();
        println!("ring minima     {}", rings.join(","));
        println!("growth monotone {}", r.growth_monotone);
        for w in &r.warnings {
            println!("warning: {w}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(args: &VerifyArgs) -> Result<ExitCode> {
    let (g, a) = load(&args.input)?;
    let domain = match (&args.omega, &a) {
        (Some(spec), _) => Some(parse_omega(spec, &g, a.as_ref())?),
        (None, Some(a)) if !a.well().is_empty() => Some(a.well_domain(&g)?),
        _ => None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let n = g.n_vertices();
    let mut worst = [0.0f64; 4];
    for _ in 0..args.trials {
        let u = VertexFunction::from_fn(&g, |_| rng.gen_range(-1.0..1.0));
        let v = VertexFunction::from_fn(&g, |x| match &domain {
            Some(d) if !d.contains(x) => 0.0,
            _ => rng.gen_range(-1.0..1.0),
        });
        let r = check_ibp(&g, &u, &v, domain.as_ref())?;
        for (w, res) in worst.iter_mut().zip([Some(r.r1), r.r2, Some(r.r3), r.r4]) {
            if let Some(res) = res {
                *w = w.max(res.relative());
            }
        }
    }
    println!("{} trials on {n} vertices", args.trials);
    for (i, w) in worst.iter().enumerate() {
        let local = i % 2 == 1;
        if local && domain.is_none() {
            println!("R{} skipped (no domain)", i + 1);
        } else {
            println!("R{} max relative residual {w:e}", i + 1);
        }
    }
    let breach = worst.iter().any(|&w| !(w <= args.threshold));
    if breach {
        eprintln!("residual above {:e}", args.threshold);
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn solve(args: &SolveArgs) -> Result<ExitCode> {
    let (g, a) = load(&args.input)?;
    let a = require_potential(a)?;
    let cfg = args.solver.config();
    let params = ProblemParams::new(a.clone(), args.lambda, args.p)?;
    let start = Instant::now();
    let sol = solve_ground_state(&g, &params, &cfg)?;
    log::info!("solved in {:.3}s", start.elapsed().as_secs_f64());
    let text = match args.out.format.unwrap_or(Format::Json) {
        Format::Csv => field_csv(&g, &sol.u),
        Format::Json => solution_report(
            &g,
            Some(&a),
            &sol,
            json!({"kind": "full", "lambda": args.lambda, "p": args.p}),
            &cfg,
            args.p,
        )?,
    };
    emit(&args.out, &text)?;
    Ok(status(sol.converged))
}

fn solve_dir(args: &DirichletArgs) -> Result<ExitCode> {
    let (g, a) = load(&args.input)?;
    let domain = parse_omega(&args.omega, &g, a.as_ref())?;
    let cfg = args.solver.config();
    let start = Instant::now();
    let sol = solve_dirichlet(&g, &domain, args.p, &cfg)?;
    log::info!("solved in {:.3}s", start.elapsed().as_secs_f64());
    let omega: Vec<&str> = domain.interior().iter().map(|&x| g.label(x)).collect();
    let text = match args.out.format.unwrap_or(Format::Json) {
        Format::Csv => field_csv(&g, &sol.u),
        Format::Json => solution_report(
            &g,
            a.as_ref(),
            &sol,
            json!({"kind": "dirichlet", "omega": omega, "p": args.p}),
            &cfg,
            args.p,
        )?,
    };
    emit(&args.out, &text)?;
    Ok(status(sol.converged))
}

fn run_sweep(args: &SweepArgs) -> Result<ExitCode> {
    let (g, a) = load(&args.input)?;
    let a = require_potential(a)?;
    let lambdas = parse_lambdas(&args.lambdas)?;
    let cfg = args.solver.config();
    let start = Instant::now();
    let report = sweep(&g, &a, args.p, &lambdas, &cfg)?;
    log::info!("swept {} values in {:.3}s", lambdas.len(), start.elapsed().as_secs_f64());
    for r in &report.rows {
        if let Some(e) = &r.error {
            log::warn!("lambda {}: {e}", r.lambda);
        }
    }
    let text = match args.out.format.unwrap_or(Format::Csv) {
        Format::Csv => report.to_csv(),
        Format::Json => {
            let doc = report.to_json(&cfg, &graph_hash(&g, Some(&a)), args.out.emit_fields);
            serde_json::to_string_pretty(&doc)? + "\n"
        }
    };
    emit(&args.out, &text)?;
    let ok = report.dirichlet.converged && report.rows.iter().all(|r| r.converged);
    Ok(status(ok))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Info(a) => info(a),
        Command::Verify(a) => verify(a),
        Command::Solve(a) => solve(a),
        Command::SolveDirichlet(a) => solve_dir(a),
        Command::Sweep(a) => run_sweep(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
