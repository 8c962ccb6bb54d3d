//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use nehari_core::calculus::{check_ibp, cutoff};
use nehari_core::convergence::{sweep, SweepReport};
use nehari_core::spaces::{embedding_constant, norm, SpaceSpec};
use nehari_core::variational::{
    energy, energy_gradient, lower_bounds, nehari_level, nehari_project, solve_dirichlet,
    ProblemParams, SolverConfig,
};
use nehari_core::{Domain, Graph, Potential, VertexFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A converged state to test against the lower bounds: `(graph, p, E-norm, energy)`.
type Converged = (Graph, f64, f64, f64);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: Vec<String>, summary: String) -> Outcome {
    if failures.is_empty() {
        Outcome { pass: true, detail: summary }
    } else {
        Outcome {
            pass: false,
            detail: format!("{summary}; {}", failures.join("; ")),
        }
    }
}

fn within(elapsed: Duration, limit: f64, failures: &mut Vec<String>) {
    if elapsed.as_secs_f64() >= limit {
        failures.push(format!("took {:.2}s (limit {limit}s)", elapsed.as_secs_f64()));
    }
}

fn ibp_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let n = rng.gen_range(2..=50);
        let extra = rng.gen_range(0..=2 * n);
        let raw = random_graph(&mut rng, n, extra, 0.5, 2.0);
        let g = raw.build();
        let size = rng.gen_range(1..=n);
        let omega = random_connected_subset(&mut rng, &raw, size);
        let d = Domain::new(&g, &omega).unwrap();
        let u = function(&g, random_values(&mut rng, n, 10.0));
        let v = VertexFunction::from_fn(&g, |x| {
            if d.contains(x) {
                rng.gen_range(-10.0..10.0)
            } else {
                0.0
            }
        });
        let r = check_ibp(&g, &u, &v, Some(&d)).unwrap();
        let rel = r.max_relative();
        worst = worst.max(rel);
        if !(rel <= 1e-10) || r.r2.is_none() || r.r4.is_none() {
            failures.push(format!("graph {i}: relative residual {rel:e}"));
        }
    }
    within(start.elapsed(), 5.0, &mut failures);
    outcome(
        failures,
        format!("200 graphs, worst relative residual {worst:.1e}, {:.2}s", start.elapsed().as_secs_f64()),
    )
}

fn p3() -> (Graph, Potential) {
    (
        Graph::path(3).unwrap(),
        Potential::new(vec![1.0, 0.0, 1.0]).unwrap(),
    )
}

fn p3_dirichlet(conv: &mut Vec<Converged>) -> Outcome {
    let start = Instant::now();
    let (g, a) = p3();
    let d = a.well_domain(&g).unwrap();
    let cfg = SolverConfig::default();
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    for (p, m, s) in [(4.0, 20.25, 3.0), (3.0, 121.5, 9.0)] {
        let sol = solve_dirichlet(&g, &d, p, &cfg).unwrap();
        let field_err = (sol.u[0].abs()).max(sol.u[2].abs()).max((sol.u[1].abs() - s).abs());
        if !sol.converged || (sol.energy - m).abs() > 1e-8 || field_err > 1e-6 {
            failures.push(format!(
                "p={p}: energy {} field error {field_err:e} converged {}",
                sol.energy, sol.converged
            ));
        }
        if sol.u[0] != 0.0 || sol.u[2] != 0.0 {
            failures.push(format!("p={p}: nonzero outside the well"));
        }
        summary.push(format!("p={p}: m={:.10}", sol.energy));
        if sol.converged {
            conv.push((g.clone(), p, sol.norm, sol.energy));
        }
    }
    within(start.elapsed(), 1.0, &mut failures);
    outcome(failures, summary.join(", "))
}

fn sweep_checks(report: &SweepReport, failures: &mut Vec<String>) {
    let m_omega = report.dirichlet.m_omega;
    for w in report.rows.windows(2) {
        if w[1].m_lambda < w[0].m_lambda - 1e-9 {
            failures.push(format!(
                "m decreases from {} to {} at lambda={}",
                w[0].m_lambda, w[1].m_lambda, w[1].lambda
            ));
        }
    }
    for r in &report.rows {
        if !r.converged {
            failures.push(format!("lambda={} did not converge", r.lambda));
        }
        if r.m_lambda > m_omega + 1e-9 {
            failures.push(format!("m={} exceeds m_omega={m_omega} at lambda={}", r.m_lambda, r.lambda));
        }
    }
}

fn collect(report: &SweepReport, g: &Graph, a: &Potential, p: f64, conv: &mut Vec<Converged>) {
    if report.dirichlet.converged {
        conv.push((g.clone(), p, report.dirichlet.solution.norm, report.dirichlet.m_omega));
    }
    for r in report.rows.iter().filter(|r| r.converged) {
        let u = r.u.as_ref().unwrap();
        let e = norm(g, u, SpaceSpec::ELambda { potential: a, lambda: r.lambda }).unwrap();
        conv.push((g.clone(), p, e, r.m_lambda));
    }
}


fn p3_sweep(conv: &mut Vec<Converged>) -> Outcome {
    let start = Instant::now();
    let (g, a) = p3();
    let lambdas = [10.0, 1e2, 1e3, 1e4, 1e5, 1e6];
    let report = sweep(&g, &a, 4.0, &lambdas, &SolverConfig::default()).unwrap();
    let mut failures = Vec::new();
    sweep_checks(&report, &mut failures);
    let (first, last) = (&report.rows[0], report.rows.last().unwrap());
    if (last.m_lambda - 20.25).abs() > 0.01 * 20.25 {
        failures.push(format!("m at 1e6 is {}", last.m_lambda));
    }
    if !(last.tail < first.tail && last.exterior_mass < first.exterior_mass) {
        failures.push("tail or exterior mass did not shrink".into());
    }
    if !(last.diff_w22 <= 0.15) {
        failures.push(format!("W22 distance to u0 is {}", last.diff_w22));
    }
    within(start.elapsed(), 10.0, &mut failures);
    collect(&report, &g, &a, 4.0, conv);
    outcome(
        failures,
        format!(
            "m: {:.4} -> {:.6}, W22 distance {:.2e}",
            first.m_lambda, last.m_lambda, last.diff_w22
        ),
    )
}

fn lattice(conv: &mut Vec<Converged>) -> Outcome {
    let start = Instant::now();
    let g = Graph::grid(15, 15).unwrap();
    let a = Potential::new(
        (0..225)
            .map(|x| {
                let (r, c) = (x / 15, x % 15);
                if (6..=8).contains(&r) && (6..=8).contains(&c) {
                    0.0
                } else {
                    1.0
                }
            })
            .collect(),
    )
    .unwrap();
    let lambdas = [1.0, 1e1, 1e2, 1e3, 1e4];
    let report = sweep(&g, &a, 4.0, &lambdas, &SolverConfig::default()).unwrap();
    let mut failures = Vec::new();
    sweep_checks(&report, &mut failures);
    for w in report.rows.windows(2) {
        if !(w[1].exterior_mass < w[0].exterior_mass) {
            failures.push(format!("exterior mass does not decrease at lambda={}", w[1].lambda));
        }
    }
    let last = report.rows.last().unwrap();
    if !(last.exterior_mass < 0.05) {
        failures.push(format!("exterior mass {} at 1e4", last.exterior_mass));
    }
    within(start.elapsed(), 60.0, &mut failures);
    collect(&report, &g, &a, 4.0, conv);
    outcome(
        failures,
        format!(
            "m_omega {:.4}, m at 1e4 {:.4}, exterior mass {:.2e}",
            report.dirichlet.m_omega, last.m_lambda, last.exterior_mass
        ),
    )
}

fn embedding_and_bounds(conv: &[Converged]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    for i in 0..500 {
        let n = rng.gen_range(1..=30);
        let extra = rng.gen_range(0..=n);
        let raw = random_graph(&mut rng, n, extra, 0.5, 2.0);
        let g = raw.build();
        let q = [2.0, 3.0, 4.0, 7.0, f64::INFINITY][rng.gen_range(0..5)];
        let lambda = 10f64.powf(rng.gen_range(0.0..6.0));
        let a = Potential::new((0..n).map(|_| rng.gen_range(0.0..2.0)).collect()).unwrap();
        let u = function(&g, random_values(&mut rng, n, 5.0));
        let lq = norm(&g, &u, SpaceSpec::Lq { q, subset: None }).unwrap();
        let e = norm(&g, &u, SpaceSpec::ELambda { potential: &a, lambda }).unwrap();
        if lq > embedding_constant(&g, q).unwrap() * e * (1.0 + 1e-12) {
            failures.push(format!("sample {i}: q={q} |u|_q={lq} |u|_E={e}"));
        }
    }
    for (g, p, e, m) in conv {
        let b = lower_bounds(g, *p).unwrap();
        if *e < b.nu * (1.0 - 1e-12) || *m < b.energy_floor * (1.0 - 1e-12) {
            failures.push(format!("p={p}: norm {e} vs {}, energy {m} vs {}", b.nu, b.energy_floor));
        }
    }
    outcome(
        failures,
        format!("500 embedding samples, {} converged solutions checked", conv.len()),
    )
}

fn gradient_projection() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut failures = Vec::new();
    let (mut worst_fd, mut worst_id, mut worst_proj): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for i in 0..100 {
        let n = rng.gen_range(1..=20);
        let extra = rng.gen_range(0..=n);
        let raw = random_graph(&mut rng, n, extra, 0.5, 2.0);
        let g = raw.build();
        let p = rng.gen_range(2.2..6.0);
        let lambda = rng.gen_range(1.0..50.0);
        let a: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0)).collect();
        let params = ProblemParams::new(Potential::new(a.clone()).unwrap(), lambda, p).unwrap();
        let u = random_values(&mut rng, n, 1.5);
        let v = random_values(&mut rng, n, 1.0);
        let uf = function(&g, u.clone());

        let r = energy_gradient(&g, &uf, &params).unwrap();
        let analytic: f64 = (0..n).map(|x| raw.mu[x] * r[x] * v[x]).sum();
        let fd = directional_fd(|w| ref_energy(&raw, &a, lambda, p, w), &u, &v, 1e-5);
        let fd_rel = (fd - analytic).abs() / analytic.abs().max(1.0);
        worst_fd = worst_fd.max(fd_rel);

        if uf.is_zero() {
            continue;
        }
        let (_, tu) = nehari_project(&g, &uf, &params).unwrap();
        let j = energy(&g, &tu, &params).unwrap();
        let level = nehari_level(&g, &uf, &params).unwrap();
        let id_rel = (j - level).abs() / level.abs();
        worst_id = worst_id.max(id_rel);
        let rt = energy_gradient(&g, &tu, &params).unwrap();
        let jp: f64 = (0..n).map(|x| raw.mu[x] * rt[x] * tu[x]).sum();
        let e = norm(&g, &tu, SpaceSpec::ELambda { potential: params.potential(), lambda }).unwrap();
        let proj = jp.abs() / (e * e);
        worst_proj = worst_proj.max(proj);

        if !(fd_rel <= 1e-6 && id_rel <= 1e-10 && proj <= 1e-10) {
            failures.push(format!("point {i}: fd {fd_rel:e} identity {id_rel:e} projection {proj:e}"));
        }
    }
    outcome(
        failures,
        format!(
            "worst fd {worst_fd:.1e}, identity {worst_id:.1e}, projection {worst_proj:.1e}"
        ),
    )
}

fn cutoff_density() -> Outcome {
    let g = Graph::path(200).unwrap();
    let x0 = 0;
    let radius = 199;
    let u = VertexFunction::from_fn(&g, |x| 0.5f64.powi(x as i32));
    let mut failures = Vec::new();
    let mut prev = f64::INFINITY;
    let mut last = 0.0;
    for k in 1..=radius {
        let eta = cutoff(&g, x0, k).unwrap();
        let diff = u.mul(&eta).unwrap().axpby(1.0, &u, -1.0).unwrap();
        let d = norm(&g, &diff, SpaceSpec::W22).unwrap();
        if d > prev {
            failures.push(format!("k={k}: {d:e} > {prev:e}"));
        }
        if 2 * k > radius && !(d < 1e-6) {
            failures.push(format!("k={k}: {d:e} not below 1e-6"));
        }
        prev = d;
        last = d;
    }
    outcome(failures, format!("k = 1..{radius}, final distance {last:.1e}"))
}

fn main() {
    let mut conv = Vec::new();
    let results = [
        ("1 integration by parts", ibp_suite()),
        ("2 P3 Dirichlet closed form", p3_dirichlet(&mut conv)),
        ("3 P3 lambda sweep", p3_sweep(&mut conv)),
        ("4 lattice concentration", lattice(&mut conv)),
    ];
    let rest = [
        ("5 embedding and lower bounds", embedding_and_bounds(&conv)),
        ("6 gradient and projection", gradient_projection()),
        ("7 cutoff density", cutoff_density()),
    ];
    let mut all = true;
    for (name, o) in results.iter().chain(rest.iter()) {
        println!("{} criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        all &= o.pass;
    }
    if !all {
        std::process::exit(1);
    }
}
