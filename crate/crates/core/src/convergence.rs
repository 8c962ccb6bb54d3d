//! λ-sweeps: ground states along an increasing coupling ladder, compared
//! against the Dirichlet ground state on the potential well.

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::function::VertexFunction;
use crate::graph::{validate_assumptions, Graph, Potential};
use crate::io::format_significant;
use crate::spaces::{inner_product, norm, SpaceSpec};
use crate::variational::{
    solve_dirichlet, solve_ground_state_from, ProblemParams, Solution, SolverConfig,
};

pub const CSV_HEADER: &str = "lambda,m_lambda,tail,exterior_mass,diff_w22,diff_E";

/// Distances between a solution and a reference after removing the `±` ambiguity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    /// `+1` or `−1`: the sign applied to `u` before differencing.
    pub sign: f64,
    pub diff_w22: f64,
    pub diff_e: f64,
    pub diff_sup: f64,
}

/// Compares `u` with `u0`, first flipping `u` if that increases the `E_λ`
/// inner product with `u0`.
pub fn compare(
    g: &Graph,
    u: &VertexFunction,
    u0: &VertexFunction,
    params: &ProblemParams,
) -> Result<Comparison> {
    let espace = SpaceSpec::ELambda {
        potential: params.potential(),
        lambda: params.lambda(),
    };
    let ip = inner_product(g, u, u0, espace)?;
    let sign = if ip < 0.0 { -1.0 } else { 1.0 };
    let diff = u.axpby(sign, u0, -1.0)?;
    Ok(Comparison {
        sign,
        diff_w22: norm(g, &diff, SpaceSpec::W22)?,
        diff_e: norm(g, &diff, espace)?,
        diff_sup: diff.max_abs(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub m_lambda: f64,
    /// `λ ∫_V a u² dμ`.
    pub tail: f64,
    /// `∫_{V∖Ω} u² dμ / ∫_V u² dμ`.
    pub exterior_mass: f64,
    pub diff_w22: f64,
    pub diff_e: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Set when this row's solve failed; numeric fields are then NaN.
    pub error: Option<String>,
    /// Ground state, sign-aligned with the Dirichlet solution.
    #[serde(skip)]
    pub u: Option<VertexFunction>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DirichletSummary {
    pub well: Vec<usize>,
    pub boundary: Vec<usize>,
    pub m_omega: f64,
    pub converged: bool,
    pub sup_norm: f64,
    #[serde(skip)]
    pub solution: Solution,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub p: f64,
    pub rows: Vec<SweepRow>,
    pub dirichlet: DirichletSummary,
}

impl SweepReport {
    /// One line per λ under [`CSV_HEADER`], 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let fields = [r.lambda, r.m_lambda, r.tail, r.exterior_mass, r.diff_w22, r.diff_e];
            let line: Vec<String> = fields.iter().map(|&v| format_significant(v, 12)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// Archival JSON document. Solution fields are included only when
    /// `emit_fields` is set.
    pub fn to_json(
        &self,
        cfg: &SolverConfig,
        graph_hash: &str,
        emit_fields: bool,
    ) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut v = serde_json::to_value(r).expect("row serializes");
                if emit_fields {
                    v["u"] = json!(r.u.as_ref().map(|u| u.values().to_vec()));
                }
                v
            })
            .collect();
        let mut dirichlet = serde_json::to_value(&self.dirichlet).expect("summary serializes");
        if emit_fields {
            dirichlet["u0"] = json!(self.dirichlet.solution.u.values());
        }
        json!({
            "graph_hash": graph_hash,
            "config": cfg,
            "p": self.p,
            "dirichlet": dirichlet,
            "rows": rows,
        })
    }
}

fn exterior_mass(g: &Graph, u: &VertexFunction, well: &crate::graph::Domain) -> f64 {
    let (mut outside, mut total) = (0.0, 0.0);
    for (x, &v) in u.values().iter().enumerate() {
        let m = g.mu(x) * v * v;
        total += m;
        if !well.contains(x) {
            outside += m;
        }
    }
    if total > 0.0 {
        outside / total
    } else {
        f64::NAN
    }
}

fn failed_row(lambda: f64, err: &Error) -> SweepRow {
    SweepRow {
        lambda,
        m_lambda: f64::NAN,
        tail: f64::NAN,
        exterior_mass: f64::NAN,
        diff_w22: f64::NAN,
        diff_e: f64::NAN,
        converged: false,
        iterations: 0,
        error: Some(err.to_string()),
        u: None,
    }
}

/// Solves the Dirichlet problem on the well of `a` once, then the full
/// problem for every `λ` in `lambdas` (strictly increasing, positive).
///
/// Each full solve is started from the Dirichlet solution and from the
/// previous row's solution (sign-aligned with the Dirichlet solution) before
/// the generated starts. A failing row is recorded and the sweep continues.
pub fn sweep(
    g: &Graph,
    a: &Potential,
    p: f64,
    lambdas: &[f64],
    cfg: &SolverConfig,
) -> Result<SweepReport> {
    if lambdas.is_empty() {
        return Err(Error::InvalidParameter("empty lambda list".into()));
    }
    if lambdas.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
        return Err(Error::InvalidParameter("lambdas must be positive".into()));
    }
    if lambdas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("lambdas must be strictly increasing".into()));
    }
    let report = validate_assumptions(g, a)?;
    if !report.well_connected {
        return Err(Error::DisconnectedDomain);
    }
    let well = a.well_domain(g)?;
    let dir = solve_dirichlet(g, &well, p, cfg)?;
    let u0 = dir.u.clone();

    let mut rows = Vec::with_capacity(lambdas.len());
    let mut previous: Option<VertexFunction> = None;
    for &lambda in lambdas {
        let params = match ProblemParams::new(a.clone(), lambda, p) {
            Ok(params) => params,
            Err(e) => {
                rows.push(failed_row(lambda, &e));
                continue;
            }
        };
        let mut warm = vec![&u0];
        if let Some(prev) = &previous {
            warm.push(prev);
        }
        let sol = match solve_ground_state_from(g, &params, cfg, &warm) {
            Ok(sol) => sol,
            Err(e) => {
                rows.push(failed_row(lambda, &e));
                continue;
            }
        };
        let cmp = compare(g, &sol.u, &u0, &params)?;
        let u = sol.u.scaled(cmp.sign);
        let tail: f64 = (0..g.n_vertices())
            .map(|x| lambda * a.values()[x] * g.mu(x) * u[x] * u[x])
            .sum();
        rows.push(SweepRow {
            lambda,
            m_lambda: sol.energy,
            tail,
            exterior_mass: exterior_mass(g, &u, &well),
            diff_w22: cmp.diff_w22,
            diff_e: cmp.diff_e,
            converged: sol.converged,
            iterations: sol.iterations,
            error: None,
            u: Some(u.clone()),
        });
        previous = Some(u);
    }

    Ok(SweepReport {
        p,
        rows,
        dirichlet: DirichletSummary {
            well: well.interior().to_vec(),
            boundary: well.boundary().to_vec(),
            m_omega: dir.energy,
            converged: dir.converged,
            sup_norm: dir.u.max_abs(),
            solution: dir,
        },
    })
}
