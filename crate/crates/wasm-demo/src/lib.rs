//! Browser bindings for three small demos on a square grid whose potential
//! vanishes on a centred block: the ground state for one λ, the energy curve
//! along a λ ladder, and the cutoff functions.
//!
//! Every binding returns a JSON string. The `*_json` functions hold the logic
//! and are plain Rust, so they also run natively.

use nehari_core::calculus::cutoff;
use nehari_core::convergence::sweep;
use nehari_core::spaces::{norm, SpaceSpec};
use nehari_core::variational::{solve_ground_state, ProblemParams, SolverConfig};
use nehari_core::{Graph, Potential, VertexFunction};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const MAX_SIDE: usize = 41;

fn grid_with_well(side: usize, well: usize) -> Result<(Graph, Potential), String> {
    if side == 0 || side > MAX_SIDE {
        return Err(format!("grid side must be between 1 and {MAX_SIDE}"));
    }
    if well == 0 || well > side {
        return Err("well side must be between 1 and the grid side".into());
    }
    let g = Graph::grid(side, side).map_err(|e| e.to_string())?;
    let lo = (side - well) / 2;
    let hi = lo + well;
    let a = (0..side * side)
        .map(|x| {
            let (r, c) = (x / side, x % side);
            if (lo..hi).contains(&r) && (lo..hi).contains(&c) {
                0.0
            } else {
                1.0
            }
        })
        .collect();
    let a = Potential::new(a).map_err(|e| e.to_string())?;
    Ok((g, a))
}

fn config() -> SolverConfig {
    SolverConfig {
        n_starts: 3,
        ..SolverConfig::default()
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct GroundState {
    side: usize,
    field: Vec<f64>,
    energy: f64,
    exterior_mass: f64,
    converged: bool,
    iterations: usize,
}

pub fn ground_state_json(side: usize, well: usize, lambda: f64, p: f64) -> Result<String, String> {
    let (g, a) = grid_with_well(side, well)?;
    let params = ProblemParams::new(a.clone(), lambda, p).map_err(|e| e.to_string())?;
    let sol = solve_ground_state(&g, &params, &config()).map_err(|e| e.to_string())?;
    let (mut outside, mut total) = (0.0, 0.0);
    for (x, &v) in sol.u.values().iter().enumerate() {
        total += v * v;
        if a.values()[x] > 0.0 {
            outside += v * v;
        }
    }
    to_json(&GroundState {
        side,
        field: sol.u.values().to_vec(),
        energy: sol.energy,
        exterior_mass: outside / total,
        converged: sol.converged,
        iterations: sol.iterations,
    })
}

#[derive(Serialize)]
struct Curve {
    m_omega: f64,
    lambda: Vec<f64>,
    m_lambda: Vec<f64>,
    exterior_mass: Vec<f64>,
}

/// `count` λ values spaced evenly in log scale from `lambda_min` to `lambda_max`.
pub fn sweep_json(
    side: usize,
    well: usize,
    p: f64,
    lambda_min: f64,
    lambda_max: f64,
    count: usize,
) -> Result<String, String> {
    if !(lambda_min > 0.0 && lambda_max > lambda_min) || !(2..=40).contains(&count) {
        return Err("need 0 < lambda_min < lambda_max and 2 to 40 points".into());
    }
    let (g, a) = grid_with_well(side, well)?;
    let step = (lambda_max / lambda_min).ln() / (count - 1) as f64;
    let lambdas: Vec<f64> = (0..count)
        .map(|i| lambda_min * (step * i as f64).exp())
        .collect();
    let report = sweep(&g, &a, p, &lambdas, &config()).map_err(|e| e.to_string())?;
    to_json(&Curve {
        m_omega: report.dirichlet.m_omega,
        lambda: report.rows.iter().map(|r| r.lambda).collect(),
        m_lambda: report.rows.iter().map(|r| r.m_lambda).collect(),
        exterior_mass: report.rows.iter().map(|r| r.exterior_mass).collect(),
    })
}

#[derive(Serialize)]
struct Cutoff {
    side: usize,
    eta: Vec<f64>,
    /// `‖u η_k − u‖_{W^{2,2}}` for `u = 2^{−d(·, centre)}`.
    w22_distance: f64,
}

pub fn cutoff_json(side: usize, k: usize) -> Result<String, String> {
    let (g, _) = grid_with_well(side, 1)?;
    let centre = (side / 2) * side + side / 2;
    let eta = cutoff(&g, centre, k).map_err(|e| e.to_string())?;
    let d = g.distances_from(centre).map_err(|e| e.to_string())?;
    let u = VertexFunction::from_fn(&g, |x| 0.5f64.powi(d[x] as i32));
    let diff = u
        .mul(&eta)
        .and_then(|ue| ue.axpby(1.0, &u, -1.0))
        .map_err(|e| e.to_string())?;
    let dist = norm(&g, &diff, SpaceSpec::W22).map_err(|e| e.to_string())?;
    to_json(&Cutoff {
        side,
        eta: eta.values().to_vec(),
        w22_distance: dist,
    })
}

#[wasm_bindgen]
pub fn ground_state(side: usize, well: usize, lambda: f64, p: f64) -> Result<String, JsValue> {
    ground_state_json(side, well, lambda, p).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn lambda_sweep(
    side: usize,
    well: usize,
    p: f64,
    lambda_min: f64,
    lambda_max: f64,
    count: usize,
) -> Result<String, JsValue> {
    sweep_json(side, well, p, lambda_min, lambda_max, count).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn cutoff_profile(side: usize, k: usize) -> Result<String, JsValue> {
    cutoff_json(side, k).map_err(|e| JsValue::from_str(&e))
}
