//! Energy functionals, Nehari projection and ground-state solvers for
//!
//! ```text
//! Δ²u − Δu + (λa + 1)u = |u|^{p−2}u          on V
//! Δ²u − Δu + u = |u|^{p−2}u on Ω,  u = 0 off Ω   (Dirichlet limit)
//! ```
//!
//! Ground states minimize the energy over the Nehari manifold. Because the
//! quadratic part is 2-homogeneous and the nonlinear part p-homogeneous, this
//! is the same as minimizing the quotient `R(u) = ‖u‖²_E / ‖u‖_p²`:
//! projecting any `u ≠ 0` onto the manifold gives energy
//! `(½ − 1/p) R(u)^{p/(p−2)}`. The solver runs a Jacobi-preconditioned
//! Barzilai–Borwein descent on `R` over the unit `L^p` sphere from several
//! starts and projects the best result.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::calculus::{gradient_form_into, laplacian_into};
use crate::error::{Error, Result};
use crate::function::VertexFunction;
use crate::graph::{Domain, Graph, Potential, Vertex};
use crate::spaces::embedding_constant;

/// Data of the full-graph equation: potential `a`, coupling `λ`, exponent `p`.
#[derive(Debug, Clone, Serialize)]
pub struct ProblemParams {
    potential: Potential,
    lambda: f64,
    p: f64,
}

impl ProblemParams {
    pub fn new(potential: Potential, lambda: f64, p: f64) -> Result<Self> {
        check_p(p)?;
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
        }
        if lambda <= 1.0 {
            log::warn!("lambda = {lambda} <= 1; the existence theory assumes lambda > 1");
        }
        Ok(ProblemParams {
            potential,
            lambda,
            p,
        })
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.potential.clone(), lambda, self.p)
    }

    fn check(&self, g: &Graph) -> Result<()> {
        if self.potential.len() == g.n_vertices() {
            Ok(())
        } else {
            Err(Error::GraphMismatch)
        }
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 2.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::DegenerateProblem(p))
    }
}

/// Knobs of the multi-start quotient descent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverConfig {
    /// Relative tolerance on the Nehari and Euler–Lagrange residuals.
    pub tol: f64,
    /// Iteration cap per start.
    pub max_iter: usize,
    /// Number of generated starts: a bump, a constant, then random fields.
    pub n_starts: usize,
    pub seed: u64,
    /// First trial step (in the preconditioned metric).
    pub step_init: f64,
    /// Step shrink factor in the backtracking line search, in (0, 1).
    pub backtrack_factor: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-9,
            max_iter: 20_000,
            n_starts: 8,
            seed: 0,
            step_init: 1.0,
            backtrack_factor: 0.5,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter("tol must be positive".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be positive".into()));
        }
        if !(self.step_init > 0.0) || !self.step_init.is_finite() {
            return Err(Error::InvalidParameter("step_init must be positive".into()));
        }
        if !(self.backtrack_factor > 0.0 && self.backtrack_factor < 1.0) {
            return Err(Error::InvalidParameter("backtrack_factor must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

/// Result of a ground-state solve.
///
/// A solve that exhausts its iteration budget still returns its best point,
/// with `converged == false`.
#[derive(Debug, Clone, Serialize)]
pub struct Solution {
    pub u: VertexFunction,
    pub energy: f64,
    /// `|J′(u)u| / ‖u‖²`.
    pub nehari_residual: f64,
    /// Maximum pointwise defect of the equation.
    pub euler_lagrange_residual: f64,
    /// `max |u|^{p−1}`, the size of the nonlinear term.
    pub residual_scale: f64,
    /// `‖u‖` in the problem's energy space.
    pub norm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub restarts_used: usize,
    pub sign_changing: bool,
}

/// Which equation a residual refers to.
#[derive(Debug, Clone, Copy)]
pub enum Equation<'a> {
    Full(&'a ProblemParams),
    Dirichlet { domain: &'a Domain, p: f64 },
}

#[inline]
fn nonlinearity(s: f64, p: f64) -> f64 {
    if s == 0.0 {
        0.0
    } else {
        s.abs().powf(p - 2.0) * s
    }
}

/// The quadratic form `∫ |Δu|² + |∇u|² + m u²` with a per-vertex mass `m`,
/// restricted to a set of free coordinates (the others stay at zero).
struct Problem<'g> {
    g: &'g Graph,
    mass: Vec<f64>,
    free: Vec<bool>,
    p: f64,
    diag: Vec<f64>,
}

impl<'g> Problem<'g> {
    fn full(g: &'g Graph, params: &ProblemParams) -> Self {
        let a = params.potential.values();
        let mass = a.iter().map(|&ax| params.lambda * ax + 1.0).collect();
        Self::build(g, mass, vec![true; g.n_vertices()], params.p)
    }

    fn dirichlet(g: &'g Graph, domain: &Domain, p: f64) -> Self {
        Self::build(g, vec![1.0; g.n_vertices()], domain.interior_mask().to_vec(), p)
    }

    fn build(g: &'g Graph, mass: Vec<f64>, free: Vec<bool>, p: f64) -> Self {
        // diagonal of Δ² − Δ + m acting on indicator functions
        let diag = (0..g.n_vertices())
            .map(|x| {
                let mx = g.mu(x);
                let wx = g.weight_sum(x);
                let bi: f64 = g.neighbors(x).map(|(y, w)| w * (w / g.mu(y) + wx / mx)).sum();
                bi / mx + wx / mx + mass[x]
            })
            .collect();
        Problem {
            g,
            mass,
            free,
            p,
            diag,
        }
    }

    fn n(&self) -> usize {
        self.g.n_vertices()
    }

    /// `Q(u) = ∫ |Δu|² + Γ(u) + m u²`, using `lap` as scratch for `Δu`.
    fn quadratic(&self, u: &[f64], lap: &mut [f64], gam: &mut [f64]) -> f64 {
        laplacian_into(self.g, u, lap);
        gradient_form_into(self.g, u, u, gam);
        (0..self.n())
            .map(|x| self.g.mu(x) * (lap[x] * lap[x] + gam[x] + self.mass[x] * u[x] * u[x]))
            .sum()
    }

    /// `out = Δ²u − Δu + m u`, with `lap` holding `Δu` on return.
    fn apply(&self, u: &[f64], lap: &mut [f64], out: &mut [f64]) {
        laplacian_into(self.g, u, lap);
        laplacian_into(self.g, lap, out);
        for x in 0..self.n() {
            out[x] += -lap[x] + self.mass[x] * u[x];
        }
    }

    /// `∫ |u|^p`.
    fn power(&self, u: &[f64]) -> f64 {
        (0..self.n())
            .map(|x| self.g.mu(x) * u[x].abs().powf(self.p))
            .sum()
    }

    fn mask(&self, u: &mut [f64]) {
        for (v, &f) in u.iter_mut().zip(&self.free) {
            if !f {
                *v = 0.0;
            }
        }
    }
}

/// Scratch buffers and the current iterate on the unit `L^p` sphere.
struct Iterate {
    u: Vec<f64>,
    lu: Vec<f64>,
    grad: Vec<f64>,
    q: f64,
}

struct StartResult {
    u: Vec<f64>,
    iterations: usize,
    converged: bool,
}

impl Problem<'_> {
    fn iterate(&self, u: Vec<f64>, lap: &mut [f64], gam: &mut [f64]) -> Iterate {
        let n = self.n();
        let q = self.quadratic(&u, lap, gam);
        let mut lu = vec![0.0; n];
        self.apply(&u, lap, &mut lu);
        // L²(μ)-gradient of R on the sphere: 2 (Lu − Q |u|^{p−2}u)
        let grad = (0..n)
            .map(|x| {
                if self.free[x] {
                    2.0 * (lu[x] - q * nonlinearity(u[x], self.p))
                } else {
                    0.0
                }
            })
            .collect();
        Iterate { u, lu, grad, q }
    }

    /// Scales `u` to unit `L^p` norm; `None` for the zero function.
    fn normalize(&self, mut u: Vec<f64>) -> Option<Vec<f64>> {
        let pw = self.power(&u);
        if !(pw > 0.0) || !pw.is_finite() {
            return None;
        }
        let s = pw.powf(-1.0 / self.p);
        u.iter_mut().for_each(|v| *v *= s);
        Some(u)
    }

    /// Relative Euler–Lagrange defect of the Nehari projection of `it`.
    fn relative_defect(&self, it: &Iterate) -> f64 {
        let mut defect: f64 = 0.0;
        let mut umax: f64 = 0.0;
        for x in 0..self.n() {
            if self.free[x] {
                defect = defect.max((it.lu[x] - it.q * nonlinearity(it.u[x], self.p)).abs());
                umax = umax.max(it.u[x].abs());
            }
        }
        let scale = it.q * umax.powf(self.p - 1.0);
        if scale > 0.0 {
            defect / scale
        } else {
            f64::INFINITY
        }
    }

    fn descend(&self, start: &[f64], cfg: &SolverConfig) -> Option<StartResult> {
        const ARMIJO: f64 = 1e-4;
        const MAX_BACKTRACK: usize = 60;
        let n = self.n();
        let mut lap = vec![0.0; n];
        let mut gam = vec![0.0; n];
        let mut u0 = start.to_vec();
        self.mask(&mut u0);
        let u0 = self.normalize(u0)?;
        let mut it = self.iterate(u0, &mut lap, &mut gam);
        let mut step = cfg.step_init;
        let mut trial = vec![0.0; n];
        let mut dir = vec![0.0; n];

        for k in 0..cfg.max_iter {
            if self.relative_defect(&it) <= cfg.tol {
                return Some(StartResult {
                    u: it.u,
                    iterations: k,
                    converged: true,
                });
            }
            let mut slope = 0.0;
            for x in 0..n {
                dir[x] = -it.grad[x] / self.diag[x];
                slope += self.g.mu(x) * it.grad[x] * dir[x];
            }
            let r = it.q;
            // values of R agree only to a few ulps near the minimum
            let noise = 64.0 * f64::EPSILON * r.abs();
            let mut alpha = step;
            let mut accepted = None;
            for _ in 0..MAX_BACKTRACK {
                for x in 0..n {
                    trial[x] = it.u[x] + alpha * dir[x];
                }
                let pw = self.power(&trial);
                if pw > 0.0 && pw.is_finite() {
                    let q = self.quadratic(&trial, &mut lap, &mut gam);
                    let r_trial = q / pw.powf(2.0 / self.p);
                    if r_trial <= r + ARMIJO * alpha * slope + noise {
                        accepted = Some(alpha);
                        break;
                    }
                }
                alpha *= cfg.backtrack_factor;
            }
            let Some(alpha) = accepted else {
                let converged = self.relative_defect(&it) <= cfg.tol;
                return Some(StartResult {
                    u: it.u,
                    iterations: k,
                    converged,
                });
            };
            let next_u = self.normalize(trial.clone())?;
            let next = self.iterate(next_u, &mut lap, &mut gam);
            let (mut sms, mut sy) = (0.0, 0.0);
            for x in 0..n {
                let s = next.u[x] - it.u[x];
                let y = next.grad[x] - it.grad[x];
                let m = self.g.mu(x);
                sms += m * self.diag[x] * s * s;
                sy += m * s * y;
            }
            step = if sy > 0.0 && sms > 0.0 {
                (sms / sy).clamp(1e-12, 1e12)
            } else {
                (alpha / cfg.backtrack_factor).min(1e12)
            };
            it = next;
        }
        let converged = self.relative_defect(&it) <= cfg.tol;
        Some(StartResult {
            u: it.u,
            iterations: cfg.max_iter,
            converged,
        })
    }

    /// Projects `u` onto the Nehari manifold: `t = (Q/P)^{1/(p−2)}`.
    fn project(&self, u: &[f64]) -> Option<(f64, Vec<f64>)> {
        let n = self.n();
        let mut lap = vec![0.0; n];
        let mut gam = vec![0.0; n];
        let q = self.quadratic(u, &mut lap, &mut gam);
        let pw = self.power(u);
        if !(pw > 0.0) {
            return None;
        }
        let t = (q / pw).powf(1.0 / (self.p - 2.0));
        Some((t, u.iter().map(|&v| t * v).collect()))
    }

    /// Energy, Nehari residual, absolute defect, defect scale and norm of `u`.
    fn diagnostics(&self, u: &[f64]) -> (f64, f64, f64, f64, f64) {
        let n = self.n();
        let mut lap = vec![0.0; n];
        let mut gam = vec![0.0; n];
        let mut lu = vec![0.0; n];
        let q = self.quadratic(u, &mut lap, &mut gam);
        let pw = self.power(u);
        self.apply(u, &mut lap, &mut lu);
        let mut defect: f64 = 0.0;
        let mut umax: f64 = 0.0;
        for x in 0..n {
            if self.free[x] {
                defect = defect.max((lu[x] - nonlinearity(u[x], self.p)).abs());
                umax = umax.max(u[x].abs());
            }
        }
        let energy = 0.5 * q - pw / self.p;
        let nehari = if q > 0.0 { (q - pw).abs() / q } else { f64::INFINITY };
        (energy, nehari, defect, umax.powf(self.p - 1.0), q.sqrt())
    }

    /// Deepest free vertex: farthest from the non-free set, or the most
    /// central one when everything is free. Ties go to the lowest index.
    fn deepest(&self, bias: Option<&[f64]>) -> Vertex {
        let candidates: Vec<Vertex> = match bias {
            Some(a) => {
                let amin = (0..self.n())
                    .filter(|&x| self.free[x])
                    .map(|x| a[x])
                    .fold(f64::INFINITY, f64::min);
                (0..self.n()).filter(|&x| self.free[x] && a[x] == amin).collect()
            }
            None => (0..self.n()).filter(|&x| self.free[x]).collect(),
        };
        let outside: Vec<Vertex> = match bias {
            Some(a) => (0..self.n()).filter(|&x| a[x] > 0.0 || !self.free[x]).collect(),
            None => (0..self.n()).filter(|&x| !self.free[x]).collect(),
        };
        if !outside.is_empty() {
            let dist = self
                .g
                .distances_from_set(&outside)
                .expect("vertices come from the graph");
            let mut best = candidates[0];
            for &x in &candidates {
                if dist[x] > dist[best] {
                    best = x;
                }
            }
            best
        } else {
            let mut best = candidates[0];
            let mut best_ecc = usize::MAX;
            for &x in &candidates {
                let ecc = self
                    .g
                    .distances_from(x)
                    .map(|d| d.into_iter().max().unwrap_or(0))
                    .unwrap_or(usize::MAX);
                if ecc < best_ecc {
                    best_ecc = ecc;
                    best = x;
                }
            }
            best
        }
    }

    fn generated_starts(&self, cfg: &SolverConfig, bias: Option<&[f64]>) -> Vec<Vec<f64>> {
        let n = self.n();
        let mut starts = Vec::with_capacity(cfg.n_starts);
        if cfg.n_starts >= 1 {
            let center = self.deepest(bias);
            let dist = self.g.distances_from(center).expect("center is a vertex");
            starts.push(dist.iter().map(|&d| 0.5f64.powi(d.min(1000) as i32)).collect());
        }
        if cfg.n_starts >= 2 {
            starts.push(vec![1.0; n]);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for _ in 2..cfg.n_starts.max(2) {
            starts.push((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect());
        }
        starts
    }

    fn solve(&self, cfg: &SolverConfig, warm: &[&[f64]], bias: Option<&[f64]>) -> Result<Solution> {
        cfg.validate()?;
        let mut all: Vec<Vec<f64>> = warm.iter().map(|w| w.to_vec()).collect();
        all.extend(self.generated_starts(cfg, bias));
        let mut best: Option<(StartResult, f64)> = None;
        let mut restarts = 0;
        for start in &all {
            let Some(res) = self.descend(start, cfg) else {
                continue;
            };
            restarts += 1;
            let (_, projected) = self.project(&res.u).ok_or(Error::ZeroFunction)?;
            let (energy, ..) = self.diagnostics(&projected);
            let better = match &best {
                None => true,
                Some((b, be)) => {
                    (res.converged && !b.converged) || (res.converged == b.converged && energy < *be)
                }
            };
            if better {
                best = Some((res, energy));
            }
        }
        let (res, _) = best.ok_or(Error::ZeroFunction)?;
        let (_, mut u) = self.project(&res.u).ok_or(Error::ZeroFunction)?;
        // report the representative whose largest entry is positive
        let mut imax = 0;
        for x in 0..u.len() {
            if u[x].abs() > u[imax].abs() {
                imax = x;
            }
        }
        if u[imax] < 0.0 {
            u.iter_mut().for_each(|v| *v = -*v);
        }
        let (energy, nehari, defect, scale, norm) = self.diagnostics(&u);
        let converged = res.converged
            && nehari <= cfg.tol
            && defect <= cfg.tol * scale;
        let u = VertexFunction::from_raw(self.g, u);
        Ok(Solution {
            sign_changing: u.changes_sign(),
            u,
            energy,
            nehari_residual: nehari,
            euler_lagrange_residual: defect,
            residual_scale: scale,
            norm,
            iterations: res.iterations,
            converged,
            restarts_used: restarts,
        })
    }
}

/// `J_λ(u) = ½ ∫_V (|Δu|² + |∇u|² + (λa+1)u²) − (1/p) ∫_V |u|^p`.
pub fn energy(g: &Graph, u: &VertexFunction, params: &ProblemParams) -> Result<f64> {
    u.check(g)?;
    params.check(g)?;
    let prob = Problem::full(g, params);
    let n = g.n_vertices();
    let (mut lap, mut gam) = (vec![0.0; n], vec![0.0; n]);
    let q = prob.quadratic(u.values(), &mut lap, &mut gam);
    Ok(0.5 * q - prob.power(u.values()) / params.p)
}

/// Pointwise field `r = Δ²u − Δu + (λa+1)u − |u|^{p−2}u`; `J′_λ(u)v = ∫ r v dμ`.
pub fn energy_gradient(
    g: &Graph,
    u: &VertexFunction,
    params: &ProblemParams,
) -> Result<VertexFunction> {
    u.check(g)?;
    params.check(g)?;
    let prob = Problem::full(g, params);
    let n = g.n_vertices();
    let (mut lap, mut out) = (vec![0.0; n], vec![0.0; n]);
    prob.apply(u.values(), &mut lap, &mut out);
    for (o, &v) in out.iter_mut().zip(u.values()) {
        *o -= nonlinearity(v, params.p);
    }
    Ok(VertexFunction::from_raw(g, out))
}

/// Scales `u ≠ 0` onto the Nehari manifold; returns `(t, t·u)`.
pub fn nehari_project(
    g: &Graph,
    u: &VertexFunction,
    params: &ProblemParams,
) -> Result<(f64, VertexFunction)> {
    u.check(g)?;
    params.check(g)?;
    if u.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let prob = Problem::full(g, params);
    let (t, tu) = prob.project(u.values()).ok_or(Error::ZeroFunction)?;
    Ok((t, VertexFunction::from_raw(g, tu)))
}

/// `(½ − 1/p) R(u)^{p/(p−2)}` with `R(u) = ‖u‖²_{E_λ} / ‖u‖_p²`: the energy of
/// the Nehari projection of `u`, computed without projecting.
pub fn nehari_level(g: &Graph, u: &VertexFunction, params: &ProblemParams) -> Result<f64> {
    u.check(g)?;
    params.check(g)?;
    if u.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let prob = Problem::full(g, params);
    let n = g.n_vertices();
    let (mut lap, mut gam) = (vec![0.0; n], vec![0.0; n]);
    let q = prob.quadratic(u.values(), &mut lap, &mut gam);
    let pw = prob.power(u.values());
    let p = params.p;
    let r = q / pw.powf(2.0 / p);
    Ok((0.5 - 1.0 / p) * r.powf(p / (p - 2.0)))
}

/// Ground state of the full-graph equation.
pub fn solve_ground_state(g: &Graph, params: &ProblemParams, cfg: &SolverConfig) -> Result<Solution> {
    solve_ground_state_from(g, params, cfg, &[])
}

/// As [`solve_ground_state`], with extra starting points tried before the
/// generated ones.
pub fn solve_ground_state_from(
    g: &Graph,
    params: &ProblemParams,
    cfg: &SolverConfig,
    warm: &[&VertexFunction],
) -> Result<Solution> {
    params.check(g)?;
    for w in warm {
        w.check(g)?;
    }
    let prob = Problem::full(g, params);
    let warm: Vec<&[f64]> = warm.iter().map(|w| w.values()).collect();
    prob.solve(cfg, &warm, Some(params.potential.values()))
}

/// `J_Ω(u) = ½ ∫_{Ω∪∂Ω} (|Δu|² + |∇u|²) + ½ ∫_Ω u² − (1/p) ∫_Ω |u|^p` for `u`
/// vanishing off `Ω`.
pub fn energy_dirichlet(g: &Graph, u: &VertexFunction, domain: &Domain, p: f64) -> Result<f64> {
    u.check(g)?;
    check_p(p)?;
    if domain.n_vertices() != g.n_vertices() {
        return Err(Error::GraphMismatch);
    }
    if let Some(x) = u.first_nonzero_outside(domain) {
        return Err(Error::NonzeroOnBoundary(x));
    }
    let n = g.n_vertices();
    let (mut lap, mut gam) = (vec![0.0; n], vec![0.0; n]);
    laplacian_into(g, u.values(), &mut lap);
    gradient_form_into(g, u.values(), u.values(), &mut gam);
    let uv = u.values();
    let closure: f64 = domain
        .closure()
        .iter()
        .map(|&x| g.mu(x) * (lap[x] * lap[x] + gam[x]))
        .sum();
    let (mut mass, mut pw) = (0.0, 0.0);
    for &x in domain.interior() {
        mass += g.mu(x) * uv[x] * uv[x];
        pw += g.mu(x) * uv[x].abs().powf(p);
    }
    Ok(0.5 * closure + 0.5 * mass - pw / p)
}

/// Ground state of the Dirichlet problem on `Ω`. Only the coordinates in `Ω`
/// move; everything else stays exactly zero.
pub fn solve_dirichlet(g: &Graph, domain: &Domain, p: f64, cfg: &SolverConfig) -> Result<Solution> {
    solve_dirichlet_from(g, domain, p, cfg, &[])
}

pub fn solve_dirichlet_from(
    g: &Graph,
    domain: &Domain,
    p: f64,
    cfg: &SolverConfig,
    warm: &[&VertexFunction],
) -> Result<Solution> {
    check_p(p)?;
    if domain.n_vertices() != g.n_vertices() {
        return Err(Error::GraphMismatch);
    }
    if !domain.is_connected(g) {
        return Err(Error::DisconnectedDomain);
    }
    for w in warm {
        w.check(g)?;
    }
    let prob = Problem::dirichlet(g, domain, p);
    let warm: Vec<&[f64]> = warm.iter().map(|w| w.values()).collect();
    prob.solve(cfg, &warm, None)
}

/// Maximum pointwise defect of the equation: over `V` for the full problem,
/// over `Ω` for the Dirichlet problem.
pub fn residual_check(g: &Graph, u: &VertexFunction, eq: Equation<'_>) -> Result<f64> {
    u.check(g)?;
    let prob = match eq {
        Equation::Full(params) => {
            params.check(g)?;
            Problem::full(g, params)
        }
        Equation::Dirichlet { domain, p } => {
            check_p(p)?;
            if domain.n_vertices() != g.n_vertices() {
                return Err(Error::GraphMismatch);
            }
            if let Some(x) = u.first_nonzero_outside(domain) {
                return Err(Error::NonzeroOnBoundary(x));
            }
            Problem::dirichlet(g, domain, p)
        }
    };
    Ok(prob.diagnostics(u.values()).2)
}

/// Norm and energy floors valid for every nontrivial critical point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBounds {
    /// `η_p`, the `L^p` embedding constant.
    pub eta_p: f64,
    /// `ν = (1/η_p)^{p/(p−2)}`: lower bound on `‖u‖_E`.
    pub nu: f64,
    /// `(½ − 1/p)(1/η_p)^{2p/(p−2)}`: lower bound on the ground-state energy.
    pub energy_floor: f64,
    /// `ρ = (1/(2η_p^p))^{1/(p−2)}`.
    pub rho: f64,
    /// `C₁ = (p−2)/(2p) ρ²`: nonzero Palais–Smale levels lie above it.
    pub ps_level_floor: f64,
}

pub fn lower_bounds(g: &Graph, p: f64) -> Result<LowerBounds> {
    check_p(p)?;
    let eta_p = embedding_constant(g, p)?;
    let inv = 1.0 / eta_p;
    let rho = (1.0 / (2.0 * eta_p.powf(p))).powf(1.0 / (p - 2.0));
    Ok(LowerBounds {
        eta_p,
        nu: inv.powf(p / (p - 2.0)),
        energy_floor: (0.5 - 1.0 / p) * inv.powf(2.0 * p / (p - 2.0)),
        rho,
        ps_level_floor: (p - 2.0) / (2.0 * p) * rho * rho,
    })
}

/// How a solution sits against [`LowerBounds`] and the Nehari level identity
/// `‖u‖² = 2p/(p−2) · J(u)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck {
    pub norm_above_nu: bool,
    pub energy_above_floor: bool,
    pub energy_above_ps_floor: bool,
    /// `|‖u‖² − 2p/(p−2)·J| / ‖u‖²`.
    pub level_defect: f64,
}

pub fn check_bounds(g: &Graph, sol: &Solution, p: f64) -> Result<BoundCheck> {
    let b = lower_bounds(g, p)?;
    let n2 = sol.norm * sol.norm;
    Ok(BoundCheck {
        norm_above_nu: sol.norm >= b.nu,
        energy_above_floor: sol.energy >= b.energy_floor,
        energy_above_ps_floor: sol.energy > b.ps_level_floor,
        level_defect: if n2 > 0.0 {
            (n2 - 2.0 * p / (p - 2.0) * sol.energy).abs() / n2
        } else {
            f64::INFINITY
        },
    })
}
