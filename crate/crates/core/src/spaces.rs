//! Sobolev and Lebesgue norms on a graph, and the embedding constants.

use crate::calculus::{gradient_form_into, laplacian_into};
use crate::error::{Error, Result};
use crate::function::VertexFunction;
use crate::graph::{Domain, Graph, Potential, Vertex};

/// Which norm or inner product to evaluate.
#[derive(Debug, Clone, Copy)]
pub enum SpaceSpec<'a> {
    /// `∫_V |∇u|² + u²`
    W12,
    /// `∫_V |Δu|² + |∇u|² + u²`
    W22,
    /// `∫_V |Δu|² + |∇u|² + (λa + 1)u²`
    ELambda { potential: &'a Potential, lambda: f64 },
    /// `∫_{Ω∪∂Ω} |Δu|² + |∇u|² + ∫_Ω u²`, for functions vanishing off `Ω`.
    HOmega(&'a Domain),
    /// `∫_{Ω∪∂Ω} |∇u|² + ∫_Ω u²`, for functions vanishing off `Ω`.
    W120Omega(&'a Domain),
    /// `(∫_subset |u|^q)^{1/q}`, or the maximum of `|u|` over the subset when
    /// `q` is infinite. `subset = None` means all of `V`.
    Lq { q: f64, subset: Option<&'a [Vertex]> },
}

struct Forms {
    lap_u: Vec<f64>,
    lap_v: Vec<f64>,
    gamma: Vec<f64>,
}

fn forms(g: &Graph, u: &[f64], v: &[f64], with_lap: bool) -> Forms {
    let n = g.n_vertices();
    let mut gamma = vec![0.0; n];
    gradient_form_into(g, u, v, &mut gamma);
    let (mut lap_u, mut lap_v) = (Vec::new(), Vec::new());
    if with_lap {
        lap_u = vec![0.0; n];
        lap_v = vec![0.0; n];
        laplacian_into(g, u, &mut lap_u);
        laplacian_into(g, v, &mut lap_v);
    }
    Forms { lap_u, lap_v, gamma }
}

fn require_support(f: &VertexFunction, d: &Domain) -> Result<()> {
    match f.first_nonzero_outside(d) {
        Some(x) => Err(Error::UnsupportedForNonzeroBoundary(x)),
        None => Ok(()),
    }
}

fn check_lambda(g: &Graph, potential: &Potential, lambda: f64) -> Result<()> {
    if potential.len() != g.n_vertices() {
        return Err(Error::GraphMismatch);
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    Ok(())
}

fn check_q(q: f64) -> Result<()> {
    if q.is_nan() || q < 1.0 {
        Err(Error::QOutOfRange(q))
    } else {
        Ok(())
    }
}

/// Bilinear form of the space. For `Lq` only `q = 2` is an inner product.
pub fn inner_product(
    g: &Graph,
    u: &VertexFunction,
    v: &VertexFunction,
    spec: SpaceSpec<'_>,
) -> Result<f64> {
    u.check(g)?;
    v.check(g)?;
    let (uv, vv) = (u.values(), v.values());
    let n = g.n_vertices();
    let mu = g.measure();
    let s = match spec {
        SpaceSpec::W12 => {
            let f = forms(g, uv, vv, false);
            (0..n).map(|x| mu[x] * (f.gamma[x] + uv[x] * vv[x])).sum()
        }
        SpaceSpec::W22 => {
            let f = forms(g, uv, vv, true);
            (0..n)
                .map(|x| mu[x] * (f.lap_u[x] * f.lap_v[x] + f.gamma[x] + uv[x] * vv[x]))
                .sum()
        }
        SpaceSpec::ELambda { potential, lambda } => {
            check_lambda(g, potential, lambda)?;
            let a = potential.values();
            let f = forms(g, uv, vv, true);
            (0..n)
                .map(|x| {
                    mu[x]
                        * (f.lap_u[x] * f.lap_v[x]
                            + f.gamma[x]
                            + (lambda * a[x] + 1.0) * uv[x] * vv[x])
                })
                .sum()
        }
        SpaceSpec::HOmega(d) | SpaceSpec::W120Omega(d) => {
            if d.n_vertices() != n {
                return Err(Error::GraphMismatch);
            }
            require_support(u, d)?;
            require_support(v, d)?;
            let second = matches!(spec, SpaceSpec::HOmega(_));
            let f = forms(g, uv, vv, second);
            let mut s = 0.0;
            for &x in d.closure() {
                let lap = if second { f.lap_u[x] * f.lap_v[x] } else { 0.0 };
                s += mu[x] * (lap + f.gamma[x]);
            }
            for &x in d.interior() {
                s += mu[x] * uv[x] * vv[x];
            }
            s
        }
        SpaceSpec::Lq { q, subset } => {
            check_q(q)?;
            if q != 2.0 {
                return Err(Error::InvalidParameter(format!(
                    "L^{q} is not a Hilbert space; inner product needs q = 2"
                )));
            }
            match subset {
                None => (0..n).map(|x| mu[x] * uv[x] * vv[x]).sum(),
                Some(set) => {
                    let mut s = 0.0;
                    for &x in set {
                        if x >= n {
                            return Err(Error::UnknownVertex(x.to_string()));
                        }
                        s += mu[x] * uv[x] * vv[x];
                    }
                    s
                }
            }
        }
    };
    Ok(s)
}

/// Norm of `u` in the requested space.
pub fn norm(g: &Graph, u: &VertexFunction, spec: SpaceSpec<'_>) -> Result<f64> {
    match spec {
        SpaceSpec::Lq { q, subset } => {
            u.check(g)?;
            check_q(q)?;
            let all: Vec<Vertex>;
            let set = match subset {
                Some(s) => {
                    if let Some(&x) = s.iter().find(|&&x| x >= g.n_vertices()) {
                        return Err(Error::UnknownVertex(x.to_string()));
                    }
                    s
                }
                None => {
                    all = (0..g.n_vertices()).collect();
                    &all
                }
            };
            let vals = u.values();
            if q.is_infinite() {
                Ok(set.iter().fold(0.0, |m, &x| m.max(vals[x].abs())))
            } else {
                let s: f64 = set.iter().map(|&x| g.mu(x) * vals[x].abs().powf(q)).sum();
                Ok(s.powf(1.0 / q))
            }
        }
        _ => Ok(inner_product(g, u, u, spec)?.max(0.0).sqrt()),
    }
}

/// Constant `η_q` with `‖u‖_{q,V} ≤ η_q ‖u‖_{E_λ}` for every `u` and every
/// `λ ≥ 0`: `μ_min^{(2−q)/(2q)}`, and `μ_min^{−1/2}` for `q = ∞`.
pub fn embedding_constant(g: &Graph, q: f64) -> Result<f64> {
    if q.is_nan() || q < 2.0 {
        return Err(Error::QOutOfRange(q));
    }
    let mu_min = g.mu_min();
    if q.is_infinite() {
        Ok(mu_min.powf(-0.5))
    } else {
        Ok(mu_min.powf((2.0 - q) / (2.0 * q)))
    }
}
