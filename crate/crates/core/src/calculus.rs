//! Discrete operators on a weighted measured graph.
//!
//! All sums run over vertices and neighbors in ascending index order, so
//! results are bit-reproducible for identical inputs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::VertexFunction;
use crate::graph::{Domain, Graph, Vertex};

pub(crate) fn laplacian_into(g: &Graph, u: &[f64], out: &mut [f64]) {
    for (x, o) in out.iter_mut().enumerate() {
        let ux = u[x];
        let s: f64 = g.neighbors(x).map(|(y, w)| w * (u[y] - ux)).sum();
        *o = s / g.mu(x);
    }
}

pub(crate) fn gradient_form_into(g: &Graph, u: &[f64], v: &[f64], out: &mut [f64]) {
    for (x, o) in out.iter_mut().enumerate() {
        let (ux, vx) = (u[x], v[x]);
        let s: f64 = g
            .neighbors(x)
            .map(|(y, w)| w * (u[y] - ux) * (v[y] - vx))
            .sum();
        *o = s / (2.0 * g.mu(x));
    }
}

/// `(Δu)(x) = μ(x)⁻¹ Σ_{y∼x} ω_xy (u(y) − u(x))`.
pub fn laplacian(g: &Graph, u: &VertexFunction) -> Result<VertexFunction> {
    u.check(g)?;
    let mut out = vec![0.0; g.n_vertices()];
    laplacian_into(g, u.values(), &mut out);
    Ok(VertexFunction::from_raw(g, out))
}

/// `Γ(u,v)(x) = (2μ(x))⁻¹ Σ_{y∼x} ω_xy (u(y) − u(x))(v(y) − v(x))`.
pub fn gradient_form(g: &Graph, u: &VertexFunction, v: &VertexFunction) -> Result<VertexFunction> {
    u.check(g)?;
    v.check(g)?;
    let mut out = vec![0.0; g.n_vertices()];
    gradient_form_into(g, u.values(), v.values(), &mut out);
    Ok(VertexFunction::from_raw(g, out))
}

/// `|∇u| = Γ(u,u)^{1/2}`.
pub fn gradient_norm(g: &Graph, u: &VertexFunction) -> Result<VertexFunction> {
    Ok(gradient_form(g, u, u)?.map(f64::sqrt))
}

/// `Σ_{x ∈ subset} μ(x) u(x)`; the whole vertex set when `subset` is `None`.
pub fn integrate(g: &Graph, u: &VertexFunction, subset: Option<&[Vertex]>) -> Result<f64> {
    u.check(g)?;
    let vals = u.values();
    match subset {
        None => Ok(vals.iter().enumerate().map(|(x, &v)| g.mu(x) * v).sum()),
        Some(set) => {
            let mut s = 0.0;
            for &x in set {
                if x >= g.n_vertices() {
                    return Err(Error::UnknownVertex(x.to_string()));
                }
                s += g.mu(x) * vals[x];
            }
            Ok(s)
        }
    }
}

/// `Δ²u = Δ(Δu)`.
pub fn bilaplacian(g: &Graph, u: &VertexFunction) -> Result<VertexFunction> {
    laplacian(g, &laplacian(g, u)?)
}

/// Cutoff `η_k` around `x0`: 1 within distance `k`, linear down to 0 at
/// distance `2k`, 0 beyond.
pub fn cutoff(g: &Graph, x0: Vertex, k: usize) -> Result<VertexFunction> {
    if k == 0 {
        return Err(Error::InvalidParameter("cutoff radius k must be >= 1".into()));
    }
    let dist = g.distances_from(x0)?;
    let kf = k as f64;
    Ok(VertexFunction::from_fn(g, |x| {
        let d = dist[x];
        if d <= k {
            1.0
        } else if d < 2 * k {
            (2.0 * kf - d as f64) / kf
        } else {
            0.0
        }
    }))
}

/// A signed identity defect and the sum of absolute values of the terms that
/// produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub value: f64,
    pub scale: f64,
}

impl Residual {
    /// `|value| / scale`, or `|value|` when all terms vanish.
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.value.abs() / self.scale
        } else {
            self.value.abs()
        }
    }
}

/// Integration-by-parts defects.
///
/// * `r1 = ∫_V Γ(u,v) + ∫_V (Δu) v`
/// * `r2 = ∫_{Ω∪∂Ω} Γ(u,v) + ∫_Ω (Δu) v`
/// * `r3 = ∫_V (Δ²u) v − ∫_V Δu Δv`
/// * `r4 = ∫_Ω (Δ²u) v − ∫_{Ω∪∂Ω} Δu Δv`
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IbpResiduals {
    pub r1: Residual,
    pub r2: Option<Residual>,
    pub r3: Residual,
    pub r4: Option<Residual>,
}

impl IbpResiduals {
    pub fn max_relative(&self) -> f64 {
        [Some(self.r1), self.r2, Some(self.r3), self.r4]
            .into_iter()
            .flatten()
            .map(|r| r.relative())
            .fold(0.0, f64::max)
    }
}

fn weighted_pair(g: &Graph, f: &[f64], h: &[f64], set: &[Vertex]) -> (f64, f64) {
    let mut s = 0.0;
    let mut abs = 0.0;
    for &x in set {
        let t = g.mu(x) * f[x] * h[x];
        s += t;
        abs += t.abs();
    }
    (s, abs)
}

fn weighted_single(g: &Graph, f: &[f64], set: &[Vertex]) -> (f64, f64) {
    let mut s = 0.0;
    let mut abs = 0.0;
    for &x in set {
        let t = g.mu(x) * f[x];
        s += t;
        abs += t.abs();
    }
    (s, abs)
}

/// Evaluates the integration-by-parts identities for `u` and a test function
/// `v`. With a domain, `v` must vanish outside `Ω` and the domain versions
/// `r2`, `r4` are also reported.
pub fn check_ibp(
    g: &Graph,
    u: &VertexFunction,
    v: &VertexFunction,
    domain: Option<&Domain>,
) -> Result<IbpResiduals> {
    u.check(g)?;
    v.check(g)?;
    if let Some(d) = domain {
        if d.n_vertices() != g.n_vertices() {
            return Err(Error::GraphMismatch);
        }
        if let Some(x) = v.first_nonzero_outside(d) {
            return Err(Error::TestFunctionNotCompactlySupported(x));
        }
    }
    let lu = laplacian(g, u)?;
    let lv = laplacian(g, v)?;
    let llu = laplacian(g, &lu)?;
    let gam = gradient_form(g, u, v)?;
    let all: Vec<Vertex> = (0..g.n_vertices()).collect();

    let (gam_v, gam_v_abs) = weighted_single(g, gam.values(), &all);
    let (luv_v, luv_v_abs) = weighted_pair(g, lu.values(), v.values(), &all);
    let r1 = Residual {
        value: gam_v + luv_v,
        scale: gam_v_abs + luv_v_abs,
    };
    let (bi_v, bi_v_abs) = weighted_pair(g, llu.values(), v.values(), &all);
    let (ll_v, ll_v_abs) = weighted_pair(g, lu.values(), lv.values(), &all);
    let r3 = Residual {
        value: bi_v - ll_v,
        scale: bi_v_abs + ll_v_abs,
    };

    let (r2, r4) = match domain {
        None => (None, None),
        Some(d) => {
            let (gam_c, gam_c_abs) = weighted_single(g, gam.values(), d.closure());
            let (luv_o, luv_o_abs) = weighted_pair(g, lu.values(), v.values(), d.interior());
            let (bi_o, bi_o_abs) = weighted_pair(g, llu.values(), v.values(), d.interior());
            let (ll_c, ll_c_abs) = weighted_pair(g, lu.values(), lv.values(), d.closure());
            (
                Some(Residual {
                    value: gam_c + luv_o,
                    scale: gam_c_abs + luv_o_abs,
                }),
                Some(Residual {
                    value: bi_o - ll_c,
                    scale: bi_o_abs + ll_c_abs,
                }),
            )
        }
    };
    Ok(IbpResiduals { r1, r2, r3, r4 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Graph {
        Graph::path(3).unwrap()
    }

    fn f(g: &Graph, v: &[f64]) -> VertexFunction {
        VertexFunction::new(g, v.to_vec()).unwrap()
    }

    #[test]
    fn laplacian_examples() {
        let g = p3();
        assert_eq!(laplacian(&g, &f(&g, &[1.0, 1.0, 1.0])).unwrap().values(), &[0.0; 3]);
        assert_eq!(
            laplacian(&g, &f(&g, &[0.0, 1.0, 0.0])).unwrap().values(),
            &[1.0, -2.0, 1.0]
        );
        assert_eq!(
            laplacian(&g, &f(&g, &[0.0, 1.0, 2.0])).unwrap().values(),
            &[1.0, 0.0, -1.0]
        );
    }

    #[test]
    fn gradient_form_examples() {
        let g = p3();
        let u = f(&g, &[0.0, 1.0, 0.0]);
        let c = f(&g, &[2.0, 2.0, 2.0]);
        assert_eq!(gradient_form(&g, &c, &c).unwrap().values(), &[0.0; 3]);
        assert_eq!(gradient_form(&g, &u, &u).unwrap().values(), &[0.5, 1.0, 0.5]);
        let v = f(&g, &[0.0, -1.0, 0.0]);
        assert_eq!(gradient_form(&g, &u, &v).unwrap().values(), &[-0.5, -1.0, -0.5]);
    }

    #[test]
    fn gradient_norm_examples() {
        let g = p3();
        let n = gradient_norm(&g, &f(&g, &[0.0, 1.0, 0.0])).unwrap();
        assert_eq!(n.values(), &[0.5f64.sqrt(), 1.0, 0.5f64.sqrt()]);
        let e = Graph::new(vec![1.0; 2], &[(0, 1, 2.0)]).unwrap();
        let n = gradient_norm(&e, &f(&e, &[0.0, 1.0])).unwrap();
        assert_eq!(n.values(), &[1.0, 1.0]);
    }

    #[test]
    fn integrals() {
        let g = p3();
        assert_eq!(integrate(&g, &f(&g, &[0.0, 1.0, 0.0]), None).unwrap(), 1.0);
        let gm = Graph::new(vec![2.0, 3.0, 4.0], &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(integrate(&gm, &VertexFunction::constant(&gm, 1.0), None).unwrap(), 9.0);
        assert_eq!(integrate(&g, &f(&g, &[5.0, 7.0, 9.0]), Some(&[0])).unwrap(), 5.0);
    }

    #[test]
    fn bilaplacian_examples() {
        let g = p3();
        let u = f(&g, &[0.0, 1.0, 0.0]);
        assert_eq!(bilaplacian(&g, &u).unwrap().values(), &[-3.0, 6.0, -3.0]);
        let c = VertexFunction::constant(&g, 4.0);
        assert!(bilaplacian(&g, &c).unwrap().is_zero());
        let lhs = integrate(&g, &bilaplacian(&g, &u).unwrap().mul(&u).unwrap(), None).unwrap();
        let lu = laplacian(&g, &u).unwrap();
        let rhs = integrate(&g, &lu.mul(&lu).unwrap(), None).unwrap();
        assert_eq!(lhs, 6.0);
        assert_eq!(rhs, 6.0);
    }

    #[test]
    fn cutoff_examples() {
        let g = p3();
        assert_eq!(cutoff(&g, 1, 1).unwrap().values(), &[1.0; 3]);
        let p5 = Graph::path(5).unwrap();
        assert_eq!(cutoff(&p5, 0, 1).unwrap().values(), &[1.0, 1.0, 0.0, 0.0, 0.0]);
        assert_eq!(cutoff(&p5, 0, 2).unwrap().values(), &[1.0, 1.0, 1.0, 0.5, 0.0]);
        assert!(matches!(cutoff(&p5, 9, 1), Err(Error::UnknownVertex(_))));
        assert!(cutoff(&p5, 0, 0).is_err());
    }

    #[test]
    fn ibp_on_p3() {
        let g = p3();
        let u = f(&g, &[0.3, -1.7, 2.2]);
        let v = f(&g, &[0.0, 1.0, 0.0]);
        let d = Domain::new(&g, &[1]).unwrap();
        let r = check_ibp(&g, &u, &v, Some(&d)).unwrap();
        assert!(r.max_relative() <= 1e-12, "{r:?}");

        let bad = f(&g, &[1.0, 1.0, 0.0]);
        assert!(matches!(
            check_ibp(&g, &u, &bad, Some(&d)),
            Err(Error::TestFunctionNotCompactlySupported(0))
        ));
    }

    #[test]
    fn mismatched_graph_rejected() {
        let g = p3();
        let h = p3();
        let u = VertexFunction::zeros(&h);
        assert_eq!(laplacian(&g, &u), Err(Error::GraphMismatch));
    }
}
