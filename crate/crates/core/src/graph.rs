//! Finite weighted measured graphs, vertex domains and potentials.
//!
//! A [`Graph`] is immutable once built. Vertices are dense indices `0..n`;
//! optional string labels live in a side table. Adjacency is stored in
//! compressed rows sorted by neighbor index, which fixes the summation order
//! of every operator built on top of it.

use std::collections::{HashMap, VecDeque};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use crate::error::{Error, Result};

static NEXT_GRAPH_ID: AtomicU64 = AtomicU64::new(1);

/// Dense vertex index.
pub type Vertex = usize;

#[derive(Debug, Clone)]
pub struct Graph {
    id: u64,
    labels: Vec<String>,
    label_index: HashMap<String, Vertex>,
    offsets: Vec<usize>,
    neighbors: Vec<Vertex>,
    weights: Vec<f64>,
    measure: Vec<f64>,
    weight_sums: Vec<f64>,
    mu_min: f64,
    max_weight_sum: f64,
}

impl Graph {
    /// Builds a graph on vertices `0..measure.len()` labelled by their index.
    pub fn new(measure: Vec<f64>, edges: &[(Vertex, Vertex, f64)]) -> Result<Self> {
        let labels = (0..measure.len()).map(|i| i.to_string()).collect();
        Self::with_labels(labels, measure, edges)
    }

    /// Builds and validates a graph.
    ///
    /// An undirected edge may be listed once in either orientation, or in both
    /// orientations with bit-identical weights. Listing the same orientation
    /// twice is a [`Error::DuplicateEdge`]; listing both orientations with
    /// different weights is an [`Error::AsymmetricWeight`].
    pub fn with_labels(
        labels: Vec<String>,
        measure: Vec<f64>,
        edges: &[(Vertex, Vertex, f64)],
    ) -> Result<Self> {
        let n = measure.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if labels.len() != n {
            return Err(Error::InvalidParameter(format!(
                "{} labels for {} vertices",
                labels.len(),
                n
            )));
        }
        let mut label_index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if label_index.insert(l.clone(), i).is_some() {
                return Err(Error::InvalidParameter(format!("duplicate vertex label {l}")));
            }
        }
        for (vertex, &mu) in measure.iter().enumerate() {
            if !(mu > 0.0) || !mu.is_finite() {
                return Err(Error::NonpositiveMeasure { vertex, mu });
            }
        }

        // (min, max) -> (weight, listed orientation)
        let mut seen: HashMap<(Vertex, Vertex), (f64, (Vertex, Vertex))> = HashMap::new();
        for &(x, y, w) in edges {
            if x >= n {
                return Err(Error::UnknownVertex(x.to_string()));
            }
            if y >= n {
                return Err(Error::UnknownVertex(y.to_string()));
            }
            if x == y {
                return Err(Error::SelfLoop(x));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::NonpositiveWeight { x, y, weight: w });
            }
            let key = (x.min(y), x.max(y));
            match seen.get(&key) {
                None => {
                    seen.insert(key, (w, (x, y)));
                }
                Some(&(w0, orient)) => {
                    if orient == (x, y) {
                        return Err(Error::DuplicateEdge { x, y });
                    }
                    if w0.to_bits() != w.to_bits() {
                        return Err(Error::AsymmetricWeight {
                            x,
                            y,
                            first: w0,
                            second: w,
                        });
                    }
                }
            }
        }

        let mut rows: Vec<Vec<(Vertex, f64)>> = vec![Vec::new(); n];
        for (&(x, y), &(w, _)) in &seen {
            rows[x].push((y, w));
            rows[y].push((x, w));
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::with_capacity(2 * seen.len());
        let mut weights = Vec::with_capacity(2 * seen.len());
        let mut weight_sums = Vec::with_capacity(n);
        offsets.push(0);
        for row in &mut rows {
            row.sort_by_key(|&(y, _)| y);
            let mut s = 0.0;
            for &(y, w) in row.iter() {
                neighbors.push(y);
                weights.push(w);
                s += w;
            }
            weight_sums.push(s);
            offsets.push(neighbors.len());
        }
        let mu_min = measure.iter().copied().fold(f64::INFINITY, f64::min);
        let max_weight_sum = weight_sums.iter().copied().fold(0.0, f64::max);

        let g = Graph {
            id: NEXT_GRAPH_ID.fetch_add(1, Ordering::Relaxed),
            labels,
            label_index,
            offsets,
            neighbors,
            weights,
            measure,
            weight_sums,
            mu_min,
            max_weight_sum,
        };
        let components = g.count_components();
        if components != 1 {
            return Err(Error::DisconnectedGraph { components });
        }
        Ok(g)
    }

    /// Path `0 - 1 - ... - (n-1)` with unit weights and unit measure.
    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i, 1.0)).collect();
        Self::new(vec![1.0; n], &edges)
    }

    /// `rows x cols` lattice with unit weights and measure; vertex `(r, c)` has
    /// index `r * cols + c`.
    pub fn grid(rows: usize, cols: usize) -> Result<Self> {
        let mut edges = Vec::with_capacity(2 * rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1, 1.0));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols, 1.0));
                }
            }
        }
        Self::new(vec![1.0; rows * cols], &edges)
    }

    pub(crate) fn id(&self) -> u64 {
        self.id
    }

    pub fn n_vertices(&self) -> usize {
        self.measure.len()
    }

    pub fn n_edges(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn measure(&self) -> &[f64] {
        &self.measure
    }

    pub fn mu(&self, x: Vertex) -> f64 {
        self.measure[x]
    }

    pub fn mu_min(&self) -> f64 {
        self.mu_min
    }

    /// `Σ_{y∼x} ω_xy`.
    pub fn weight_sum(&self, x: Vertex) -> f64 {
        self.weight_sums[x]
    }

    pub fn max_weight_sum(&self) -> f64 {
        self.max_weight_sum
    }

    pub fn label(&self, x: Vertex) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex(&self, label: &str) -> Result<Vertex> {
        self.label_index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    /// Neighbors of `x` with their weights, in ascending neighbor order.
    pub fn neighbors(&self, x: Vertex) -> impl Iterator<Item = (Vertex, f64)> + '_ {
        let r = self.offsets[x]..self.offsets[x + 1];
        self.neighbors[r.clone()]
            .iter()
            .copied()
            .zip(self.weights[r].iter().copied())
    }

    pub fn degree(&self, x: Vertex) -> usize {
        self.offsets[x + 1] - self.offsets[x]
    }

    /// Edges `(x, y, ω)` with `x < y`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex, f64)> + '_ {
        (0..self.n_vertices()).flat_map(move |x| {
            self.neighbors(x)
                .filter(move |&(y, _)| y > x)
                .map(move |(y, w)| (x, y, w))
        })
    }

    fn check_vertex(&self, x: Vertex) -> Result<()> {
        if x < self.n_vertices() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(x.to_string()))
        }
    }

    fn count_components(&self) -> usize {
        let n = self.n_vertices();
        let mut seen = vec![false; n];
        let mut components = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            components += 1;
            seen[s] = true;
            queue.push_back(s);
            while let Some(x) = queue.pop_front() {
                for (y, _) in self.neighbors(x) {
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        components
    }

    /// Edge-count distances from every vertex of `sources` (multi-source BFS).
    /// Unreachable vertices get `usize::MAX`; on a validated graph there are none.
    pub fn distances_from_set(&self, sources: &[Vertex]) -> Result<Vec<usize>> {
        let mut dist = vec![usize::MAX; self.n_vertices()];
        let mut queue = VecDeque::new();
        for &s in sources {
            self.check_vertex(s)?;
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(x) = queue.pop_front() {
            let dx = dist[x];
            for (y, _) in self.neighbors(x) {
                if dist[y] == usize::MAX {
                    dist[y] = dx + 1;
                    queue.push_back(y);
                }
            }
        }
        Ok(dist)
    }

    pub fn distances_from(&self, x: Vertex) -> Result<Vec<usize>> {
        self.distances_from_set(&[x])
    }

    /// Minimal number of edges joining `x` and `y`.
    pub fn distance(&self, x: Vertex, y: Vertex) -> Result<usize> {
        self.check_vertex(y)?;
        Ok(self.distances_from(x)?[y])
    }

    pub fn diameter(&self) -> usize {
        (0..self.n_vertices())
            .map(|x| {
                self.distances_from(x)
                    .map(|d| d.into_iter().max().unwrap_or(0))
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }

    /// True when `set` induces a connected subgraph (the empty set is not connected).
    pub fn is_connected_subset(&self, set: &[Vertex]) -> bool {
        if set.is_empty() {
            return false;
        }
        let mut inside = vec![false; self.n_vertices()];
        for &x in set {
            if x >= inside.len() {
                return false;
            }
            inside[x] = true;
        }
        let mut seen = vec![false; self.n_vertices()];
        let mut queue = VecDeque::from([set[0]]);
        seen[set[0]] = true;
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for (y, _) in self.neighbors(x) {
                if inside[y] && !seen[y] {
                    seen[y] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        let distinct = inside.iter().filter(|&&b| b).count();
        count == distinct
    }
}

/// A vertex subset `Ω` together with its boundary
/// `∂Ω = {y ∉ Ω : y ∼ x for some x ∈ Ω}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Domain {
    interior: Vec<Vertex>,
    boundary: Vec<Vertex>,
    closure: Vec<Vertex>,
    #[serde(skip)]
    in_interior: Vec<bool>,
    #[serde(skip)]
    in_closure: Vec<bool>,
}

impl Domain {
    /// Computes `∂Ω` for the given interior. Vertex lists are sorted and deduplicated.
    pub fn new(g: &Graph, interior: &[Vertex]) -> Result<Self> {
        if interior.is_empty() {
            return Err(Error::EmptyInterior);
        }
        let n = g.n_vertices();
        let mut in_interior = vec![false; n];
        for &x in interior {
            g.check_vertex(x)?;
            in_interior[x] = true;
        }
        let mut in_closure = in_interior.clone();
        for x in 0..n {
            if in_interior[x] {
                for (y, _) in g.neighbors(x) {
                    in_closure[y] = true;
                }
            }
        }
        let interior: Vec<_> = (0..n).filter(|&x| in_interior[x]).collect();
        let boundary: Vec<_> = (0..n).filter(|&x| in_closure[x] && !in_interior[x]).collect();
        let closure: Vec<_> = (0..n).filter(|&x| in_closure[x]).collect();
        Ok(Domain {
            interior,
            boundary,
            closure,
            in_interior,
            in_closure,
        })
    }

    pub fn interior(&self) -> &[Vertex] {
        &self.interior
    }

    pub fn boundary(&self) -> &[Vertex] {
        &self.boundary
    }

    /// `Ω ∪ ∂Ω`.
    pub fn closure(&self) -> &[Vertex] {
        &self.closure
    }

    pub fn contains(&self, x: Vertex) -> bool {
        self.in_interior.get(x).copied().unwrap_or(false)
    }

    pub fn closure_contains(&self, x: Vertex) -> bool {
        self.in_closure.get(x).copied().unwrap_or(false)
    }

    pub(crate) fn interior_mask(&self) -> &[bool] {
        &self.in_interior
    }

    pub(crate) fn n_vertices(&self) -> usize {
        self.in_interior.len()
    }

    pub fn is_connected(&self, g: &Graph) -> bool {
        g.is_connected_subset(&self.interior)
    }
}

/// Nonnegative potential `a` on the vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Potential(Vec<f64>);

impl Potential {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for (vertex, &value) in values.iter().enumerate() {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(Error::NegativePotential { vertex, value });
            }
        }
        Ok(Potential(values))
    }

    pub fn zero(n: usize) -> Self {
        Potential(vec![0.0; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The zero set `{x : a(x) = 0}`.
    pub fn well(&self) -> Vec<Vertex> {
        (0..self.0.len()).filter(|&x| self.0[x] == 0.0).collect()
    }

    pub fn well_domain(&self, g: &Graph) -> Result<Domain> {
        if self.0.len() != g.n_vertices() {
            return Err(Error::GraphMismatch);
        }
        let well = self.well();
        if well.is_empty() {
            return Err(Error::EmptyWell);
        }
        Domain::new(g, &well)
    }
}

/// Outcome of checking a potential against the standing assumptions on a
/// finite truncation.
#[derive(Debug, Clone, Serialize)]
pub struct AssumptionReport {
    pub n_vertices: usize,
    pub n_edges: usize,
    pub mu_min: f64,
    pub max_weight_sum: f64,
    pub well: Vec<Vertex>,
    pub well_connected: bool,
    /// Always true: every subset of a finite graph is bounded.
    pub well_bounded: bool,
    /// `min a` over the complement of the well, `None` when the well is everything.
    pub min_outside_well: Option<f64>,
    /// Minimum of `a` on each BFS ring around the well, ring 0 being the well.
    pub ring_minima: Vec<f64>,
    /// Ring minima are nondecreasing; the truncation proxy for growth at infinity.
    pub growth_monotone: bool,
    pub warnings: Vec<String>,
}

/// Reports the well of `a` and the finite-graph proxies of the potential
/// assumptions. Growth at infinity cannot be decided on a finite graph, so
/// the ring minima are returned instead of a verdict.
pub fn validate_assumptions(g: &Graph, a: &Potential) -> Result<AssumptionReport> {
    if a.len() != g.n_vertices() {
        return Err(Error::GraphMismatch);
    }
    Potential::new(a.values().to_vec())?;
    let well = a.well();
    let mut warnings = Vec::new();
    if well.is_empty() {
        return Err(Error::EmptyWell);
    }
    let well_connected = g.is_connected_subset(&well);
    if !well_connected {
        warnings.push("potential well is not connected".to_string());
    }
    let min_outside_well = a
        .values()
        .iter()
        .filter(|&&v| v > 0.0)
        .copied()
        .reduce(f64::min);
    let dist = g.distances_from_set(&well)?;
    let max_ring = dist.iter().copied().max().unwrap_or(0);
    let mut ring_minima = vec![f64::INFINITY; max_ring + 1];
    for (x, &d) in dist.iter().enumerate() {
        ring_minima[d] = ring_minima[d].min(a.values()[x]);
    }
    let growth_monotone = ring_minima.windows(2).all(|w| w[0] <= w[1]);
    if !growth_monotone {
        warnings.push("ring minima of the potential are not monotone".to_string());
    }
    Ok(AssumptionReport {
        n_vertices: g.n_vertices(),
        n_edges: g.n_edges(),
        mu_min: g.mu_min(),
        max_weight_sum: g.max_weight_sum(),
        well,
        well_connected,
        well_bounded: true,
        min_outside_well,
        ring_minima,
        growth_monotone,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Graph {
        Graph::with_labels(
            vec!["a".into(), "b".into(), "c".into()],
            vec![1.0; 3],
            &[(0, 1, 1.0), (1, 2, 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn p3_stats() {
        let g = p3();
        assert_eq!(g.mu_min(), 1.0);
        assert_eq!(g.max_weight_sum(), 2.0);
        assert_eq!(g.n_edges(), 2);
        assert_eq!(g.vertex("c").unwrap(), 2);
    }

    #[test]
    fn duplicate_and_asymmetric_edges() {
        let e = Graph::new(vec![1.0; 2], &[(0, 1, 1.0), (0, 1, 2.0)]).unwrap_err();
        assert!(matches!(e, Error::DuplicateEdge { .. }));
        let e = Graph::new(vec![1.0; 2], &[(0, 1, 1.0), (1, 0, 2.0)]).unwrap_err();
        assert!(matches!(e, Error::AsymmetricWeight { .. }));
        let g = Graph::new(vec![1.0; 2], &[(0, 1, 1.5), (1, 0, 1.5)]).unwrap();
        assert_eq!(g.n_edges(), 1);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            Graph::new(vec![1.0, 0.0], &[(0, 1, 1.0)]),
            Err(Error::NonpositiveMeasure { vertex: 1, .. })
        ));
        assert!(matches!(
            Graph::new(vec![1.0; 3], &[(0, 1, 1.0)]),
            Err(Error::DisconnectedGraph { components: 2 })
        ));
        assert!(matches!(
            Graph::new(vec![1.0; 2], &[(0, 0, 1.0), (0, 1, 1.0)]),
            Err(Error::SelfLoop(0))
        ));
        assert!(matches!(
            Graph::new(vec![1.0; 2], &[(0, 1, -1.0)]),
            Err(Error::NonpositiveWeight { .. })
        ));
        assert!(matches!(
            Graph::new(vec![1.0; 2], &[(0, 5, 1.0)]),
            Err(Error::UnknownVertex(_))
        ));
    }

    #[test]
    fn single_vertex_is_connected() {
        let g = Graph::new(vec![1.0], &[]).unwrap();
        assert_eq!(g.n_edges(), 0);
        assert_eq!(g.weight_sum(0), 0.0);
    }

    #[test]
    fn grid_edge_count() {
        let g = Graph::grid(15, 15).unwrap();
        assert_eq!(g.n_vertices(), 225);
        assert_eq!(g.n_edges(), 2 * 15 * 14);
        assert_eq!(g.max_weight_sum(), 4.0);
    }

    #[test]
    fn distances() {
        let g = p3();
        assert_eq!(g.distance(0, 2).unwrap(), 2);
        assert_eq!(g.distance(0, 0).unwrap(), 0);
        assert!(matches!(g.distance(0, 3), Err(Error::UnknownVertex(_))));
        let grid = Graph::grid(15, 15).unwrap();
        assert_eq!(grid.distance(0, 224).unwrap(), 28);
        assert_eq!(grid.distance(14, 210).unwrap(), 28);
    }

    #[test]
    fn boundaries() {
        let g = p3();
        let d = Domain::new(&g, &[1]).unwrap();
        assert_eq!(d.boundary(), &[0, 2]);
        assert_eq!(d.closure(), &[0, 1, 2]);
        let d = Domain::new(&g, &[0, 1, 2]).unwrap();
        assert!(d.boundary().is_empty());
        assert!(matches!(Domain::new(&g, &[]), Err(Error::EmptyInterior)));

        let grid = Graph::grid(15, 15).unwrap();
        let center: Vec<_> = (6..9)
            .flat_map(|r| (6..9).map(move |c| r * 15 + c))
            .collect();
        let d = Domain::new(&grid, &center).unwrap();
        assert_eq!(d.boundary().len(), 12);
        assert!(d.is_connected(&grid));
    }

    #[test]
    fn assumptions_on_p3() {
        let g = p3();
        let r = validate_assumptions(&g, &Potential::new(vec![1.0, 0.0, 1.0]).unwrap()).unwrap();
        assert_eq!(r.well, vec![1]);
        assert!(r.well_connected);
        assert_eq!(r.min_outside_well, Some(1.0));
        assert!(r.warnings.is_empty());

        let r = validate_assumptions(&g, &Potential::new(vec![0.0, 1.0, 0.0]).unwrap()).unwrap();
        assert_eq!(r.well, vec![0, 2]);
        assert!(!r.well_connected);
        assert!(!r.warnings.is_empty());

        assert!(matches!(
            Potential::new(vec![1.0, -1.0, 0.0]),
            Err(Error::NegativePotential { vertex: 1, .. })
        ));
    }

    #[test]
    fn growth_proxy_on_grid() {
        let g = Graph::grid(9, 9).unwrap();
        let center = 4 * 9 + 4;
        let d = g.distances_from(center).unwrap();
        let a = Potential::new(
            d.iter()
                .map(|&k| if k <= 1 { 0.0 } else { (k * k) as f64 })
                .collect(),
        )
        .unwrap();
        let r = validate_assumptions(&g, &a).unwrap();
        assert!(r.growth_monotone);
        assert_eq!(r.well.len(), 5);
        // ring k around the well sits at distance k + 1 from the center
        assert_eq!(r.ring_minima[1], 4.0);
        assert_eq!(r.ring_minima[2], 9.0);
    }
}
