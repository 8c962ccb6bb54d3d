use std::ops::{Index, IndexMut};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Domain, Graph, Vertex};

/// A real-valued function on the vertices of one particular [`Graph`].
///
/// Functions supported on a [`Domain`] are stored extended by zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexFunction {
    #[serde(skip)]
    graph_id: u64,
    values: Vec<f64>,
}

impl VertexFunction {
    pub fn new(g: &Graph, values: Vec<f64>) -> Result<Self> {
        if values.len() != g.n_vertices() {
            return Err(Error::GraphMismatch);
        }
        Ok(VertexFunction {
            graph_id: g.id(),
            values,
        })
    }

    pub fn zeros(g: &Graph) -> Self {
        Self::constant(g, 0.0)
    }

    pub fn constant(g: &Graph, c: f64) -> Self {
        VertexFunction {
            graph_id: g.id(),
            values: vec![c; g.n_vertices()],
        }
    }

    pub fn from_fn(g: &Graph, f: impl FnMut(Vertex) -> f64) -> Self {
        VertexFunction {
            graph_id: g.id(),
            values: (0..g.n_vertices()).map(f).collect(),
        }
    }

    /// Indicator of a single vertex.
    pub fn delta(g: &Graph, x: Vertex) -> Result<Self> {
        if x >= g.n_vertices() {
            return Err(Error::UnknownVertex(x.to_string()));
        }
        Ok(Self::from_fn(g, |y| if y == x { 1.0 } else { 0.0 }))
    }

    pub(crate) fn from_raw(g: &Graph, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), g.n_vertices());
        VertexFunction {
            graph_id: g.id(),
            values,
        }
    }

    pub(crate) fn check(&self, g: &Graph) -> Result<()> {
        if self.graph_id == g.id() && self.values.len() == g.n_vertices() {
            Ok(())
        } else {
            Err(Error::GraphMismatch)
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn scaled(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        VertexFunction {
            graph_id: self.graph_id,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `α·self + β·other`.
    pub fn axpby(&self, alpha: f64, other: &Self, beta: f64) -> Result<Self> {
        if self.graph_id != other.graph_id || self.len() != other.len() {
            return Err(Error::GraphMismatch);
        }
        Ok(VertexFunction {
            graph_id: self.graph_id,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| alpha * a + beta * b)
                .collect(),
        })
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.graph_id != other.graph_id || self.len() != other.len() {
            return Err(Error::GraphMismatch);
        }
        Ok(VertexFunction {
            graph_id: self.graph_id,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| a * b)
                .collect(),
        })
    }

    /// First vertex outside `domain` where the function is nonzero.
    pub fn first_nonzero_outside(&self, domain: &Domain) -> Option<Vertex> {
        self.values
            .iter()
            .enumerate()
            .find(|&(x, &v)| v != 0.0 && !domain.contains(x))
            .map(|(x, _)| x)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// True when the function takes both signs.
    pub fn changes_sign(&self) -> bool {
        self.values.iter().any(|&v| v > 0.0) && self.values.iter().any(|&v| v < 0.0)
    }
}

impl Index<Vertex> for VertexFunction {
    type Output = f64;

    fn index(&self, x: Vertex) -> &f64 {
        &self.values[x]
    }
}

impl IndexMut<Vertex> for VertexFunction {
    fn index_mut(&mut self, x: Vertex) -> &mut f64 {
        &mut self.values[x]
    }
}
