use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("edge {x}-{y} given twice with different weights ({first} vs {second})")]
    AsymmetricWeight {
        x: usize,
        y: usize,
        first: f64,
        second: f64,
    },
    #[error("edge {x}-{y} given more than once")]
    DuplicateEdge { x: usize, y: usize },
    #[error("edge {x}-{y} has non-positive weight {weight}")]
    NonpositiveWeight { x: usize, y: usize, weight: f64 },
    #[error("vertex {vertex} has non-positive measure {mu}")]
    NonpositiveMeasure { vertex: usize, mu: f64 },
    #[error("graph is not connected ({components} components)")]
    DisconnectedGraph { components: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("domain interior is empty")]
    EmptyInterior,
    #[error("domain is not connected as an induced subgraph")]
    DisconnectedDomain,
    #[error("potential is negative at vertex {vertex} (a = {value})")]
    NegativePotential { vertex: usize, value: f64 },
    #[error("potential has no zero set (empty well)")]
    EmptyWell,
    #[error("function is bound to a different graph or has the wrong length")]
    GraphMismatch,
    #[error("test function is nonzero at vertex {0} outside the domain")]
    TestFunctionNotCompactlySupported(usize),
    #[error("exponent q = {0} is outside the admissible range")]
    QOutOfRange(f64),
    #[error("function is nonzero at vertex {0} outside the domain; the norm needs zero extension")]
    UnsupportedForNonzeroBoundary(usize),
    #[error("function is nonzero at vertex {0} outside the domain")]
    NonzeroOnBoundary(usize),
    #[error("function is identically zero")]
    ZeroFunction,
    #[error("exponent p = {0} must be strictly greater than 2")]
    DegenerateProblem(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
