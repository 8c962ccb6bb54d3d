//! Discrete variational calculus on finite weighted measured graphs and
//! ground states of the nonlinear biharmonic equation
//!
//! ```text
//! Δ²u − Δu + (λa + 1)u = |u|^{p−2}u
//! ```
//!
//! together with its Dirichlet limit on the potential well `{a = 0}` and
//! λ-sweeps that track the concentration of ground states as `λ → ∞`.
//!
//! Modules:
//!
//! * [`graph`]: graphs, domains, potentials, assumption checks
//! * [`calculus`]: Laplacian, gradient form, bilaplacian, cutoffs, integration by parts
//! * [`spaces`]: Sobolev and Lebesgue norms, embedding constants
//! * [`variational`]: energies, Nehari projection, ground-state solvers
//! * [`convergence`]: λ-sweeps and comparison against the Dirichlet limit
//! * [`io`]: text graph format and report writers

pub mod calculus;
pub mod convergence;
pub mod error;
pub mod function;
pub mod graph;
pub mod io;
pub mod spaces;
pub mod variational;

pub use error::{Error, Result};
pub use function::VertexFunction;
pub use graph::{validate_assumptions, AssumptionReport, Domain, Graph, Potential, Vertex};
pub use variational::{ProblemParams, Solution, SolverConfig};
