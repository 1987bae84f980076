//! Exact toolkit for the unique-bipartite-perfect-matching function and its
//! relatives: graphs, the matching-covered lattice, multilinear polynomials,
//! communication matrices, and approximate degree.

pub mod approx;
pub mod comm;
pub mod error;
pub mod functions;
pub mod graph;
pub mod lattice;
pub mod matching;
pub mod poly;

pub use approx::{approx_degree, chebyshev_compress, sensitivity_subgraph, spectral_radius, ApproxInstance, SensitivitySubgraph};
pub use error::{Error, Result};
pub use functions::{compile_oracle, BaseFunction, FunctionSpec, Lift, Oracle};
pub use graph::{BipartiteGraph, Matching};
pub use lattice::MCLattice;
pub use matching::MatchingPolys;
pub use poly::{F2Poly, FourierPoly, SparseMultilinearPoly};
