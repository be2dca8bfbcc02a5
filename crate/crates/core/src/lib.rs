//! Monomer-dimer models on cylinder graphs `P_n × H`.
//!
//! The numeric kernels are generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`, which the statistics and
//! experiment layers use throughout.

pub mod brute;
pub mod disorder;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod groundstate;
pub mod jacobi;
pub mod leeyang;
pub mod mask;
pub mod polynomial;
pub mod real;
pub mod sampler;
pub mod semiring;
pub mod stats;
pub mod transfer;
pub mod weights;

pub use disorder::{DisorderSpec, Domain, Law, RngSeed};
pub use error::{Error, Result};
pub use graph::{CylinderGraph, Edge, EdgeKind, HGraph};
pub use mask::{CountingMask, VertexSet};
pub use real::Real;

pub type Weights = weights::WeightAssignment<f64>;
pub type Polynomial = polynomial::MonomerPolynomial<f64>;

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
