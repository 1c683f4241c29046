//! Resonances of quantum graphs with general self-adjoint vertex couplings.
//!
//! The crate builds the effective vertex-scattering matrices of a metric
//! graph with attached leads, expresses the resonance condition either as a
//! determinant or as a sum over irreducible pseudo-orbits, locates its zeros
//! in the complex `k` plane, and follows resonance poles as edge lengths
//! vary. Units are `ħ = 2m = 1`; lengths and `k` are dimensionless and the
//! energy is `k²`.
//!
//! ```
//! use qgraph::{fixtures, secular::GraphSecular, roots::{find_roots, SearchRegion}};
//!
//! let fx = fixtures::load_fixture("fig9").unwrap();
//! let model = qgraph::ScatteringModel::new(fx.graph).unwrap();
//! let f = GraphSecular::cleared(&model);
//! let region = SearchRegion::new(3.0, 3.3, -0.5, 0.05).unwrap();
//! let roots = find_roots(&f, &region, 1e-10).unwrap();
//! assert!((roots[0].k.re - std::f64::consts::PI).abs() < 1e-8);
//! ```

pub mod asymptotics;
pub mod bonds;
pub mod cauchy;
pub mod closed_form;
pub mod coupling;
mod error;
pub mod fermi;
pub mod fixtures;
pub mod format;
pub mod graph;
pub mod linalg;
pub mod model;
pub mod orbits;
pub mod par;
pub mod roots;
pub mod scattering;
pub mod secular;

pub use error::{Error, Result};
pub use graph::{EdgeLengthSchedule, MetricGraph, VertexCoupling};
pub use model::ScatteringModel;
pub use par::Parallelism;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
