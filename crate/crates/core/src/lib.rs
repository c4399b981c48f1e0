//! Exact-arithmetic construction of closed orbi-cellular forms on the
//! ribbon-graph cell complexes of the compactified decorated moduli space,
//! built from a finite-dimensional dg Frobenius algebra with an abstract
//! Hodge decomposition.
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`]: graded linear algebra, dg Frobenius algebras, Hodge
//!   decompositions, the heat kernel and the edge form.
//! * [`graphs`]: stable ribbon graphs, contraction and whitening, canonical
//!   forms, automorphisms, enumeration and the cellular chain complexes.
//! * [`otft`]: the open topological field theory tensor attached to a
//!   decorated vertex, and the contraction engine shared by everything that
//!   glues tensors along graph edges.
//! * [`cell_forms`]: exponential-monomial forms on cells, assembly of the
//!   form of a graph, pullbacks and integration.
//! * [`cochain`]: cocycle values by integration and by direct contraction,
//!   plus the verification batteries.

pub mod algebra;
pub mod cell_forms;
pub mod cochain;
pub mod error;
pub mod graphs;
pub mod io;
pub mod linalg;
pub mod network;
pub mod otft;
pub mod report;
pub mod scalar;

pub use algebra::{DgFrobeniusAlgebra, EdgeForm, GradedTensor, HodgeDecomposition};
pub use cell_forms::{CellForm, Factor};
pub use error::{Error, Result};
pub use graphs::{GraphChain, Orientation, StableRibbonGraph, VertexSurface};
pub use scalar::Scalar;
