//! Stable ribbon graphs as half-edge structures, their canonical forms and
//! automorphisms, enumeration by topological type, and the cellular chain
//! complexes spanned by oriented isomorphism classes.

mod canon;
mod chain;
mod enumerate;
mod ribbon;

pub use canon::{automorphisms, canonical_form, CanonKey, Canonical};
pub use chain::{boundary, ChainKey, Complex, GraphChain, SignConvention};
pub use enumerate::{enumerate, EnumOptions, MAX_TRIVALENT_EDGES};
pub(crate) use ribbon::glue_legs;
pub use ribbon::{Face, Orientation, StableRibbonGraph, VertexSurface};
