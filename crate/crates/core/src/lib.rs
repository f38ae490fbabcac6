//! Generation, gluing and verification of triangle-free Ramsey graphs.
//!
//! A Ramsey graph of type `(3, t)` on `n` vertices has no triangle and no
//! independent set of size `t`. The crate builds censuses of such graphs
//! bottom-up by one-point extension ([`extender`]), reconstructs larger
//! graphs from a vertex's dual neighbourhood by neighbourhood gluing
//! ([`gluer`]), pairs two extensions of a shared core to find regular graphs
//! ([`pair`]), and reads, deduplicates and verifies graph6 censuses ([`io`]).

pub mod alpha;
pub mod canon;
pub mod error;
pub mod extender;
pub mod gluer;
pub mod graph;
pub mod indset;
pub mod io;
pub mod pair;
pub mod spec;

pub use alpha::{independence_number, AlphaMemo};
pub use canon::{canonical_form, canonical_graph, canonical_labeling, CanonicalForm};
pub use error::{Error, Result};
pub use graph::{
    degree_profile, dual_neighbourhood, epsilon, has_independent_set, is_ramsey, is_triangle_free, DegreeProfile, Graph,
    VertexSet,
};
pub use spec::CensusSpec;
