//! Exact computation and verification engine for `(s,q)`-multigraphs.
//!
//! A multigraph on `n` labelled vertices is an `(s,q)`-graph when every
//! `s`-set of vertices supports at most `q` edges counted with multiplicity.
//! This crate builds the generalised Turán multigraphs `T_{r,d}(a,n)`,
//! evaluates the closed-form quantities attached to them, computes the sum-
//! and product-extremal numbers exactly for small `n` by branch and bound,
//! and runs the finite identities and inequalities as check suites.

pub mod combinat;
pub mod constructions;
pub mod error;
pub mod formulas;
pub mod multigraph;
pub mod params;
pub mod search;
pub mod verify;

pub use constructions::{build_iterated, build_trd, pi_exact, sigma_exact, IteratedSpec, PartSizes};
pub use error::{Error, Result};
pub use multigraph::{Multigraph, VertexSet};
pub use params::Params;
pub use search::{Mode, SearchConfig, SearchOutcome};

#[cfg(test)]
mod proptests;
