//! Betweenness centrality for temporal graphs.
//!
//! A temporal graph is a fixed vertex set plus undirected edges that
//! exist at integer time labels. Temporal paths traverse edges with
//! non-decreasing (or strictly increasing) labels, which makes "optimal
//! path" ambiguous: this crate computes betweenness under shortest,
//! shortest-foremost, and prefix-foremost optimality, with both a direct
//! appearance-level engine ([`brandes`]) and a time-expanded static
//! engine ([`expansion`]), cross-checked by an exhaustive enumeration
//! oracle ([`oracle`]). Counting paths under foremost or fastest
//! optimality alone is intractable, so those variants exist only in the
//! oracle, alongside the gadget constructions that witness the hardness.
//!
//! Engines run in either double precision or exact rational arithmetic
//! ([`numeric::Float64`] / [`numeric::Exact`]); oracle comparisons use
//! the exact mode and the pinned [`ORACLE_TOLERANCE`] when floats are
//! involved.

pub mod analysis;
pub mod brandes;
pub mod error;
pub mod expansion;
pub mod gen;
pub mod graph;
pub mod io;
pub mod numeric;
pub mod oracle;
pub mod variant;

pub use error::{Error, Result};
pub use graph::{TemporalGraph, TemporalPath, TimeEdge, TimeLabel, Transition, VertexAppearance, VertexId};
pub use variant::{Criterion, Optimality};

/// Absolute tolerance for comparing double-precision engine output to
/// exact oracle values.
pub const ORACLE_TOLERANCE: f64 = 1e-9;
