//! Inverse limits of bouquet graph covers.
//!
//! The crate builds a sequence of bouquet graphs `G_0 <- G_1 <- G_2 <- ...`
//! symbolically, so that addresses at deep levels (hundreds of thousands of
//! bits) can be projected, lifted and advanced in time without ever
//! materializing a graph. Small levels can be materialized explicitly and
//! checked against the graph-cover axioms, which serves as an oracle for the
//! symbolic arithmetic.
//!
//! Module map:
//!
//! * [`graph`]: explicit graphs, cover maps and their validators.
//! * [`bouquet`]: level specs, image formulas, projection, lifts,
//!   occurrence scans and materialization.
//! * [`dynamics`]: points of the inverse limit, the shift map and the metric.
//! * [`analysis`]: degrees, proximality, Li-Yorke sampling, mixing gaps.
//! * [`dsl`]: the `.cover` text format.

pub mod analysis;
pub mod bouquet;
pub mod decimal;
pub mod dsl;
pub mod dynamics;
pub mod graph;

pub use bouquet::{Construction, LevelSpec, Locus, PathExpr, Term, VertexAddr};
pub use dynamics::{DistanceValue, PointHandle};
pub use graph::{CoverMap, MaterializedGraph, VertexPath};

/// Default limit on materialized vertex counts.
pub const DEFAULT_VERTEX_BUDGET: u64 = 10_000_000;

/// Default limit on the number of edges an occurrence scan may walk.
pub const DEFAULT_SCAN_BUDGET: u64 = 100_000_000;
