//! Whitney-adaptive graphs, edge quadrature and packing counts.

pub mod cache;
mod graph;
mod index;
pub mod packing;
pub mod quadrature;

pub use cache::{cache_key, GraphCache};
pub use graph::{build_graph, Attachment, Edge, GraphOptions, Mode, NavGraph, DEFAULT_EPS, DEFAULT_NODE_BUDGET, STENCIL};
pub use packing::{packing_number, planar_doubling_constant, PackingRegion};
pub use quadrature::{qh_edge_weight, QuadratureSpec};
