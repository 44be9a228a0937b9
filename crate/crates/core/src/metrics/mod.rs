//! Inner and quasihyperbolic distances on navigation graphs.

mod bounds;
mod dijkstra;
mod geodesic;
mod refine;
mod visibility;

pub use bounds::{bound_check, BoundMargins};
pub use dijkstra::{connected_avoiding, dijkstra, single_source, Field, FieldCache};
pub use geodesic::{point_field, shortest_path, GeodesicResult};
pub use refine::{refine_path, refine_path_traced, MAX_SWEEPS};
pub use visibility::{visibility_distance, visibility_vertices};

use crate::discretize::{Mode, NavGraph};
use crate::error::Result;
use crate::geometry::Point2;

/// Shortest path followed by [`refine_path`].
pub fn geodesic(graph: &NavGraph, x: Point2, y: Point2, mode: Mode) -> Result<GeodesicResult> {
    let raw = shortest_path(graph, x, y, mode)?;
    Ok(refine_path(graph.domain(), &raw, graph.quadrature()))
}
