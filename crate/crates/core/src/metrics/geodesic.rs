use serde::{Deserialize, Serialize};

use super::dijkstra::{dijkstra, Field, NONE};
use crate::discretize::quadrature::qh_segment;
use crate::discretize::{Attachment, Mode, NavGraph, QuadratureSpec};
use crate::error::{Error, Result};
use crate::geometry::{Domain, Path, Point2};

/// A discrete shortest path between two domain points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicResult {
    pub mode: Mode,
    pub distance: f64,
    pub path: Path,
    pub endpoints: (Point2, Point2),
    /// Largest distance from a requested endpoint to its nearest graph node.
    pub snap_error: f64,
}

impl GeodesicResult {
    pub fn length(path: &Path, mode: Mode) -> f64 {
        match mode {
            Mode::Inner => path.euclid_length,
            Mode::Quasihyperbolic => path.qh_length,
        }
    }

    pub fn reversed(&self) -> GeodesicResult {
        GeodesicResult {
            path: self.path.reversed(),
            endpoints: (self.endpoints.1, self.endpoints.0),
            ..self.clone()
        }
    }
}

/// Distances from an arbitrary domain point to every graph node.
pub fn point_field(graph: &NavGraph, p: Point2, mode: Mode) -> Result<Field> {
    let att = graph.attach(p)?;
    let sources: Vec<(u32, f64)> = att.iter().map(|a| (a.node, a.weight(mode))).collect();
    Ok(dijkstra(graph, mode, &sources, None, |_, _| false))
}

fn snap_error(graph: &NavGraph, p: Point2) -> f64 {
    graph.nearest_node(p).map_or(f64::INFINITY, |(_, d)| d)
}

/// Is a direct segment between the two points an admissible graph move?
pub(crate) fn direct_link(graph: &NavGraph, x: Point2, y: Point2) -> bool {
    let d = graph.domain();
    x.dist(y) <= graph.snap_radius(x) + graph.snap_radius(y) && d.segment_inside(x, y)
}

fn direct_weight(domain: &Domain, x: Point2, y: Point2, mode: Mode, spec: &QuadratureSpec) -> f64 {
    match mode {
        Mode::Inner => x.dist(y),
        Mode::Quasihyperbolic => {
            qh_segment(domain, x, y, domain.boundary_distance(x), domain.boundary_distance(y), spec)
        }
    }
}

/// Dijkstra between two domain points. Each point is joined to the nodes
/// within its snap radius; ties break towards smaller node ids.
pub fn shortest_path(graph: &NavGraph, x: Point2, y: Point2, mode: Mode) -> Result<GeodesicResult> {
    // Solve in a canonical direction so that swapping x and y is exact.
    if (y.x, y.y) < (x.x, x.y) {
        return shortest_path(graph, y, x, mode).map(|r| r.reversed());
    }
    let domain = graph.domain();
    let spec = *graph.quadrature();
    let ax = graph.attach(x)?;
    let ay = graph.attach(y)?;
    let snap = snap_error(graph, x).max(snap_error(graph, y));
    if x == y {
        let path = Path::measure(domain, vec![x], &spec);
        return Ok(GeodesicResult { mode, distance: 0.0, path, endpoints: (x, y), snap_error: snap });
    }
    if !ax.iter().any(|a| ay.iter().any(|b| graph.component(a.node) == graph.component(b.node))) {
        return Err(Error::Disconnected);
    }
    let (direct, best_node) = search(graph, mode, &ax, &ay, direct_link(graph, x, y).then(|| direct_weight(domain, x, y, mode, &spec)));
    let vertices = match best_node {
        None if direct.is_some() => vec![x, y],
        None => return Err(Error::Disconnected),
        Some(chain) => {
            let mut v = Vec::with_capacity(chain.len() + 2);
            v.push(x);
            v.extend(chain.iter().map(|&u| graph.node(u)));
            v.push(y);
            v
        }
    };
    let path = Path::measure(domain, vertices, &spec);
    let distance = GeodesicResult::length(&path, mode);
    Ok(GeodesicResult { mode, distance, path, endpoints: (x, y), snap_error: snap })
}

/// Returns the direct cost (if admissible) and the node chain of the best
/// graph route, or `None` for the chain when the direct segment wins.
fn search(
    graph: &NavGraph,
    mode: Mode,
    ax: &[Attachment],
    ay: &[Attachment],
    direct: Option<f64>,
) -> (Option<f64>, Option<Vec<u32>>) {
    let n = graph.node_count();
    let mut exit = vec![f64::INFINITY; n];
    for a in ay {
        exit[a.node as usize] = exit[a.node as usize].min(a.weight(mode));
    }
    let mut best = direct.unwrap_or(f64::INFINITY);
    let mut best_node = NONE;
    let sources: Vec<(u32, f64)> = ax.iter().map(|a| (a.node, a.weight(mode))).collect();
    let field = dijkstra(graph, mode, &sources, None, |u, c| {
        if c >= best {
            return true;
        }
        let total = c + exit[u as usize];
        if total < best {
            best = total;
            best_node = u;
        }
        false
    });
    if best_node == NONE {
        (direct, None)
    } else {
        (direct, Some(field.chain(best_node)))
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::discretize::{build_graph, GraphOptions};
    use crate::geometry::{Primitive, Rect};

    #[test]
    fn disk_inner_distance_matches_chord() {
        let d = Arc::new(Domain::new(vec![Primitive::Disk { center: Point2::ORIGIN, radius: 1.0 }], None).unwrap());
        let g = build_graph(d, Rect::new(-1.0, -1.0, 1.0, 1.0), &GraphOptions::with_eps(0.2)).unwrap();
        let (x, y) = (Point2::new(-0.4, 0.0), Point2::new(0.4, 0.0));
        let r = shortest_path(&g, x, y, Mode::Inner).unwrap();
        assert!((r.distance / 0.8 - 1.0).abs() < 0.03, "{}", r.distance);
        assert_eq!(r.path.start(), x);
        assert_eq!(r.path.end(), y);
        let back = shortest_path(&g, y, x, Mode::Inner).unwrap();
        assert_eq!(back.distance, r.distance);
        assert!(r.distance >= x.dist(y));
    }

    #[test]
    fn outside_point_fails_to_snap() {
        let d = Arc::new(Domain::new(vec![Primitive::Disk { center: Point2::ORIGIN, radius: 1.0 }], None).unwrap());
        let g = build_graph(d, Rect::new(-1.0, -1.0, 1.0, 1.0), &GraphOptions::with_eps(0.2)).unwrap();
        let r = shortest_path(&g, Point2::ORIGIN, Point2::new(2.0, 0.0), Mode::Inner);
        assert!(matches!(r, Err(Error::SnapFailed(_))));
    }
}
