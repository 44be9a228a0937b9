//! Exact inner distance in polygonal domains via the visibility graph.

use crate::error::{Error, Result};
use crate::geometry::{Domain, Point2, Primitive};

/// Relative offset used to lift boundary vertices into the domain.
const LIFT: f64 = 1e-7;

fn lifted(domain: &Domain, p: Point2, dirs: &[Point2]) -> Option<Point2> {
    let delta = LIFT * (1.0 + p.norm());
    dirs.iter().map(|&d| p + d * delta).find(|&q| domain.contains(q))
}

/// Boundary vertices pushed a relative 1e-7 into the domain: loop corners
/// along the angle bisector, slit tips along the slit.
pub fn visibility_vertices(domain: &Domain) -> Result<Vec<Point2>> {
    let mut out = Vec::new();
    for prim in domain.primitives() {
        match prim {
            Primitive::Loop { points } => {
                let n = points.len();
                for i in 0..n {
                    let (a, p, b) = (points[(i + n - 1) % n], points[i], points[(i + 1) % n]);
                    let u = (a - p).normalized() + (b - p).normalized();
                    let bis = if u.norm() > 1e-12 { u.normalized() } else { (b - p).perp().normalized() };
                    out.extend(lifted(domain, p, &[bis, -bis]));
                }
            }
            Primitive::Slit { a, b } => {
                let t = (*a - *b).normalized();
                out.extend(lifted(domain, *a, &[t, t.perp(), -t.perp()]));
                out.extend(lifted(domain, *b, &[-t, t.perp(), -t.perp()]));
            }
            Primitive::Disk { .. } => {
                return Err(Error::InvalidInput("visibility distance needs a polygonal boundary".into()));
            }
            // Straight convex sides never bend a shortest path.
            Primitive::HalfPlane { .. } | Primitive::Strip { .. } => {}
        }
    }
    Ok(out)
}

/// σ_Ω(x, y) and a shortest polyline, up to the vertex lift.
pub fn visibility_distance(domain: &Domain, x: Point2, y: Point2) -> Result<(f64, Vec<Point2>)> {
    for p in [x, y] {
        if !domain.contains(p) {
            return Err(Error::InvalidInput(format!("{p} is not in the domain")));
        }
    }
    let mut pts = vec![x, y];
    pts.extend(visibility_vertices(domain)?);
    let n = pts.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![usize::MAX; n];
    let mut done = vec![false; n];
    dist[0] = 0.0;
    loop {
        let u = (0..n).filter(|&i| !done[i]).min_by(|&a, &b| dist[a].total_cmp(&dist[b]));
        let Some(u) = u.filter(|&u| dist[u].is_finite()) else { break };
        done[u] = true;
        if u == 1 {
            break;
        }
        for v in 0..n {
            if done[v] {
                continue;
            }
            let nd = dist[u] + pts[u].dist(pts[v]);
            if nd < dist[v] && domain.segment_inside(pts[u], pts[v]) {
                dist[v] = nd;
                pred[v] = u;
            }
        }
    }
    if !dist[1].is_finite() {
        return Err(Error::Disconnected);
    }
    let mut path = vec![y];
    let mut u = 1;
    while pred[u] != usize::MAX {
        u = pred[u];
        path.push(pts[u]);
    }
    path.reverse();
    Ok((dist[1], path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l_shape_corner() {
        let pts = [(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)];
        let d = Domain::new(vec![Primitive::Loop { points: pts.iter().map(|&(x, y)| Point2::new(x, y)).collect() }], None)
            .unwrap();
        let (x, y) = (Point2::new(1.5, 0.5), Point2::new(0.4, 1.5));
        let (s, path) = visibility_distance(&d, x, y).unwrap();
        assert!((s - x.dist(y)).abs() < 1e-6, "{s}");
        let (x, y) = (Point2::new(1.9, 0.9), Point2::new(0.9, 1.9));
        let (s, path2) = visibility_distance(&d, x, y).unwrap();
        let expect = 2.0 * Point2::new(1.0, 1.0).dist(x);
        assert!((s - expect).abs() < 1e-6, "{s} {expect}");
        assert_eq!((path.len(), path2.len()), (2, 3));
    }
}
