use serde::{Deserialize, Serialize};

use crate::discretize::quadrature::qh_segment;
use crate::discretize::{Mode, NavGraph};
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::metrics::{connected_avoiding, geodesic, point_field, Field};

pub const BISECTION_STEPS: usize = 20;

fn sigma_to(graph: &NavGraph, field: &Field, p: Point2) -> Result<(f64, Vec<u32>)> {
    let att = graph.attach(p)?;
    let s = att.iter().map(|a| field.dist[a.node as usize] + a.euclid).fold(f64::INFINITY, f64::min);
    Ok((s, att.into_iter().map(|a| a.node).collect()))
}

/// sup over curves α from x to y of σ(z, α).
///
/// Equals min(t, σ(z,x), σ(z,y)) where t is the largest r for which x and y
/// stay connected once the σ-ball {σ(z,·) ≤ r} is removed from the graph.
pub fn separation_radius(graph: &NavGraph, x: Point2, y: Point2, z: Point2) -> Result<f64> {
    let field = point_field(graph, z, Mode::Inner)?;
    let (szx, from) = sigma_to(graph, &field, x)?;
    let (szy, to) = sigma_to(graph, &field, y)?;
    if z == x || z == y {
        return Ok(0.0);
    }
    let blocked = |r: f64| -> Vec<bool> { field.dist.iter().map(|&d| d <= r).collect() };
    let connected = |r: f64| connected_avoiding(graph, &from, &to, &blocked(r));
    if !connected_avoiding(graph, &from, &to, &vec![false; graph.node_count()]) {
        return Err(Error::Disconnected);
    }
    let hi0 = szx + szy;
    if !hi0.is_finite() {
        return Err(Error::Disconnected);
    }
    let threshold = if connected(hi0) {
        hi0
    } else {
        let (mut lo, mut hi) = (0.0, hi0);
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if connected(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    Ok(threshold.min(szx).min(szy))
}

/// One sample point on the geodesic.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SeparationSample {
    pub z: Point2,
    pub radius: f64,
    pub d: f64,
    pub ratio: f64,
}

/// Points spaced evenly by quasihyperbolic arclength along the refined
/// k-geodesic from x to y, including both ends when `n_samples` ≥ 2.
pub fn ball_separation_profile(graph: &NavGraph, x: Point2, y: Point2, n_samples: usize) -> Result<Vec<SeparationSample>> {
    if n_samples == 0 {
        return Err(Error::InvalidInput("n_samples must be at least 1".into()));
    }
    let domain = graph.domain();
    let gamma = geodesic(graph, x, y, Mode::Quasihyperbolic)?;
    let v = &gamma.path.vertices;
    let mut acc = vec![0.0];
    for w in v.windows(2) {
        let c = qh_segment(domain, w[0], w[1], domain.boundary_distance(w[0]), domain.boundary_distance(w[1]), graph.quadrature());
        acc.push(acc.last().copied().unwrap_or(0.0) + c);
    }
    let total = *acc.last().expect("path is nonempty");
    let mut out = Vec::with_capacity(n_samples);
    for j in 0..n_samples {
        let s = if n_samples == 1 { 0.0 } else { total * j as f64 / (n_samples - 1) as f64 };
        let z = if j == 0 {
            x
        } else if j + 1 == n_samples {
            y
        } else {
            let i = acc.partition_point(|&a| a < s).clamp(1, v.len() - 1);
            let span = acc[i] - acc[i - 1];
            let t = if span > 0.0 { (s - acc[i - 1]) / span } else { 0.0 };
            v[i - 1].lerp(v[i], t)
        };
        let radius = separation_radius(graph, x, y, z)?;
        let d = domain.distance_to_boundary(z);
        out.push(SeparationSample { z, radius, d, ratio: radius / d });
    }
    Ok(out)
}

/// max over sampled z on γ_xy of separation_radius(x, y, z) / d_Ω(z).
pub fn ball_separation_constant(graph: &NavGraph, x: Point2, y: Point2, n_samples: usize) -> Result<f64> {
    let p = ball_separation_profile(graph, x, y, n_samples)?;
    Ok(p.iter().map(|s| s.ratio).fold(0.0, f64::max))
}
