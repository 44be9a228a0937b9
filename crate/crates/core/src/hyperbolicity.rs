//! Gromov hyperbolicity of (Ω, k): thin triangles and the four-point condition.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discretize::{Mode, NavGraph};
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::metrics::{dijkstra, shortest_path, FieldCache, GeodesicResult};

/// One geodesic triangle and its thinness.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TriangleMeasurement {
    pub vertices: [Point2; 3],
    /// Sides x1x2, x1x3, x2x3 (quasihyperbolic graph geodesics).
    pub sides: [GeodesicResult; 3],
    /// Max over points of one side of the k-distance to the other two.
    pub thinness: f64,
}

impl TriangleMeasurement {
    pub fn side_lengths(&self) -> [f64; 3] {
        [self.sides[0].distance, self.sides[1].distance, self.sides[2].distance]
    }
}

fn side_nodes(graph: &NavGraph, side: &GeodesicResult) -> Vec<u32> {
    // Interior vertices of a graph geodesic are node positions.
    let v = &side.path.vertices;
    if v.len() <= 2 {
        return Vec::new();
    }
    v[1..v.len() - 1]
        .iter()
        .map(|&p| graph.nearest_node(p).map(|(id, _)| id).expect("graph has nodes"))
        .collect()
}

/// Measure one triangle: three k-geodesics, then for each side a
/// multi-source Dijkstra seeded by the other two sides.
pub fn thin_triangle_delta(graph: &NavGraph, x1: Point2, x2: Point2, x3: Point2) -> Result<TriangleMeasurement> {
    let mode = Mode::Quasihyperbolic;
    let sides = [shortest_path(graph, x1, x2, mode)?, shortest_path(graph, x1, x3, mode)?, shortest_path(graph, x2, x3, mode)?];
    let nodes: Vec<Vec<u32>> = sides.iter().map(|s| side_nodes(graph, s)).collect();
    let ends = [graph.attach(x1)?, graph.attach(x2)?, graph.attach(x3)?];
    // Side s joins vertices (a, b); `ends` seeds route through the corners.
    let corner = [(0usize, 1usize), (0, 2), (1, 2)];
    let mut thinness = 0.0f64;
    for s in 0..3 {
        if nodes[s].is_empty() {
            continue;
        }
        let mut seeds: Vec<(u32, f64)> = Vec::new();
        for o in (0..3).filter(|&o| o != s) {
            seeds.extend(nodes[o].iter().map(|&u| (u, 0.0)));
            for c in [corner[o].0, corner[o].1] {
                seeds.extend(ends[c].iter().map(|a| (a.node, a.qh)));
            }
        }
        let n = graph.node_count();
        let mut want = vec![false; n];
        let mut remaining = 0usize;
        for &u in &nodes[s] {
            if !want[u as usize] {
                want[u as usize] = true;
                remaining += 1;
            }
        }
        let field = dijkstra(graph, mode, &seeds, None, |u, _| {
            if want[u as usize] {
                remaining -= 1;
            }
            remaining == 0
        });
        for &u in &nodes[s] {
            let d = field.dist[u as usize];
            if !d.is_finite() {
                return Err(Error::Disconnected);
            }
            thinness = thinness.max(d);
        }
    }
    Ok(TriangleMeasurement { vertices: [x1, x2, x3], sides, thinness })
}

/// How triangle vertices are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampler {
    /// Uniform over eligible nodes.
    Random,
    /// Triples from a farthest-point traversal in the k metric.
    FarthestPoint,
}

/// Result of [`estimate_delta`]. `delta` is a sampled maximum and thus a
/// lower bound for the true constant.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeltaEstimate {
    pub delta: f64,
    pub p95: Option<f64>,
    pub argmax: Option<[Point2; 3]>,
    pub seed: u64,
    pub eps: f64,
    pub sampler: Sampler,
    pub triangles: Vec<TriangleMeasurement>,
}

/// Nodes whose boundary distance is above the 10th percentile.
pub fn eligible_nodes(graph: &NavGraph) -> Vec<u32> {
    let mut d: Vec<f64> = (0..graph.node_count() as u32).map(|i| graph.node_distance(i)).collect();
    d.sort_by(f64::total_cmp);
    let cut = d[d.len() / 10];
    (0..graph.node_count() as u32).filter(|&i| graph.node_distance(i) >= cut).collect()
}

/// Draw `trials` triples. The first k triples do not depend on `trials`.
pub fn sample_triples(
    graph: &NavGraph,
    sampler: Sampler,
    trials: usize,
    seed: u64,
    cache: &FieldCache,
) -> Vec<[Point2; 3]> {
    let pool = eligible_nodes(graph);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match sampler {
        Sampler::Random => (0..trials)
            .map(|_| {
                let mut pick = || graph.node(pool[rng.gen_range(0..pool.len())]);
                [pick(), pick(), pick()]
            })
            .collect(),
        Sampler::FarthestPoint => {
            let mut m = 3;
            while m * (m - 1) * (m - 2) / 6 < trials {
                m += 1;
            }
            let m = m.min(pool.len());
            let mut chosen = vec![pool[rng.gen_range(0..pool.len())]];
            let mut near = vec![f64::INFINITY; graph.node_count()];
            while chosen.len() < m {
                let f = cache.get(graph, Mode::Quasihyperbolic, *chosen.last().expect("nonempty"));
                for (v, d) in near.iter_mut().zip(&f.dist) {
                    *v = v.min(*d);
                }
                let next = pool
                    .iter()
                    .copied()
                    .filter(|&u| near[u as usize].is_finite())
                    .max_by(|&a, &b| near[a as usize].total_cmp(&near[b as usize]).then(b.cmp(&a)));
                match next {
                    Some(u) if near[u as usize] > 0.0 => chosen.push(u),
                    _ => break,
                }
            }
            let mut out = Vec::new();
            'outer: for a in 0..chosen.len() {
                for b in a + 1..chosen.len() {
                    for c in b + 1..chosen.len() {
                        if out.len() == trials {
                            break 'outer;
                        }
                        out.push([graph.node(chosen[a]), graph.node(chosen[b]), graph.node(chosen[c])]);
                    }
                }
            }
            out
        }
    }
}

/// Sampled maximum thinness over `trials` triangles, deterministic in `seed`.
pub fn estimate_delta(graph: &NavGraph, sampler: Sampler, trials: usize, seed: u64) -> Result<DeltaEstimate> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let cache = FieldCache::new();
    let triples = sample_triples(graph, sampler, trials, seed, &cache);
    let triangles: Vec<TriangleMeasurement> = triples
        .par_iter()
        .map(|t| thin_triangle_delta(graph, t[0], t[1], t[2]))
        .collect::<Result<_>>()?;
    Ok(summarize(triangles, seed, graph.eps(), sampler))
}

pub(crate) fn summarize(triangles: Vec<TriangleMeasurement>, seed: u64, eps: f64, sampler: Sampler) -> DeltaEstimate {
    let mut best: Option<&TriangleMeasurement> = None;
    for t in &triangles {
        if best.is_none_or(|b| t.thinness > b.thinness) {
            best = Some(t);
        }
    }
    let mut th: Vec<f64> = triangles.iter().map(|t| t.thinness).collect();
    th.sort_by(f64::total_cmp);
    let p95 = (!th.is_empty()).then(|| th[((th.len() as f64 * 0.95).ceil() as usize).clamp(1, th.len()) - 1]);
    DeltaEstimate {
        delta: best.map_or(0.0, |b| b.thinness),
        p95,
        argmax: best.map(|b| b.vertices),
        seed,
        eps,
        sampler,
        triangles,
    }
}

/// Four-point constant: max over 4-subsets of (S₁ − S₂)/2, where S₁ ≥ S₂ ≥ S₃
/// are the three pair sums.
pub fn four_point_delta(k: impl Fn(Point2, Point2) -> Result<f64>, points: &[Point2]) -> Result<f64> {
    let n = points.len();
    if n < 4 {
        return Err(Error::InvalidInput(format!("four-point condition needs at least 4 points, got {n}")));
    }
    let mut m = vec![0.0f64; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let v = k(points[i], points[j])?;
            m[i * n + j] = v;
            m[j * n + i] = v;
        }
    }
    Ok(four_point_from_matrix(&m, n))
}

pub(crate) fn four_point_from_matrix(m: &[f64], n: usize) -> f64 {
    let d = |i: usize, j: usize| m[i * n + j];
    let mut best = 0.0f64;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for e in c + 1..n {
                    let mut s = [d(a, b) + d(c, e), d(a, c) + d(b, e), d(a, e) + d(b, c)];
                    s.sort_by(|x, y| y.total_cmp(x));
                    best = best.max(0.5 * (s[0] - s[1]));
                }
            }
        }
    }
    best
}

/// Pairwise k on a graph, for use with [`four_point_delta`].
pub fn graph_k(graph: &NavGraph) -> impl Fn(Point2, Point2) -> Result<f64> + '_ {
    move |a, b| shortest_path(graph, a, b, Mode::Quasihyperbolic).map(|r| r.distance)
}
