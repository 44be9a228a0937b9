//! Headline experiments on D_n: divergence of ℓ(γ)/σ and a ball separation
//! spot check.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::counterexample::{scale, CounterexampleSpec, Family, Label};
use crate::conditions::{ball_separation_constant, gehring_hayman, gehring_hayman_ratio, llc2_constant, ConditionReport, LlcSchedule};
use crate::discretize::{build_graph, GraphOptions, NavGraph, DEFAULT_NODE_BUDGET};
use crate::error::{Error, Result};
use crate::geometry::{Domain, Point2, Rect};
use crate::metrics::{visibility_distance, visibility_vertices};

/// Parameters of [`divergence_experiment`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DivergenceOptions {
    pub eps: f64,
    /// Growth rate of the finest cell size away from u_i, v_i, the origin
    /// and the boundary corners.
    pub focus_grading: f64,
    pub node_budget: usize,
    #[serde(skip)]
    pub deadline: Option<Instant>,
}

impl Default for DivergenceOptions {
    fn default() -> Self {
        DivergenceOptions { eps: 0.2, focus_grading: 0.05, node_budget: DEFAULT_NODE_BUDGET, deadline: None }
    }
}

/// One row of the divergence table, in the original (unscaled) units.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DivergenceRow {
    pub i: u32,
    pub u: Point2,
    pub v: Point2,
    /// σ from the refined inner-mode graph path.
    pub sigma: f64,
    /// σ from the visibility graph of the boundary corners.
    pub sigma_exact: f64,
    /// Euclidean length of the refined k-geodesic.
    pub length: f64,
    pub k: f64,
    pub ratio: f64,
    /// 2 + 6R_{2i+1} + 3R_{2i}.
    pub sigma_bound: f64,
    /// σ ≤ 1.05 · sigma_bound.
    pub sigma_within_bound: bool,
    pub nodes: usize,
    pub k_path: Vec<Point2>,
    pub sigma_path: Vec<Point2>,
}

/// 2 + 6R_{2i+1} + 3R_{2i}, the upper bound for σ(u_i, v_i).
pub fn sigma_upper_bound(i: u32) -> f64 {
    2.0 + 6.0 * scale(2 * i + 1) + 3.0 * scale(2 * i)
}

/// Lower bound R_{2i+2} for ℓ(γ_{u_i v_i}) over the σ bound.
pub fn predicted_ratio(i: u32) -> f64 {
    scale(2 * i + 2) / sigma_upper_bound(i)
}

/// The graph for level i: D_n scaled by 1/R_{2i}, over [−3R_{2i+2}, 3R_{2i+2}]²
/// (scaled), refined around u_i, v_i, the origin and every boundary corner.
pub fn level_graph(spec: &CounterexampleSpec, domain: &Domain, i: u32, opts: &DivergenceOptions) -> Result<(NavGraph, f64, Point2, Point2)> {
    let (u, v) = spec.points_uv(domain, i)?;
    let s = 1.0 / scale(2 * i);
    let sd = Arc::new(domain.scaled(s)?);
    let half = 3.0 * scale(2 * i + 2) * s;
    let bbox = Rect::new(-half, -half, half, half);
    let (us, vs) = (u * s, v * s);
    let mut foci = vec![us, vs, Point2::ORIGIN];
    foci.extend(visibility_vertices(&sd)?.into_iter().filter(|p| bbox.contains(*p)));
    let dmin = sd.distance_to_boundary(us).min(sd.distance_to_boundary(vs));
    let gopts = GraphOptions {
        eps: opts.eps,
        min_cell: Some(0.25 * opts.eps * dmin),
        node_budget: opts.node_budget,
        foci,
        focus_grading: opts.focus_grading,
        deadline: opts.deadline,
        ..Default::default()
    };
    let g = build_graph(sd, bbox, &gopts)?;
    Ok((g, scale(2 * i), us, vs))
}

fn run_level(spec: &CounterexampleSpec, domain: &Domain, i: u32, opts: &DivergenceOptions) -> Result<DivergenceRow> {
    let (g, r, us, vs) = level_graph(spec, domain, i, opts)?;
    let m = gehring_hayman(&g, us, vs)?;
    let (sv, _) = visibility_distance(g.domain(), us, vs)?;
    let sigma = m.sigma * r;
    let bound = sigma_upper_bound(i);
    let back = |p: &[Point2]| p.iter().map(|&q| q * r).collect::<Vec<_>>();
    Ok(DivergenceRow {
        i,
        u: us * r,
        v: vs * r,
        sigma,
        sigma_exact: sv * r,
        length: m.length * r,
        k: m.k_geodesic.distance,
        ratio: m.ratio,
        sigma_bound: bound,
        sigma_within_bound: sigma <= 1.05 * bound,
        nodes: g.node_count(),
        k_path: back(&m.k_geodesic.path.vertices),
        sigma_path: back(&m.sigma_path.path.vertices),
    })
}

/// ℓ(γ_{u_i v_i})/σ(u_i, v_i) for each requested i, each on its own
/// rescaled graph. Rows come back in the order of `indices`.
pub fn divergence_experiment(n: u32, indices: &[u32], opts: &DivergenceOptions) -> Result<Vec<DivergenceRow>> {
    let spec = CounterexampleSpec::new(n)?;
    if indices.is_empty() {
        return Err(Error::InvalidInput("no indices requested".into()));
    }
    for &i in indices {
        if i < 1 || i > n {
            return Err(Error::OutOfRange(format!("index i = {i} needs 1 ≤ i ≤ n = {n}")));
        }
    }
    let domain = spec.domain()?;
    indices.par_iter().map(|&i| run_level(&spec, &domain, i, opts)).collect()
}

/// Header and rows (i, sigma, length, ratio, ...) with full-precision floats.
pub fn divergence_csv(rows: &[DivergenceRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["i", "sigma", "length", "ratio", "sigma_exact", "k", "sigma_bound", "sigma_within_bound", "nodes"])?;
    for r in rows {
        w.write_record([
            r.i.to_string(),
            r.sigma.to_string(),
            r.length.to_string(),
            r.ratio.to_string(),
            r.sigma_exact.to_string(),
            r.k.to_string(),
            r.sigma_bound.to_string(),
            r.sigma_within_bound.to_string(),
            r.nodes.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Ball separation, Gehring–Hayman and LLC-2 on random pairs from the
/// central cell |p| ≤ |x_4| and the next annulus |x_4| < |p| ≤ |x_8|,
/// alternating. Each annulus uses its own graph scaled by 1/R_{2ℓ}.
pub fn separation_spotcheck(n: u32, pair_count: usize, seed: u64) -> Result<ConditionReport> {
    if pair_count == 0 {
        return Err(Error::InvalidInput("pair_count must be at least 1".into()));
    }
    let spec = CounterexampleSpec::new(n)?;
    let domain = spec.domain()?;
    let levels = n.min(2);
    let radius = |k: usize| -> Result<f64> {
        spec.point(Label::new(Family::X, 0, k))
            .map(|p| p.norm())
            .ok_or_else(|| Error::OutOfRange(format!("x_{k} is not defined")))
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut gh, mut bs, mut llc): (f64, f64, f64) = (1.0, 0.0, 1.0);
    let mut done = 0;
    let mut eps = 0.0;
    for level in 0..levels {
        let quota = (pair_count + (levels - 1 - level) as usize) / levels as usize;
        if quota == 0 {
            continue;
        }
        let s = 1.0 / scale(2 * level);
        let outer = radius(4 * level as usize + 4)? * s;
        let inner = if level == 0 { 0.0 } else { radius(4 * level as usize)? * s };
        let half = 1.25 * outer;
        let sd = Arc::new(domain.scaled(s)?);
        let g = build_graph(sd, Rect::new(-half, -half, half, half), &GraphOptions::with_eps(0.2))?;
        eps = g.eps();
        let pool: Vec<u32> = (0..g.node_count() as u32)
            .filter(|&u| {
                let r = g.node(u).norm();
                r > inner && r <= outer && g.node_distance(u) >= 0.05 * outer
            })
            .collect();
        if pool.len() < 2 {
            return Err(Error::EmptyGraph { eps: g.eps() });
        }
        let mut got = 0;
        let mut attempts = 0;
        while got < quota && attempts < 50 * quota {
            attempts += 1;
            let (a, b) = (pool[rng.gen_range(0..pool.len())], pool[rng.gen_range(0..pool.len())]);
            if a == b || g.component(a) != g.component(b) {
                continue;
            }
            let (x, y) = (g.node(a), g.node(b));
            bs = bs.max(ball_separation_constant(&g, x, y, 7)?);
            gh = gh.max(gehring_hayman_ratio(&g, x, y)?);
            got += 1;
        }
        done += got;
        llc = llc.max(llc2_constant(&g, &LlcSchedule { lattice: 3, radii: 3, trial_pairs: 8 }, seed)?);
    }
    if done == 0 {
        return Err(Error::Disconnected);
    }
    Ok(ConditionReport {
        domain: format!("counterexample(n={n})"),
        gh_constant: gh,
        bs_constant: bs,
        llc2_constant: llc,
        samples: done,
        eps,
    })
}
