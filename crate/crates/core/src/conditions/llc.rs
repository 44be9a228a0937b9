use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::discretize::NavGraph;
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::metrics::connected_avoiding;

use super::separation::BISECTION_STEPS;

fn blocked(graph: &NavGraph, center: Point2, r: f64) -> Vec<bool> {
    let mut b = vec![false; graph.node_count()];
    for id in graph.nodes_within(center, r) {
        b[id as usize] = true;
    }
    b
}

/// Empirical c₀ for one ball: 1/min s over sampled node pairs outside
/// B(center, r), where s ≤ 1 is the largest factor keeping the pair joined
/// in the graph minus B(center, r·s).
pub fn llc2_ratio(graph: &NavGraph, center: Point2, r: f64, trial_pairs: usize, seed: u64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidInput(format!("radius must be positive, got {r}")));
    }
    let outside: Vec<u32> = (0..graph.node_count() as u32).filter(|&u| graph.node(u).dist(center) > r).collect();
    if outside.len() < 2 || trial_pairs == 0 {
        return Err(Error::InvalidInput("no node pairs outside the ball".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_s = f64::INFINITY;
    for _ in 0..trial_pairs {
        let a = outside[rng.gen_range(0..outside.len())];
        let b = outside[rng.gen_range(0..outside.len())];
        if graph.component(a) != graph.component(b) {
            continue;
        }
        let ok = |s: f64| connected_avoiding(graph, &[a], &[b], &blocked(graph, center, r * s));
        let s = if ok(1.0) {
            1.0
        } else {
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..BISECTION_STEPS {
                let mid = 0.5 * (lo + hi);
                if ok(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        };
        min_s = min_s.min(s);
    }
    if !min_s.is_finite() {
        return Err(Error::InvalidInput("no sampled pair lies in one component".into()));
    }
    Ok(1.0 / min_s.max(f64::MIN_POSITIVE))
}

/// Ball schedule for the domain-level constant.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LlcSchedule {
    /// Centers on a `lattice`×`lattice` grid over the graph box.
    pub lattice: usize,
    /// Radii r₀·2^j for j < `radii`, r₀ = box diameter / 2^radii.
    pub radii: usize,
    pub trial_pairs: usize,
}

impl Default for LlcSchedule {
    fn default() -> Self {
        LlcSchedule { lattice: 4, radii: 4, trial_pairs: 16 }
    }
}

/// Max of [`llc2_ratio`] over the schedule. Balls with no usable pairs are skipped.
pub fn llc2_constant(graph: &NavGraph, schedule: &LlcSchedule, seed: u64) -> Result<f64> {
    let bb = graph.bbox();
    let diam = bb.width().hypot(bb.height());
    let r0 = diam / 2f64.powi(schedule.radii as i32);
    let mut best: f64 = 1.0;
    for i in 0..schedule.lattice {
        for j in 0..schedule.lattice {
            let c = Point2::new(
                bb.min.x + bb.width() * (i as f64 + 0.5) / schedule.lattice as f64,
                bb.min.y + bb.height() * (j as f64 + 0.5) / schedule.lattice as f64,
            );
            for k in 0..schedule.radii {
                let r = r0 * 2f64.powi(k as i32);
                let s = seed.wrapping_add((i * schedule.lattice + j) as u64 * 1000 + k as u64);
                match llc2_ratio(graph, c, r, schedule.trial_pairs, s) {
                    Ok(v) => best = best.max(v),
                    Err(Error::InvalidInput(_)) => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(best)
}
