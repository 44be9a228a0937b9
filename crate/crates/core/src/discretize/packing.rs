use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{Domain, Point2};

/// Where r-separated points are placed.
#[derive(Clone, Copy, Debug)]
pub enum PackingRegion<'a> {
    /// The closed ball B(0, R) of the plane.
    Plane,
    /// The closed ball B(center, R) intersected with a domain.
    Domain { domain: &'a Domain, center: Point2 },
}

/// Candidate points per r along each axis.
const GRID_PER_R: f64 = 6.0;

/// Largest r-separated set found in a radius-R ball by randomized greedy
/// insertion, maximized over `trials` orders. A lower bound on the packing
/// number.
pub fn packing_number(big_r: f64, r: f64, region: PackingRegion<'_>, trials: usize, seed: u64) -> Result<usize> {
    if !(r > 0.0 && big_r > 0.0 && r.is_finite() && big_r.is_finite()) {
        return Err(Error::InvalidInput(format!("radii must be positive, got R={big_r} r={r}")));
    }
    let center = match region {
        PackingRegion::Plane => Point2::ORIGIN,
        PackingRegion::Domain { center, .. } => center,
    };
    let step = r.min(big_r) / GRID_PER_R;
    let k = (big_r / step).ceil() as i64;
    let mut cands = Vec::new();
    for i in -k..=k {
        for j in -k..=k {
            let p = Point2::new(center.x + i as f64 * step, center.y + j as f64 * step);
            if p.dist(center) <= big_r {
                cands.push(p);
            }
        }
    }
    // Points on the rim matter when r is comparable to R.
    let rim = (2.0 * std::f64::consts::PI * big_r / step).ceil() as usize;
    for t in 0..rim {
        cands.push(center + Point2::polar(big_r, t as f64 * std::f64::consts::TAU / rim as f64));
    }
    if let PackingRegion::Domain { domain, .. } = region {
        cands.retain(|&p| domain.contains(p));
    }
    if cands.is_empty() {
        return Ok(0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    for _ in 0..trials.max(1) {
        cands.shuffle(&mut rng);
        best = best.max(greedy(&cands, r));
    }
    Ok(best)
}

fn greedy(cands: &[Point2], r: f64) -> usize {
    let mut grid: HashMap<(i64, i64), Vec<Point2>> = HashMap::new();
    let key = |p: Point2| ((p.x / r).floor() as i64, (p.y / r).floor() as i64);
    let mut count = 0;
    for &p in cands {
        let (kx, ky) = key(p);
        let clash = (-1..=1).any(|dx| {
            (-1..=1).any(|dy| grid.get(&(kx + dx, ky + dy)).is_some_and(|v| v.iter().any(|q| q.dist(p) < r)))
        });
        if !clash {
            grid.entry((kx, ky)).or_default().push(p);
            count += 1;
        }
    }
    count
}

/// Empirical planar doubling constant: the packing count of r/2-separated
/// points in a ball of radius r.
pub fn planar_doubling_constant(trials: usize, seed: u64) -> Result<usize> {
    packing_number(1.0, 0.5, PackingRegion::Plane, trials, seed)
}
