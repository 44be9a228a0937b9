use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Domain, Point2};

/// Adaptive midpoint rule for ∫ |dz| / d_Ω(z) along a segment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// A piece is split until max d_Ω / min d_Ω over it, bounded through the
    /// Lipschitz property from its midpoint value, is at most
    /// `1 + max_relative_variation`.
    pub max_relative_variation: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { max_relative_variation: 0.1 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        let v = self.max_relative_variation;
        if v > 0.0 && v < 1.0 {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("max_relative_variation must lie in (0,1), got {v}")))
        }
    }
}

const MAX_DEPTH: u32 = 60;

/// Quasihyperbolic length of `[a, b]`, which must lie in the domain.
pub fn qh_edge_weight(domain: &Domain, a: Point2, b: Point2, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    if !domain.segment_inside(a, b) {
        return Err(Error::NoClearance(a, b));
    }
    Ok(qh_segment(domain, a, b, domain.boundary_distance(a), domain.boundary_distance(b), spec))
}

/// Unchecked quadrature given the boundary distances at both ends.
pub(crate) fn qh_segment(domain: &Domain, a: Point2, b: Point2, da: f64, db: f64, spec: &QuadratureSpec) -> f64 {
    // Integrate in a canonical direction so both orientations agree exactly.
    let (a, b, da, db) = if (b.x, b.y) < (a.x, a.y) { (b, a, db, da) } else { (a, b, da, db) };
    let len = a.dist(b);
    if len == 0.0 {
        return 0.0;
    }
    let ratio = 1.0 + spec.max_relative_variation;
    let mut total = 0.0;
    let mut stack = vec![(0.0f64, 1.0f64, da, db, 0u32)];
    while let Some((t0, t1, d0, d1, depth)) = stack.pop() {
        let tm = 0.5 * (t0 + t1);
        let dm = domain.boundary_distance(a.lerp(b, tm));
        // d_Ω is 1-Lipschitz, so the piece stays within dm ± half its length.
        let reach = 0.5 * len * (t1 - t0);
        let hi = d0.max(d1).max(dm + reach);
        let lo = d0.min(d1).min(dm - reach);
        if (lo > 0.0 && hi <= ratio * lo) || depth >= MAX_DEPTH {
            total += len * (t1 - t0) / dm;
        } else {
            stack.push((tm, t1, dm, d1, depth + 1));
            stack.push((t0, tm, d0, dm, depth + 1));
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Primitive;

    fn half_plane() -> Domain {
        Domain::new(vec![Primitive::HalfPlane { point: Point2::ORIGIN, normal: Point2::new(0.0, 1.0) }], None).unwrap()
    }

    #[test]
    fn analytic_examples() {
        let s = QuadratureSpec::default();
        let h = half_plane();
        let e = std::f64::consts::E;
        let w = qh_edge_weight(&h, Point2::new(0.0, 1.0), Point2::new(0.0, e), &s).unwrap();
        assert!((w - 1.0).abs() < 0.01, "{w}");
        let w = qh_edge_weight(&h, Point2::new(0.0, 1.0), Point2::new(1.0, 1.0), &s).unwrap();
        assert!((w - 1.0).abs() < 1e-12);
        let disk = Domain::new(vec![Primitive::Disk { center: Point2::ORIGIN, radius: 1.0 }], None).unwrap();
        let w = qh_edge_weight(&disk, Point2::ORIGIN, Point2::new(0.9, 0.0), &s).unwrap();
        assert!((w / 10f64.ln() - 1.0).abs() < 0.01, "{w}");
    }

    #[test]
    fn rejects_crossing_segment() {
        let h = half_plane();
        let s = QuadratureSpec::default();
        assert!(qh_edge_weight(&h, Point2::new(0.0, 1.0), Point2::new(0.0, -1.0), &s).is_err());
        assert!(qh_edge_weight(&h, Point2::new(0.0, 1.0), Point2::new(0.0, 2.0), &QuadratureSpec {
            max_relative_variation: 1.5
        })
        .is_err());
    }
}
