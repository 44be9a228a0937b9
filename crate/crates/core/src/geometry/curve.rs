use serde::{Deserialize, Serialize};

use super::{Domain, Path, Point2};
use crate::error::{Error, Result};

/// Interior sample points per segment when measuring the cone condition.
const CONE_SAMPLES: usize = 64;

/// Constants of the double-cone and length conditions for one curve.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CurveClass {
    pub cone_constant: Option<f64>,
    pub length_constant: Option<f64>,
    pub inner_length_constant: Option<f64>,
}

impl CurveClass {
    pub fn is_john(&self, c: f64) -> bool {
        self.cone_constant.is_some_and(|k| k <= c)
    }

    pub fn is_uniform(&self, c: f64) -> bool {
        self.is_john(c) && self.length_constant.is_some_and(|k| k <= c)
    }

    pub fn is_inner_uniform(&self, c: f64) -> bool {
        self.is_john(c) && self.inner_length_constant.is_some_and(|k| k <= c)
    }
}

/// Measure the cone, length and inner-length constants of `path`.
///
/// The cone ratio min(ℓ(γ[z₁,z]), ℓ(γ[z,z₂])) / d_Ω(z) is evaluated at every
/// vertex and at evenly spaced points inside each segment. The inner
/// constant is left out when no σ evaluator is supplied or it fails.
pub fn classify_curve(
    domain: &Domain,
    path: &Path,
    sigma: Option<&dyn Fn(Point2, Point2) -> Result<f64>>,
) -> Result<CurveClass> {
    let (z1, z2) = (path.start(), path.end());
    if z1 == z2 {
        return Err(Error::DegeneratePath);
    }
    let total = path.euclid_length;
    let mut cone = 0.0f64;
    let mut s = 0.0;
    let mut probe = |z: Point2, s: f64| {
        let d = domain.distance_to_boundary(z);
        let side = s.min(total - s).max(0.0);
        if d > 0.0 {
            cone = cone.max(side / d);
        } else if side > 0.0 {
            cone = f64::INFINITY;
        }
    };
    for w in path.vertices.windows(2) {
        let l = w[0].dist(w[1]);
        for k in 0..CONE_SAMPLES {
            let t = k as f64 / CONE_SAMPLES as f64;
            probe(w[0].lerp(w[1], t), s + t * l);
        }
        s += l;
    }
    probe(z2, total);
    let chord = z1.dist(z2);
    let inner = match sigma {
        Some(f) => f(z1, z2).ok().filter(|v| *v > 0.0).map(|v| total / v),
        None => None,
    };
    Ok(CurveClass {
        cone_constant: Some(cone).filter(|c| c.is_finite() && *c > 0.0),
        length_constant: Some(total / chord),
        inner_length_constant: inner,
    })
}
