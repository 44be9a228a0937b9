use serde::{Deserialize, Serialize};

use super::geodesic::GeodesicResult;
use crate::discretize::Mode;
use crate::error::{Error, Result};
use crate::geometry::Domain;

/// Margins of the two-sided bounds on k. Each must be at least `-tol`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundMargins {
    /// k − log(1 + σ / min d_Ω).
    pub m1: f64,
    /// ℓ_k(γ) − log(1 + ℓ_d(γ) / min d_Ω) on the k-geodesic.
    pub m2: f64,
    /// 9a/(10(a−1))·d(x,y)/d_Ω(x) − k, when d(x,y) ≤ d_Ω(x)/a with a > 1.
    pub m3: Option<f64>,
    /// The same with the constant 10a/(9(a−1)) that the argument yields.
    pub m3_proof: Option<f64>,
    pub a: Option<f64>,
    pub tol: f64,
}

impl BoundMargins {
    pub fn holds(&self) -> bool {
        self.m1 >= -self.tol && self.m2 >= -self.tol && self.m3.is_none_or(|m| m >= -self.tol)
    }
}

/// Compare a k result and a σ result with the same endpoints against the
/// logarithmic lower bounds and, for close points, the linear upper bound.
/// With `a = None` the largest admissible a = d_Ω(x)/d(x,y) is used.
pub fn bound_check(
    domain: &Domain,
    result_k: &GeodesicResult,
    result_sigma: &GeodesicResult,
    a: Option<f64>,
) -> Result<BoundMargins> {
    if result_k.mode != Mode::Quasihyperbolic || result_sigma.mode != Mode::Inner {
        return Err(Error::InvalidInput("bound_check expects a k result and a σ result".into()));
    }
    if result_k.endpoints != result_sigma.endpoints {
        return Err(Error::MismatchedEndpoints);
    }
    let (x, y) = result_k.endpoints;
    let (dx, dy) = (domain.distance_to_boundary(x), domain.distance_to_boundary(y));
    let dmin = dx.min(dy);
    if dmin <= 0.0 {
        return Err(Error::InvalidInput("endpoints must lie in the domain".into()));
    }
    let k = result_k.distance;
    let tol = 0.02 * (1.0 + k);
    let m1 = k - (1.0 + result_sigma.distance / dmin).ln();
    let m2 = result_k.path.qh_length - (1.0 + result_k.path.euclid_length / dmin).ln();
    let dxy = x.dist(y);
    let a = a.or_else(|| Some(dx / dxy)).filter(|&a| a > 1.0 && dxy <= dx / a * (1.0 + 1e-12));
    let m3 = a.map(|a| 9.0 * a / (10.0 * (a - 1.0)) * dxy / dx - k);
    let m3_proof = a.map(|a| 10.0 * a / (9.0 * (a - 1.0)) * dxy / dx - k);
    Ok(BoundMargins { m1, m2, m3, m3_proof, a, tol })
}
