use serde::{Deserialize, Serialize};

use crate::discretize::{Mode, NavGraph};
use crate::error::Result;
use crate::geometry::Point2;
use crate::metrics::{geodesic, GeodesicResult};

/// Euclidean length of a quasihyperbolic geodesic against the inner distance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GhMeasurement {
    pub sigma: f64,
    pub length: f64,
    pub ratio: f64,
    pub k_geodesic: GeodesicResult,
    pub sigma_path: GeodesicResult,
}

pub fn gehring_hayman(graph: &NavGraph, x: Point2, y: Point2) -> Result<GhMeasurement> {
    let k_geodesic = geodesic(graph, x, y, Mode::Quasihyperbolic)?;
    let sigma_path = geodesic(graph, x, y, Mode::Inner)?;
    let sigma = sigma_path.distance;
    let length = k_geodesic.path.euclid_length;
    let ratio = if sigma > 0.0 { length / sigma } else { 1.0 };
    Ok(GhMeasurement { sigma, length, ratio, k_geodesic, sigma_path })
}

/// ℓ(γ_xy) / σ(x, y) with both curves refined.
pub fn gehring_hayman_ratio(graph: &NavGraph, x: Point2, y: Point2) -> Result<f64> {
    gehring_hayman(graph, x, y).map(|m| m.ratio)
}
