use serde::{Deserialize, Serialize};

use super::{Domain, Point2};
use crate::discretize::quadrature::{qh_segment, QuadratureSpec};
use crate::error::{Error, Result};

/// A polyline inside a domain with cached Euclidean and quasihyperbolic lengths.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pub vertices: Vec<Point2>,
    pub euclid_length: f64,
    pub qh_length: f64,
}

impl Path {
    /// Validate every segment against the domain and compute both lengths.
    pub fn new(domain: &Domain, vertices: Vec<Point2>, spec: &QuadratureSpec) -> Result<Path> {
        if vertices.is_empty() {
            return Err(Error::InvalidInput("path has no vertices".into()));
        }
        if let [p] = vertices[..] {
            if !domain.contains(p) {
                return Err(Error::InvalidInput(format!("path vertex {p} is outside the domain")));
            }
        }
        for w in vertices.windows(2) {
            if !domain.segment_inside(w[0], w[1]) {
                return Err(Error::NoClearance(w[0], w[1]));
            }
        }
        Ok(Self::measure(domain, vertices, spec))
    }

    /// Compute lengths without validating (caller guarantees clearance).
    pub(crate) fn measure(domain: &Domain, vertices: Vec<Point2>, spec: &QuadratureSpec) -> Path {
        let mut euclid = 0.0;
        let mut qh = 0.0;
        let mut prev_d = vertices.first().map(|&p| domain.boundary_distance(p)).unwrap_or(0.0);
        for w in vertices.windows(2) {
            let d1 = domain.boundary_distance(w[1]);
            euclid += w[0].dist(w[1]);
            qh += qh_segment(domain, w[0], w[1], prev_d, d1, spec);
            prev_d = d1;
        }
        Path { vertices, euclid_length: euclid, qh_length: qh }
    }

    pub fn start(&self) -> Point2 {
        self.vertices[0]
    }

    pub fn end(&self) -> Point2 {
        *self.vertices.last().expect("path is nonempty")
    }

    pub fn reversed(&self) -> Path {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Path { vertices, ..*self }
    }

    /// Cumulative Euclidean arclength at each vertex.
    pub fn arclengths(&self) -> Vec<f64> {
        let mut acc = Vec::with_capacity(self.vertices.len());
        let mut s = 0.0;
        acc.push(0.0);
        for w in self.vertices.windows(2) {
            s += w[0].dist(w[1]);
            acc.push(s);
        }
        acc
    }

    /// Point at Euclidean arclength `s` from the start (clamped).
    pub fn point_at(&self, s: f64) -> Point2 {
        let mut rem = s.max(0.0);
        for w in self.vertices.windows(2) {
            let l = w[0].dist(w[1]);
            if rem <= l && l > 0.0 {
                return w[0].lerp(w[1], rem / l);
            }
            rem -= l;
        }
        self.end()
    }
}

impl Default for Path {
    fn default() -> Self {
        Path { vertices: Vec::new(), euclid_length: 0.0, qh_length: 0.0 }
    }
}
