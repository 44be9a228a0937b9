use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::counterexample::CounterexampleSpec;
use crate::error::{Error, Result};
use crate::geometry::{Domain, Point2, Primitive, Rect};

/// Named real parameters of a gallery domain.
pub type Params = BTreeMap<String, f64>;

/// Built-in domains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GalleryId {
    #[serde(rename = "disk")]
    Disk,
    #[serde(rename = "halfplane")]
    HalfPlane,
    #[serde(rename = "square")]
    Square,
    #[serde(rename = "strip")]
    Strip,
    #[serde(rename = "L_shape")]
    LShape,
    #[serde(rename = "corridor")]
    Corridor,
    #[serde(rename = "slit_plane")]
    SlitPlane,
    #[serde(rename = "counterexample")]
    Counterexample,
}

impl GalleryId {
    pub const ALL: [GalleryId; 8] = [
        GalleryId::Disk,
        GalleryId::HalfPlane,
        GalleryId::Square,
        GalleryId::Strip,
        GalleryId::LShape,
        GalleryId::Corridor,
        GalleryId::SlitPlane,
        GalleryId::Counterexample,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GalleryId::Disk => "disk",
            GalleryId::HalfPlane => "halfplane",
            GalleryId::Square => "square",
            GalleryId::Strip => "strip",
            GalleryId::LShape => "L_shape",
            GalleryId::Corridor => "corridor",
            GalleryId::SlitPlane => "slit_plane",
            GalleryId::Counterexample => "counterexample",
        }
    }
}

impl fmt::Display for GalleryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GalleryId {
    type Err = Error;
    fn from_str(s: &str) -> Result<GalleryId> {
        GalleryId::ALL.into_iter().find(|g| g.name() == s).ok_or_else(|| Error::UnknownGallery(s.to_string()))
    }
}

fn param(params: &Params, key: &str, default: f64) -> Result<f64> {
    let v = params.get(key).copied().unwrap_or(default);
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidInput(format!("parameter {key} must be positive, got {v}")))
    }
}

fn quad(xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> Primitive {
    Primitive::Loop {
        points: vec![
            Point2::new(xmin, ymin),
            Point2::new(xmax, ymin),
            Point2::new(xmax, ymax),
            Point2::new(xmin, ymax),
        ],
    }
}

/// Construct a gallery domain.
///
/// | id | shape | params |
/// |---|---|---|
/// | disk | B(0, radius) | radius = 1 |
/// | halfplane | y > 0, box [−w, w]×(0, 2w] | half_width = 4 |
/// | square | (0, side)² | side = 1 |
/// | strip | R×(0, width), box [−5w, 5w]×[0, w] | width = 1 |
/// | L_shape | (0,2)² ∖ [1,2]², scaled | scale = 1 |
/// | corridor | (0, length)×(0, width) | length = 10, width = 1 |
/// | slit_plane | R² ∖ [0,1]×{0}, box [−2,3]×[−2.5,2.5] | |
/// | counterexample | D_n | n = 2 |
pub fn make_domain(id: GalleryId, params: &Params) -> Result<Domain> {
    match id {
        GalleryId::Disk => {
            let r = param(params, "radius", 1.0)?;
            Domain::new(vec![Primitive::Disk { center: Point2::ORIGIN, radius: r }], Some(Rect::new(-r, -r, r, r)))
        }
        GalleryId::HalfPlane => {
            let w = param(params, "half_width", 4.0)?;
            Domain::new(
                vec![Primitive::HalfPlane { point: Point2::ORIGIN, normal: Point2::new(0.0, 1.0) }],
                Some(Rect::new(-w, 0.0, w, 2.0 * w)),
            )
        }
        GalleryId::Square => {
            let s = param(params, "side", 1.0)?;
            Domain::new(vec![quad(0.0, 0.0, s, s)], Some(Rect::new(0.0, 0.0, s, s)))
        }
        GalleryId::Strip => {
            let w = param(params, "width", 1.0)?;
            Domain::new(
                vec![Primitive::Strip { point: Point2::ORIGIN, normal: Point2::new(0.0, 1.0), width: w }],
                Some(Rect::new(-5.0 * w, 0.0, 5.0 * w, w)),
            )
        }
        GalleryId::LShape => {
            let s = param(params, "scale", 1.0)?;
            let pts = [(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)];
            Domain::new(
                vec![Primitive::Loop { points: pts.iter().map(|&(x, y)| Point2::new(s * x, s * y)).collect() }],
                Some(Rect::new(0.0, 0.0, 2.0 * s, 2.0 * s)),
            )
        }
        GalleryId::Corridor => {
            let l = param(params, "length", 10.0)?;
            let w = param(params, "width", 1.0)?;
            Domain::new(vec![quad(0.0, 0.0, l, w)], Some(Rect::new(0.0, 0.0, l, w)))
        }
        GalleryId::SlitPlane => Domain::new(
            vec![Primitive::Slit { a: Point2::ORIGIN, b: Point2::new(1.0, 0.0) }],
            Some(Rect::new(-2.0, -2.5, 3.0, 2.5)),
        ),
        GalleryId::Counterexample => {
            let n = params.get("n").copied().unwrap_or(2.0);
            if !(n >= 1.0 && n.fract() == 0.0 && n <= u32::MAX as f64) {
                return Err(Error::InvalidInput(format!("counterexample n must be a positive integer, got {n}")));
            }
            CounterexampleSpec::new(n as u32)?.domain()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_roundtrip() {
        for id in GalleryId::ALL {
            assert_eq!(id.name().parse::<GalleryId>().unwrap(), id);
            assert_eq!(serde_json::to_string(&id).unwrap(), format!("\"{}\"", id.name()));
        }
        assert!("torus".parse::<GalleryId>().is_err());
    }

    #[test]
    fn every_domain_builds() {
        for id in GalleryId::ALL {
            let d = make_domain(id, &Params::new()).unwrap();
            assert!(d.region().is_some(), "{id}");
        }
        let mut p = Params::new();
        p.insert("radius".into(), -1.0);
        assert!(make_domain(GalleryId::Disk, &p).is_err());
    }
}
