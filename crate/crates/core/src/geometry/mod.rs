//! Planar domains, boundary distance, membership and curves.

mod bvh;
mod curve;
mod domain;
mod path;
mod point;

pub use curve::{classify_curve, CurveClass};
pub use domain::{Domain, Primitive, GEOM_EPS};
pub use path::Path;
pub use point::{
    point_in_polygon, point_segment_dist, segment_segment_dist, segments_intersect, signed_area2, Point2, Rect,
};
