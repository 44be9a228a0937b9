use std::fmt::Write as _;
use std::path::Path as FsPath;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Domain, Point2, Primitive, Rect};

/// Stroke style of an overlay.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Style {
    pub stroke: String,
    pub width: f64,
    pub dash: Option<String>,
}

impl Style {
    pub fn geodesic() -> Style {
        Style { stroke: "red".into(), width: 1.5, dash: None }
    }

    pub fn competitor() -> Style {
        Style { stroke: "blue".into(), width: 1.0, dash: Some("4 3".into()) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Overlay {
    pub points: Vec<Point2>,
    pub style: Style,
}

fn polyline(out: &mut String, pts: &[Point2], close: bool) {
    for (i, p) in pts.iter().enumerate() {
        let _ = write!(out, "{}{} {} ", if i == 0 { 'M' } else { 'L' }, p.x, p.y);
    }
    if close {
        out.push('Z');
    }
}

/// Clip the line {q + t·dir} to `r`, as a segment.
fn clip_line(q: Point2, dir: Point2, r: &Rect) -> Option<(Point2, Point2)> {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for (p, d, min, max) in [(q.x, dir.x, r.min.x, r.max.x), (q.y, dir.y, r.min.y, r.max.y)] {
        if d.abs() < 1e-300 {
            if p < min || p > max {
                return None;
            }
        } else {
            let (t0, t1) = ((min - p) / d, (max - p) / d);
            lo = lo.max(t0.min(t1));
            hi = hi.min(t0.max(t1));
        }
    }
    (lo <= hi).then(|| (q + dir * lo, q + dir * hi))
}

fn primitive_path(p: &Primitive, view: &Rect) -> String {
    let mut d = String::new();
    match p {
        Primitive::Loop { points } => polyline(&mut d, points, true),
        Primitive::Slit { a, b } => polyline(&mut d, &[*a, *b], false),
        Primitive::Disk { center, radius } => {
            let (l, r) = (Point2::new(center.x - radius, center.y), Point2::new(center.x + radius, center.y));
            let _ = write!(d, "M{} {} A{radius} {radius} 0 1 0 {} {} A{radius} {radius} 0 1 0 {} {} Z", l.x, l.y, r.x, r.y, l.x, l.y);
        }
        Primitive::HalfPlane { point, normal } => {
            if let Some((a, b)) = clip_line(*point, normal.perp(), view) {
                polyline(&mut d, &[a, b], false);
            }
        }
        Primitive::Strip { point, normal, width } => {
            let n = normal.normalized();
            for q in [*point, *point + n * *width] {
                if let Some((a, b)) = clip_line(q, n.perp(), view) {
                    polyline(&mut d, &[a, b], false);
                }
            }
        }
    }
    d
}

/// Standalone SVG: one black path per boundary primitive, then one path per
/// overlay. The view box is the domain box (or boundary extent) plus 5%.
pub fn emit_svg(domain: &Domain, overlays: &[Overlay]) -> Result<String> {
    let bb = domain
        .region()
        .or_else(|| domain.boundary_extent())
        .ok_or_else(|| Error::InvalidInput("domain has no finite box to plot".into()))?;
    if !bb.is_valid() {
        return Err(Error::InvalidInput("domain box is not finite".into()));
    }
    let view = bb.inflate(0.05);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="{}">"#,
        view.min.x,
        -view.max.y,
        view.width(),
        view.height(),
        (800.0 * view.height() / view.width()).round()
    );
    s.push_str("<g transform=\"scale(1,-1)\" fill=\"none\">\n");
    for p in domain.primitives() {
        let _ = writeln!(
            s,
            r#"<path d="{}" stroke="black" stroke-width="1" vector-effect="non-scaling-stroke"/>"#,
            primitive_path(p, &view).trim_end()
        );
    }
    for o in overlays {
        let mut d = String::new();
        polyline(&mut d, &o.points, false);
        let dash = o.style.dash.as_ref().map(|x| format!(r#" stroke-dasharray="{x}""#)).unwrap_or_default();
        let _ = writeln!(
            s,
            r#"<path d="{}" stroke="{}" stroke-width="{}"{dash} vector-effect="non-scaling-stroke"/>"#,
            d.trim_end(),
            o.style.stroke,
            o.style.width
        );
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

pub fn write_svg(path: &FsPath, domain: &Domain, overlays: &[Overlay]) -> Result<()> {
    std::fs::write(path, emit_svg(domain, overlays)?)?;
    Ok(())
}
