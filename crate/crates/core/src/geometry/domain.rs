use serde::{Deserialize, Serialize};

use super::bvh::{Bvh, Seg, NO_LOOP};
use super::point::{segments_intersect, signed_area2, Point2, Rect};
use crate::error::{Error, Result};

/// Absolute tolerance of geometric predicates, in the domain's length units.
pub const GEOM_EPS: f64 = 1e-9;

/// One boundary primitive.
///
/// A loop traversed counter-clockwise keeps its interior; traversed clockwise
/// it removes its interior. Disks keep their interior, half-planes keep the
/// side `normal` points to, strips keep `0 < (p - point)·n̂ < width`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Primitive {
    Loop { points: Vec<Point2> },
    Slit { a: Point2, b: Point2 },
    Disk { center: Point2, radius: f64 },
    #[serde(rename = "halfplane")]
    HalfPlane { point: Point2, normal: Point2 },
    Strip { point: Point2, normal: Point2, width: f64 },
}

impl Primitive {
    fn scaled(&self, s: f64) -> Primitive {
        match self {
            Primitive::Loop { points } => Primitive::Loop { points: points.iter().map(|&p| p * s).collect() },
            Primitive::Slit { a, b } => Primitive::Slit { a: *a * s, b: *b * s },
            Primitive::Disk { center, radius } => Primitive::Disk { center: *center * s, radius: radius * s },
            Primitive::HalfPlane { point, normal } => Primitive::HalfPlane { point: *point * s, normal: *normal },
            Primitive::Strip { point, normal, width } => {
                Primitive::Strip { point: *point * s, normal: *normal, width: width * s }
            }
        }
    }
}

#[derive(Clone, Debug)]
enum Analytic {
    Disk { c: Point2, r: f64 },
    // Signed height s = (p - q)·n; kept side is 0 < s < w (w infinite for half-planes).
    Slab { q: Point2, n: Point2, w: f64 },
}

#[derive(Serialize, Deserialize)]
struct DomainFile {
    primitives: Vec<Primitive>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bbox: Option<Rect>,
}

/// A proper planar subdomain: the intersection of the kept sides of all
/// primitives, with every slit removed.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "DomainFile", into = "DomainFile")]
pub struct Domain {
    primitives: Vec<Primitive>,
    bbox: Option<Rect>,
    bvh: Bvh,
    // Orientation of each loop: true when the interior is kept.
    loop_ccw: Vec<bool>,
    analytic: Vec<Analytic>,
}

impl TryFrom<DomainFile> for Domain {
    type Error = Error;
    fn try_from(f: DomainFile) -> Result<Domain> {
        Domain::new(f.primitives, f.bbox)
    }
}

impl From<Domain> for DomainFile {
    fn from(d: Domain) -> DomainFile {
        DomainFile { primitives: d.primitives, bbox: d.bbox }
    }
}

fn clean_loop(points: &[Point2]) -> Vec<Point2> {
    let mut out: Vec<Point2> = Vec::with_capacity(points.len());
    for &p in points {
        if out.last() != Some(&p) {
            out.push(p);
        }
    }
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

impl Domain {
    /// Validate primitives and build the acceleration structures.
    pub fn new(primitives: Vec<Primitive>, bbox: Option<Rect>) -> Result<Domain> {
        if primitives.is_empty() {
            return Err(Error::InvalidDomain("boundary is empty".into()));
        }
        if let Some(b) = bbox {
            if !b.is_valid() {
                return Err(Error::InvalidDomain(format!("degenerate bbox {:?}", <[f64; 4]>::from(b))));
            }
        }
        let mut segs = Vec::new();
        let mut loop_ccw = Vec::new();
        let mut analytic = Vec::new();
        let mut prims = Vec::with_capacity(primitives.len());
        let bad = |m: String| Err(Error::InvalidDomain(m));
        for prim in primitives {
            match &prim {
                Primitive::Loop { points } => {
                    let pts = clean_loop(points);
                    if pts.len() < 3 {
                        return bad("loop needs at least 3 distinct points".into());
                    }
                    if pts.iter().any(|p| !p.is_finite()) {
                        return bad("non-finite loop vertex".into());
                    }
                    let area = signed_area2(&pts);
                    if area == 0.0 {
                        return bad("loop has zero area".into());
                    }
                    check_simple(&pts)?;
                    let owner = loop_ccw.len() as u32;
                    loop_ccw.push(area > 0.0);
                    for i in 0..pts.len() {
                        segs.push(Seg { a: pts[i], b: pts[(i + 1) % pts.len()], owner });
                    }
                    prims.push(Primitive::Loop { points: pts });
                    continue;
                }
                Primitive::Slit { a, b } => {
                    if !a.is_finite() || !b.is_finite() || a == b {
                        return bad(format!("degenerate slit {a} {b}"));
                    }
                    segs.push(Seg { a: *a, b: *b, owner: NO_LOOP });
                }
                Primitive::Disk { center, radius } => {
                    if !center.is_finite() || !(radius.is_finite() && *radius > 0.0) {
                        return bad("disk needs a finite center and positive radius".into());
                    }
                    analytic.push(Analytic::Disk { c: *center, r: *radius });
                }
                Primitive::HalfPlane { point, normal } => {
                    if !point.is_finite() || !normal.is_finite() || normal.norm() == 0.0 {
                        return bad("half-plane needs a finite point and nonzero normal".into());
                    }
                    analytic.push(Analytic::Slab { q: *point, n: normal.normalized(), w: f64::INFINITY });
                }
                Primitive::Strip { point, normal, width } => {
                    if !point.is_finite() || !normal.is_finite() || normal.norm() == 0.0 {
                        return bad("strip needs a finite point and nonzero normal".into());
                    }
                    if !(width.is_finite() && *width > 0.0) {
                        return bad("strip needs a positive width".into());
                    }
                    analytic.push(Analytic::Slab { q: *point, n: normal.normalized(), w: *width });
                }
            }
            prims.push(prim);
        }
        check_crossings(&segs)?;
        Ok(Domain { primitives: prims, bbox, bvh: Bvh::build(segs), loop_ccw, analytic })
    }

    pub fn primitives(&self) -> &[Primitive] {
        &self.primitives
    }

    pub fn bbox(&self) -> Option<Rect> {
        self.bbox
    }

    pub fn with_bbox(mut self, bbox: Rect) -> Domain {
        self.bbox = Some(bbox);
        self
    }

    /// The similar domain λΩ (bbox scaled as well).
    pub fn scaled(&self, s: f64) -> Result<Domain> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidInput(format!("scale must be positive, got {s}")));
        }
        Domain::new(self.primitives.iter().map(|p| p.scaled(s)).collect(), self.bbox.map(|b| b.scaled(s)))
    }

    /// Bounding box of the polygonal boundary, if there is one.
    pub fn boundary_extent(&self) -> Option<Rect> {
        self.bvh.segs().iter().map(|s| Rect::of_segment(s.a, s.b)).reduce(|a, b| a.union(&b))
    }

    /// Euclidean distance from `p` to the union of all boundary primitives,
    /// regardless of whether `p` lies in the domain.
    pub fn boundary_distance(&self, p: Point2) -> f64 {
        let mut d = self.bvh.nearest(p);
        for a in &self.analytic {
            d = d.min(match *a {
                Analytic::Disk { c, r } => (r - p.dist(c)).abs(),
                Analytic::Slab { q, n, w } => {
                    let s = (p - q).dot(n);
                    if w.is_finite() {
                        s.abs().min((s - w).abs())
                    } else {
                        s.abs()
                    }
                }
            });
        }
        d
    }

    fn on_kept_side(&self, p: Point2) -> bool {
        for a in &self.analytic {
            let ok = match *a {
                Analytic::Disk { c, r } => p.dist(c) < r,
                Analytic::Slab { q, n, w } => {
                    let s = (p - q).dot(n);
                    s > 0.0 && s < w
                }
            };
            if !ok {
                return false;
            }
        }
        if self.loop_ccw.is_empty() {
            return true;
        }
        let mut parity = vec![false; self.loop_ccw.len()];
        self.bvh.ray_crossings(p, |o| parity[o as usize] ^= true);
        parity.iter().zip(&self.loop_ccw).all(|(&inside, &ccw)| inside == ccw)
    }

    /// Strict membership. Boundary points (within [`GEOM_EPS`]) are outside.
    pub fn contains(&self, p: Point2) -> bool {
        p.is_finite() && self.on_kept_side(p) && self.boundary_distance(p) > GEOM_EPS
    }

    /// d_Ω(p): the boundary distance inside the domain, 0 elsewhere.
    pub fn distance_to_boundary(&self, p: Point2) -> f64 {
        if !p.is_finite() || !self.on_kept_side(p) {
            return 0.0;
        }
        let d = self.boundary_distance(p);
        if d > GEOM_EPS {
            d
        } else {
            0.0
        }
    }

    /// Does the closed segment `[a, b]` meet a polygonal boundary piece?
    pub fn segment_hits_boundary(&self, a: Point2, b: Point2) -> bool {
        self.bvh.any_intersection(a, b)
    }

    /// Whether `[a, b]` lies in the domain (endpoints included).
    pub fn segment_inside(&self, a: Point2, b: Point2) -> bool {
        // Analytic sides are convex, so only polygonal pieces can be crossed.
        self.contains(a) && self.contains(b) && !self.segment_hits_boundary(a, b)
    }

    /// min over t of d_Ω(a + t(b − a)), to relative accuracy 1e-6, by
    /// subdivision with Lipschitz pruning. Returns 0 when the segment leaves
    /// the domain or crosses a slit.
    pub fn segment_clearance(&self, a: Point2, b: Point2) -> f64 {
        if !self.segment_inside(a, b) {
            return 0.0;
        }
        let len = a.dist(b);
        let fa = self.boundary_distance(a);
        let fb = self.boundary_distance(b);
        let mut best = fa.min(fb);
        let mut stack = vec![(0.0f64, 1.0f64, fa, fb)];
        while let Some((t0, t1, f0, f1)) = stack.pop() {
            // A 1-Lipschitz function with these end values stays above this.
            let lower = 0.5 * (f0 + f1 - len * (t1 - t0));
            if lower >= best * (1.0 - 1e-6) {
                continue;
            }
            let tm = 0.5 * (t0 + t1);
            let fm = self.boundary_distance(a.lerp(b, tm));
            best = best.min(fm);
            if t1 - t0 < 1e-14 {
                continue;
            }
            stack.push((t0, tm, f0, fm));
            stack.push((tm, t1, fm, f1));
        }
        best
    }

    /// Closed-form clearance: the distance between the segment and each
    /// boundary piece, minimized. Used to cross-check [`Self::segment_clearance`].
    pub fn segment_clearance_exact(&self, a: Point2, b: Point2) -> f64 {
        if !self.segment_inside(a, b) {
            return 0.0;
        }
        let mut d = self.bvh.nearest_to_segment(a, b);
        for an in &self.analytic {
            d = d.min(match *an {
                // Interior of a disk: r − |p − c| is concave along a segment.
                Analytic::Disk { c, r } => r - a.dist(c).max(b.dist(c)),
                Analytic::Slab { q, n, w } => {
                    let (sa, sb) = ((a - q).dot(n), (b - q).dot(n));
                    let lo = sa.min(sb);
                    if w.is_finite() {
                        lo.min(w - sa.max(sb))
                    } else {
                        lo
                    }
                }
            });
        }
        d
    }

    /// Region used for discretization: the explicit bbox, else a box around
    /// the bounded primitives.
    pub fn region(&self) -> Option<Rect> {
        if self.bbox.is_some() {
            return self.bbox;
        }
        let mut r = self.boundary_extent();
        for a in &self.analytic {
            match *a {
                Analytic::Disk { c, r: rad } => {
                    let d = Rect::around(c, rad);
                    r = Some(r.map_or(d, |x| x.union(&d)));
                }
                Analytic::Slab { .. } => return None,
            }
        }
        r
    }
}

fn check_simple(pts: &[Point2]) -> Result<()> {
    let n = pts.len();
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                continue;
            }
            let (c, d) = (pts[j], pts[(j + 1) % n]);
            if segments_intersect(a, b, c, d) {
                return Err(Error::InvalidDomain(format!("loop is not simple: edge {i} meets edge {j}")));
            }
        }
    }
    Ok(())
}

/// Loops of different primitives must not meet; slits may touch other
/// pieces only at their endpoints.
fn check_crossings(segs: &[Seg]) -> Result<()> {
    let bvh = Bvh::build(segs.to_vec());
    let scale = |p: Point2| GEOM_EPS * p.x.abs().max(p.y.abs()).max(1.0);
    for s in segs.iter().filter(|s| s.owner == NO_LOOP) {
        let dir = s.b - s.a;
        let shrink = (scale(s.a).max(scale(s.b)) * 4.0 / dir.norm()).min(0.25);
        let (a, b) = (s.a + dir * shrink, s.b - dir * shrink);
        let touching = bvh
            .segs()
            .iter()
            .filter(|o| !(o.a == s.a && o.b == s.b && o.owner == NO_LOOP))
            .any(|o| segments_intersect(a, b, o.a, o.b));
        if touching {
            return Err(Error::InvalidDomain(format!("slit {} {} crosses another boundary piece", s.a, s.b)));
        }
    }
    for (i, s) in segs.iter().enumerate().filter(|(_, s)| s.owner != NO_LOOP) {
        for o in &segs[i + 1..] {
            if o.owner != NO_LOOP && o.owner != s.owner && segments_intersect(s.a, s.b, o.a, o.b) {
                return Err(Error::InvalidDomain(format!("loops {} and {} intersect", s.owner, o.owner)));
            }
        }
    }
    Ok(())
}
