//! The domain D_n: the plane minus a spiral of polygons and slits whose
//! scales grow like R_i = 8^{(3/2)^i}.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{signed_area2, Domain, Point2, Primitive, Rect};

/// Largest n for which coordinates stay within desk-scale double precision.
pub const MAX_N: u32 = 4;

/// R_i = 8^{(3/2)^i}.
pub fn scale(i: u32) -> f64 {
    (1.5f64.powi(i as i32) * 8f64.ln()).exp()
}

/// Point families: `X` and its reflections in the horizontal axis (`Y`),
/// the vertical axis (`Z`) and both (`W`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    X,
    Y,
    Z,
    W,
}

impl Family {
    fn letter(self) -> char {
        match self {
            Family::X => 'x',
            Family::Y => 'y',
            Family::Z => 'z',
            Family::W => 'w',
        }
    }

    fn apply(self, p: Point2) -> Point2 {
        match self {
            Family::X => p,
            Family::Y => p.reflect_x(),
            Family::Z => p.reflect_y(),
            Family::W => -p,
        }
    }
}

/// Names a generated point: `sub` 0 is x_k, 1 is x_{1,k}, 2 is x_{2,k}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    pub family: Family,
    pub sub: u8,
    pub k: usize,
}

impl Label {
    pub fn new(family: Family, sub: u8, k: usize) -> Label {
        Label { family, sub, k }
    }

    /// x_{2,1} is declared equal to x_{1,1} (likewise for each family).
    fn canonical(self) -> Label {
        if self.sub == 2 && self.k == 1 {
            Label { sub: 1, ..self }
        } else {
            self
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sub {
            0 => write!(f, "{}_{}", self.family.letter(), self.k),
            s => write!(f, "{}_{{{},{}}}", self.family.letter(), s, self.k),
        }
    }
}

/// An excluded polygon D_{j,i}, clockwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub name: String,
    pub j: u32,
    pub i: u32,
    pub vertices: Vec<Point2>,
    pub labels: Vec<String>,
}

/// A removed segment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedSlit {
    pub name: String,
    pub i: u32,
    pub a: Point2,
    pub b: Point2,
}

/// Generated geometry of D_n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleSpec {
    pub n: u32,
}

fn angles() -> (f64, f64, f64, f64) {
    let a11 = 11.0 * PI / 24.0;
    let a1 = PI / 24.0;
    (a11.cos(), a11.sin(), a1.cos(), a1.sin())
}

impl CounterexampleSpec {
    pub fn new(n: u32) -> Result<CounterexampleSpec> {
        if n == 0 {
            return Err(Error::InvalidInput("counterexample needs n ≥ 1".into()));
        }
        if n > MAX_N {
            return Err(Error::DeskScale(n));
        }
        Ok(CounterexampleSpec { n })
    }

    /// Largest family index used by the excluded regions of levels 0..=n.
    pub fn max_index(&self) -> usize {
        4 * self.n as usize + 7
    }

    /// Coordinates of a labelled point, or `None` where the family has no
    /// closed formula (x_{2,k} for even k).
    pub fn point(&self, label: Label) -> Option<Point2> {
        let l = label.canonical();
        if l.k == 0 || l.k > self.max_index() {
            return None;
        }
        let (c11, s11, c1, s1) = angles();
        let m = (l.k / 2) as u32;
        let odd = l.k % 2 == 1;
        let r = scale(m);
        let r1 = scale(m + 1);
        let h = 1.5 * 3f64.sqrt();
        let p = match (l.sub, l.k, odd) {
            (0, 1, _) => Point2::new(8.0 * c11, 8.0 * s11),
            (1, 1, _) => Point2::new(scale(1) * c1, scale(1) * s1),
            (0, _, false) => Point2::new(3.0 * r * c11, 3.0 * r * s11),
            (0, _, true) => Point2::new(6.0 * r * c11, 6.0 * r * s11),
            (1, _, false) => Point2::new(r1 * c1, 3.0 * r * s11 + r1 * s1),
            (1, _, true) => Point2::new(h * r1, 6.0 * r * s11 + 1.5 * r1),
            (2, _, true) => Point2::new(h * r1, h * r1 * (PI / 24.0).tan()),
            _ => return None,
        };
        Some(l.family.apply(p))
    }

    fn pt(&self, label: Label) -> Result<Point2> {
        self.point(label).ok_or_else(|| Error::OutOfRange(format!("point {label} is not defined")))
    }

    /// One family as (k, point) pairs for k = 1..=max_index.
    pub fn family(&self, family: Family, sub: u8) -> Vec<(usize, Point2)> {
        (1..=self.max_index()).filter_map(|k| self.point(Label::new(family, sub, k)).map(|p| (k, p))).collect()
    }

    /// The boundary segments of D_{j,i} as listed in the construction.
    pub fn region_edges(j: u32, i: u32) -> Vec<(Label, Label)> {
        let i = i as usize;
        let (f, o) = match j {
            1 => (Family::X, 0),
            2 => (Family::Y, 1),
            3 => (Family::Z, 2),
            _ => (Family::W, 3),
        };
        let p = |sub: u8, k: usize| Label::new(f, sub, k);
        let e = |k: usize| 4 * i + k;
        match o {
            0 => vec![
                (p(0, e(2)), p(1, e(2))),
                (p(1, e(1)), p(1, e(2))),
                (p(1, e(1)), p(2, e(1))),
                (p(2, e(1)), p(2, e(3))),
                (p(2, e(3)), p(1, e(3))),
                (p(1, e(3)), p(1, e(4))),
                (p(0, e(2)), p(0, e(4))),
                (p(0, e(4)), p(1, e(4))),
            ],
            1 => vec![
                (p(0, e(3)), p(0, e(6))),
                (p(0, e(3)), p(1, e(3))),
                (p(1, e(3)), p(2, e(3))),
                (p(2, e(3)), p(2, e(5))),
                (p(0, e(6)), p(1, e(6))),
                (p(1, e(6)), p(1, e(5))),
                (p(1, e(5)), p(2, e(5))),
            ],
            2 => vec![
                (p(0, e(4)), p(1, e(4))),
                (p(1, e(4)), p(1, e(3))),
                (p(1, e(3)), p(2, e(3))),
                (p(2, e(3)), p(2, e(5))),
                (p(0, e(4)), p(0, e(5))),
                (p(0, e(5)), p(1, e(5))),
                (p(1, e(5)), p(2, e(5))),
            ],
            _ => vec![
                (p(1, e(1)), p(1, e(2))),
                (p(1, e(2)), p(0, e(2))),
                (p(1, e(1)), p(2, e(1))),
                (p(0, e(2)), p(0, e(3))),
                (p(0, e(3)), p(1, e(3))),
                (p(1, e(3)), p(2, e(3))),
                (p(2, e(1)), p(2, e(3))),
            ],
        }
    }

    /// Chain the listed segments of D_{j,i} into one closed clockwise polygon.
    pub fn region(&self, j: u32, i: u32) -> Result<Region> {
        let edges: Vec<(Label, Label)> = Self::region_edges(j, i)
            .into_iter()
            .map(|(a, b)| (a.canonical(), b.canonical()))
            .filter(|(a, b)| a != b)
            .collect();
        let name = format!("D_{{{j},{i}}}");
        let fail = |why: &str| Error::InvalidDomain(format!("{name}: {why}"));
        let mut adj: BTreeMap<Label, Vec<Label>> = BTreeMap::new();
        for &(a, b) in &edges {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        if adj.values().any(|v| v.len() != 2) {
            return Err(fail("listed segments do not close up into a cycle"));
        }
        let start = edges[0].0;
        let mut chain = vec![start];
        let (mut prev, mut cur) = (start, edges[0].1);
        while cur != start {
            chain.push(cur);
            let nb = &adj[&cur];
            let next = if nb[0] == prev { nb[1] } else { nb[0] };
            prev = cur;
            cur = next;
            if chain.len() > edges.len() {
                return Err(fail("chaining did not return to the start"));
            }
        }
        if chain.len() != edges.len() {
            return Err(fail("segments form more than one cycle"));
        }
        let mut vertices = chain.iter().map(|&l| self.pt(l)).collect::<Result<Vec<_>>>()?;
        let mut labels: Vec<String> = chain.iter().map(|l| l.to_string()).collect();
        if signed_area2(&vertices) > 0.0 {
            vertices.reverse();
            labels.reverse();
        }
        Ok(Region { name, j, i, vertices, labels })
    }

    pub fn regions(&self) -> Result<Vec<Region>> {
        let mut out = Vec::new();
        for i in 0..=self.n {
            for j in 1..=4 {
                out.push(self.region(j, i)?);
            }
        }
        Ok(out)
    }

    pub fn slits(&self) -> Result<Vec<NamedSlit>> {
        let mut out = Vec::new();
        for i in 0..=self.n {
            let e = |k: usize| 4 * i as usize + k;
            let defs = [
                ("L_{1,", Label::new(Family::Z, 1, e(1)), Label::new(Family::Z, 1, e(2))),
                ("L_{2,", Label::new(Family::W, 1, e(3)), Label::new(Family::W, 1, e(4))),
                ("L^{xy}_{", Label::new(Family::X, 2, e(3)), Label::new(Family::Y, 2, e(3))),
                ("L^{zw}_{", Label::new(Family::Z, 2, e(3)), Label::new(Family::W, 2, e(3))),
            ];
            for (prefix, a, b) in defs {
                out.push(NamedSlit { name: format!("{prefix}{i}}}"), i, a: self.pt(a)?, b: self.pt(b)? });
            }
        }
        Ok(out)
    }

    /// D_n with a bounding box enclosing every generated point.
    pub fn domain(&self) -> Result<Domain> {
        let regions = self.regions()?;
        let slits = self.slits()?;
        let mut reach = 0.0f64;
        let mut prims = Vec::new();
        for r in regions {
            reach = r.vertices.iter().fold(reach, |m, p| m.max(p.x.abs()).max(p.y.abs()));
            prims.push(Primitive::Loop { points: r.vertices });
        }
        for s in slits {
            prims.push(Primitive::Slit { a: s.a, b: s.b });
        }
        let h = 1.25 * reach;
        Domain::new(prims, Some(Rect::new(-h, -h, h, h)))
    }

    /// x_{2,2+4i}: the point of [x_{2+4i}, x_{1,2+4i}] where the angle
    /// x_{1,1+4i} · x_{1,2+4i} subtends equals 17π/24. Found by bisection.
    pub fn x2_from_angle(&self, i: u32) -> Option<Point2> {
        let e = |k: usize| 4 * i as usize + k;
        let p0 = self.point(Label::new(Family::X, 0, e(2)))?;
        let b = self.point(Label::new(Family::X, 1, e(2)))?;
        let a = self.point(Label::new(Family::X, 1, e(1)))?;
        let target = 17.0 * PI / 24.0;
        let f = |t: f64| {
            let p = p0.lerp(b, t);
            let (u, v) = (a - p, b - p);
            u.cross(v).abs().atan2(u.dot(v)) - target
        };
        let grid = 256;
        let mut lo = None;
        for s in 0..grid {
            let (t0, t1) = (s as f64 / grid as f64, (s + 1) as f64 / grid as f64 * (1.0 - 1e-12));
            if f(t0).signum() != f(t1).signum() {
                lo = Some((t0, t1));
                break;
            }
        }
        let (mut t0, mut t1) = lo?;
        for _ in 0..200 {
            let tm = 0.5 * (t0 + t1);
            if f(tm).signum() == f(t0).signum() {
                t0 = tm;
            } else {
                t1 = tm;
            }
        }
        Some(p0.lerp(b, 0.5 * (t0 + t1)))
    }

    /// u_i and v_i: at unit distance from x_{4i} and y_{2+4i}, displaced
    /// along the bisector of the free wedge at that vertex.
    pub fn points_uv(&self, domain: &Domain, i: u32) -> Result<(Point2, Point2)> {
        if i < 1 || i > self.n {
            return Err(Error::OutOfRange(format!("u_i, v_i need 1 ≤ i ≤ n = {}, got i = {i}", self.n)));
        }
        let xv = self.pt(Label::new(Family::X, 0, 4 * i as usize))?;
        let yv = self.pt(Label::new(Family::Y, 0, 4 * i as usize + 2))?;
        Ok((free_direction_point(domain, xv, 1.0)?, free_direction_point(domain, yv, 1.0)?))
    }

    /// Named listing of every generated point, region and slit.
    pub fn report(&self) -> Result<GeometryReport> {
        let mut points = Vec::new();
        for fam in [Family::X, Family::Y, Family::Z, Family::W] {
            for sub in 0..=2u8 {
                for (k, p) in self.family(fam, sub) {
                    if sub == 2 && k == 1 {
                        continue;
                    }
                    points.push((Label::new(fam, sub, k).to_string(), p));
                }
            }
        }
        let mut flagged = Vec::new();
        for i in 0..=self.n {
            let name = format!("x_{{2,{}}}", 2 + 4 * i);
            if let Some(p) = self.x2_from_angle(i) {
                points.push((name.clone(), p));
            }
            flagged.push(format!("{name} is defined only through the 17π/24 angle condition; located by bisection"));
        }
        flagged.push("x_{2,1} = x_{1,1} (same for y, z, w); the degenerate edge of D_{1,0} and D_{4,0} is dropped".into());
        Ok(GeometryReport { n: self.n, points, regions: self.regions()?, slits: self.slits()?, flagged })
    }
}

/// Generated geometry, for reports.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeometryReport {
    pub n: u32,
    pub points: Vec<(String, Point2)>,
    pub regions: Vec<Region>,
    pub slits: Vec<NamedSlit>,
    pub flagged: Vec<String>,
}

/// `vertex + r·dir`, where dir bisects the widest arc of directions whose
/// points at distance r lie in the domain.
pub fn free_direction_point(domain: &Domain, vertex: Point2, r: f64) -> Result<Point2> {
    const N: usize = 2880;
    let dir = |k: usize| std::f64::consts::TAU * k as f64 / N as f64;
    let free: Vec<bool> = (0..N).map(|k| domain.contains(vertex + Point2::polar(r, dir(k)))).collect();
    if free.iter().all(|&f| f) {
        return Ok(vertex + Point2::polar(r, 0.0));
    }
    let start = free.iter().position(|&f| !f).expect("some blocked direction");
    let (mut best, mut best_len) = (None, 0);
    let mut run = 0;
    for s in 1..=N {
        let k = (start + s) % N;
        if free[k] {
            run += 1;
            if run > best_len {
                best_len = run;
                best = Some((start + s + N - run + 1) % N);
            }
        } else {
            run = 0;
        }
    }
    let first = best.ok_or_else(|| Error::InvalidInput(format!("no free direction at {vertex}")))?;
    let mid = dir(first) + 0.5 * (best_len - 1) as f64 * std::f64::consts::TAU / N as f64;
    let p = vertex + Point2::polar(r, mid);
    if domain.contains(p) {
        Ok(p)
    } else {
        Err(Error::InvalidInput(format!("free-direction point {p} is not in the domain")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_points() {
        let s = CounterexampleSpec::new(2).unwrap();
        let (c11, s11, _, _) = angles();
        let x1 = s.point(Label::new(Family::X, 0, 1)).unwrap();
        assert_eq!(x1, Point2::new(8.0 * c11, 8.0 * s11));
        assert!((x1.x - 1.044_210).abs() < 1e-6 && (x1.y - 7.931_559).abs() < 1e-6);
        let x2 = s.point(Label::new(Family::X, 0, 2)).unwrap();
        assert!((x2.norm() - 3.0 * 8f64.powf(1.5)).abs() < 1e-12);
        let w2 = s.point(Label::new(Family::W, 0, 2)).unwrap();
        assert_eq!(w2, -x2);
        assert!(s.point(Label::new(Family::X, 2, 2)).is_none());
        assert_eq!(s.point(Label::new(Family::X, 2, 1)), s.point(Label::new(Family::X, 1, 1)));
    }

    #[test]
    fn regions_chain_and_domain_builds() {
        let s = CounterexampleSpec::new(2).unwrap();
        let regions = s.regions().unwrap();
        assert_eq!(regions.len(), 12);
        assert_eq!(regions[0].vertices.len(), 7);
        assert!(regions.iter().all(|r| signed_area2(&r.vertices) < 0.0));
        let d = s.domain().unwrap();
        assert!(d.contains(Point2::ORIGIN));
        for r in &regions {
            let c = r.vertices.iter().fold(Point2::ORIGIN, |a, &p| a + p) * (1.0 / r.vertices.len() as f64);
            if crate::geometry::point_in_polygon(c, &r.vertices) {
                assert!(!d.contains(c), "{}", r.name);
            }
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(CounterexampleSpec::new(5), Err(Error::DeskScale(5))));
        assert!(CounterexampleSpec::new(0).is_err());
    }

    #[test]
    fn uv_at_unit_distance() {
        let s = CounterexampleSpec::new(2).unwrap();
        let d = s.domain().unwrap();
        let (u, v) = s.points_uv(&d, 1).unwrap();
        let x4 = s.point(Label::new(Family::X, 0, 4)).unwrap();
        let y6 = s.point(Label::new(Family::Y, 0, 6)).unwrap();
        assert!((u.dist(x4) - 1.0).abs() < 1e-9);
        assert!((v.dist(y6) - 1.0).abs() < 1e-9);
        assert!(d.contains(u) && d.contains(v));
        assert!(s.points_uv(&d, 3).is_err());
        assert!(s.x2_from_angle(0).is_some());
    }
}
