use std::collections::VecDeque;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::index::KdTree;
use super::quadrature::{qh_segment, QuadratureSpec};
use crate::error::{Error, Result};
use crate::geometry::{Domain, Point2, Rect};

/// Leaf-centre offsets, in units of the cell side: axis, diagonal and
/// knight moves.
pub const STENCIL: [(f64, f64); 16] = [
    (1.0, 0.0),
    (0.0, 1.0),
    (-1.0, 0.0),
    (0.0, -1.0),
    (1.0, 1.0),
    (-1.0, 1.0),
    (-1.0, -1.0),
    (1.0, -1.0),
    (2.0, 1.0),
    (1.0, 2.0),
    (-1.0, 2.0),
    (-2.0, 1.0),
    (-2.0, -1.0),
    (-1.0, -2.0),
    (1.0, -2.0),
    (2.0, -1.0),
];

pub const DEFAULT_EPS: f64 = 0.2;
pub const DEFAULT_NODE_BUDGET: usize = 5_000_000;

/// Parameters of [`build_graph`].
#[derive(Clone, Debug)]
pub struct GraphOptions {
    /// Whitney parameter: accepted cells satisfy side ≤ eps·d_Ω(centre).
    pub eps: f64,
    /// Smallest cell side ever created. Defaults to root side / 2¹², or to
    /// eps·min d_Ω(focus)/4 when foci are given.
    pub min_cell: Option<f64>,
    pub node_budget: usize,
    /// Points near which the grid is refined down to `min_cell`. Away from
    /// them the smallest side grows like `focus_grading`·distance.
    pub foci: Vec<Point2>,
    pub focus_grading: f64,
    pub quadrature: QuadratureSpec,
    pub deadline: Option<Instant>,
}

impl Default for GraphOptions {
    fn default() -> Self {
        GraphOptions {
            eps: DEFAULT_EPS,
            min_cell: None,
            node_budget: DEFAULT_NODE_BUDGET,
            foci: Vec::new(),
            focus_grading: 0.0,
            quadrature: QuadratureSpec::default(),
            deadline: None,
        }
    }
}

impl GraphOptions {
    pub fn with_eps(eps: f64) -> Self {
        GraphOptions { eps, ..Default::default() }
    }
}

/// An undirected edge with both weight kinds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: u32,
    pub v: u32,
    pub euclid: f64,
    pub qh: f64,
}

/// Which edge weight a query uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Inner,
    #[serde(rename = "quasihyperbolic", alias = "qh")]
    Quasihyperbolic,
}

impl Edge {
    pub fn weight(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Inner => self.euclid,
            Mode::Quasihyperbolic => self.qh,
        }
    }
}

/// A link from an arbitrary domain point to a graph node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Attachment {
    pub node: u32,
    pub euclid: f64,
    pub qh: f64,
}

impl Attachment {
    pub fn weight(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Inner => self.euclid,
            Mode::Quasihyperbolic => self.qh,
        }
    }
}

/// Whitney-adaptive navigation graph over a domain.
#[derive(Clone, Debug)]
pub struct NavGraph {
    domain: Arc<Domain>,
    bbox: Rect,
    eps: f64,
    quadrature: QuadratureSpec,
    nodes: Vec<Point2>,
    node_d: Vec<f64>,
    edges: Vec<Edge>,
    adj_start: Vec<u32>,
    adj: Vec<(u32, u32)>,
    component: Vec<u32>,
    index: KdTree,
}

impl NavGraph {
    /// Assemble from nodes and edges (e.g. loaded from a cache).
    pub fn from_parts(
        domain: Arc<Domain>,
        bbox: Rect,
        eps: f64,
        quadrature: QuadratureSpec,
        nodes: Vec<Point2>,
        edges: Vec<Edge>,
    ) -> Result<NavGraph> {
        if nodes.is_empty() {
            return Err(Error::EmptyGraph { eps });
        }
        let n = nodes.len();
        if edges.iter().any(|e| e.u as usize >= n || e.v as usize >= n || e.u == e.v) {
            return Err(Error::InvalidInput("edge refers to a missing node".into()));
        }
        let node_d = nodes.iter().map(|&p| domain.boundary_distance(p)).collect();
        let mut deg = vec![0u32; n + 1];
        for e in &edges {
            deg[e.u as usize + 1] += 1;
            deg[e.v as usize + 1] += 1;
        }
        for i in 0..n {
            deg[i + 1] += deg[i];
        }
        let adj_start = deg.clone();
        let mut fill = deg;
        let mut adj = vec![(0u32, 0u32); edges.len() * 2];
        for (k, e) in edges.iter().enumerate() {
            adj[fill[e.u as usize] as usize] = (e.v, k as u32);
            fill[e.u as usize] += 1;
            adj[fill[e.v as usize] as usize] = (e.u, k as u32);
            fill[e.v as usize] += 1;
        }
        // Neighbour lists sorted by id keep every traversal deterministic.
        for i in 0..n {
            adj[adj_start[i] as usize..adj_start[i + 1] as usize].sort_unstable();
        }
        let mut g = NavGraph {
            index: KdTree::build(&nodes),
            domain,
            bbox,
            eps,
            quadrature,
            nodes,
            node_d,
            edges,
            adj_start,
            adj,
            component: Vec::new(),
        };
        g.component = g.label_components();
        Ok(g)
    }

    fn label_components(&self) -> Vec<u32> {
        let n = self.nodes.len();
        let mut comp = vec![u32::MAX; n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if comp[s] != u32::MAX {
                continue;
            }
            comp[s] = next;
            queue.push_back(s as u32);
            while let Some(u) = queue.pop_front() {
                for &(v, _) in self.neighbors(u) {
                    if comp[v as usize] == u32::MAX {
                        comp[v as usize] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn domain_arc(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn bbox(&self) -> Rect {
        self.bbox
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn quadrature(&self) -> &QuadratureSpec {
        &self.quadrature
    }

    pub fn nodes(&self) -> &[Point2] {
        &self.nodes
    }

    pub fn node(&self, i: u32) -> Point2 {
        self.nodes[i as usize]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// d_Ω at node `i`.
    pub fn node_distance(&self, i: u32) -> f64 {
        self.node_d[i as usize]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, k: u32) -> &Edge {
        &self.edges[k as usize]
    }

    /// (neighbour, edge index) pairs of node `u`, sorted by neighbour.
    pub fn neighbors(&self, u: u32) -> &[(u32, u32)] {
        &self.adj[self.adj_start[u as usize] as usize..self.adj_start[u as usize + 1] as usize]
    }

    pub fn component(&self, u: u32) -> u32 {
        self.component[u as usize]
    }

    pub fn component_count(&self) -> usize {
        self.component.iter().copied().max().map_or(0, |m| m as usize + 1)
    }

    /// Node ids within Euclidean distance `r` of `p`, sorted.
    pub fn nodes_within(&self, p: Point2, r: f64) -> Vec<u32> {
        self.index.within(p, r)
    }

    pub fn nearest_node(&self, p: Point2) -> Option<(u32, f64)> {
        self.index.nearest(p)
    }

    /// Snap tolerance at `p`: 2·eps·d_Ω(p).
    pub fn snap_radius(&self, p: Point2) -> f64 {
        2.0 * self.eps * self.domain.distance_to_boundary(p)
    }

    /// Link `p` to every node within the snap radius that it sees by a
    /// segment inside the domain.
    pub fn attach(&self, p: Point2) -> Result<Vec<Attachment>> {
        let d = self.domain.distance_to_boundary(p);
        if d <= 0.0 {
            return Err(Error::SnapFailed(p));
        }
        let mut out = Vec::new();
        for id in self.nodes_within(p, 2.0 * self.eps * d) {
            let q = self.node(id);
            let dq = self.node_d[id as usize];
            let euclid = p.dist(q);
            if euclid < d + dq || self.domain.segment_inside(p, q) {
                let qh = qh_segment(&self.domain, p, q, d, dq, &self.quadrature);
                out.push(Attachment { node: id, euclid, qh });
            }
        }
        if out.is_empty() {
            return Err(Error::SnapFailed(p));
        }
        Ok(out)
    }

    /// Write the cache file: header "QHG1", node count, coordinates, edge
    /// count, edge records; all little-endian.
    pub fn write_cache(&self, w: &mut impl std::io::Write) -> Result<()> {
        w.write_all(b"QHG1")?;
        w.write_all(&(self.nodes.len() as u64).to_le_bytes())?;
        for p in &self.nodes {
            w.write_all(&p.x.to_le_bytes())?;
            w.write_all(&p.y.to_le_bytes())?;
        }
        w.write_all(&(self.edges.len() as u64).to_le_bytes())?;
        for e in &self.edges {
            w.write_all(&e.u.to_le_bytes())?;
            w.write_all(&e.v.to_le_bytes())?;
            w.write_all(&e.euclid.to_le_bytes())?;
            w.write_all(&e.qh.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_cache(
        r: &mut impl std::io::Read,
        domain: Arc<Domain>,
        bbox: Rect,
        eps: f64,
        quadrature: QuadratureSpec,
    ) -> Result<NavGraph> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != b"QHG1" {
            return Err(Error::Cache("bad header".into()));
        }
        let mut b8 = [0u8; 8];
        let mut b4 = [0u8; 4];
        let mut f64_ = |r: &mut dyn std::io::Read| -> Result<f64> {
            r.read_exact(&mut b8)?;
            Ok(f64::from_le_bytes(b8))
        };
        let mut u64_buf = [0u8; 8];
        r.read_exact(&mut u64_buf)?;
        let n = u64::from_le_bytes(u64_buf) as usize;
        let mut nodes = Vec::with_capacity(n.min(1 << 24));
        for _ in 0..n {
            let x = f64_(r)?;
            let y = f64_(r)?;
            nodes.push(Point2::new(x, y));
        }
        r.read_exact(&mut u64_buf)?;
        let m = u64::from_le_bytes(u64_buf) as usize;
        let mut edges = Vec::with_capacity(m.min(1 << 26));
        for _ in 0..m {
            r.read_exact(&mut b4)?;
            let u = u32::from_le_bytes(b4);
            r.read_exact(&mut b4)?;
            let v = u32::from_le_bytes(b4);
            let euclid = f64_(r)?;
            let qh = f64_(r)?;
            edges.push(Edge { u, v, euclid, qh });
        }
        NavGraph::from_parts(domain, bbox, eps, quadrature, nodes, edges)
    }
}

const NO_CHILD: u32 = 0;
const NO_LEAF: u32 = u32::MAX;

#[derive(Clone, Copy)]
struct QNode {
    first_child: u32,
    leaf: u32,
}

struct Quadtree {
    root: Point2,
    half: f64,
    cells: Vec<QNode>,
}

impl Quadtree {
    /// Node id of the accepted leaf containing `p`, if any.
    fn locate(&self, p: Point2) -> Option<u32> {
        let (mut c, mut h) = (self.root, self.half);
        if (p.x - c.x).abs() > h || (p.y - c.y).abs() > h {
            return None;
        }
        let mut idx = 0usize;
        loop {
            let cell = self.cells[idx];
            if cell.first_child == NO_CHILD {
                return (cell.leaf != NO_LEAF).then_some(cell.leaf);
            }
            let east = p.x >= c.x;
            let north = p.y >= c.y;
            h *= 0.5;
            c = Point2::new(c.x + if east { h } else { -h }, c.y + if north { h } else { -h });
            idx = cell.first_child as usize + east as usize + 2 * north as usize;
        }
    }
}

/// Build the Whitney graph of `domain` over `bbox`.
pub fn build_graph(domain: Arc<Domain>, bbox: Rect, opts: &GraphOptions) -> Result<NavGraph> {
    if !(opts.eps > 0.0 && opts.eps <= 0.5) {
        return Err(Error::InvalidInput(format!("eps must lie in (0, 0.5], got {}", opts.eps)));
    }
    if !bbox.is_valid() {
        return Err(Error::InvalidInput("degenerate bounding box".into()));
    }
    opts.quadrature.validate()?;
    let half = 0.5 * bbox.width().max(bbox.height());
    let root = bbox.center();
    let min_cell = match opts.min_cell {
        Some(m) => m,
        None if !opts.foci.is_empty() => {
            let dmin = opts.foci.iter().map(|&f| domain.distance_to_boundary(f)).fold(f64::INFINITY, f64::min);
            if dmin > 0.0 {
                0.25 * opts.eps * dmin
            } else {
                2.0 * half / 4096.0
            }
        }
        None => 2.0 * half / 4096.0,
    };
    let floor = |c: Point2| {
        if opts.foci.is_empty() || opts.focus_grading <= 0.0 {
            min_cell
        } else {
            let r = opts.foci.iter().map(|f| f.dist(c)).fold(f64::INFINITY, f64::min);
            min_cell.max(opts.focus_grading * r)
        }
    };

    let mut tree = Quadtree { root, half, cells: vec![QNode { first_child: NO_CHILD, leaf: NO_LEAF }] };
    let mut nodes: Vec<Point2> = Vec::new();
    let mut node_d: Vec<f64> = Vec::new();
    let mut sides: Vec<f64> = Vec::new();
    let mut stack = vec![(0usize, root, half)];
    let mut visited = 0u64;
    while let Some((idx, c, h)) = stack.pop() {
        visited += 1;
        if visited % 4096 == 0 && opts.deadline.is_some_and(|t| Instant::now() > t) {
            return Err(Error::TimeBudget);
        }
        let cell = Rect::around(c, h);
        if !cell.intersects(&bbox) {
            continue;
        }
        let side = 2.0 * h;
        let d = domain.distance_to_boundary(c);
        if d == 0.0 && domain.boundary_distance(c) > h * std::f64::consts::SQRT_2 {
            // Entire cell lies outside the domain.
            continue;
        }
        if d > 0.0 && side <= opts.eps * d && bbox.contains(c) {
            if nodes.len() >= opts.node_budget {
                return Err(Error::NodeBudget { budget: opts.node_budget });
            }
            tree.cells[idx].leaf = nodes.len() as u32;
            nodes.push(c);
            node_d.push(d);
            sides.push(side);
            continue;
        }
        if h < floor(c) {
            continue;
        }
        let first = tree.cells.len();
        tree.cells[idx].first_child = first as u32;
        tree.cells.extend([QNode { first_child: NO_CHILD, leaf: NO_LEAF }; 4]);
        let q = 0.5 * h;
        // Children: SW, SE, NW, NE. Pushed in reverse so ids follow Z order.
        let kids = [
            Point2::new(c.x - q, c.y - q),
            Point2::new(c.x + q, c.y - q),
            Point2::new(c.x - q, c.y + q),
            Point2::new(c.x + q, c.y + q),
        ];
        for k in (0..4).rev() {
            stack.push((first + k, kids[k], q));
        }
    }
    if nodes.is_empty() {
        return Err(Error::EmptyGraph { eps: opts.eps });
    }

    let mut pairs: Vec<(u32, u32)> = Vec::new();
    for (i, (&c, &s)) in nodes.iter().zip(&sides).enumerate() {
        for &(dx, dy) in &STENCIL {
            let p = Point2::new(c.x + dx * s, c.y + dy * s);
            if let Some(j) = tree.locate(p) {
                if j != i as u32 {
                    pairs.push((j.min(i as u32), j.max(i as u32)));
                }
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    let mut edges = Vec::with_capacity(pairs.len());
    for (k, &(u, v)) in pairs.iter().enumerate() {
        if k % 4096 == 0 && opts.deadline.is_some_and(|t| Instant::now() > t) {
            return Err(Error::TimeBudget);
        }
        let (a, b) = (nodes[u as usize], nodes[v as usize]);
        let (da, db) = (node_d[u as usize], node_d[v as usize]);
        let euclid = a.dist(b);
        // Overlapping inscribed discs already cover the segment.
        if euclid < da + db || domain.segment_inside(a, b) {
            let qh = qh_segment(&domain, a, b, da, db, &opts.quadrature);
            edges.push(Edge { u, v, euclid, qh });
        }
    }
    NavGraph::from_parts(domain, bbox, opts.eps, opts.quadrature, nodes, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Primitive;

    fn disk() -> Arc<Domain> {
        Arc::new(Domain::new(vec![Primitive::Disk { center: Point2::ORIGIN, radius: 1.0 }], None).unwrap())
    }

    #[test]
    fn disk_graph_is_connected_and_inside() {
        let d = disk();
        let g = build_graph(d.clone(), Rect::new(-1.0, -1.0, 1.0, 1.0), &GraphOptions::with_eps(0.2)).unwrap();
        assert_eq!(g.component_count(), 1);
        assert!(g.nodes().iter().all(|&p| d.distance_to_boundary(p) > 0.0));
        for e in g.edges() {
            assert!(d.segment_clearance(g.node(e.u), g.node(e.v)) > 0.0);
            assert_eq!(e.euclid, g.node(e.u).dist(g.node(e.v)));
        }
    }

    #[test]
    fn node_ids_are_deterministic() {
        let a = build_graph(disk(), Rect::new(-1.0, -1.0, 1.0, 1.0), &GraphOptions::with_eps(0.3)).unwrap();
        let b = build_graph(disk(), Rect::new(-1.0, -1.0, 1.0, 1.0), &GraphOptions::with_eps(0.3)).unwrap();
        assert_eq!(a.nodes(), b.nodes());
        assert_eq!(a.edges(), b.edges());
    }

    #[test]
    fn rejects_bad_eps_and_budget() {
        let bbox = Rect::new(-1.0, -1.0, 1.0, 1.0);
        assert!(build_graph(disk(), bbox, &GraphOptions::with_eps(0.0)).is_err());
        assert!(build_graph(disk(), bbox, &GraphOptions::with_eps(0.6)).is_err());
        let opts = GraphOptions { node_budget: 10, ..GraphOptions::with_eps(0.2) };
        assert!(matches!(build_graph(disk(), bbox, &opts), Err(Error::NodeBudget { .. })));
        let outside = Rect::new(5.0, 5.0, 6.0, 6.0);
        assert!(matches!(build_graph(disk(), outside, &GraphOptions::default()), Err(Error::EmptyGraph { .. })));
    }

    #[test]
    fn cache_roundtrip() {
        let d = disk();
        let bbox = Rect::new(-1.0, -1.0, 1.0, 1.0);
        let g = build_graph(d.clone(), bbox, &GraphOptions::with_eps(0.3)).unwrap();
        let mut buf = Vec::new();
        g.write_cache(&mut buf).unwrap();
        assert_eq!(&buf[..4], b"QHG1");
        assert_eq!(buf.len(), 4 + 8 + 16 * g.node_count() + 8 + 24 * g.edges().len());
        let h = NavGraph::read_cache(&mut buf.as_slice(), d, bbox, 0.3, QuadratureSpec::default()).unwrap();
        assert_eq!(h.nodes(), g.nodes());
        assert_eq!(h.edges(), g.edges());
        assert!(NavGraph::read_cache(&mut &b"QHG0"[..], disk(), bbox, 0.3, QuadratureSpec::default()).is_err());
    }
}
