//! Bounding-volume hierarchy over boundary segments.

use super::point::{point_segment_dist, segment_segment_dist, segments_intersect, Point2, Rect};

/// Marks a segment that belongs to a slit rather than a loop.
pub(crate) const NO_LOOP: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Seg {
    pub a: Point2,
    pub b: Point2,
    pub owner: u32,
}

#[derive(Clone, Debug)]
struct Node {
    bbox: Rect,
    // Leaf: segments [start, start+count). Inner: children at `start` and `start+1`.
    start: u32,
    count: u32,
}

const LEAF: usize = 4;

#[derive(Clone, Debug, Default)]
pub(crate) struct Bvh {
    segs: Vec<Seg>,
    nodes: Vec<Node>,
}

fn rect_rect_dist(a: &Rect, b: &Rect) -> f64 {
    let dx = (a.min.x - b.max.x).max(0.0).max(b.min.x - a.max.x);
    let dy = (a.min.y - b.max.y).max(0.0).max(b.min.y - a.max.y);
    dx.hypot(dy)
}

impl Bvh {
    pub fn build(mut segs: Vec<Seg>) -> Bvh {
        let mut nodes = Vec::new();
        if !segs.is_empty() {
            let n = segs.len();
            nodes.push(Node { bbox: Rect::of_segment(segs[0].a, segs[0].b), start: 0, count: 0 });
            Self::split(&mut segs, &mut nodes, 0, 0, n);
        }
        Bvh { segs, nodes }
    }

    fn split(segs: &mut [Seg], nodes: &mut Vec<Node>, idx: usize, lo: usize, hi: usize) {
        let bbox = segs[lo..hi]
            .iter()
            .map(|s| Rect::of_segment(s.a, s.b))
            .reduce(|a, b| a.union(&b))
            .expect("nonempty range");
        nodes[idx].bbox = bbox;
        if hi - lo <= LEAF {
            nodes[idx].start = lo as u32;
            nodes[idx].count = (hi - lo) as u32;
            return;
        }
        let by_x = bbox.width() >= bbox.height();
        let key = |s: &Seg| if by_x { s.a.x + s.b.x } else { s.a.y + s.b.y };
        let mid = (lo + hi) / 2;
        segs[lo..hi].select_nth_unstable_by(mid - lo, |p, q| key(p).total_cmp(&key(q)));
        let first = nodes.len();
        let dummy = Node { bbox, start: 0, count: 0 };
        nodes.push(dummy.clone());
        nodes.push(dummy);
        nodes[idx].start = first as u32;
        nodes[idx].count = 0;
        Self::split(segs, nodes, first, lo, mid);
        Self::split(segs, nodes, first + 1, mid, hi);
    }

    pub fn segs(&self) -> &[Seg] {
        &self.segs
    }

    /// Distance from `p` to the nearest segment, or infinity when empty.
    pub fn nearest(&self, p: Point2) -> f64 {
        self.nearest_by(|r| r.dist(p), |s| point_segment_dist(p, s.a, s.b))
    }

    /// Distance between the segment `[a, b]` and the nearest stored segment.
    pub fn nearest_to_segment(&self, a: Point2, b: Point2) -> f64 {
        let sb = Rect::of_segment(a, b);
        self.nearest_by(|r| rect_rect_dist(r, &sb), |s| segment_segment_dist(a, b, s.a, s.b))
    }

    fn nearest_by(&self, lower: impl Fn(&Rect) -> f64, exact: impl Fn(&Seg) -> f64) -> f64 {
        let mut best = f64::INFINITY;
        if self.nodes.is_empty() {
            return best;
        }
        let mut stack = vec![(0usize, lower(&self.nodes[0].bbox))];
        while let Some((i, lb)) = stack.pop() {
            if lb >= best {
                continue;
            }
            let n = &self.nodes[i];
            if n.count > 0 {
                for s in &self.segs[n.start as usize..(n.start + n.count) as usize] {
                    best = best.min(exact(s));
                }
            } else {
                let (c0, c1) = (n.start as usize, n.start as usize + 1);
                let (l0, l1) = (lower(&self.nodes[c0].bbox), lower(&self.nodes[c1].bbox));
                // Visit the closer child first.
                if l0 <= l1 {
                    stack.push((c1, l1));
                    stack.push((c0, l0));
                } else {
                    stack.push((c0, l0));
                    stack.push((c1, l1));
                }
            }
        }
        best
    }

    /// Does the closed segment `[a, b]` touch any stored segment?
    pub fn any_intersection(&self, a: Point2, b: Point2) -> bool {
        if self.nodes.is_empty() {
            return false;
        }
        let sb = Rect::of_segment(a, b);
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            let n = &self.nodes[i];
            if !n.bbox.intersects(&sb) {
                continue;
            }
            if n.count > 0 {
                let range = n.start as usize..(n.start + n.count) as usize;
                if self.segs[range].iter().any(|s| segments_intersect(a, b, s.a, s.b)) {
                    return true;
                }
            } else {
                stack.push(n.start as usize);
                stack.push(n.start as usize + 1);
            }
        }
        false
    }

    /// Calls `f(owner)` for every segment crossed by the ray from `p` towards +x.
    pub fn ray_crossings(&self, p: Point2, mut f: impl FnMut(u32)) {
        if self.nodes.is_empty() {
            return;
        }
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            let n = &self.nodes[i];
            if n.bbox.max.x < p.x || n.bbox.min.y > p.y || n.bbox.max.y < p.y {
                continue;
            }
            if n.count > 0 {
                for s in &self.segs[n.start as usize..(n.start + n.count) as usize] {
                    if s.owner == NO_LOOP {
                        continue;
                    }
                    let (a, b) = (s.a, s.b);
                    if (a.y > p.y) != (b.y > p.y) {
                        let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                        if p.x < x {
                            f(s.owner);
                        }
                    }
                }
            } else {
                stack.push(n.start as usize);
                stack.push(n.start as usize + 1);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_segs(n: usize) -> Vec<Seg> {
        // Deterministic pseudo-random segments without pulling in an RNG.
        let mut s = 12345u64;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64 * 10.0
        };
        (0..n)
            .map(|_| {
                let a = Point2::new(next(), next());
                let b = a + Point2::new(next() * 0.1, next() * 0.1);
                Seg { a, b, owner: 0 }
            })
            .collect()
    }

    #[test]
    fn nearest_matches_brute_force() {
        let segs = random_segs(300);
        let bvh = Bvh::build(segs.clone());
        for k in 0..50 {
            let p = Point2::new(k as f64 * 0.21, 10.0 - k as f64 * 0.17);
            let brute = segs.iter().map(|s| point_segment_dist(p, s.a, s.b)).fold(f64::INFINITY, f64::min);
            assert_eq!(bvh.nearest(p), brute);
            let q = p + Point2::new(0.4, 0.3);
            let brute = segs.iter().map(|s| segment_segment_dist(p, q, s.a, s.b)).fold(f64::INFINITY, f64::min);
            assert_eq!(bvh.nearest_to_segment(p, q), brute);
            let hit = segs.iter().any(|s| segments_intersect(p, q, s.a, s.b));
            assert_eq!(bvh.any_intersection(p, q), hit);
        }
    }
}
