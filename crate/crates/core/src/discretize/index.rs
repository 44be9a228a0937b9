//! Static 2-d tree over node positions.

use crate::geometry::Point2;

#[derive(Clone, Debug, Default)]
pub(crate) struct KdTree {
    // Node ids laid out as an implicit balanced tree: the median of each
    // range is its root, split on x at even depth and y at odd depth.
    order: Vec<u32>,
    pts: Vec<Point2>,
}

impl KdTree {
    pub fn build(points: &[Point2]) -> KdTree {
        let mut order: Vec<u32> = (0..points.len() as u32).collect();
        Self::arrange(points, &mut order, 0);
        let pts = order.iter().map(|&i| points[i as usize]).collect();
        KdTree { order, pts }
    }

    fn arrange(points: &[Point2], ids: &mut [u32], depth: u32) {
        if ids.len() <= 1 {
            return;
        }
        let mid = ids.len() / 2;
        let key = |i: &u32| {
            let p = points[*i as usize];
            if depth % 2 == 0 {
                (p.x, p.y, *i)
            } else {
                (p.y, p.x, *i)
            }
        };
        ids.select_nth_unstable_by(mid, |a, b| {
            let (ka, kb) = (key(a), key(b));
            ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1)).then(ka.2.cmp(&kb.2))
        });
        let (lo, hi) = ids.split_at_mut(mid);
        Self::arrange(points, lo, depth + 1);
        Self::arrange(points, &mut hi[1..], depth + 1);
    }

    /// Ids of all points within `radius` of `p`, sorted.
    pub fn within(&self, p: Point2, radius: f64) -> Vec<u32> {
        let mut out = Vec::new();
        self.within_rec(0, self.pts.len(), 0, p, radius, &mut out);
        out.sort_unstable();
        out
    }

    fn within_rec(&self, lo: usize, hi: usize, depth: u32, p: Point2, r: f64, out: &mut Vec<u32>) {
        if lo >= hi {
            return;
        }
        let mid = lo + (hi - lo) / 2;
        let q = self.pts[mid];
        if q.dist(p) <= r {
            out.push(self.order[mid]);
        }
        let diff = if depth % 2 == 0 { p.x - q.x } else { p.y - q.y };
        if diff <= r {
            self.within_rec(lo, mid, depth + 1, p, r, out);
        }
        if diff >= -r {
            self.within_rec(mid + 1, hi, depth + 1, p, r, out);
        }
    }

    /// Nearest point id and its distance.
    pub fn nearest(&self, p: Point2) -> Option<(u32, f64)> {
        let mut best = None;
        self.nearest_rec(0, self.pts.len(), 0, p, &mut best);
        best
    }

    fn nearest_rec(&self, lo: usize, hi: usize, depth: u32, p: Point2, best: &mut Option<(u32, f64)>) {
        if lo >= hi {
            return;
        }
        let mid = lo + (hi - lo) / 2;
        let q = self.pts[mid];
        let d = q.dist(p);
        let id = self.order[mid];
        match best {
            Some((bi, bd)) if d > *bd || (d == *bd && id > *bi) => {}
            _ => *best = Some((id, d)),
        }
        let diff = if depth % 2 == 0 { p.x - q.x } else { p.y - q.y };
        let (first, second) = if diff <= 0.0 { ((lo, mid), (mid + 1, hi)) } else { ((mid + 1, hi), (lo, mid)) };
        self.nearest_rec(first.0, first.1, depth + 1, p, best);
        if best.is_none_or(|(_, bd)| diff.abs() <= bd) {
            self.nearest_rec(second.0, second.1, depth + 1, p, best);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_brute_force() {
        let pts: Vec<Point2> =
            (0..500).map(|i| Point2::new(((i * 37) % 101) as f64 * 0.1, ((i * 53) % 97) as f64 * 0.1)).collect();
        let tree = KdTree::build(&pts);
        for k in 0..40 {
            let p = Point2::new(k as f64 * 0.25, 9.7 - k as f64 * 0.2);
            let mut brute: Vec<u32> = (0..pts.len() as u32).filter(|&i| pts[i as usize].dist(p) <= 1.3).collect();
            brute.sort_unstable();
            assert_eq!(tree.within(p, 1.3), brute);
            let (_, d) = tree.nearest(p).unwrap();
            let bd = pts.iter().map(|q| q.dist(p)).fold(f64::INFINITY, f64::min);
            assert_eq!(d, bd);
        }
    }
}
