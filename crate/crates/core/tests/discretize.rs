use std::sync::Arc;

use proptest::prelude::*;
use qhgeo::discretize::*;
use qhgeo::gallery::{make_domain, GalleryId, Params};
use qhgeo::metrics::shortest_path;
use qhgeo::{Domain, Point2};

fn domain(id: GalleryId) -> Arc<Domain> {
    Arc::new(make_domain(id, &Params::new()).unwrap())
}

fn graph(d: &Arc<Domain>, eps: f64) -> NavGraph {
    build_graph(d.clone(), d.region().unwrap(), &GraphOptions::with_eps(eps)).unwrap()
}

#[test]
fn whitney_condition_and_quasihyperbolic_floor() {
    let d = domain(GalleryId::LShape);
    let g = graph(&d, 0.2);
    for u in 0..g.node_count() as u32 {
        let p = g.node(u);
        assert!(d.contains(p));
        assert_eq!(g.node_distance(u), d.distance_to_boundary(p));
    }
    for e in g.edges() {
        let (a, b) = (g.node(e.u), g.node(e.v));
        assert!(d.segment_inside(a, b));
        // ∫|dz|/d ≥ length / max d along the edge.
        let dmax = g.node_distance(e.u).max(g.node_distance(e.v)) + 0.5 * e.euclid;
        assert!(e.qh >= e.euclid / dmax * (1.0 - 1e-9));
        assert!((e.euclid - a.dist(b)).abs() < 1e-15);
    }
}

#[test]
fn refinement_is_monotone() {
    for (id, x, y) in [
        (GalleryId::Disk, Point2::new(-0.5, 0.1), Point2::new(0.6, -0.2)),
        (GalleryId::LShape, Point2::new(1.7, 0.4), Point2::new(0.3, 1.6)),
    ] {
        let d = domain(id);
        let mut prev: Option<(f64, f64, f64)> = None;
        for eps in [0.4, 0.2, 0.1] {
            let g = graph(&d, eps);
            let k = shortest_path(&g, x, y, Mode::Quasihyperbolic).unwrap().distance;
            let s = shortest_path(&g, x, y, Mode::Inner).unwrap().distance;
            if let Some((pk, ps, pe)) = prev {
                let snap = 2.0 * pe * (d.distance_to_boundary(x) + d.distance_to_boundary(y));
                assert!(s <= ps + snap, "{id} eps {eps}: σ {s} > {ps}");
                assert!(k <= pk + 4.0 * pe, "{id} eps {eps}: k {k} > {pk}");
            }
            prev = Some((k, s, eps));
        }
    }
}

#[test]
fn packing_counts_obey_doubling_form() {
    let q = planar_doubling_constant(8, 1).unwrap();
    assert!(q >= 7, "{q}");
    for (big, r) in [(1.0, 0.25), (1.0, 0.125), (2.0, 0.3)] {
        let n = packing_number(big, r, PackingRegion::Plane, 4, 2).unwrap();
        let steps = (big / r as f64).log2().ceil() as i32;
        assert!(n as f64 <= (q as f64).powi(steps), "{n} > {q}^{steps}");
    }
    let d = domain(GalleryId::Disk);
    let inside = packing_number(1.0, 0.25, PackingRegion::Domain { domain: &d, center: Point2::ORIGIN }, 4, 2).unwrap();
    let plane = packing_number(1.0, 0.25, PackingRegion::Plane, 4, 2).unwrap();
    assert!(inside <= plane);
}

#[test]
fn cache_roundtrip_is_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = domain(GalleryId::SlitPlane);
    let cache = GraphCache::new(dir.path());
    let opts = GraphOptions::with_eps(0.3);
    let a = cache.get_or_build(d.clone(), d.region().unwrap(), &opts).unwrap();
    let b = cache.get_or_build(d.clone(), d.region().unwrap(), &opts).unwrap();
    assert_eq!(a.nodes(), b.nodes());
    assert_eq!(a.edges(), b.edges());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn budgets_are_enforced() {
    let d = domain(GalleryId::Disk);
    let opts = GraphOptions { node_budget: 10, ..GraphOptions::with_eps(0.1) };
    assert!(matches!(build_graph(d.clone(), d.region().unwrap(), &opts), Err(qhgeo::Error::NodeBudget { .. })));
    let opts = GraphOptions { deadline: Some(std::time::Instant::now()), ..GraphOptions::with_eps(0.05) };
    assert!(matches!(build_graph(d.clone(), d.region().unwrap(), &opts), Err(qhgeo::Error::TimeBudget)));
    assert!(build_graph(d.clone(), d.region().unwrap(), &GraphOptions::with_eps(0.6)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn qh_weights_are_scale_invariant(ax in 0.05f64..0.95, ay in 0.05f64..0.95, bx in 0.05f64..0.95, by in 0.05f64..0.95, l in prop::sample::select(vec![0.1, 3.0, 10.0])) {
        let d = make_domain(GalleryId::Square, &Params::new()).unwrap();
        let (a, b) = (Point2::new(ax, ay), Point2::new(bx, by));
        let spec = QuadratureSpec::default();
        let w = qh_edge_weight(&d, a, b, &spec).unwrap();
        let wl = qh_edge_weight(&d.scaled(l).unwrap(), a * l, b * l, &spec).unwrap();
        prop_assert!((w - wl).abs() <= 1e-9 * w.max(1e-12));
    }

    #[test]
    fn qh_weights_are_additive(ax in 0.05f64..0.95, ay in 0.05f64..0.95, bx in 0.05f64..0.95, by in 0.05f64..0.95, t in 0.1f64..0.9) {
        let d = make_domain(GalleryId::Square, &Params::new()).unwrap();
        let (a, c) = (Point2::new(ax, ay), Point2::new(bx, by));
        let b = a.lerp(c, t);
        let spec = QuadratureSpec::default();
        let split = qh_edge_weight(&d, a, b, &spec).unwrap() + qh_edge_weight(&d, b, c, &spec).unwrap();
        let whole = qh_edge_weight(&d, a, c, &spec).unwrap();
        // Each estimate is within 1% of the integral.
        prop_assert!((split - whole).abs() <= 2e-2 * whole.max(1e-12), "{} {}", split, whole);
        let path = qhgeo::Path::new(&d, vec![a, b, c], &spec).unwrap();
        prop_assert_eq!(path.qh_length, split);
    }
}
