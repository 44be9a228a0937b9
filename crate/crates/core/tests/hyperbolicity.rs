use std::sync::Arc;

use qhgeo::conditions::{condition_report, eval_constants, ConstantKind};
use qhgeo::discretize::{build_graph, GraphOptions, NavGraph};
use qhgeo::gallery::{make_domain, GalleryId, Params};
use qhgeo::hyperbolicity::*;
use qhgeo::Point2;

fn graph(id: GalleryId, params: &Params, eps: f64) -> NavGraph {
    let d = make_domain(id, params).unwrap();
    let bb = d.region().unwrap();
    build_graph(Arc::new(d), bb, &GraphOptions::with_eps(eps)).unwrap()
}

fn disk() -> NavGraph {
    graph(GalleryId::Disk, &Params::new(), 0.1)
}

#[test]
fn thinness_is_symmetric_and_bounded_by_sides() {
    let g = disk();
    let (a, b, c) = (Point2::new(-0.6, 0.1), Point2::new(0.5, 0.4), Point2::new(0.1, -0.7));
    let t = thin_triangle_delta(&g, a, b, c).unwrap();
    for (p, q, r) in [(b, a, c), (c, b, a), (a, c, b), (b, c, a), (c, a, b)] {
        let u = thin_triangle_delta(&g, p, q, r).unwrap();
        assert!((u.thinness - t.thinness).abs() < 1e-9, "{} {}", u.thinness, t.thinness);
    }
    let longest = t.side_lengths().into_iter().fold(0.0, f64::max);
    assert!(t.thinness <= longest + 1e-9);
}

#[test]
fn degenerate_triangle_is_thin() {
    let g = disk();
    let (a, c) = (Point2::new(-0.3, 0.2), Point2::new(0.4, -0.1));
    assert!(thin_triangle_delta(&g, a, a, c).unwrap().thinness < 1e-9);
}

#[test]
fn halfplane_triangle() {
    let mut p = Params::new();
    p.insert("half_width".into(), 8.0);
    let g = graph(GalleryId::HalfPlane, &p, 0.1);
    let t = thin_triangle_delta(&g, Point2::new(-5.0, 1.0), Point2::new(5.0, 1.0), Point2::new(0.0, 6.0)).unwrap();
    assert!(t.thinness <= 1.3, "{}", t.thinness);
}

#[test]
fn disk_estimate_and_monotone_in_trials() {
    let g = disk();
    let small = estimate_delta(&g, Sampler::Random, 50, 3).unwrap();
    let big = estimate_delta(&g, Sampler::Random, 200, 3).unwrap();
    assert!(big.delta <= 1.5, "{}", big.delta);
    assert!(big.delta >= small.delta);
    assert_eq!(big.triangles.len(), 200);
    let again = estimate_delta(&g, Sampler::Random, 50, 3).unwrap();
    assert_eq!(again.delta, small.delta);
    let fp = estimate_delta(&g, Sampler::FarthestPoint, 20, 3).unwrap();
    assert!(fp.delta.is_finite());
    assert!(estimate_delta(&g, Sampler::Random, 0, 3).is_err());
}

#[test]
fn four_point_on_disk_points() {
    let g = disk();
    let pts: Vec<Point2> = (0..20).map(|i| Point2::polar(0.2 + 0.035 * i as f64, 2.4 * i as f64)).collect();
    let d4 = four_point_delta(graph_k(&g), &pts).unwrap();
    let thin = estimate_delta(&g, Sampler::Random, 50, 5).unwrap().delta;
    eprintln!("disk: four-point {d4:.4}, thin triangles {thin:.4}");
    assert!(d4 >= 0.0 && d4 <= 4.0 * thin.max(0.5));
}

#[test]
fn measured_delta_respects_the_constant() {
    for id in [GalleryId::Disk, GalleryId::Square, GalleryId::LShape] {
        let g = graph(id, &Params::new(), 0.2);
        let c = condition_report(&g, &id.to_string(), 4, 5, 1).unwrap();
        let delta = estimate_delta(&g, Sampler::Random, 30, 1).unwrap().delta;
        let cmax = c.gh_constant.max(c.bs_constant);
        let bound = eval_constants(ConstantKind::DeltaFromC, &[("C".to_string(), cmax)].into()).unwrap();
        eprintln!("{id}: δ {delta:.4}, C {cmax:.4}, bound {bound}");
        assert!(qhgeo::conditions::TowerNumber::from(delta) <= bound);
    }
}
