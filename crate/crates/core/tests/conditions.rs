use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use proptest::prelude::*;
use qhgeo::conditions::*;
use qhgeo::discretize::{build_graph, GraphOptions, NavGraph};
use qhgeo::gallery::{make_domain, GalleryId, Params};
use qhgeo::Point2;

fn graph(id: GalleryId, eps: f64) -> NavGraph {
    let d = make_domain(id, &Params::new()).unwrap();
    let bb = d.bbox().unwrap();
    build_graph(Arc::new(d), bb, &GraphOptions::with_eps(eps)).unwrap()
}

#[test]
fn gh_vertical_pair_in_halfplane() {
    let g = graph(GalleryId::HalfPlane, 0.1);
    let r = gehring_hayman_ratio(&g, Point2::new(0.0, 1.0), Point2::new(0.0, 4.0)).unwrap();
    assert!((r - 1.0).abs() < 0.03, "{r}");
}

#[test]
fn gh_close_pair_in_disk() {
    let g = graph(GalleryId::Disk, 0.1);
    let x = Point2::new(0.2, 0.1);
    let d = 1.0 - x.norm();
    let y = x + Point2::new(0.6, 0.8) * (d / 4.0);
    let r = gehring_hayman_ratio(&g, x, y).unwrap();
    let bound = 40.0 / 27.0 * (10.0f64 / 27.0).exp();
    assert!(r >= 0.95 && r <= bound, "{r}");
}

#[test]
fn separation_endpoint_rule_and_disconnection_rule() {
    let t = Instant::now();
    let g = graph(GalleryId::Disk, 0.1);
    let (x, y) = (Point2::new(-0.9, 0.0), Point2::new(0.9, 0.0));
    let r = separation_radius(&g, x, y, Point2::ORIGIN).unwrap();
    assert!((r - 0.9).abs() <= 0.05, "{r}");
    assert_eq!(separation_radius(&g, x, y, x).unwrap(), 0.0);
    assert_eq!(ball_separation_constant(&g, x, y, 1).unwrap(), 0.0);
    let c = ball_separation_constant(&g, x, y, 20).unwrap();
    assert!(c <= 1.5, "{c}");

    let g = graph(GalleryId::Corridor, 0.1);
    let r = separation_radius(&g, Point2::new(1.0, 0.5), Point2::new(9.0, 0.5), Point2::new(5.0, 0.5)).unwrap();
    assert!((r - 0.5).abs() <= 0.05, "{r}");
    assert!(t.elapsed().as_secs() < 60);
}

#[test]
fn ball_separation_halfplane_apex() {
    let mut p = Params::new();
    p.insert("half_width".into(), 8.0);
    let d = make_domain(GalleryId::HalfPlane, &p).unwrap();
    let bb = d.bbox().unwrap();
    let g = build_graph(Arc::new(d), bb, &GraphOptions::with_eps(0.1)).unwrap();
    let c = ball_separation_constant(&g, Point2::new(-5.0, 1.0), Point2::new(5.0, 1.0), 9).unwrap();
    assert!(c > 0.0 && c <= 3.0, "{c}");
}

#[test]
fn llc2_examples() {
    let g = graph(GalleryId::Disk, 0.1);
    assert_eq!(llc2_ratio(&g, Point2::ORIGIN, 0.5, 20, 1).unwrap(), 1.0);
    assert_eq!(llc2_ratio(&g, Point2::new(5.0, 5.0), 0.5, 20, 1).unwrap(), 1.0);
    assert!(llc2_ratio(&g, Point2::ORIGIN, 5.0, 20, 1).is_err());
    let g = graph(GalleryId::Corridor, 0.1);
    let c = llc2_ratio(&g, Point2::new(5.0, 0.5), 0.6, 40, 3).unwrap();
    assert!(c >= 1.2, "{c}");
}

#[test]
fn report_fields_finite() {
    let g = graph(GalleryId::Square, 0.15);
    let r = condition_report(&g, "square", 3, 5, 7).unwrap();
    assert!(r.gh_constant >= 0.95 && r.gh_constant.is_finite());
    assert!(r.bs_constant >= 0.0 && r.bs_constant.is_finite());
    assert!(r.llc2_constant >= 1.0 && r.llc2_constant.is_finite());
    assert_eq!(r.samples, 3);
    let back: ConditionReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(back, r);
}

#[test]
fn constants_acceptance_values() {
    let one = |k: &str| BTreeMap::from([(k.to_string(), 1.0)]);
    assert_eq!(eval_constants(ConstantKind::DeltaFromC, &one("C")).unwrap().to_f64(), Some(800.0));
    let b = eval_constants(ConstantKind::BhkB, &one("A")).unwrap();
    assert_eq!(b.depth(), 1);
    assert!((b.value() - 4100.852).abs() < 1e-3);
    let inputs = BTreeMap::from([("c0".to_string(), 1.0), ("C".to_string(), 1.0), ("n".to_string(), 2.0)]);
    let c2 = eval_constants(ConstantKind::C2Llc, &inputs).unwrap();
    assert!((c2.log10().to_f64().unwrap() - 18.0 * 210f64.log10()).abs() < 1e-9);
    let json = serde_json::to_value(b).unwrap();
    assert_eq!(json["depth"], 1);
}

fn tower() -> impl Strategy<Value = (f64, TowerNumber)> {
    prop_oneof![
        (-1e300f64..1e300).prop_map(|v| (v, TowerNumber::from(v))),
        (-700f64..709.0).prop_map(|v| (v.exp(), TowerNumber::new(1, v))),
    ]
}

proptest! {
    #[test]
    fn tower_order_matches_reals((a, ta) in tower(), (b, tb) in tower()) {
        prop_assert_eq!(ta.partial_cmp(&tb), a.partial_cmp(&b));
    }

    #[test]
    fn tower_power_matches_logs(a in 1.001f64..1e3, e in 1.0f64..1e6) {
        let p = TowerNumber::from(a).pow(&TowerNumber::from(e));
        let expect = e * a.ln();
        let got = p.ln().to_f64().unwrap();
        prop_assert!((got - expect).abs() <= 1e-9 * expect.abs().max(1.0));
    }
}
