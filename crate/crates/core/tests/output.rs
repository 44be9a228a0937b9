use std::sync::Arc;

use qhgeo::conditions::condition_report;
use qhgeo::discretize::{build_graph, GraphOptions, Mode, NavGraph};
use qhgeo::gallery::{make_domain, CounterexampleSpec, GalleryId, Params};
use qhgeo::hyperbolicity::{estimate_delta, DeltaEstimate, Sampler};
use qhgeo::metrics::geodesic;
use qhgeo::output::*;
use qhgeo::Point2;

fn disk() -> NavGraph {
    let d = make_domain(GalleryId::Disk, &Params::new()).unwrap();
    let bb = d.region().unwrap();
    build_graph(Arc::new(d), bb, &GraphOptions::with_eps(0.2)).unwrap()
}

#[test]
fn empty_batch_has_null_summary() {
    let est = DeltaEstimate { delta: 0.0, p95: None, argmax: None, seed: 1, eps: 0.2, sampler: Sampler::Random, triangles: vec![] };
    let v: serde_json::Value = serde_json::from_str(&to_json(&DeltaReport::new("disk", &est)).unwrap()).unwrap();
    assert_eq!(v["schema"], SCHEMA);
    assert_eq!(v["triangles"], serde_json::json!([]));
    assert!(v["summary"]["max"].is_null() && v["summary"]["p95"].is_null() && v["summary"]["argmax"].is_null());
}

#[test]
fn one_triangle_roundtrips() {
    let est = estimate_delta(&disk(), Sampler::Random, 1, 4).unwrap();
    let s = to_json(&DeltaReport::new("disk", &est)).unwrap();
    let back: DeltaReport = serde_json::from_str(&s).unwrap();
    assert_eq!(to_json(&back).unwrap(), s);
    let csv = triangles_csv(&back.triangles).unwrap();
    assert!(csv.starts_with("x1,y1,x2,y2,x3,y3,k12,k13,k23,thinness\n"));
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn conditions_fields_are_finite() {
    let g = disk();
    let c = condition_report(&g, "disk", 2, 3, 1).unwrap();
    let v: serde_json::Value = serde_json::to_value(&c).unwrap();
    for key in ["gh_constant", "bs_constant", "llc2_constant"] {
        assert!(v[key].as_f64().is_some_and(f64::is_finite), "{key}");
    }
}

#[test]
fn svg_parses_and_counts_paths() {
    let g = disk();
    let plain = emit_svg(g.domain(), &[]).unwrap();
    roxmltree::Document::parse(&plain).unwrap();
    let r = geodesic(&g, Point2::new(-0.5, 0.0), Point2::new(0.5, 0.3), Mode::Quasihyperbolic).unwrap();
    let svg = emit_svg(g.domain(), &[Overlay { points: r.path.vertices.clone(), style: Style::geodesic() }]).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let paths = doc.descendants().filter(|n| n.has_tag_name("path")).count();
    assert_eq!(paths, g.domain().primitives().len() + 1);
    let vb: Vec<f64> = doc.root_element().attribute("viewBox").unwrap().split(' ').map(|x| x.parse().unwrap()).collect();
    assert!((vb[2] - 2.2).abs() < 1e-12, "{vb:?}");
}

#[test]
fn counterexample_outline_is_small() {
    let d = CounterexampleSpec::new(2).unwrap().domain().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d2.svg");
    write_svg(&path, &d, &[]).unwrap();
    let size = std::fs::metadata(&path).unwrap().len();
    assert!(size < 5 << 20, "{size}");
    roxmltree::Document::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
}

#[test]
fn reports_are_deterministic() {
    let run = || {
        let est = estimate_delta(&disk(), Sampler::Random, 10, 8).unwrap();
        let rows: Vec<TriangleRow> = est.triangles.iter().map(TriangleRow::from).collect();
        (triangles_csv(&rows).unwrap(), to_json(&DeltaReport::new("disk", &est)).unwrap())
    };
    assert_eq!(run(), run());
}
