//! Report files: versioned JSON, CSV tables and SVG plots.

mod svg;

use std::path::Path as FsPath;

use serde::{Deserialize, Serialize};

pub use svg::{emit_svg, write_svg, Overlay, Style};

use crate::conditions::ConditionReport;
use crate::error::{Error, Result};
use crate::gallery::DivergenceRow;
use crate::geometry::Point2;
use crate::hyperbolicity::{DeltaEstimate, Sampler, TriangleMeasurement};
use crate::metrics::GeodesicResult;

/// Schema tag written into every JSON report.
pub const SCHEMA: &str = "qhgeo-report-1";

/// A triangle without its side polylines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleRow {
    pub vertices: [Point2; 3],
    pub sides: [f64; 3],
    pub thinness: f64,
}

impl From<&TriangleMeasurement> for TriangleRow {
    fn from(t: &TriangleMeasurement) -> Self {
        TriangleRow { vertices: t.vertices, sides: t.side_lengths(), thinness: t.thinness }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaSummary {
    /// Sampled maximum thinness: a lower bound for δ.
    pub max: Option<f64>,
    pub p95: Option<f64>,
    pub argmax: Option<[Point2; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaReport {
    pub schema: String,
    pub domain: String,
    pub seed: u64,
    pub eps: f64,
    pub sampler: Sampler,
    pub summary: DeltaSummary,
    pub triangles: Vec<TriangleRow>,
}

impl DeltaReport {
    pub fn new(domain: &str, est: &DeltaEstimate) -> DeltaReport {
        let empty = est.triangles.is_empty();
        DeltaReport {
            schema: SCHEMA.into(),
            domain: domain.into(),
            seed: est.seed,
            eps: est.eps,
            sampler: est.sampler,
            summary: DeltaSummary { max: (!empty).then_some(est.delta), p95: est.p95, argmax: est.argmax },
            triangles: est.triangles.iter().map(TriangleRow::from).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicReport {
    pub schema: String,
    pub domain: String,
    pub eps: f64,
    pub raw: GeodesicResult,
    pub refined: GeodesicResult,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionsReport {
    pub schema: String,
    pub conditions: ConditionReport,
    /// Thin-triangle estimate measured on the same graph, if any.
    pub delta: Option<f64>,
    /// log₁₀ of δ = 50C⁶(3+C)² at C = max(gh, bs), when it fits a double.
    pub delta_bound_log10: Option<f64>,
}

/// Divergence rows without polylines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivergenceSummaryRow {
    pub i: u32,
    pub u: Point2,
    pub v: Point2,
    pub sigma: f64,
    pub sigma_exact: f64,
    pub length: f64,
    pub k: f64,
    pub ratio: f64,
    pub sigma_bound: f64,
    pub sigma_within_bound: bool,
    pub nodes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub schema: String,
    pub n: u32,
    pub eps: f64,
    pub rows: Vec<DivergenceSummaryRow>,
}

impl DivergenceReport {
    pub fn new(n: u32, eps: f64, rows: &[DivergenceRow]) -> DivergenceReport {
        let rows = rows
            .iter()
            .map(|r| DivergenceSummaryRow {
                i: r.i,
                u: r.u,
                v: r.v,
                sigma: r.sigma,
                sigma_exact: r.sigma_exact,
                length: r.length,
                k: r.k,
                ratio: r.ratio,
                sigma_bound: r.sigma_bound,
                sigma_within_bound: r.sigma_within_bound,
                nodes: r.nodes,
            })
            .collect();
        DivergenceReport { schema: SCHEMA.into(), n, eps, rows }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &FsPath, value: &T) -> Result<()> {
    std::fs::write(path, to_json(value)?)?;
    Ok(())
}

/// One row per triangle: vertices, side lengths, thinness.
pub fn triangles_csv(rows: &[TriangleRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x1", "y1", "x2", "y2", "x3", "y3", "k12", "k13", "k23", "thinness"])?;
    for r in rows {
        let mut rec: Vec<String> = r.vertices.iter().flat_map(|p| [p.x.to_string(), p.y.to_string()]).collect();
        rec.extend(r.sides.iter().map(|s| s.to_string()));
        rec.push(r.thinness.to_string());
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
