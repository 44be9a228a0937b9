//! `qhgeo`: batch front end for quasihyperbolic geometry computations.
//!
//! Exit status: 0 on success, 2 when a checked assertion fails, 1 on error.

mod config;

use std::collections::BTreeMap;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use config::{parse_point, Common, Settings};
use qhgeo::conditions::{condition_report, eval_constants, ConstantKind};
use qhgeo::discretize::{build_graph, packing_number, Mode, NavGraph, PackingRegion};
use qhgeo::gallery::{
    divergence_csv, divergence_experiment, separation_spotcheck, CounterexampleSpec, DivergenceOptions, GalleryId,
};
use qhgeo::hyperbolicity::{estimate_delta, Sampler};
use qhgeo::metrics::{refine_path, shortest_path};
use qhgeo::output::{
    to_json, triangles_csv, write_json, write_svg, ConditionsReport, DeltaReport, DivergenceReport, GeodesicReport,
    Overlay, Style, SCHEMA,
};
use qhgeo::Rect;

#[derive(Parser, Debug)]
#[command(name = "qhgeo", version, about = "Quasihyperbolic geometry of planar domains")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Shortest path between two points; writes geodesic.json and geodesic.svg.
    Geodesic {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        /// qh (quasihyperbolic) or inner.
        #[arg(long, default_value = "qh")]
        mode: String,
    },
    /// Thin-triangle δ estimate; writes delta.json and triangles.csv.
    Delta {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value = "random")]
        sampler: String,
    },
    /// Gehring–Hayman, ball separation and LLC-2; writes conditions.json.
    /// Fails with status 2 if the measured δ exceeds 50C⁶(3+C)².
    Conditions {
        #[arg(long, default_value_t = 10)]
        pairs: usize,
        /// Points per geodesic for ball separation.
        #[arg(long, default_value_t = 9)]
        samples: usize,
        /// Triangles for the δ sanity check (0 skips it).
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// Divergence of ℓ(γ)/σ on D_n; writes divergence.csv, divergence.json,
    /// divergence.svg. Fails with status 2 if a threshold is missed.
    Counterexample {
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        indices: Vec<u32>,
        /// Also run the ball separation spot check on this many pairs.
        #[arg(long, default_value_t = 0)]
        spotcheck: usize,
        /// Write geometry.json with every generated point, region and slit.
        #[arg(long)]
        geometry: bool,
        #[arg(long, default_value_t = 0.05)]
        focus_grading: f64,
    },
    /// Evaluate a constant, e.g. `constants delta_from_C --C 1`.
    Constants {
        kind: String,
        /// Inputs as `--NAME VALUE` or `NAME=VALUE`.
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        inputs: Vec<String>,
    },
    /// Greedy r-packing of a radius-R ball; writes packing.json.
    Packing {
        #[arg(long = "R")]
        big_r: f64,
        #[arg(long = "r")]
        r: f64,
        #[arg(long, default_value_t = 8)]
        trials: usize,
        /// Pack inside the domain around this center instead of the plane.
        #[arg(long, allow_hyphen_values = true)]
        center: Option<String>,
    },
}

enum Outcome {
    Pass,
    AssertFailed(String),
}

fn graph(s: &Settings) -> Result<(NavGraph, String)> {
    let (domain, name) = s.domain()?;
    let bbox = domain.region().context("domain is unbounded and has no bbox; add one to the domain file")?;
    Ok((build_graph(domain, bbox, &s.graph_options())?, name))
}

fn geodesic(s: &Settings, x: &str, y: &str, mode: &str) -> Result<Outcome> {
    let mode: Mode = serde_json::from_value(serde_json::Value::String(mode.into()))
        .with_context(|| format!("unknown mode `{mode}` (use qh or inner)"))?;
    let (x, y) = (parse_point(x)?, parse_point(y)?);
    let (g, name) = graph(s)?;
    let raw = shortest_path(&g, x, y, mode)?;
    let refined = refine_path(g.domain(), &raw, g.quadrature());
    println!("{}", refined.distance);
    let overlays = [Overlay { points: refined.path.vertices.clone(), style: Style::geodesic() }];
    write_svg(&s.out_dir.join("geodesic.svg"), g.domain(), &overlays)?;
    let report = GeodesicReport { schema: SCHEMA.into(), domain: name, eps: s.eps, raw, refined };
    write_json(&s.out_dir.join("geodesic.json"), &report)?;
    Ok(Outcome::Pass)
}

fn parse_sampler(s: &str) -> Result<Sampler> {
    serde_json::from_value(serde_json::Value::String(s.into()))
        .with_context(|| format!("unknown sampler `{s}` (use random or farthest-point)"))
}

fn delta(s: &Settings, trials: usize, sampler: &str) -> Result<Outcome> {
    let sampler = parse_sampler(sampler)?;
    let (g, name) = graph(s)?;
    let est = estimate_delta(&g, sampler, trials, s.seed)?;
    println!("{}", est.delta);
    let report = DeltaReport::new(&name, &est);
    std::fs::write(s.out_dir.join("triangles.csv"), triangles_csv(&report.triangles)?)?;
    write_json(&s.out_dir.join("delta.json"), &report)?;
    Ok(Outcome::Pass)
}

fn conditions(s: &Settings, pairs: usize, samples: usize, trials: usize) -> Result<Outcome> {
    let (g, name) = graph(s)?;
    let rep = condition_report(&g, &name, pairs, samples, s.seed)?;
    let delta = if trials > 0 { Some(estimate_delta(&g, Sampler::Random, trials, s.seed)?.delta) } else { None };
    let c = rep.gh_constant.max(rep.bs_constant);
    let bound = eval_constants(ConstantKind::DeltaFromC, &BTreeMap::from([("C".to_string(), c)]))?;
    let report = ConditionsReport {
        schema: SCHEMA.into(),
        conditions: rep,
        delta,
        delta_bound_log10: bound.log10().to_f64(),
    };
    print!("{}", to_json(&report)?);
    write_json(&s.out_dir.join("conditions.json"), &report)?;
    match delta {
        Some(d) if qhgeo::conditions::TowerNumber::from(d) > bound => {
            Ok(Outcome::AssertFailed(format!("measured δ = {d} exceeds 50C⁶(3+C)² at C = {c}")))
        }
        _ => Ok(Outcome::Pass),
    }
}

fn counterexample(
    s: &Settings,
    n: u32,
    indices: &[u32],
    spotcheck: usize,
    geometry: bool,
    focus_grading: f64,
) -> Result<Outcome> {
    let spec = CounterexampleSpec::new(n)?;
    if geometry {
        let report = serde_json::json!({ "schema": SCHEMA, "geometry": spec.report()? });
        write_json(&s.out_dir.join("geometry.json"), &report)?;
    }
    let opts = DivergenceOptions {
        eps: s.eps,
        focus_grading,
        node_budget: s.node_budget,
        deadline: s.deadline,
    };
    let rows = divergence_experiment(n, indices, &opts)?;
    let csv = divergence_csv(&rows)?;
    print!("{csv}");
    std::fs::write(s.out_dir.join("divergence.csv"), &csv)?;
    write_json(&s.out_dir.join("divergence.json"), &DivergenceReport::new(n, s.eps, &rows))?;
    let first = &rows[0];
    let half = 3.0 * qhgeo::gallery::scale(2 * first.i + 2);
    let view = spec.domain()?.with_bbox(Rect::new(-half, -half, half, half));
    let overlays = [
        Overlay { points: first.k_path.clone(), style: Style::geodesic() },
        Overlay { points: first.sigma_path.clone(), style: Style::competitor() },
    ];
    write_svg(&s.out_dir.join("divergence.svg"), &view, &overlays)?;

    let mut failures = Vec::new();
    for r in &rows {
        let need = match r.i {
            1 => Some(3.0),
            2 => Some(50.0),
            _ => None,
        };
        if let Some(t) = need {
            if r.ratio <= t {
                failures.push(format!("ratio at i={} is {} (needs > {t})", r.i, r.ratio));
            }
        }
        if !r.sigma_within_bound {
            failures.push(format!("σ at i={} is {} above the bound {}", r.i, r.sigma, r.sigma_bound));
        }
    }
    for w in rows.windows(2) {
        if w[1].i > w[0].i && w[1].ratio <= w[0].ratio {
            failures.push(format!("ratio does not grow from i={} to i={}", w[0].i, w[1].i));
        }
    }
    if spotcheck > 0 {
        let rep = separation_spotcheck(n, spotcheck, s.seed)?;
        let report = ConditionsReport { schema: SCHEMA.into(), conditions: rep.clone(), delta: None, delta_bound_log10: None };
        write_json(&s.out_dir.join("spotcheck.json"), &report)?;
        if !(rep.bs_constant.is_finite() && rep.bs_constant <= 1e3) {
            failures.push(format!("ball separation constant {} is not below 1000", rep.bs_constant));
        }
    }
    if failures.is_empty() {
        Ok(Outcome::Pass)
    } else {
        Ok(Outcome::AssertFailed(failures.join("; ")))
    }
}

/// Split `--NAME VALUE` / `NAME=VALUE` pairs; shared flags that ended up
/// after the kind are moved back into `common`.
fn parse_inputs(raw: &[String], common: &mut Common) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    let mut it = raw.iter();
    while let Some(a) = it.next() {
        if let Some(flag) = a.strip_prefix("--").filter(|f| ["out-dir", "seed", "config"].contains(&f.split('=').next().unwrap_or(""))) {
            let (name, value) = match flag.split_once('=') {
                Some((n, v)) => (n.to_string(), v.to_string()),
                None => (flag.to_string(), it.next().with_context(|| format!("missing value for --{flag}"))?.clone()),
            };
            match name.as_str() {
                "out-dir" => common.out_dir = Some(value.into()),
                "seed" => common.seed = Some(value.parse()?),
                _ => common.config = Some(value.into()),
            }
            continue;
        }
        let (k, v) = if let Some((k, v)) = a.trim_start_matches('-').split_once('=') {
            (k.to_string(), v.to_string())
        } else if let Some(k) = a.strip_prefix("--") {
            (k.to_string(), it.next().with_context(|| format!("missing value for --{k}"))?.clone())
        } else {
            bail!("unexpected argument `{a}`");
        };
        out.insert(k, v.parse().with_context(|| format!("bad value `{v}`"))?);
    }
    Ok(out)
}

fn constants(s: &Settings, kind: &str, inputs: BTreeMap<String, f64>) -> Result<Outcome> {
    let kind: ConstantKind = kind.parse()?;
    let v = eval_constants(kind, &inputs)?;
    println!("{v}");
    let report = serde_json::json!({ "schema": SCHEMA, "kind": kind, "inputs": inputs, "value": v });
    write_json(&s.out_dir.join("constants.json"), &report)?;
    Ok(Outcome::Pass)
}

fn packing(s: &Settings, big_r: f64, r: f64, trials: usize, center: Option<&str>) -> Result<Outcome> {
    let count = match center {
        None => packing_number(big_r, r, PackingRegion::Plane, trials, s.seed)?,
        Some(c) => {
            let (domain, _) = s.domain()?;
            packing_number(big_r, r, PackingRegion::Domain { domain: &domain, center: parse_point(c)? }, trials, s.seed)?
        }
    };
    println!("{count}");
    let report = serde_json::json!({ "schema": SCHEMA, "R": big_r, "r": r, "trials": trials, "seed": s.seed, "count": count });
    write_json(&s.out_dir.join("packing.json"), &report)?;
    Ok(Outcome::Pass)
}

fn run(mut cli: Cli) -> Result<Outcome> {
    let inputs = match &cli.command {
        Command::Constants { inputs, .. } => parse_inputs(inputs, &mut cli.common)?,
        _ => BTreeMap::new(),
    };
    if let Ok(t) = std::env::var("QHGEO_THREADS") {
        let n: usize = t.parse().with_context(|| format!("QHGEO_THREADS must be a positive integer, got `{t}`"))?;
        if n == 0 {
            bail!("QHGEO_THREADS must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let (default_gallery, default_eps) = match cli.command {
        Command::Counterexample { .. } => (GalleryId::Counterexample, DivergenceOptions::default().eps),
        _ => (GalleryId::Disk, config::DEFAULT_EPS),
    };
    let s = Settings::resolve(&cli.common, default_gallery, default_eps)?;
    match &cli.command {
        Command::Geodesic { x, y, mode } => geodesic(&s, x, y, mode),
        Command::Delta { trials, sampler } => delta(&s, *trials, sampler),
        Command::Conditions { pairs, samples, trials } => conditions(&s, *pairs, *samples, *trials),
        Command::Counterexample { n, indices, spotcheck, geometry, focus_grading } => {
            counterexample(&s, *n, indices, *spotcheck, *geometry, *focus_grading)
        }
        Command::Constants { kind, .. } => constants(&s, kind, inputs),
        Command::Packing { big_r, r, trials, center } => packing(&s, *big_r, *r, *trials, center.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::AssertFailed(m)) => {
            eprintln!("assertion failed: {m}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
