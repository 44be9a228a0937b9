//! Run configuration: CLI flags over an optional JSON file over defaults.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};

use qhgeo::discretize::{GraphOptions, DEFAULT_NODE_BUDGET};
use qhgeo::gallery::{make_domain, GalleryId, Params};
use qhgeo::{Domain, Point2};

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// Built-in domain.
    #[arg(long, global = true)]
    pub gallery: Option<String>,
    /// Gallery parameter as key=value; repeatable.
    #[arg(long = "param", global = true, value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    /// Domain JSON file (overrides --gallery).
    #[arg(long, global = true)]
    pub domain_file: Option<PathBuf>,
    /// Whitney parameter in (0, 0.5].
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub node_budget: Option<usize>,
    #[arg(long, global = true)]
    pub time_budget_s: Option<f64>,
    /// JSON run configuration; flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// The file form of the shared settings. Every field is optional.
#[derive(Serialize, Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub gallery: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub domain_file: Option<PathBuf>,
    pub eps: Option<f64>,
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub node_budget: Option<usize>,
    pub time_budget_s: Option<f64>,
}

/// Resolved settings.
#[derive(Debug, Clone)]
pub struct Settings {
    pub gallery: GalleryId,
    pub params: Params,
    pub domain_file: Option<PathBuf>,
    pub eps: f64,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub node_budget: usize,
    pub deadline: Option<Instant>,
}

pub const DEFAULT_EPS: f64 = 0.1;

pub fn parse_point(s: &str) -> Result<Point2> {
    let (a, b) = s.split_once(',').with_context(|| format!("expected x,y but got `{s}`"))?;
    Ok(Point2::new(a.trim().parse()?, b.trim().parse()?))
}

fn parse_param(s: &str) -> Result<(String, f64)> {
    let (k, v) = s.split_once('=').with_context(|| format!("expected key=value but got `{s}`"))?;
    Ok((k.trim().to_string(), v.trim().parse().with_context(|| format!("bad value in `{s}`"))?))
}

impl Settings {
    pub fn resolve(cli: &Common, default_gallery: GalleryId, default_eps: f64) -> Result<Settings> {
        let file: RunConfig = match &cli.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
            }
            None => RunConfig::default(),
        };
        let gallery = match cli.gallery.as_ref().or(file.gallery.as_ref()) {
            Some(g) => g.parse::<GalleryId>()?,
            None => default_gallery,
        };
        let mut params = file.params.clone();
        for p in &cli.params {
            let (k, v) = parse_param(p)?;
            params.insert(k, v);
        }
        let eps = cli.eps.or(file.eps).unwrap_or(default_eps);
        if !(eps > 0.0 && eps <= 0.5) {
            bail!("eps must lie in (0, 0.5], got {eps}");
        }
        let time = cli.time_budget_s.or(file.time_budget_s);
        if let Some(t) = time {
            if !(t.is_finite() && t > 0.0) {
                bail!("time budget must be positive, got {t}");
            }
        }
        let out_dir = cli.out_dir.clone().or(file.out_dir).unwrap_or_else(|| PathBuf::from("."));
        std::fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
        Ok(Settings {
            gallery,
            params,
            domain_file: cli.domain_file.clone().or(file.domain_file),
            eps,
            seed: cli.seed.or(file.seed).unwrap_or(0),
            out_dir,
            node_budget: cli.node_budget.or(file.node_budget).unwrap_or(DEFAULT_NODE_BUDGET),
            deadline: time.map(|t| Instant::now() + Duration::from_secs_f64(t)),
        })
    }

    /// The domain and a short name for reports.
    pub fn domain(&self) -> Result<(Arc<Domain>, String)> {
        if let Some(p) = &self.domain_file {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let d: Domain = serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?;
            return Ok((Arc::new(d), p.display().to_string()));
        }
        Ok((Arc::new(make_domain(self.gallery, &self.params)?), self.gallery.to_string()))
    }

    pub fn graph_options(&self) -> GraphOptions {
        GraphOptions { eps: self.eps, node_budget: self.node_budget, deadline: self.deadline, ..Default::default() }
    }
}
