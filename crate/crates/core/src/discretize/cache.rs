//! On-disk graph cache keyed by (domain, bbox, eps).

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use sha2::{Digest, Sha256};

use super::graph::{build_graph, GraphOptions, NavGraph};
use crate::error::Result;
use crate::geometry::{Domain, Rect};

/// Hex digest identifying a graph build.
pub fn cache_key(domain: &Domain, bbox: Rect, opts: &GraphOptions) -> Result<String> {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(domain)?);
    for v in <[f64; 4]>::from(bbox) {
        h.update(v.to_le_bytes());
    }
    h.update(opts.eps.to_le_bytes());
    h.update(opts.min_cell.unwrap_or(-1.0).to_le_bytes());
    h.update(opts.focus_grading.to_le_bytes());
    h.update(opts.quadrature.max_relative_variation.to_le_bytes());
    for f in &opts.foci {
        h.update(f.x.to_le_bytes());
        h.update(f.y.to_le_bytes());
    }
    Ok(h.finalize().iter().map(|b| format!("{b:02x}")).collect())
}

/// Directory of cached graphs.
#[derive(Clone, Debug)]
pub struct GraphCache {
    dir: PathBuf,
}

impl GraphCache {
    pub fn new(dir: impl Into<PathBuf>) -> GraphCache {
        GraphCache { dir: dir.into() }
    }

    fn file(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.qhg"))
    }

    /// Load the graph if cached, otherwise build and store it.
    pub fn get_or_build(&self, domain: Arc<Domain>, bbox: Rect, opts: &GraphOptions) -> Result<NavGraph> {
        let key = cache_key(&domain, bbox, opts)?;
        let path = self.file(&key);
        if path.exists() {
            if let Ok(g) = load(&path, domain.clone(), bbox, opts) {
                return Ok(g);
            }
        }
        let g = build_graph(domain, bbox, opts)?;
        std::fs::create_dir_all(&self.dir)?;
        let tmp = path.with_extension("tmp");
        {
            let mut w = BufWriter::new(File::create(&tmp)?);
            g.write_cache(&mut w)?;
            std::io::Write::flush(&mut w)?;
        }
        std::fs::rename(tmp, path)?;
        Ok(g)
    }
}

fn load(path: &Path, domain: Arc<Domain>, bbox: Rect, opts: &GraphOptions) -> Result<NavGraph> {
    let mut r = BufReader::new(File::open(path)?);
    NavGraph::read_cache(&mut r, domain, bbox, opts.eps, opts.quadrature)
}
