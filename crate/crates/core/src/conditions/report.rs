use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::gh::gehring_hayman_ratio;
use super::llc::{llc2_constant, LlcSchedule};
use super::separation::ball_separation_constant;
use crate::discretize::NavGraph;
use crate::error::{Error, Result};
use crate::hyperbolicity::eligible_nodes;

/// Sampled Gehring–Hayman, ball separation and LLC-2 constants of one domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub domain: String,
    pub gh_constant: f64,
    pub bs_constant: f64,
    pub llc2_constant: f64,
    /// Number of point pairs measured.
    pub samples: usize,
    pub eps: f64,
}

/// Measure `pairs` random node pairs (d_Ω above the 10th percentile),
/// `samples_per_geodesic` points per geodesic for ball separation.
pub fn condition_report(
    graph: &NavGraph,
    domain_id: &str,
    pairs: usize,
    samples_per_geodesic: usize,
    seed: u64,
) -> Result<ConditionReport> {
    if pairs == 0 {
        return Err(Error::InvalidInput("pairs must be at least 1".into()));
    }
    let pool = eligible_nodes(graph);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gh: f64 = 1.0;
    let mut bs: f64 = 0.0;
    let mut done = 0;
    let mut attempts = 0;
    while done < pairs && attempts < 20 * pairs {
        attempts += 1;
        let a = pool[rng.gen_range(0..pool.len())];
        let b = pool[rng.gen_range(0..pool.len())];
        if a == b || graph.component(a) != graph.component(b) {
            continue;
        }
        let (x, y) = (graph.node(a), graph.node(b));
        gh = gh.max(gehring_hayman_ratio(graph, x, y)?);
        bs = bs.max(ball_separation_constant(graph, x, y, samples_per_geodesic)?);
        done += 1;
    }
    if done == 0 {
        return Err(Error::Disconnected);
    }
    let llc2 = llc2_constant(graph, &LlcSchedule::default(), seed)?;
    Ok(ConditionReport {
        domain: domain_id.to_string(),
        gh_constant: gh,
        bs_constant: bs,
        llc2_constant: llc2,
        samples: done,
        eps: graph.eps(),
    })
}
