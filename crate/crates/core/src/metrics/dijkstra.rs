use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::sync::{Arc, Mutex};

use crate::discretize::{Mode, NavGraph};

pub(crate) const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, PartialEq)]
struct State {
    cost: f64,
    node: u32,
}

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, o: &Self) -> Ordering {
        // Min-heap on cost, then on node id.
        o.cost.total_cmp(&self.cost).then_with(|| o.node.cmp(&self.node))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Shortest-path distances and predecessors from a set of sources.
#[derive(Clone, Debug)]
pub struct Field {
    pub mode: Mode,
    pub dist: Vec<f64>,
    /// Predecessor node, or `u32::MAX` for sources and unreached nodes.
    pub pred: Vec<u32>,
}

impl Field {
    /// Node chain ending at `t`, starting at the source it was reached from.
    pub fn chain(&self, t: u32) -> Vec<u32> {
        let mut out = vec![t];
        let mut u = t;
        while self.pred[u as usize] != NONE {
            u = self.pred[u as usize];
            out.push(u);
        }
        out.reverse();
        out
    }

    pub fn reached(&self, u: u32) -> bool {
        self.dist[u as usize].is_finite()
    }
}

/// Multi-source Dijkstra. `blocked` nodes are never entered; the search
/// stops once the popped cost reaches `stop_at`.
pub fn dijkstra(
    graph: &NavGraph,
    mode: Mode,
    sources: &[(u32, f64)],
    blocked: Option<&[bool]>,
    mut stop: impl FnMut(u32, f64) -> bool,
) -> Field {
    let n = graph.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![NONE; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    let is_blocked = |u: u32| blocked.is_some_and(|b| b[u as usize]);
    for &(s, c) in sources {
        if !is_blocked(s) && c < dist[s as usize] {
            dist[s as usize] = c;
            heap.push(State { cost: c, node: s });
        }
    }
    while let Some(State { cost, node }) = heap.pop() {
        if done[node as usize] || cost > dist[node as usize] {
            continue;
        }
        done[node as usize] = true;
        if stop(node, cost) {
            break;
        }
        for &(v, e) in graph.neighbors(node) {
            if done[v as usize] || is_blocked(v) {
                continue;
            }
            let nd = cost + graph.edge(e).weight(mode);
            let vi = v as usize;
            if nd < dist[vi] || (nd == dist[vi] && node < pred[vi]) {
                dist[vi] = nd;
                pred[vi] = node;
                heap.push(State { cost: nd, node: v });
            }
        }
    }
    Field { mode, dist, pred }
}

/// Full single-source field.
pub fn single_source(graph: &NavGraph, mode: Mode, source: u32) -> Field {
    dijkstra(graph, mode, &[(source, 0.0)], None, |_, _| false)
}

/// Is some node of `from` joined to some node of `to` through unblocked nodes?
pub fn connected_avoiding(graph: &NavGraph, from: &[u32], to: &[u32], blocked: &[bool]) -> bool {
    let n = graph.node_count();
    let mut target = vec![false; n];
    for &t in to {
        if !blocked[t as usize] {
            target[t as usize] = true;
        }
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for &s in from {
        if !blocked[s as usize] && !seen[s as usize] {
            seen[s as usize] = true;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        if target[u as usize] {
            return true;
        }
        for &(v, _) in graph.neighbors(u) {
            if !seen[v as usize] && !blocked[v as usize] {
                seen[v as usize] = true;
                queue.push_back(v);
            }
        }
    }
    false
}

/// Thread-safe cache of single-source fields keyed by (mode, source node).
/// One cache belongs to one graph.
#[derive(Debug, Default)]
pub struct FieldCache {
    map: Mutex<HashMap<(Mode, u32), Arc<Field>>>,
}

impl FieldCache {
    pub fn new() -> FieldCache {
        FieldCache::default()
    }

    pub fn get(&self, graph: &NavGraph, mode: Mode, source: u32) -> Arc<Field> {
        if let Some(f) = self.map.lock().expect("cache lock").get(&(mode, source)) {
            return f.clone();
        }
        let f = Arc::new(single_source(graph, mode, source));
        self.map.lock().expect("cache lock").entry((mode, source)).or_insert(f).clone()
    }

    pub fn len(&self) -> usize {
        self.map.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
