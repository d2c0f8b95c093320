//! Neighborhood-based link prediction indices.
//!
//! Scores are raw index values. Only Jaccard is bounded; none of them is a
//! probability.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{CoGraph, GraphError};

pub const DEFAULT_CANDIDATE_CAP: u64 = 200_000_000;
const SOURCE_CHUNK: usize = 256;

#[derive(Debug, Error)]
pub enum LinkPredError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("link prediction needs two distinct nodes")]
    SameNode,
    #[error("{count} candidate pairs exceed the cap of {cap}; raise min_common")]
    CandidateExplosion { count: u64, cap: u64 },
    #[error("min_common = 0 is only accepted for preferential attachment with include_unconnected")]
    ZeroCommon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    CommonNeighbors,
    Jaccard,
    ResourceAllocation,
    AdamicAdar,
    PreferentialAttachment,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::CommonNeighbors,
        Method::Jaccard,
        Method::ResourceAllocation,
        Method::AdamicAdar,
        Method::PreferentialAttachment,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::CommonNeighbors => "common_neighbors",
            Method::Jaccard => "jaccard",
            Method::ResourceAllocation => "resource_allocation",
            Method::AdamicAdar => "adamic_adar",
            Method::PreferentialAttachment => "preferential_attachment",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "common_neighbors" | "common_neighbours" | "cn" => Ok(Method::CommonNeighbors),
            "jaccard" => Ok(Method::Jaccard),
            "resource_allocation" | "ra" => Ok(Method::ResourceAllocation),
            "adamic_adar" | "aa" => Ok(Method::AdamicAdar),
            "preferential_attachment" | "pa" => Ok(Method::PreferentialAttachment),
            other => Err(format!("unknown link prediction method `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairScore {
    /// Lexicographically smaller label of the pair.
    pub u: String,
    pub v: String,
    pub method: Method,
    pub score: f64,
}

fn check_pair(g: &CoGraph, u: usize, v: usize) -> Result<(), LinkPredError> {
    g.degree(u)?;
    g.degree(v)?;
    if u == v {
        return Err(LinkPredError::SameNode);
    }
    Ok(())
}

/// Calls `f(z)` for each common neighbor in ascending index order.
fn for_each_common(g: &CoGraph, u: usize, v: usize, mut f: impl FnMut(usize)) {
    let (a, b) = (g.adj(u), g.adj(v));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                f(a[i] as usize);
                i += 1;
                j += 1;
            }
        }
    }
}

fn adamic_adar_term(degree: usize) -> f64 {
    1.0 / (degree as f64).ln()
}

/// Sums `term(degree(z))` over common neighbors in ascending degree order, so
/// the float result does not depend on node numbering.
fn sum_by_degree(g: &CoGraph, u: usize, v: usize, term: impl Fn(usize) -> f64) -> f64 {
    let mut degrees = Vec::new();
    for_each_common(g, u, v, |z| degrees.push(g.deg(z)));
    degrees.sort_unstable();
    degrees.into_iter().map(term).sum()
}

/// Index value for a pair. Assumes valid, distinct nodes.
pub fn score_pair(g: &CoGraph, method: Method, u: usize, v: usize) -> f64 {
    match method {
        Method::CommonNeighbors => {
            let mut c = 0usize;
            for_each_common(g, u, v, |_| c += 1);
            c as f64
        }
        Method::Jaccard => {
            let mut c = 0usize;
            for_each_common(g, u, v, |_| c += 1);
            let union = g.deg(u) + g.deg(v) - c;
            if union == 0 {
                0.0
            } else {
                c as f64 / union as f64
            }
        }
        Method::ResourceAllocation => sum_by_degree(g, u, v, |d| 1.0 / d as f64),
        Method::AdamicAdar => sum_by_degree(g, u, v, adamic_adar_term),
        Method::PreferentialAttachment => (g.deg(u) * g.deg(v)) as f64,
    }
}

/// `|N(u) ∩ N(v)|`.
pub fn common_neighbors(g: &CoGraph, u: usize, v: usize) -> Result<usize, LinkPredError> {
    check_pair(g, u, v)?;
    Ok(score_pair(g, Method::CommonNeighbors, u, v) as usize)
}

/// `|N(u) ∩ N(v)| / |N(u) ∪ N(v)|`, 0 when both neighborhoods are empty.
pub fn jaccard(g: &CoGraph, u: usize, v: usize) -> Result<f64, LinkPredError> {
    check_pair(g, u, v)?;
    Ok(score_pair(g, Method::Jaccard, u, v))
}

/// Sum of `1/deg(z)` over common neighbors.
pub fn resource_allocation(g: &CoGraph, u: usize, v: usize) -> Result<f64, LinkPredError> {
    check_pair(g, u, v)?;
    Ok(score_pair(g, Method::ResourceAllocation, u, v))
}

/// Sum of `1/ln deg(z)` over common neighbors. A common neighbor has degree ≥ 2.
pub fn adamic_adar(g: &CoGraph, u: usize, v: usize) -> Result<f64, LinkPredError> {
    check_pair(g, u, v)?;
    Ok(score_pair(g, Method::AdamicAdar, u, v))
}

/// `deg(u) · deg(v)`.
pub fn preferential_attachment(g: &CoGraph, u: usize, v: usize) -> Result<f64, LinkPredError> {
    check_pair(g, u, v)?;
    Ok(score_pair(g, Method::PreferentialAttachment, u, v))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictOptions {
    /// Candidates need at least this many common neighbors.
    pub min_common: usize,
    /// With `min_common = 0`, admit every non-adjacent pair (preferential attachment only).
    pub include_unconnected: bool,
    pub max_candidates: u64,
}

impl Default for PredictOptions {
    fn default() -> Self {
        PredictOptions {
            min_common: 1,
            include_unconnected: false,
            max_candidates: DEFAULT_CANDIDATE_CAP,
        }
    }
}

#[derive(Clone, Copy)]
struct Candidate {
    score: f64,
    a: u32,
    b: u32,
}

fn ordered(g: &CoGraph, u: usize, v: usize) -> (u32, u32) {
    match g.label(u).cmp(g.label(v)).then(u.cmp(&v)) {
        Ordering::Greater => (v as u32, u as u32),
        _ => (u as u32, v as u32),
    }
}

fn rank(g: &CoGraph, x: &Candidate, y: &Candidate) -> Ordering {
    y.score
        .total_cmp(&x.score)
        .then_with(|| g.label(x.a as usize).cmp(g.label(y.a as usize)))
        .then_with(|| g.label(x.b as usize).cmp(g.label(y.b as usize)))
        .then_with(|| (x.a, x.b).cmp(&(y.a, y.b)))
}

fn prune(g: &CoGraph, pool: &mut Vec<Candidate>, k: usize) {
    pool.sort_by(|x, y| rank(g, x, y));
    pool.truncate(k);
}

/// Scratch state for enumerating the candidate partners `v > u` of a source `u`.
struct CandidateWalker {
    common: Vec<u32>,
    adjacent: Vec<bool>,
    touched: Vec<u32>,
}

impl CandidateWalker {
    fn new(n: usize) -> Self {
        CandidateWalker {
            common: vec![0; n],
            adjacent: vec![false; n],
            touched: Vec::new(),
        }
    }

    /// Calls `f(v)` in ascending `v` for every non-adjacent `v > u` sharing at
    /// least `min_common` neighbors with `u` (every non-adjacent `v > u` when 0).
    fn visit(&mut self, g: &CoGraph, u: usize, min_common: usize, mut f: impl FnMut(usize)) {
        for &z in g.adj(u) {
            self.adjacent[z as usize] = true;
        }
        if min_common == 0 {
            for v in (u + 1)..g.node_count() {
                if !self.adjacent[v] {
                    f(v);
                }
            }
        } else {
            for &z in g.adj(u) {
                for &v in g.adj(z as usize) {
                    if (v as usize) <= u || self.adjacent[v as usize] {
                        continue;
                    }
                    if self.common[v as usize] == 0 {
                        self.touched.push(v);
                    }
                    self.common[v as usize] += 1;
                }
            }
            self.touched.sort_unstable();
            for &v in &self.touched {
                let v = v as usize;
                if self.common[v] as usize >= min_common {
                    f(v);
                }
                self.common[v] = 0;
            }
            self.touched.clear();
        }
        for &z in g.adj(u) {
            self.adjacent[z as usize] = false;
        }
    }
}

/// Every candidate pair `(u, v)`, `u < v` by index, that [`predict_top`] would score.
pub fn candidate_pairs(g: &CoGraph, min_common: usize) -> Vec<(usize, usize)> {
    let mut walker = CandidateWalker::new(g.node_count());
    let mut out = Vec::new();
    for u in 0..g.node_count() {
        walker.visit(g, u, min_common, |v| out.push((u, v)));
    }
    out
}

/// Top-`k` non-adjacent pairs by `method`.
///
/// Candidates come from two-hop walks, so every candidate shares at least one
/// neighbor with its partner unless `include_unconnected` is set. The
/// candidate set never contains an adjacent pair.
pub fn predict_top(
    g: &CoGraph,
    method: Method,
    k: usize,
    opts: &PredictOptions,
) -> Result<Vec<PairScore>, LinkPredError> {
    if opts.min_common == 0 && !(method == Method::PreferentialAttachment && opts.include_unconnected) {
        return Err(LinkPredError::ZeroCommon);
    }
    let n = g.node_count();
    let k = k.max(1);
    let counted = AtomicU64::new(0);
    let chunks: Vec<(usize, usize)> = (0..n)
        .step_by(SOURCE_CHUNK)
        .map(|lo| (lo, (lo + SOURCE_CHUNK).min(n)))
        .collect();

    let pools: Vec<Vec<Candidate>> = chunks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut pool = Vec::new();
            let mut walker = CandidateWalker::new(n);
            for u in lo..hi {
                if counted.load(AtomicOrdering::Relaxed) > opts.max_candidates {
                    break;
                }
                let mut local = 0u64;
                walker.visit(g, u, opts.min_common, |v| {
                    local += 1;
                    let (a, b) = ordered(g, u, v);
                    pool.push(Candidate {
                        score: score_pair(g, method, u, v),
                        a,
                        b,
                    });
                });
                counted.fetch_add(local, AtomicOrdering::Relaxed);
                if pool.len() > k.saturating_mul(4).saturating_add(4096) {
                    prune(g, &mut pool, k);
                }
            }
            prune(g, &mut pool, k);
            pool
        })
        .collect();

    let count = counted.load(AtomicOrdering::Relaxed);
    if count > opts.max_candidates {
        return Err(LinkPredError::CandidateExplosion {
            count,
            cap: opts.max_candidates,
        });
    }
    let mut merged: Vec<Candidate> = pools.into_iter().flatten().collect();
    prune(g, &mut merged, k);
    Ok(merged
        .into_iter()
        .map(|c| PairScore {
            u: g.label(c.a as usize).to_string(),
            v: g.label(c.b as usize).to_string(),
            method,
            score: c.score,
        })
        .collect())
}
