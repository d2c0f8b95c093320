//! Degree, betweenness, closeness and eigenvector centrality.
//!
//! All four read the binary adjacency and ignore edge weights.
//!
//! Betweenness sums per-source Brandes dependencies. Sources are grouped into
//! fixed-size blocks and block results are added in block order, so the
//! floating-point sum is identical for any thread count.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::CoGraph;

const SOURCE_BLOCK: usize = 64;
const BLOCKS_PER_WAVE: usize = 32;

#[derive(Debug, Error)]
pub enum CentralityError {
    #[error("graph has {got} nodes, measure needs at least {need}")]
    TooFewNodes { got: usize, need: usize },
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("{0} scores need a community partition")]
    RequiresPartition(&'static str),
    #[error("power iteration did not converge in {} iterations", .0.params.get("iterations").copied().unwrap_or(0.0))]
    NoConvergence(Box<ScoreTable>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Degree,
    Betweenness,
    Closeness,
    Eigenvector,
    /// Participation coefficient across communities (crossover score).
    Participation,
}

impl Measure {
    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Degree => "degree",
            Measure::Betweenness => "betweenness",
            Measure::Closeness => "closeness",
            Measure::Eigenvector => "eigenvector",
            Measure::Participation => "participation",
        }
    }
}

impl std::str::FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "degree" => Ok(Measure::Degree),
            "betweenness" => Ok(Measure::Betweenness),
            "closeness" => Ok(Measure::Closeness),
            "eigenvector" | "eigen" => Ok(Measure::Eigenvector),
            "participation" | "crossover" => Ok(Measure::Participation),
            other => Err(format!("unknown measure `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreTable {
    pub measure: Measure,
    pub scores: Vec<f64>,
    pub params: BTreeMap<String, f64>,
}

impl ScoreTable {
    fn new(measure: Measure, scores: Vec<f64>) -> Self {
        ScoreTable {
            measure,
            scores,
            params: BTreeMap::new(),
        }
    }

    /// Node indices by descending score, ties by ascending label then index.
    pub fn ranking(&self, g: &CoGraph) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.scores.len()).collect();
        order.sort_by(|&a, &b| {
            self.scores[b]
                .total_cmp(&self.scores[a])
                .then_with(|| g.label(a).cmp(g.label(b)))
                .then(a.cmp(&b))
        });
        order
    }

    pub fn top(&self, g: &CoGraph, k: usize) -> Vec<(String, f64)> {
        self.ranking(g)
            .into_iter()
            .take(k)
            .map(|u| (g.label(u).to_string(), self.scores[u]))
            .collect()
    }
}

fn require_nodes(g: &CoGraph, need: usize) -> Result<(), CentralityError> {
    if g.node_count() < need {
        Err(CentralityError::TooFewNodes {
            got: g.node_count(),
            need,
        })
    } else {
        Ok(())
    }
}

pub fn compute(g: &CoGraph, measure: Measure) -> Result<ScoreTable, CentralityError> {
    match measure {
        Measure::Degree => degree_centrality(g),
        Measure::Betweenness => betweenness_centrality(g),
        Measure::Closeness => closeness_centrality(g),
        Measure::Eigenvector => eigenvector_centrality(g, 1e-10, 1000),
        Measure::Participation => Err(CentralityError::RequiresPartition("participation")),
    }
}

/// `degree / (g − 1)`.
pub fn degree_centrality(g: &CoGraph) -> Result<ScoreTable, CentralityError> {
    require_nodes(g, 2)?;
    let denom = (g.node_count() - 1) as f64;
    let scores = (0..g.node_count()).map(|u| g.deg(u) as f64 / denom).collect();
    Ok(ScoreTable::new(Measure::Degree, scores))
}

/// Groups nodes whose closed neighborhoods `N[u]` coincide. Such twins have
/// equal distances to every other node, so one BFS serves the whole class.
/// Returns `(smallest member, size)` per class and each node's class index.
pub fn twin_classes(g: &CoGraph) -> (Vec<(u32, u32)>, Vec<u32>) {
    let n = g.node_count();
    let mut first: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut classes: Vec<(u32, u32)> = Vec::new();
    let mut class_of = Vec::with_capacity(n);
    for u in 0..n {
        let mut key = Vec::with_capacity(g.deg(u) + 1);
        let adj = g.adj(u);
        let at = adj.partition_point(|&v| (v as usize) < u);
        key.extend_from_slice(&adj[..at]);
        key.push(u as u32);
        key.extend_from_slice(&adj[at..]);
        let c = match first.entry(key) {
            Entry::Occupied(e) => *e.get(),
            Entry::Vacant(e) => {
                classes.push((u as u32, 0));
                *e.insert(classes.len() as u32 - 1)
            }
        };
        classes[c as usize].1 += 1;
        class_of.push(c);
    }
    (classes, class_of)
}

#[derive(Clone, Copy)]
struct Slot {
    sigma: f64,
    delta: f64,
    dist: u32,
}

const UNSEEN: u32 = u32::MAX;

struct BrandesScratch {
    slots: Vec<Slot>,
    /// BFS order; doubles as the queue.
    order: Vec<u32>,
}

impl BrandesScratch {
    fn new(n: usize) -> Self {
        BrandesScratch {
            slots: vec![
                Slot {
                    sigma: 0.0,
                    delta: 0.0,
                    dist: UNSEEN,
                };
                n
            ],
            order: Vec::with_capacity(n),
        }
    }

    /// Adds `weight` times the dependencies of every node on source `s` into `acc`.
    fn accumulate(&mut self, g: &CoGraph, s: usize, weight: f64, acc: &mut [f64]) {
        let slots = &mut self.slots;
        slots[s].dist = 0;
        slots[s].sigma = 1.0;
        self.order.push(s as u32);
        let mut head = 0;
        while head < self.order.len() {
            let v = self.order[head] as usize;
            head += 1;
            let (dv, sv) = (slots[v].dist, slots[v].sigma);
            for &w in g.adj(v) {
                let slot = &mut slots[w as usize];
                if slot.dist == UNSEEN {
                    slot.dist = dv + 1;
                    self.order.push(w);
                }
                if slot.dist == dv + 1 {
                    slot.sigma += sv;
                }
            }
        }
        // predecessors of w are neighbors one level closer to s
        for &w in self.order.iter().rev() {
            let w = w as usize;
            let Slot { sigma, delta, dist } = slots[w];
            let coeff = (1.0 + delta) / sigma;
            for &v in g.adj(w) {
                let slot = &mut slots[v as usize];
                if slot.dist.wrapping_add(1) == dist {
                    slot.delta += slot.sigma * coeff;
                }
            }
            if w != s {
                acc[w] += weight * delta;
            }
        }
        for &v in &self.order {
            slots[v as usize] = Slot {
                sigma: 0.0,
                delta: 0.0,
                dist: UNSEEN,
            };
        }
        self.order.clear();
    }
}

/// Shortest-path betweenness over ordered pairs, normalized by `(g−1)(g−2)`.
pub fn betweenness_centrality(g: &CoGraph) -> Result<ScoreTable, CentralityError> {
    require_nodes(g, 3)?;
    let n = g.node_count();
    let raw = betweenness_raw(g);
    let denom = ((n - 1) * (n - 2)) as f64;
    let scores = raw.into_iter().map(|b| b / denom).collect();
    Ok(ScoreTable::new(Measure::Betweenness, scores))
}

/// Unnormalized ordered-pair betweenness.
///
/// A twin of the source never lies inside a shortest path from it, and twin
/// sources produce the same dependencies on every other node, so each twin
/// class contributes one BFS scaled by its size.
pub fn betweenness_raw(g: &CoGraph) -> Vec<f64> {
    let n = g.node_count();
    let (classes, _) = twin_classes(g);
    let mut total = vec![0.0f64; n];
    for wave in classes.chunks(SOURCE_BLOCK * BLOCKS_PER_WAVE) {
        let partials: Vec<Vec<f64>> = wave
            .par_chunks(SOURCE_BLOCK)
            .map(|block| {
                let mut scratch = BrandesScratch::new(n);
                let mut acc = vec![0.0f64; n];
                for &(s, size) in block {
                    scratch.accumulate(g, s as usize, size as f64, &mut acc);
                }
                acc
            })
            .collect();
        for part in partials {
            for (t, p) in total.iter_mut().zip(part) {
                *t += p;
            }
        }
    }
    total
}

/// BFS hop distances from `s`; `u32::MAX` marks unreachable nodes.
pub fn bfs_distances(g: &CoGraph, s: usize) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.node_count()];
    let mut queue = VecDeque::new();
    dist[s] = 0;
    queue.push_back(s as u32);
    while let Some(v) = queue.pop_front() {
        let dv = dist[v as usize];
        for &w in g.adj(v as usize) {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = dv + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Component-scaled closeness: `(r/(g−1)) · (r/S)` for `r` reachable nodes at
/// total distance `S`; equals `(g−1)/S` on connected graphs. Twins share a score.
pub fn closeness_centrality(g: &CoGraph) -> Result<ScoreTable, CentralityError> {
    require_nodes(g, 2)?;
    let n = g.node_count();
    let (classes, class_of) = twin_classes(g);
    let per_class: Vec<f64> = classes
        .par_iter()
        .map_init(
            || (vec![UNSEEN; n], Vec::with_capacity(n)),
            |(dist, order), &(u, _)| {
                dist[u as usize] = 0;
                order.push(u);
                let mut total = 0u64;
                let mut head = 0;
                while head < order.len() {
                    let v = order[head] as usize;
                    head += 1;
                    let dv = dist[v];
                    total += dv as u64;
                    for &w in g.adj(v) {
                        if dist[w as usize] == UNSEEN {
                            dist[w as usize] = dv + 1;
                            order.push(w);
                        }
                    }
                }
                let reachable = (order.len() - 1) as f64;
                for &v in order.iter() {
                    dist[v as usize] = UNSEEN;
                }
                order.clear();
                if total == 0 {
                    0.0
                } else {
                    (reachable / (n - 1) as f64) * (reachable / total as f64)
                }
            },
        )
        .collect();
    let scores = class_of.iter().map(|&c| per_class[c as usize]).collect();
    Ok(ScoreTable::new(Measure::Closeness, scores))
}

/// Power iteration for the dominant adjacency eigenvector, started from the
/// uniform vector and L2-normalized each step.
///
/// Iterates with `A + I`. The shift leaves eigenvectors unchanged and removes
/// the ±λ oscillation that plain `A` exhibits on bipartite components.
/// `params` holds `lambda` (Rayleigh quotient of `A`), `iterations`, `tol`,
/// `max_iter` and `converged` (1 or 0).
pub fn eigenvector_centrality(g: &CoGraph, tol: f64, max_iter: usize) -> Result<ScoreTable, CentralityError> {
    require_nodes(g, 2)?;
    if g.edge_count() == 0 {
        return Err(CentralityError::EmptyGraph);
    }
    let n = g.node_count();
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut next = vec![0.0; n];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        next.par_iter_mut().enumerate().for_each(|(v, out)| {
            *out = x[v] + g.adj(v).iter().map(|&t| x[t as usize]).sum::<f64>();
        });
        let norm = next.iter().map(|a| a * a).sum::<f64>().sqrt();
        let mut diff = 0.0;
        for (a, b) in next.iter_mut().zip(&x) {
            *a /= norm;
            diff += (*a - b) * (*a - b);
        }
        std::mem::swap(&mut x, &mut next);
        if diff.sqrt() < tol {
            converged = true;
            break;
        }
    }
    let lambda: f64 = (0..n)
        .map(|v| x[v] * g.adj(v).iter().map(|&t| x[t as usize]).sum::<f64>())
        .sum();
    let mut table = ScoreTable::new(Measure::Eigenvector, x);
    table.params.insert("lambda".into(), lambda);
    table.params.insert("iterations".into(), iterations as f64);
    table.params.insert("tol".into(), tol);
    table.params.insert("max_iter".into(), max_iter as f64);
    table.params.insert("converged".into(), if converged { 1.0 } else { 0.0 });
    if converged {
        Ok(table)
    } else {
        Err(CentralityError::NoConvergence(Box::new(table)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> CoGraph {
        CoGraph::from_unweighted(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn p3() -> CoGraph {
        CoGraph::from_unweighted(3, &[(0, 1), (1, 2)]).unwrap()
    }

    fn star3() -> CoGraph {
        CoGraph::from_unweighted(4, &[(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    #[test]
    fn degree_fixtures() {
        assert_eq!(degree_centrality(&k3()).unwrap().scores, vec![1.0; 3]);
        assert_eq!(degree_centrality(&p3()).unwrap().scores, vec![0.5, 1.0, 0.5]);
        let one = CoGraph::from_unweighted(1, &[]).unwrap();
        assert!(matches!(degree_centrality(&one), Err(CentralityError::TooFewNodes { .. })));
    }

    #[test]
    fn betweenness_fixtures() {
        assert_eq!(betweenness_centrality(&p3()).unwrap().scores, vec![0.0, 1.0, 0.0]);
        assert_eq!(betweenness_centrality(&k3()).unwrap().scores, vec![0.0; 3]);
        let two = CoGraph::from_unweighted(2, &[(0, 1)]).unwrap();
        assert!(betweenness_centrality(&two).is_err());
    }

    #[test]
    fn betweenness_splits_over_parallel_paths() {
        // 4-cycle: each node lies on one of two shortest paths between its two neighbours
        let c4 = CoGraph::from_unweighted(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let raw = betweenness_raw(&c4);
        assert_eq!(raw, vec![1.0; 4]);
    }

    #[test]
    fn closeness_fixtures() {
        let s = closeness_centrality(&p3()).unwrap().scores;
        assert_eq!(s[1], 1.0);
        assert!((s[0] - 2.0 / 3.0).abs() < 1e-15);
        // isolated node scores 0, pair in a 3-node graph is component-scaled
        let g = CoGraph::from_unweighted(3, &[(0, 1)]).unwrap();
        let s = closeness_centrality(&g).unwrap().scores;
        assert_eq!(s, vec![0.5, 0.5, 0.0]);
    }

    #[test]
    fn eigenvector_fixtures() {
        let k = eigenvector_centrality(&k3(), 1e-10, 1000).unwrap();
        for s in &k.scores {
            assert!((s - 1.0 / 3f64.sqrt()).abs() < 1e-10);
        }
        assert!((k.params["lambda"] - 2.0).abs() < 1e-9);
        let st = eigenvector_centrality(&star3(), 1e-10, 1000).unwrap().scores;
        assert!((st[0] / st[1] - 3f64.sqrt()).abs() < 1e-8);
        let p = eigenvector_centrality(&p3(), 1e-10, 1000).unwrap().scores;
        assert!((p[1] / p[0] - 2f64.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn eigenvector_errors() {
        let empty = CoGraph::from_unweighted(3, &[]).unwrap();
        assert!(matches!(
            eigenvector_centrality(&empty, 1e-10, 10),
            Err(CentralityError::EmptyGraph)
        ));
        match eigenvector_centrality(&star3(), 1e-300, 3) {
            Err(CentralityError::NoConvergence(t)) => {
                assert_eq!(t.params["converged"], 0.0);
                assert_eq!(t.scores.len(), 4);
            }
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }

    #[test]
    fn ranking_breaks_ties_by_label() {
        let g = CoGraph::from_edges(vec!["b".into(), "a".into(), "c".into()], &[(0, 2, 1), (1, 2, 1)]).unwrap();
        let t = degree_centrality(&g).unwrap();
        let names: Vec<_> = t.top(&g, 3).into_iter().map(|(n, _)| n).collect();
        assert_eq!(names, vec!["c", "a", "b"]);
    }
}
