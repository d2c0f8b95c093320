//! Louvain communities and everything derived from a partition.

mod clusters;
mod evolution;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::centrality::{Measure, ScoreTable};
use crate::graph::{CoGraph, GraphError};

pub use clusters::{
    build_cluster_graph, filter_interactions, write_cluster_dot, ClusterGraph, ClusterInfo, ClusterLabeler,
    ClusterLink, CountryLabeler,
};
pub use evolution::{community_evolution, CommunityMatch, EvolutionTimeline, EvolutionWindow, WindowStatus};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Error)]
pub enum CommunityError {
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("assignment covers {got} nodes, graph has {expected}")]
    AssignmentLength { got: usize, expected: usize },
    #[error("interaction threshold {0} outside (0, 1]")]
    InvalidThreshold(f64),
    #[error("invalid window: window {window} years, step {step} years")]
    InvalidWindow { window: i32, step: i32 },
    #[error("no record carries a release year")]
    NoYears,
    #[error("community {0} does not exist")]
    UnknownCommunity(u32),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    /// Dense community id per node, numbered by first appearance in node order.
    pub assignment: Vec<u32>,
    pub q: f64,
    pub seed: u64,
    pub resolution: f64,
    /// Aggregation levels that moved at least one node.
    pub passes: usize,
    /// Modularity on the original graph after each level.
    pub level_q: Vec<f64>,
}

impl Partition {
    pub fn community_count(&self) -> usize {
        self.assignment.iter().map(|&c| c as usize + 1).max().unwrap_or(0)
    }

    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.community_count()];
        for (u, &c) in self.assignment.iter().enumerate() {
            out[c as usize].push(u);
        }
        out
    }
}

/// Renumbers ids densely by first appearance.
fn compact(assignment: &mut [u32]) -> usize {
    let mut map: Vec<u32> = vec![u32::MAX; assignment.len()];
    let mut next = 0u32;
    for c in assignment.iter_mut() {
        let slot = &mut map[*c as usize];
        if *slot == u32::MAX {
            *slot = next;
            next += 1;
        }
        *c = *slot;
    }
    next as usize
}

/// Weighted modularity `Σ_c L_c/m − γ (d_c/2m)²` with `m` the total edge weight.
pub fn modularity_with_resolution(g: &CoGraph, assignment: &[u32], resolution: f64) -> Result<f64, CommunityError> {
    if assignment.len() != g.node_count() {
        return Err(CommunityError::AssignmentLength {
            got: assignment.len(),
            expected: g.node_count(),
        });
    }
    let m = g.total_weight() as f64;
    if m == 0.0 {
        return Ok(0.0);
    }
    let k = assignment.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
    let mut internal = vec![0u64; k];
    let mut degree = vec![0u64; k];
    for u in 0..g.node_count() {
        let cu = assignment[u] as usize;
        degree[cu] += g.strength(u);
        for (&v, &w) in g.adj(u).iter().zip(g.adj_weights(u)) {
            if (v as usize) > u && assignment[v as usize] as usize == cu {
                internal[cu] += w as u64;
            }
        }
    }
    Ok(internal
        .iter()
        .zip(&degree)
        .map(|(&l, &d)| {
            let share = d as f64 / (2.0 * m);
            l as f64 / m - resolution * share * share
        })
        .sum())
}

pub fn modularity(g: &CoGraph, assignment: &[u32]) -> Result<f64, CommunityError> {
    modularity_with_resolution(g, assignment, 1.0)
}

/// Graph being optimized at one Louvain level. Weights stay integral.
struct Level {
    adj: Vec<Vec<(u32, u64)>>,
    self_loops: Vec<u64>,
    strength: Vec<u64>,
}

impl Level {
    fn from_graph(g: &CoGraph) -> Self {
        let n = g.node_count();
        Level {
            adj: (0..n)
                .map(|u| {
                    g.adj(u)
                        .iter()
                        .zip(g.adj_weights(u))
                        .map(|(&v, &w)| (v, w as u64))
                        .collect()
                })
                .collect(),
            self_loops: vec![0; n],
            strength: (0..n).map(|u| g.strength(u)).collect(),
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// Collapses each community into one node.
    fn aggregate(&self, community: &[u32], count: usize) -> Level {
        let mut self_loops = vec![0u64; count];
        let mut strength = vec![0u64; count];
        let mut rows: Vec<Vec<(u32, u64)>> = vec![Vec::new(); count];
        for u in 0..self.len() {
            let cu = community[u] as usize;
            self_loops[cu] += self.self_loops[u];
            strength[cu] += self.strength[u];
            for &(v, w) in &self.adj[u] {
                let cv = community[v as usize];
                if cv as usize == cu {
                    // each internal edge is seen from both ends
                    if (v as usize) > u {
                        self_loops[cu] += w;
                    }
                } else {
                    rows[cu].push((cv, w));
                }
            }
        }
        let adj = rows
            .into_iter()
            .map(|mut row| {
                row.sort_unstable_by_key(|e| e.0);
                let mut merged: Vec<(u32, u64)> = Vec::with_capacity(row.len());
                for (c, w) in row {
                    match merged.last_mut() {
                        Some(last) if last.0 == c => last.1 += w,
                        _ => merged.push((c, w)),
                    }
                }
                merged
            })
            .collect();
        Level {
            adj,
            self_loops,
            strength,
        }
    }
}

/// Local moving phase. Returns whether any node changed community.
fn local_moving(level: &Level, community: &mut [u32], two_m: f64, resolution: f64, rng: &mut ChaCha8Rng) -> bool {
    let n = level.len();
    let mut totals: Vec<f64> = level.strength.iter().map(|&s| s as f64).collect();
    let mut links = vec![0u64; n];
    let mut touched: Vec<u32> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    let mut any = false;
    loop {
        order.shuffle(rng);
        let mut moved = false;
        for &i in &order {
            let own = community[i];
            let k_i = level.strength[i] as f64;
            for &(v, w) in &level.adj[i] {
                let c = community[v as usize];
                if links[c as usize] == 0 {
                    touched.push(c);
                }
                links[c as usize] += w;
            }
            totals[own as usize] -= k_i;
            // gains are scaled by 2m; integral weights keep them exact at γ = 1
            let gain = |c: u32, totals: &[f64]| links[c as usize] as f64 * two_m - resolution * totals[c as usize] * k_i;
            let mut best = own;
            let mut best_gain = gain(own, &totals);
            for &c in &touched {
                let g = gain(c, &totals);
                if g > best_gain {
                    best = c;
                    best_gain = g;
                }
            }
            totals[best as usize] += k_i;
            community[i] = best;
            for &c in &touched {
                links[c as usize] = 0;
            }
            touched.clear();
            if best != own {
                moved = true;
            }
        }
        if !moved {
            break;
        }
        any = true;
    }
    any
}

/// Two-phase Louvain on the weighted graph.
///
/// Nodes are visited in a seeded Fisher–Yates order, reshuffled every sweep.
/// A node only moves for a strictly positive modularity gain. Levels repeat
/// until one produces no move.
pub fn louvain(g: &CoGraph, seed: u64, resolution: f64) -> Result<Partition, CommunityError> {
    if g.total_weight() == 0 {
        return Err(CommunityError::EmptyGraph);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two_m = 2.0 * g.total_weight() as f64;
    let mut level = Level::from_graph(g);
    let mut assignment: Vec<u32> = (0..g.node_count() as u32).collect();
    let mut level_q = Vec::new();
    loop {
        let mut community: Vec<u32> = (0..level.len() as u32).collect();
        if !local_moving(&level, &mut community, two_m, resolution, &mut rng) {
            break;
        }
        let count = compact(&mut community);
        for c in assignment.iter_mut() {
            *c = community[*c as usize];
        }
        level_q.push(modularity_with_resolution(g, &assignment, resolution)?);
        if count == level.len() {
            break;
        }
        level = level.aggregate(&community, count);
    }
    compact(&mut assignment);
    let q = modularity_with_resolution(g, &assignment, resolution)?;
    Ok(Partition {
        assignment,
        q,
        seed,
        resolution,
        passes: level_q.len(),
        level_q,
    })
}

/// Re-runs Louvain inside one community's induced subgraph. Returns the member
/// node indices (in the parent graph) and the sub-partition over them.
pub fn sub_communities(
    g: &CoGraph,
    partition: &Partition,
    community: u32,
    seed: u64,
    resolution: f64,
) -> Result<(Vec<usize>, Partition), CommunityError> {
    let members: Vec<usize> = (0..g.node_count())
        .filter(|&u| partition.assignment[u] == community)
        .collect();
    if members.is_empty() {
        return Err(CommunityError::UnknownCommunity(community));
    }
    let sub = g.induced_subgraph(&members);
    Ok((members, louvain(&sub, seed, resolution)?))
}

/// Participation coefficient `1 − Σ_c (k_uc/k_u)²` over unweighted edge counts;
/// 0 for isolated nodes.
pub fn crossover_scores(g: &CoGraph, partition: &Partition) -> Result<ScoreTable, CommunityError> {
    if partition.assignment.len() != g.node_count() {
        return Err(CommunityError::AssignmentLength {
            got: partition.assignment.len(),
            expected: g.node_count(),
        });
    }
    let mut per_comm: Vec<u32> = vec![0; partition.community_count()];
    let mut touched: Vec<u32> = Vec::new();
    let scores = (0..g.node_count())
        .map(|u| {
            let k = g.deg(u);
            if k == 0 {
                return 0.0;
            }
            for &v in g.adj(u) {
                let c = partition.assignment[v as usize];
                if per_comm[c as usize] == 0 {
                    touched.push(c);
                }
                per_comm[c as usize] += 1;
            }
            touched.sort_unstable();
            let mut sum = 0.0;
            for &c in &touched {
                let share = per_comm[c as usize] as f64 / k as f64;
                sum += share * share;
                per_comm[c as usize] = 0;
            }
            touched.clear();
            1.0 - sum
        })
        .collect();
    Ok(ScoreTable {
        measure: Measure::Participation,
        scores,
        params: Default::default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn two_triangles() -> CoGraph {
        CoGraph::from_unweighted(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    #[test]
    fn modularity_fixtures() {
        let g = two_triangles();
        assert_eq!(modularity(&g, &[0; 6]).unwrap(), 0.0);
        assert!((modularity(&g, &[0, 0, 0, 1, 1, 1]).unwrap() - 0.5).abs() < 1e-15);
        let singletons: Vec<u32> = (0..6).collect();
        assert!((modularity(&g, &singletons).unwrap() + 1.0 / 6.0).abs() < 1e-15);
        assert!(matches!(
            modularity(&g, &[0, 0]),
            Err(CommunityError::AssignmentLength { got: 2, expected: 6 })
        ));
    }

    #[test]
    fn louvain_two_triangles() {
        let p = louvain(&two_triangles(), 42, 1.0).unwrap();
        assert_eq!(p.assignment, vec![0, 0, 0, 1, 1, 1]);
        assert!((p.q - 0.5).abs() < 1e-12);
        assert_eq!(p.level_q.last().copied(), Some(p.q));
    }

    #[test]
    fn louvain_single_triangle() {
        let k3 = CoGraph::from_unweighted(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let p = louvain(&k3, 7, 1.0).unwrap();
        assert_eq!(p.community_count(), 1);
        assert!(p.q.abs() < 1e-15);
    }

    #[test]
    fn louvain_needs_edges() {
        let g = CoGraph::from_unweighted(3, &[]).unwrap();
        assert!(matches!(louvain(&g, 1, 1.0), Err(CommunityError::EmptyGraph)));
    }

    #[test]
    fn louvain_uses_weights() {
        // a 4-cycle whose heavy edges pair (0,1) and (2,3)
        let g = CoGraph::from_edges(
            (0..4).map(|i| i.to_string()).collect(),
            &[(0, 1, 10), (1, 2, 1), (2, 3, 10), (3, 0, 1)],
        )
        .unwrap();
        let p = louvain(&g, 3, 1.0).unwrap();
        assert_eq!(p.assignment[0], p.assignment[1]);
        assert_eq!(p.assignment[2], p.assignment[3]);
        assert_ne!(p.assignment[0], p.assignment[2]);
    }

    #[test]
    fn isolated_nodes_stay_alone() {
        let g = CoGraph::from_unweighted(4, &[(0, 1)]).unwrap();
        let p = louvain(&g, 1, 1.0).unwrap();
        assert_eq!(p.community_count(), 3);
        assert_eq!(p.assignment[0], p.assignment[1]);
    }

    #[test]
    fn crossover_fixtures() {
        // node 0 joins both triangles through one edge each side
        let g = CoGraph::from_unweighted(
            7,
            &[(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6), (0, 1), (0, 4)],
        )
        .unwrap();
        let partition = Partition {
            assignment: vec![2, 0, 0, 0, 1, 1, 1],
            q: 0.0,
            seed: 0,
            resolution: 1.0,
            passes: 0,
            level_q: vec![],
        };
        let s = crossover_scores(&g, &partition).unwrap().scores;
        assert_eq!(s[0], 0.5);
        assert_eq!(s[2], 0.0);
        let lone = CoGraph::from_unweighted(2, &[]).unwrap();
        let p = Partition {
            assignment: vec![0, 1],
            ..partition
        };
        assert_eq!(crossover_scores(&lone, &p).unwrap().scores, vec![0.0, 0.0]);
    }

    #[test]
    fn sub_communities_split_a_community() {
        let g = two_triangles();
        let whole = Partition {
            assignment: vec![0; 6],
            q: 0.0,
            seed: 0,
            resolution: 1.0,
            passes: 0,
            level_q: vec![],
        };
        let (members, sub) = sub_communities(&g, &whole, 0, 42, 1.0).unwrap();
        assert_eq!(members.len(), 6);
        assert_eq!(sub.community_count(), 2);
        assert!(matches!(
            sub_communities(&g, &whole, 5, 42, 1.0),
            Err(CommunityError::UnknownCommunity(5))
        ));
    }
}
