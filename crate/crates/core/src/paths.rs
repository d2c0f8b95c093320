//! Shortest collaboration paths, distance histograms and top partnerships.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::centrality::bfs_distances;
use crate::graph::{CoGraph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hop {
    pub from: String,
    pub to: String,
    pub titles: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedPath {
    pub hops: Vec<Hop>,
    pub length: usize,
    /// Node sequence, `length + 1` entries.
    #[serde(skip)]
    pub nodes: Vec<usize>,
}

impl AnnotatedPath {
    /// `A —[T1; T2]→ B —[T3]→ C`; a zero-length path renders as the single actor.
    pub fn render(&self, g: &CoGraph) -> String {
        let mut out = g.label(self.nodes[0]).to_string();
        for hop in &self.hops {
            out.push_str(&format!(" —[{}]→ {}", hop.titles.join("; "), hop.to));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum PathOutcome {
    Found(AnnotatedPath),
    Unreachable,
}

/// Breadth-first shortest path. Among equal-length paths the one with the
/// lexicographically smallest label sequence wins.
pub fn shortest_path(g: &CoGraph, a: &str, b: &str) -> Result<PathOutcome, GraphError> {
    let src = g.find(a)?;
    let dst = g.find(b)?;
    Ok(shortest_path_between(g, src, dst))
}

pub fn shortest_path_between(g: &CoGraph, src: usize, dst: usize) -> PathOutcome {
    // distances to the target let a greedy walk pick the smallest label at each step
    let to_dst = bfs_distances(g, dst);
    if to_dst[src] == u32::MAX {
        return PathOutcome::Unreachable;
    }
    let mut nodes = vec![src];
    let mut cur = src;
    while cur != dst {
        let want = to_dst[cur] - 1;
        let next = g
            .adj(cur)
            .iter()
            .map(|&v| v as usize)
            .filter(|&v| to_dst[v] == want)
            .min_by(|&x, &y| g.label(x).cmp(g.label(y)).then(x.cmp(&y)))
            .expect("BFS layer has a predecessor");
        nodes.push(next);
        cur = next;
    }
    let hops = nodes
        .windows(2)
        .map(|w| Hop {
            from: g.label(w[0]).to_string(),
            to: g.label(w[1]).to_string(),
            titles: g.shared_titles(w[0], w[1]),
        })
        .collect();
    PathOutcome::Found(AnnotatedPath {
        length: nodes.len() - 1,
        hops,
        nodes,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceHistogram {
    /// Ordered-pair counts by hop distance, sources drawn from the sample.
    pub counts: BTreeMap<u32, u64>,
    /// Ordered pairs (source, other) with no connecting path.
    pub unreachable: u64,
    pub sources: usize,
}

/// BFS from a seeded uniform sample of sources (all nodes when the sample
/// covers the graph).
pub fn distance_histogram(g: &CoGraph, sample_sources: usize, seed: u64) -> DistanceHistogram {
    let n = g.node_count();
    let sources: Vec<usize> = if sample_sources >= n {
        (0..n).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = sample(&mut rng, n, sample_sources.max(1)).into_vec();
        s.sort_unstable();
        s
    };
    let partials: Vec<(BTreeMap<u32, u64>, u64)> = sources
        .par_iter()
        .map(|&s| {
            let mut counts = BTreeMap::new();
            let mut unreachable = 0;
            for (v, &d) in bfs_distances(g, s).iter().enumerate() {
                if v == s {
                    continue;
                }
                if d == u32::MAX {
                    unreachable += 1;
                } else {
                    *counts.entry(d).or_insert(0) += 1;
                }
            }
            (counts, unreachable)
        })
        .collect();
    let mut hist = DistanceHistogram {
        sources: sources.len(),
        ..Default::default()
    };
    for (counts, unreachable) in partials {
        hist.unreachable += unreachable;
        for (d, c) in counts {
            *hist.counts.entry(d).or_insert(0) += c;
        }
    }
    hist
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partnership {
    pub actor_a: String,
    pub actor_b: String,
    pub shared_titles: u32,
}

/// Heaviest `k` edges. Pairs are written with the smaller label first; ties
/// break on that label pair.
pub fn top_partnerships(g: &CoGraph, k: usize) -> Vec<Partnership> {
    let mut all: Vec<Partnership> = g
        .edges()
        .map(|(u, v, w)| {
            let (a, b) = if g.label(u) <= g.label(v) {
                (g.label(u), g.label(v))
            } else {
                (g.label(v), g.label(u))
            };
            Partnership {
                actor_a: a.to_string(),
                actor_b: b.to_string(),
                shared_titles: w,
            }
        })
        .collect();
    all.sort_by(|x, y| {
        y.shared_titles
            .cmp(&x.shared_titles)
            .then_with(|| x.actor_a.cmp(&y.actor_a))
            .then_with(|| x.actor_b.cmp(&y.actor_b))
    });
    all.truncate(k);
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labelled(names: &[&str], edges: &[(usize, usize, u32)]) -> CoGraph {
        CoGraph::from_edges(names.iter().map(|s| s.to_string()).collect(), edges).unwrap()
    }

    #[test]
    fn zero_length_path() {
        let g = labelled(&["A", "B"], &[(0, 1, 1)]);
        let PathOutcome::Found(p) = shortest_path(&g, "A", "A").unwrap() else {
            panic!()
        };
        assert_eq!(p.length, 0);
        assert!(p.hops.is_empty());
        assert_eq!(p.render(&g), "A");
    }

    #[test]
    fn lexicographic_tie_break() {
        // A reaches D through either C or B; B wins
        let g = labelled(&["A", "C", "B", "D"], &[(0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1)]);
        let PathOutcome::Found(p) = shortest_path(&g, "A", "D").unwrap() else {
            panic!()
        };
        let seq: Vec<&str> = p.nodes.iter().map(|&u| g.label(u)).collect();
        assert_eq!(seq, vec!["A", "B", "D"]);
        assert_eq!(p.render(&g), "A —[]→ B —[]→ D");
    }

    #[test]
    fn unreachable_and_unknown() {
        let g = labelled(&["A", "B", "C"], &[(0, 1, 1)]);
        assert_eq!(shortest_path(&g, "A", "C").unwrap(), PathOutcome::Unreachable);
        assert!(matches!(shortest_path(&g, "A", "Z"), Err(GraphError::UnknownActor(_))));
    }

    #[test]
    fn histogram_fixtures() {
        let k3 = CoGraph::from_unweighted(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let h = distance_histogram(&k3, 3, 1);
        assert_eq!(h.counts, BTreeMap::from([(1, 6)]));
        assert_eq!(h.unreachable, 0);

        let two = CoGraph::from_unweighted(4, &[(0, 1), (2, 3)]).unwrap();
        let h = distance_histogram(&two, 10, 1);
        assert_eq!(h.counts, BTreeMap::from([(1, 4)]));
        assert_eq!(h.unreachable, 8);

        let p4 = CoGraph::from_unweighted(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let h = distance_histogram(&p4, 4, 7);
        assert_eq!(h.counts, BTreeMap::from([(1, 6), (2, 4), (3, 2)]));
    }

    #[test]
    fn sampled_histogram_is_seeded() {
        let p = CoGraph::from_unweighted(30, &(0..29).map(|i| (i, i + 1)).collect::<Vec<_>>()).unwrap();
        let a = distance_histogram(&p, 5, 11);
        assert_eq!(a, distance_histogram(&p, 5, 11));
        assert_eq!(a.sources, 5);
        assert_eq!(a.counts.values().sum::<u64>(), 5 * 29);
    }

    #[test]
    fn partnerships_rank_by_weight() {
        let g = labelled(&["Z", "Y", "X"], &[(0, 1, 3), (1, 2, 1), (0, 2, 1)]);
        let top = top_partnerships(&g, 1);
        assert_eq!(
            top,
            vec![Partnership {
                actor_a: "Y".into(),
                actor_b: "Z".into(),
                shared_titles: 3
            }]
        );
        let all = top_partnerships(&g, 10);
        assert_eq!(all.len(), 3);
        assert_eq!((all[1].actor_a.as_str(), all[1].actor_b.as_str()), ("X", "Y"));
    }
}
