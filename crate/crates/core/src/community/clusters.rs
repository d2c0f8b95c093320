//! Community meta-graph and interaction-frequency filtering.
//!
//! The interaction frequency of two clusters is their inter-cluster edge
//! weight divided by the smaller of the two cluster volumes. It is symmetric,
//! lies in [0, 1], and does not depend on the overall graph size.

use std::collections::{BTreeMap, HashMap};
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::{CommunityError, Partition};
use crate::graph::CoGraph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterInfo {
    pub id: u32,
    pub label: String,
    pub size: usize,
    /// Total incident edge weight of the members (internal edges count twice).
    pub volume: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterLink {
    /// Smaller community id.
    pub a: u32,
    pub b: u32,
    pub weight: u64,
    pub frequency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterGraph {
    pub clusters: Vec<ClusterInfo>,
    /// Sorted by `(a, b)`.
    pub links: Vec<ClusterLink>,
}

pub trait ClusterLabeler {
    fn label(&self, g: &CoGraph, id: u32, members: &[usize]) -> String;
}

/// Plurality of the members' most frequent title country, with manual overrides.
/// Falls back to `cluster-<id>`.
#[derive(Debug, Clone, Default)]
pub struct CountryLabeler {
    pub overrides: BTreeMap<u32, String>,
}

impl ClusterLabeler for CountryLabeler {
    fn label(&self, g: &CoGraph, id: u32, members: &[usize]) -> String {
        if let Some(l) = self.overrides.get(&id) {
            return l.clone();
        }
        let mut tally: HashMap<&str, usize> = HashMap::new();
        for &u in members {
            if let Some(c) = g.country(u) {
                *tally.entry(c).or_insert(0) += 1;
            }
        }
        tally
            .into_iter()
            .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(a.0)))
            .map(|(c, _)| c.to_string())
            .unwrap_or_else(|| format!("cluster-{id}"))
    }
}

pub fn build_cluster_graph(
    g: &CoGraph,
    partition: &Partition,
    labeler: &dyn ClusterLabeler,
) -> Result<ClusterGraph, CommunityError> {
    if partition.assignment.len() != g.node_count() {
        return Err(CommunityError::AssignmentLength {
            got: partition.assignment.len(),
            expected: g.node_count(),
        });
    }
    let members = partition.members();
    let clusters: Vec<ClusterInfo> = members
        .iter()
        .enumerate()
        .map(|(id, m)| ClusterInfo {
            id: id as u32,
            label: labeler.label(g, id as u32, m),
            size: m.len(),
            volume: m.iter().map(|&u| g.strength(u)).sum(),
        })
        .collect();
    let mut between: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    for (u, v, w) in g.edges() {
        let (cu, cv) = (partition.assignment[u], partition.assignment[v]);
        if cu != cv {
            *between.entry((cu.min(cv), cu.max(cv))).or_insert(0) += w as u64;
        }
    }
    let links = between
        .into_iter()
        .map(|((a, b), weight)| {
            let smaller = clusters[a as usize].volume.min(clusters[b as usize].volume);
            ClusterLink {
                a,
                b,
                weight,
                frequency: weight as f64 / smaller as f64,
            }
        })
        .collect();
    Ok(ClusterGraph { clusters, links })
}

/// Keeps links with `frequency ≥ tau`; clusters are always kept.
pub fn filter_interactions(cg: &ClusterGraph, tau: f64) -> Result<ClusterGraph, CommunityError> {
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(CommunityError::InvalidThreshold(tau));
    }
    Ok(ClusterGraph {
        clusters: cg.clusters.clone(),
        links: cg.links.iter().filter(|l| l.frequency >= tau).cloned().collect(),
    })
}

/// DOT rendering: one node per cluster sized by membership, edges labelled with frequency.
pub fn write_cluster_dot<W: Write>(cg: &ClusterGraph, mut out: W, fmt: impl Fn(f64) -> String) -> io::Result<()> {
    writeln!(out, "graph clusters {{")?;
    let largest = cg.clusters.iter().map(|c| c.size).max().unwrap_or(1).max(1) as f64;
    for c in &cg.clusters {
        let width = 0.5 + 2.0 * (c.size as f64 / largest).sqrt();
        writeln!(
            out,
            "  c{} [label=\"{}\", size={}, width={}];",
            c.id,
            c.label.replace('\\', "\\\\").replace('"', "\\\""),
            c.size,
            fmt(width)
        )?;
    }
    for l in &cg.links {
        writeln!(
            out,
            "  c{} -- c{} [weight={}, frequency={}, label=\"{}\"];",
            l.a,
            l.b,
            l.weight,
            fmt(l.frequency),
            fmt(l.frequency)
        )?;
    }
    writeln!(out, "}}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn partition(assignment: Vec<u32>) -> Partition {
        Partition {
            assignment,
            q: 0.0,
            seed: 0,
            resolution: 1.0,
            passes: 0,
            level_q: vec![],
        }
    }

    fn joined_triangles() -> CoGraph {
        CoGraph::from_unweighted(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap()
    }

    #[test]
    fn frequency_uses_smaller_volume() {
        let cg = build_cluster_graph(&joined_triangles(), &partition(vec![0, 0, 0, 1, 1, 1]), &CountryLabeler::default())
            .unwrap();
        assert_eq!(cg.clusters[0].volume, 7);
        assert_eq!(cg.clusters[1].volume, 7);
        assert_eq!(cg.links.len(), 1);
        assert!((cg.links[0].frequency - 1.0 / 7.0).abs() < 1e-15);
        assert_eq!(cg.clusters[0].label, "cluster-0");

        assert_eq!(filter_interactions(&cg, 0.05).unwrap().links.len(), 1);
        let strict = filter_interactions(&cg, 0.2).unwrap();
        assert!(strict.links.is_empty());
        assert_eq!(strict.clusters.len(), 2);
        assert!(filter_interactions(&cg, 1.0).unwrap().links.is_empty());
        assert!(filter_interactions(&cg, 0.0).is_err());
        assert!(filter_interactions(&cg, 1.5).is_err());
    }

    #[test]
    fn disconnected_and_single_clusters() {
        let g = CoGraph::from_unweighted(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let cg = build_cluster_graph(&g, &partition(vec![0, 0, 0, 1, 1, 1]), &CountryLabeler::default()).unwrap();
        assert!(cg.links.is_empty());
        let one = build_cluster_graph(&g, &partition(vec![0; 6]), &CountryLabeler::default()).unwrap();
        assert_eq!(one.clusters.len(), 1);
        assert!(one.links.is_empty());
    }

    #[test]
    fn overrides_win() {
        let labeler = CountryLabeler {
            overrides: BTreeMap::from([(1, "Hollywood".to_string())]),
        };
        let cg = build_cluster_graph(&joined_triangles(), &partition(vec![0, 0, 0, 1, 1, 1]), &labeler).unwrap();
        assert_eq!(cg.clusters[1].label, "Hollywood");
    }

    #[test]
    fn dot_lists_clusters_and_links() {
        let cg = build_cluster_graph(&joined_triangles(), &partition(vec![0, 0, 0, 1, 1, 1]), &CountryLabeler::default())
            .unwrap();
        let mut buf = Vec::new();
        write_cluster_dot(&cg, &mut buf, |x| format!("{x:.3}")).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.contains("c0 -- c1 [weight=1, frequency=0.143"));
        assert!(s.contains("c1 [label=\"cluster-1\", size=3"));
    }
}
