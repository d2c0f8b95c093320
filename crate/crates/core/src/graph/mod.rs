//! Person↔title incidence and its projection onto the actor co-appearance graph.

mod cache;
mod export;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{TitleKind, TitleRecord};

pub use cache::{read_cache, write_cache, CACHE_MAGIC, CACHE_VERSION};
pub use export::{write_dot, write_graphml};

/// Casts larger than this are treated as corrupt rows.
pub const DEFAULT_MAX_CAST: usize = 500;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("no titles survive filtering")]
    EmptyInput,
    #[error("node index {0} out of range (graph has {1} nodes)")]
    NodeOutOfRange(usize, usize),
    #[error("unknown actor `{0}`")]
    UnknownActor(String),
    #[error("invalid edge ({0}, {1}): {2}")]
    InvalidEdge(usize, usize, &'static str),
    #[error("graph cache: {0}")]
    Cache(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Insertion-ordered string interner.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Interner {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl Interner {
    pub fn intern(&mut self, name: &str) -> u32 {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len() as u32;
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }

    pub fn get(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn name(&self, i: u32) -> &str {
        &self.names[i as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TitleMeta {
    pub title: String,
    pub year: Option<i32>,
    pub kind: TitleKind,
    pub country: Option<String>,
    pub directors: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BuildFilters {
    pub kind: Option<TitleKind>,
    /// Inclusive year bounds. Titles with unknown year are excluded when set.
    pub year_range: Option<(i32, i32)>,
    /// Minimum cast size; titles with empty casts are always excluded.
    pub min_cast: Option<usize>,
    /// Titles with more cast members than this are rejected. `None` uses [`DEFAULT_MAX_CAST`].
    pub max_cast: Option<usize>,
}

impl BuildFilters {
    fn admits(&self, r: &TitleRecord) -> bool {
        if self.kind.is_some_and(|k| k != r.kind) {
            return false;
        }
        if let Some((lo, hi)) = self.year_range {
            match r.release_year {
                Some(y) if (lo..=hi).contains(&y) => {}
                _ => return false,
            }
        }
        r.cast.len() >= self.min_cast.unwrap_or(1).max(1)
    }
}

/// Counts of titles dropped while building, by cause.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildReport {
    pub titles_in: usize,
    pub filtered: usize,
    pub oversized: usize,
    pub duplicate_ids: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteStore {
    pub persons: Interner,
    pub titles: Interner,
    /// Display name per person, parallel to `persons`.
    pub person_labels: Vec<String>,
    /// Sorted, duplicate-free person indices per title.
    pub incidence: Vec<Vec<u32>>,
    pub title_meta: Vec<TitleMeta>,
    pub report: BuildReport,
}

/// Interns persons and titles in first-seen order. `names` maps person keys
/// (IMDb `nconst`) to display names; keys without an entry are their own label.
pub fn build_bipartite(
    records: &[TitleRecord],
    filters: &BuildFilters,
    names: Option<&HashMap<String, String>>,
) -> Result<BipartiteStore, GraphError> {
    let max_cast = filters.max_cast.unwrap_or(DEFAULT_MAX_CAST);
    let mut store = BipartiteStore {
        persons: Interner::default(),
        titles: Interner::default(),
        person_labels: Vec::new(),
        incidence: Vec::new(),
        title_meta: Vec::new(),
        report: BuildReport {
            titles_in: records.len(),
            ..Default::default()
        },
    };
    for r in records {
        if !filters.admits(r) {
            store.report.filtered += 1;
            continue;
        }
        if r.cast.len() > max_cast {
            store.report.oversized += 1;
            continue;
        }
        if store.titles.get(&r.title_id).is_some() {
            store.report.duplicate_ids += 1;
            continue;
        }
        store.titles.intern(&r.title_id);
        let mut members: Vec<u32> = r
            .cast
            .iter()
            .filter(|p| !p.is_empty())
            .map(|p| {
                let before = store.persons.len();
                let i = store.persons.intern(p);
                if store.persons.len() > before {
                    let label = names.and_then(|m| m.get(p)).unwrap_or(p);
                    store.person_labels.push(label.clone());
                }
                i
            })
            .collect();
        members.sort_unstable();
        members.dedup();
        store.incidence.push(members);
        store.title_meta.push(TitleMeta {
            title: r.title.clone(),
            year: r.release_year,
            kind: r.kind,
            country: r.country.clone(),
            directors: r.directors.clone(),
        });
    }
    if store.titles.is_empty() {
        return Err(GraphError::EmptyInput);
    }
    Ok(store)
}

/// Weighted undirected co-appearance graph in compressed sparse row form.
///
/// Edge weights count shared titles. Centrality and link prediction read only
/// the neighbor structure; weights feed partnership ranking and Louvain.
#[derive(Debug, Clone, PartialEq)]
pub struct CoGraph {
    /// Identity key per node (the actor name for Netflix, `nconst` for IMDb).
    pub(crate) keys: Vec<String>,
    /// Display name per node.
    pub(crate) labels: Vec<String>,
    pub(crate) offsets: Vec<usize>,
    pub(crate) targets: Vec<u32>,
    pub(crate) weights: Vec<u32>,
    /// Per adjacency slot, the title indices shared by the pair.
    pub(crate) edge_titles: Option<Vec<Vec<u32>>>,
    pub(crate) title_names: Vec<String>,
    /// Most frequent title country per node (ties: lexicographically smallest).
    pub(crate) node_country: Vec<Option<String>>,
    pub(crate) total_weight: u64,
    key_index: HashMap<String, u32>,
    label_index: HashMap<String, u32>,
}

impl CoGraph {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        keys: Vec<String>,
        labels: Vec<String>,
        offsets: Vec<usize>,
        targets: Vec<u32>,
        weights: Vec<u32>,
        edge_titles: Option<Vec<Vec<u32>>>,
        title_names: Vec<String>,
        node_country: Vec<Option<String>>,
    ) -> Self {
        let total_weight = weights.iter().map(|&w| w as u64).sum::<u64>() / 2;
        let mut key_index = HashMap::with_capacity(keys.len());
        for (i, k) in keys.iter().enumerate() {
            key_index.entry(k.clone()).or_insert(i as u32);
        }
        let mut label_index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            label_index.entry(l.clone()).or_insert(i as u32);
        }
        CoGraph {
            keys,
            labels,
            offsets,
            targets,
            weights,
            edge_titles,
            title_names,
            node_country,
            total_weight,
            key_index,
            label_index,
        }
    }

    /// Builds a graph from an explicit edge list. Duplicate edges accumulate weight.
    pub fn from_edges(labels: Vec<String>, edges: &[(usize, usize, u32)]) -> Result<Self, GraphError> {
        let n = labels.len();
        let mut lists: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
        for &(u, v, w) in edges {
            if u >= n || v >= n {
                return Err(GraphError::NodeOutOfRange(u.max(v), n));
            }
            if u == v {
                return Err(GraphError::InvalidEdge(u, v, "self-loop"));
            }
            if w == 0 {
                return Err(GraphError::InvalidEdge(u, v, "zero weight"));
            }
            lists[u].push((v as u32, w));
            lists[v].push((u as u32, w));
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        offsets.push(0);
        for list in &mut lists {
            list.sort_unstable();
            let mut i = 0;
            while i < list.len() {
                let (t, mut w) = list[i];
                i += 1;
                while i < list.len() && list[i].0 == t {
                    w += list[i].1;
                    i += 1;
                }
                targets.push(t);
                weights.push(w);
            }
            offsets.push(targets.len());
        }
        Ok(Self::assemble(
            labels.clone(),
            labels,
            offsets,
            targets,
            weights,
            None,
            Vec::new(),
            vec![None; n],
        ))
    }

    /// Unit-weight convenience constructor with labels `n0`, `n1`, ...
    pub fn from_unweighted(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let labels = (0..n).map(|i| format!("n{i}")).collect();
        let weighted: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 1)).collect();
        Self::from_edges(labels, &weighted)
    }

    /// Node count (`g`).
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    /// Sum of edge weights over undirected edges (`m` in weighted modularity).
    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    pub fn label(&self, u: usize) -> &str {
        &self.labels[u]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn key(&self, u: usize) -> &str {
        &self.keys[u]
    }

    pub fn keys(&self) -> &[String] {
        &self.keys
    }

    pub fn country(&self, u: usize) -> Option<&str> {
        self.node_country[u].as_deref()
    }

    pub fn has_edge_titles(&self) -> bool {
        self.edge_titles.is_some()
    }

    /// Resolves an actor by identity key first, then by display name.
    pub fn find(&self, name: &str) -> Result<usize, GraphError> {
        self.key_index
            .get(name)
            .or_else(|| self.label_index.get(name))
            .map(|&i| i as usize)
            .ok_or_else(|| GraphError::UnknownActor(name.to_string()))
    }

    fn check(&self, u: usize) -> Result<(), GraphError> {
        if u < self.node_count() {
            Ok(())
        } else {
            Err(GraphError::NodeOutOfRange(u, self.node_count()))
        }
    }

    /// Sorted neighbor slice. Panics if `u` is out of range.
    #[inline]
    pub fn adj(&self, u: usize) -> &[u32] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    /// Weights parallel to [`CoGraph::adj`].
    #[inline]
    pub fn adj_weights(&self, u: usize) -> &[u32] {
        &self.weights[self.offsets[u]..self.offsets[u + 1]]
    }

    #[inline]
    pub fn deg(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    /// Sum of incident edge weights.
    pub fn strength(&self, u: usize) -> u64 {
        self.adj_weights(u).iter().map(|&w| w as u64).sum()
    }

    pub fn degree(&self, u: usize) -> Result<usize, GraphError> {
        self.check(u)?;
        Ok(self.deg(u))
    }

    pub fn neighbors(&self, u: usize) -> Result<&[u32], GraphError> {
        self.check(u)?;
        Ok(self.adj(u))
    }

    /// Shared-title count, 0 for non-adjacent pairs.
    pub fn weight(&self, u: usize, v: usize) -> Result<u32, GraphError> {
        self.check(u)?;
        self.check(v)?;
        Ok(self
            .slot(u, v)
            .map(|s| self.weights[s])
            .unwrap_or(0))
    }

    fn slot(&self, u: usize, v: usize) -> Option<usize> {
        self.adj(u)
            .binary_search(&(v as u32))
            .ok()
            .map(|i| self.offsets[u] + i)
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.slot(u, v).is_some()
    }

    /// Names of titles shared by `u` and `v`, sorted. Empty when titles were not kept.
    pub fn shared_titles(&self, u: usize, v: usize) -> Vec<String> {
        let (Some(slot), Some(titles)) = (self.slot(u, v), self.edge_titles.as_ref()) else {
            return Vec::new();
        };
        let mut names: Vec<String> = titles[slot]
            .iter()
            .map(|&t| self.title_names[t as usize].clone())
            .collect();
        names.sort();
        names
    }

    /// Undirected edges `(u, v, w)` with `u < v`, in index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.adj(u)
                .iter()
                .zip(self.adj_weights(u))
                .filter(move |(&v, _)| (v as usize) > u)
                .map(move |(&v, &w)| (u, v as usize, w))
        })
    }

    /// Subgraph induced by `nodes`, relabelled densely in the given order.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> CoGraph {
        let mut local = HashMap::with_capacity(nodes.len());
        for (i, &u) in nodes.iter().enumerate() {
            local.insert(u as u32, i as u32);
        }
        let mut offsets = vec![0];
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        let mut titles = self.edge_titles.as_ref().map(|_| Vec::new());
        for &u in nodes {
            let start = targets.len();
            let mut row: Vec<(u32, u32, usize)> = Vec::new();
            for (k, (&v, &w)) in self.adj(u).iter().zip(self.adj_weights(u)).enumerate() {
                if let Some(&lv) = local.get(&v) {
                    row.push((lv, w, self.offsets[u] + k));
                }
            }
            row.sort_unstable();
            for (lv, w, slot) in row {
                targets.push(lv);
                weights.push(w);
                if let (Some(out), Some(src)) = (titles.as_mut(), self.edge_titles.as_ref()) {
                    out.push(src[slot].clone());
                }
            }
            debug_assert!(targets.len() >= start);
            offsets.push(targets.len());
        }
        CoGraph::assemble(
            nodes.iter().map(|&u| self.keys[u].clone()).collect(),
            nodes.iter().map(|&u| self.labels[u].clone()).collect(),
            offsets,
            targets,
            weights,
            titles,
            self.title_names.clone(),
            nodes.iter().map(|&u| self.node_country[u].clone()).collect(),
        )
    }
}

/// Projects the bipartite store onto persons: one edge per co-appearing pair,
/// weighted by the number of shared titles.
pub fn project(store: &BipartiteStore, keep_titles: bool) -> CoGraph {
    let n = store.persons.len();
    let mut person_titles: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (t, members) in store.incidence.iter().enumerate() {
        for &p in members {
            person_titles[p as usize].push(t as u32);
        }
    }

    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0);
    let mut targets = Vec::new();
    let mut weights = Vec::new();
    let mut edge_titles = keep_titles.then(Vec::new);
    let mut counts = vec![0u32; n];
    let mut shared: Vec<Vec<u32>> = if keep_titles { vec![Vec::new(); n] } else { Vec::new() };
    let mut touched: Vec<u32> = Vec::new();
    let mut node_country = Vec::with_capacity(n);
    let mut country_tally: HashMap<&str, u32> = HashMap::new();

    for (u, titles) in person_titles.iter().enumerate() {
        country_tally.clear();
        for &t in titles {
            if let Some(c) = store.title_meta[t as usize].country.as_deref() {
                *country_tally.entry(c).or_insert(0) += 1;
            }
            for &v in &store.incidence[t as usize] {
                if v as usize == u {
                    continue;
                }
                if counts[v as usize] == 0 {
                    touched.push(v);
                }
                counts[v as usize] += 1;
                if keep_titles {
                    shared[v as usize].push(t);
                }
            }
        }
        touched.sort_unstable();
        for &v in &touched {
            targets.push(v);
            weights.push(counts[v as usize]);
            counts[v as usize] = 0;
            if let Some(out) = edge_titles.as_mut() {
                out.push(std::mem::take(&mut shared[v as usize]));
            }
        }
        touched.clear();
        offsets.push(targets.len());
        node_country.push(
            country_tally
                .iter()
                .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
                .map(|(c, _)| c.to_string()),
        );
    }

    CoGraph::assemble(
        store.persons.names().to_vec(),
        store.person_labels.clone(),
        offsets,
        targets,
        weights,
        edge_titles,
        store.title_meta.iter().map(|m| m.title.clone()).collect(),
        node_country,
    )
}
