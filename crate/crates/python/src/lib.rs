//! Python bindings: build a co-appearance graph and run the analyses on it.

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;

use castnet::centrality::{self, CentralityError, Measure};
use castnet::community::{self, build_cluster_graph, crossover_scores, filter_interactions, CountryLabeler};
use castnet::graph::{build_bipartite, project, BuildFilters};
use castnet::ingest::{self, TitleKind, TitleRecord};
use castnet::linkpred::{self, Method, PredictOptions};
use castnet::paths::{self, PathOutcome};
use castnet::{stats, CoGraph};
use pyo3::exceptions::{PyKeyError, PyOSError, PyValueError};
use pyo3::prelude::*;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_kind(kind: Option<&str>) -> PyResult<Option<TitleKind>> {
    match kind {
        None => Ok(None),
        Some("movie") => Ok(Some(TitleKind::Movie)),
        Some("tv") => Ok(Some(TitleKind::TvShow)),
        Some(other) => Err(PyValueError::new_err(format!("kind must be 'movie' or 'tv', got {other:?}"))),
    }
}

fn load_netflix(path: PathBuf) -> PyResult<Vec<TitleRecord>> {
    let reader = ingest::open_input(&path).map_err(|e| PyOSError::new_err(e.to_string()))?;
    let (records, _) = ingest::parse_netflix(reader).map_err(value_err)?;
    Ok(records)
}

/// `(from, to, shared titles)`.
type Hop = (String, String, Vec<String>);

/// Actor co-appearance graph. Edge weights count shared titles.
#[pyclass(module = "castnet_py", frozen)]
struct Graph {
    inner: CoGraph,
}

impl Graph {
    fn node(&self, name: &str) -> PyResult<usize> {
        self.inner
            .find(name)
            .map_err(|_| PyKeyError::new_err(name.to_string()))
    }

    fn by_name(&self, scores: &[f64]) -> BTreeMap<String, f64> {
        scores
            .iter()
            .enumerate()
            .map(|(u, &s)| (self.inner.label(u).to_string(), s))
            .collect()
    }
}

#[pymethods]
impl Graph {
    /// Builds the graph from a Netflix-schema CSV (plain or gzip).
    #[staticmethod]
    #[pyo3(signature = (path, kind=None, year_from=None, year_to=None, min_cast=None, max_cast=None))]
    fn from_netflix(
        path: PathBuf,
        kind: Option<&str>,
        year_from: Option<i32>,
        year_to: Option<i32>,
        min_cast: Option<usize>,
        max_cast: Option<usize>,
    ) -> PyResult<Self> {
        let records = load_netflix(path)?;
        let year_range = match (year_from, year_to) {
            (None, None) => None,
            (lo, hi) => Some((lo.unwrap_or(ingest::MIN_YEAR), hi.unwrap_or(ingest::MAX_YEAR))),
        };
        let filters = BuildFilters {
            kind: parse_kind(kind)?,
            year_range,
            min_cast,
            max_cast,
        };
        let store = build_bipartite(&records, &filters, None).map_err(value_err)?;
        Ok(Graph {
            inner: project(&store, true),
        })
    }

    /// Builds the graph from `(title, [cast...])` pairs.
    #[staticmethod]
    fn from_casts(titles: Vec<(String, Vec<String>)>) -> PyResult<Self> {
        let records: Vec<TitleRecord> = titles
            .into_iter()
            .enumerate()
            .map(|(i, (title, cast))| TitleRecord {
                title_id: format!("t{i}"),
                title,
                kind: TitleKind::Movie,
                release_year: None,
                directors: Vec::new(),
                cast,
                country: None,
                language_hint: None,
                rating: None,
                date_added: None,
                genres: Vec::new(),
                duration: None,
            })
            .collect();
        let store = build_bipartite(&records, &BuildFilters::default(), None).map_err(value_err)?;
        Ok(Graph {
            inner: project(&store, true),
        })
    }

    /// Builds a graph from labels and `(u, v, weight)` index triples.
    #[staticmethod]
    fn from_edges(labels: Vec<String>, edges: Vec<(usize, usize, u32)>) -> PyResult<Self> {
        Ok(Graph {
            inner: CoGraph::from_edges(labels, &edges).map_err(value_err)?,
        })
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    fn neighbors(&self, name: &str) -> PyResult<Vec<String>> {
        let u = self.node(name)?;
        Ok(self
            .inner
            .adj(u)
            .iter()
            .map(|&v| self.inner.label(v as usize).to_string())
            .collect())
    }

    fn weight(&self, a: &str, b: &str) -> PyResult<u32> {
        let (u, v) = (self.node(a)?, self.node(b)?);
        self.inner.weight(u, v).map_err(value_err)
    }

    fn shared_titles(&self, a: &str, b: &str) -> PyResult<Vec<String>> {
        Ok(self.inner.shared_titles(self.node(a)?, self.node(b)?))
    }

    /// Scores by actor name for `degree`, `betweenness`, `closeness` or `eigenvector`.
    fn centrality(&self, py: Python<'_>, measure: &str) -> PyResult<BTreeMap<String, f64>> {
        let m: Measure = measure.parse().map_err(PyValueError::new_err)?;
        let table = py
            .detach(|| match centrality::compute(&self.inner, m) {
                Err(CentralityError::NoConvergence(t)) => Ok(*t),
                other => other,
            })
            .map_err(value_err)?;
        Ok(self.by_name(&table.scores))
    }

    /// Eigenvector scores plus the solver parameters (`lambda`, `iterations`, `converged`, ...).
    #[pyo3(signature = (tol=1e-10, max_iter=1000))]
    fn eigenvector(&self, tol: f64, max_iter: usize) -> PyResult<(BTreeMap<String, f64>, BTreeMap<String, f64>)> {
        let table = match centrality::eigenvector_centrality(&self.inner, tol, max_iter) {
            Ok(t) => t,
            Err(CentralityError::NoConvergence(t)) => *t,
            Err(e) => return Err(value_err(e)),
        };
        Ok((self.by_name(&table.scores), table.params))
    }

    /// Hops `(from, to, [titles])` of the shortest path, or None when unreachable.
    fn shortest_path(&self, a: &str, b: &str) -> PyResult<Option<Vec<Hop>>> {
        let (u, v) = (self.node(a)?, self.node(b)?);
        Ok(match paths::shortest_path_between(&self.inner, u, v) {
            PathOutcome::Unreachable => None,
            PathOutcome::Found(p) => Some(p.hops.into_iter().map(|h| (h.from, h.to, h.titles)).collect()),
        })
    }

    /// The `k` pairs with the most shared titles.
    fn partners(&self, k: usize) -> Vec<(String, String, u32)> {
        paths::top_partnerships(&self.inner, k)
            .into_iter()
            .map(|p| (p.actor_a, p.actor_b, p.shared_titles))
            .collect()
    }

    /// Top-`k` non-adjacent pairs by a link-prediction index.
    #[pyo3(signature = (method, k=10, min_common=1, include_unconnected=false))]
    fn predict(
        &self,
        py: Python<'_>,
        method: &str,
        k: usize,
        min_common: usize,
        include_unconnected: bool,
    ) -> PyResult<Vec<(String, String, f64)>> {
        let m: Method = method.parse().map_err(PyValueError::new_err)?;
        let opts = PredictOptions {
            min_common,
            include_unconnected,
            ..Default::default()
        };
        let scores = py
            .detach(|| linkpred::predict_top(&self.inner, m, k, &opts))
            .map_err(value_err)?;
        Ok(scores.into_iter().map(|s| (s.u, s.v, s.score)).collect())
    }

    /// Index value for one pair.
    fn score_pair(&self, method: &str, a: &str, b: &str) -> PyResult<f64> {
        let m: Method = method.parse().map_err(PyValueError::new_err)?;
        let (u, v) = (self.node(a)?, self.node(b)?);
        if u == v {
            return Err(PyValueError::new_err("pair must be two different actors"));
        }
        Ok(linkpred::score_pair(&self.inner, m, u, v))
    }

    #[pyo3(signature = (seed=42, resolution=1.0))]
    fn louvain(&self, py: Python<'_>, seed: u64, resolution: f64) -> PyResult<Partition> {
        let p = py
            .detach(|| community::louvain(&self.inner, seed, resolution))
            .map_err(value_err)?;
        Ok(Partition {
            labels: self.inner.labels().to_vec(),
            inner: p,
        })
    }

    /// Modularity of `{name: community}`; every actor must be assigned.
    #[pyo3(signature = (assignment, resolution=1.0))]
    fn modularity(&self, assignment: HashMap<String, u32>, resolution: f64) -> PyResult<f64> {
        let mut dense = vec![0; self.inner.node_count()];
        if assignment.len() != dense.len() {
            return Err(PyValueError::new_err(format!(
                "assignment covers {} of {} actors",
                assignment.len(),
                dense.len()
            )));
        }
        for (name, c) in assignment {
            dense[self.node(&name)?] = c;
        }
        community::modularity_with_resolution(&self.inner, &dense, resolution).map_err(value_err)
    }

    /// Community links whose interaction frequency is at least `tau`:
    /// `(label_a, label_b, weight, frequency)`.
    fn cluster_links(&self, partition: &Partition, tau: f64) -> PyResult<Vec<(String, String, u64, f64)>> {
        let cg = build_cluster_graph(&self.inner, &partition.inner, &CountryLabeler::default()).map_err(value_err)?;
        let kept = filter_interactions(&cg, tau).map_err(value_err)?;
        let label = |id: u32| cg.clusters[id as usize].label.clone();
        Ok(kept
            .links
            .iter()
            .map(|l| (label(l.a), label(l.b), l.weight, l.frequency))
            .collect())
    }

    /// Participation coefficient per actor.
    fn crossover(&self, partition: &Partition) -> PyResult<BTreeMap<String, f64>> {
        let t = crossover_scores(&self.inner, &partition.inner).map_err(value_err)?;
        Ok(self.by_name(&t.scores))
    }

    fn __repr__(&self) -> String {
        format!("Graph(nodes={}, edges={})", self.inner.node_count(), self.inner.edge_count())
    }
}

/// Louvain result.
#[pyclass(module = "castnet_py", frozen)]
struct Partition {
    inner: community::Partition,
    labels: Vec<String>,
}

#[pymethods]
impl Partition {
    #[getter]
    fn q(&self) -> f64 {
        self.inner.q
    }

    #[getter]
    fn level_q(&self) -> Vec<f64> {
        self.inner.level_q.clone()
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    fn assignment(&self) -> BTreeMap<String, u32> {
        self.labels.iter().cloned().zip(self.inner.assignment.iter().copied()).collect()
    }

    /// Member names per community.
    fn communities(&self) -> Vec<Vec<String>> {
        self.inner
            .members()
            .into_iter()
            .map(|m| m.into_iter().map(|u| self.labels[u].clone()).collect())
            .collect()
    }

    fn __len__(&self) -> usize {
        self.inner.community_count()
    }

    fn __repr__(&self) -> String {
        format!("Partition(communities={}, q={:.6})", self.inner.community_count(), self.inner.q)
    }
}

/// Catalog statistics for a Netflix-schema CSV as a dict.
#[pyfunction]
#[pyo3(signature = (path, top=5))]
fn summarize(py: Python<'_>, path: PathBuf, top: usize) -> PyResult<Py<PyAny>> {
    let s = stats::summarize(&load_netflix(path)?, top, None);
    let d = pyo3::types::PyDict::new(py);
    d.set_item("total_titles", s.total_titles)?;
    let per_year: BTreeMap<i32, (u64, u64)> = s.per_year.iter().map(|(y, c)| (*y, (c.movies, c.tv))).collect();
    d.set_item("per_year", per_year)?;
    d.set_item("cast_histogram", s.cast_histogram)?;
    d.set_item("top_actors", s.top_actors)?;
    d.set_item("top_directors", s.top_directors)?;
    d.set_item("movies", s.type_totals.movies)?;
    d.set_item("tv", s.type_totals.tv)?;
    Ok(d.into_any().unbind())
}

/// Number of records in a Netflix-schema CSV, with the count of skipped rows.
#[pyfunction]
fn count_records(path: PathBuf) -> PyResult<(usize, u64)> {
    let reader = ingest::open_input(&path).map_err(|e| PyOSError::new_err(e.to_string()))?;
    let (records, report) = ingest::parse_netflix(reader).map_err(value_err)?;
    Ok((records.len(), report.skipped_count()))
}

#[pymodule]
fn castnet_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Graph>()?;
    m.add_class::<Partition>()?;
    m.add_function(wrap_pyfunction!(summarize, m)?)?;
    m.add_function(wrap_pyfunction!(count_records, m)?)?;
    Ok(())
}
