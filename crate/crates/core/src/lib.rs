//! Actor co-appearance network analytics for film and streaming catalogs.
//!
//! The pipeline runs ingest → graph → analyses:
//!
//! * [`ingest`] parses the Netflix catalog CSV and IMDb TSV dumps into [`ingest::TitleRecord`]s.
//! * [`graph`] interns people and titles and projects them onto a weighted [`graph::CoGraph`].
//! * [`centrality`], [`paths`], [`linkpred`] and [`community`] analyze the graph.
//! * [`stats`] summarizes the catalog itself.
//! * [`cli`] wires everything behind the `castnet` binary.

pub mod centrality;
pub mod cli;
pub mod community;
pub mod format;
pub mod graph;
pub mod ingest;
pub mod linkpred;
pub mod paths;
pub mod stats;

pub use centrality::{Measure, ScoreTable};
pub use community::{ClusterGraph, Partition};
pub use graph::{BipartiteStore, CoGraph};
pub use ingest::{PersonRecord, TitleKind, TitleRecord};
