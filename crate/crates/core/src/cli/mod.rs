//! The `castnet` command line.
//!
//! Exit codes: 0 success, 1 data error, 2 usage error. Diagnostics go to
//! standard error; tables go to the output directory and standard output.

mod config;
mod output;

use std::collections::{BTreeMap, HashMap};
use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::centrality::{self, CentralityError, Measure, ScoreTable};
use crate::community::{
    self, build_cluster_graph, community_evolution, crossover_scores, filter_interactions, louvain, CountryLabeler,
};
use crate::graph::{self, build_bipartite, project, BuildFilters, BuildReport, CoGraph};
use crate::ingest::{self, IngestReport, PersonRecord, TitleKindFilter, TitleRecord};
use crate::linkpred::{self, Method, PredictOptions};
use crate::paths::{self, PathOutcome};
use crate::stats;

pub use config::{ConfigError, Format, KindArg, RunConfig, Source, DATA_DIR_ENV};
use output::{write_csv, write_json, OutputSet};

#[derive(Debug, Parser)]
#[command(name = "castnet", version, about = "Actor collaboration network analytics")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// key = value file mirroring these flags; flags win over the file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    source: Option<Source>,
    /// netflix_titles.csv (default: $CASTNET_DATA_DIR/netflix_titles.csv)
    #[arg(long, global = true)]
    netflix: Option<PathBuf>,
    #[arg(long, global = true)]
    imdb_basics: Option<PathBuf>,
    #[arg(long, global = true)]
    imdb_principals: Option<PathBuf>,
    #[arg(long, global = true)]
    imdb_names: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    kind: Option<KindArg>,
    #[arg(long, global = true)]
    year_from: Option<i32>,
    #[arg(long, global = true)]
    year_to: Option<i32>,
    #[arg(long, global = true)]
    min_cast: Option<usize>,
    /// Titles with larger casts are rejected as corrupt (default 500)
    #[arg(long, global = true)]
    max_cast: Option<usize>,
    /// Seed for Louvain visit order and sampling (default 42)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (default castnet-out)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads, 0 = one per core
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse the catalog into records.jsonl
    Ingest,
    /// Build the co-appearance graph cache
    Build,
    /// Catalog statistics
    Stats {
        #[arg(long, default_value_t = 5)]
        top: usize,
    },
    /// Centrality scores for every actor
    Centrality {
        measure: Measure,
        /// Eigenvector convergence tolerance
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 1000)]
        max_iter: usize,
    },
    /// Shortest collaboration path between two actors
    Path { a: String, b: String },
    /// Pairs with the most shared titles
    Partners {
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Rank likely future collaborations
    Predict {
        method: Method,
        #[arg(long, default_value_t = 10)]
        top: usize,
        #[arg(long, default_value_t = 1)]
        min_common: usize,
        /// With --min-common 0, score every non-adjacent pair (preferential attachment only)
        #[arg(long)]
        include_unconnected: bool,
        #[arg(long, default_value_t = linkpred::DEFAULT_CANDIDATE_CAP)]
        max_candidates: u64,
    },
    /// Louvain communities
    Communities {
        #[arg(long, default_value_t = 1.0)]
        resolution: f64,
    },
    /// Community meta-graph filtered by interaction frequency
    Clusters {
        /// Minimum interaction frequency; repeat for several thresholds
        #[arg(long, required = true)]
        tau: Vec<f64>,
        /// JSON object mapping community id to label
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        resolution: f64,
    },
    /// Participation coefficient across communities
    Crossover {
        #[arg(long, default_value_t = 1.0)]
        resolution: f64,
    },
    /// Communities per release-year window, matched across windows
    Evolve {
        #[arg(long, default_value_t = 10)]
        window: i32,
        #[arg(long, default_value_t = 5)]
        step: i32,
    },
    /// Write the graph as GraphML or DOT
    Export,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Ingest => "ingest",
            Command::Build => "build",
            Command::Stats { .. } => "stats",
            Command::Centrality { .. } => "centrality",
            Command::Path { .. } => "path",
            Command::Partners { .. } => "partners",
            Command::Predict { .. } => "predict",
            Command::Communities { .. } => "communities",
            Command::Clusters { .. } => "clusters",
            Command::Crossover { .. } => "crossover",
            Command::Evolve { .. } => "evolve",
            Command::Export => "export",
        }
    }
}

/// Raised for flag combinations clap cannot check; maps to exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct UsageError(String);

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn build_config(g: &GlobalArgs) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &g.config {
        cfg.apply_file(path).map_err(|e| usage(e.to_string()))?;
    }
    macro_rules! take {
        ($field:ident) => {
            if let Some(v) = g.$field.clone() {
                cfg.$field = v;
            }
        };
        (opt $field:ident) => {
            if let Some(v) = g.$field.clone() {
                cfg.$field = Some(v);
            }
        };
    }
    take!(source);
    take!(opt netflix);
    take!(opt imdb_basics);
    take!(opt imdb_principals);
    take!(opt imdb_names);
    take!(opt kind);
    take!(opt year_from);
    take!(opt year_to);
    take!(opt min_cast);
    take!(opt max_cast);
    take!(seed);
    take!(out);
    take!(opt format);
    take!(threads);
    Ok(cfg)
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = build_config(&cli.global).and_then(|cfg| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .context("cannot start worker threads")?;
        pool.install(|| execute(&cfg, &cli.command))
    });
    match result {
        Ok(()) => 0,
        // downstream reader closed early, e.g. `| head`
        Err(e) if is_broken_pipe(&e) => 0,
        Err(e) => {
            eprintln!("castnet: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                2
            } else {
                1
            }
        }
    }
}

/// Everything parsed from the configured source.
struct Catalog {
    records: Vec<TitleRecord>,
    persons: Vec<PersonRecord>,
    names: Option<HashMap<String, String>>,
    report: IngestReport,
    fingerprint: String,
}

fn require(path: Option<PathBuf>, what: &str) -> Result<PathBuf> {
    let p = path.ok_or_else(|| usage(format!("no {what} input given (flag, config, or ${DATA_DIR_ENV})")))?;
    if !p.exists() {
        bail!("input {} does not exist", p.display());
    }
    Ok(p)
}

fn input_paths(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    Ok(match cfg.source {
        Source::Netflix => vec![require(
            cfg.resolve(cfg.netflix.as_deref(), &["netflix_titles.csv", "netflix_titles.csv.gz"]),
            "netflix",
        )?],
        Source::Imdb => vec![
            require(
                cfg.resolve(cfg.imdb_basics.as_deref(), &["title.basics.tsv.gz", "title.basics.tsv"]),
                "imdb-basics",
            )?,
            require(
                cfg.resolve(
                    cfg.imdb_principals.as_deref(),
                    &["title.principals.tsv.gz", "title.principals.tsv"],
                ),
                "imdb-principals",
            )?,
            require(
                cfg.resolve(cfg.imdb_names.as_deref(), &["name.basics.tsv.gz", "name.basics.tsv"]),
                "imdb-names",
            )?,
        ],
    })
}

fn filters(cfg: &RunConfig) -> Result<BuildFilters> {
    let year_range = match (cfg.year_from, cfg.year_to) {
        (None, None) => None,
        (lo, hi) => {
            let lo = lo.unwrap_or(ingest::MIN_YEAR);
            let hi = hi.unwrap_or(ingest::MAX_YEAR);
            if lo > hi {
                return Err(usage(format!("year range {lo}..{hi} is empty")));
            }
            Some((lo, hi))
        }
    };
    Ok(BuildFilters {
        kind: cfg.kind.map(Into::into),
        year_range,
        min_cast: cfg.min_cast,
        max_cast: cfg.max_cast,
    })
}

/// Content hash of the inputs plus every setting that shapes the graph.
fn fingerprint(cfg: &RunConfig, inputs: &[PathBuf]) -> Result<String> {
    let mut h = Sha256::new();
    h.update(graph::CACHE_VERSION.to_le_bytes());
    h.update(serde_json::to_vec(&(cfg.source, filters(cfg)?))?);
    for p in inputs {
        let mut f = File::open(p).with_context(|| format!("reading {}", p.display()))?;
        let mut buf = vec![0u8; 1 << 16];
        loop {
            let n = f.read(&mut buf)?;
            if n == 0 {
                break;
            }
            h.update(&buf[..n]);
        }
    }
    Ok(h.finalize().iter().map(|b| format!("{b:02x}")).collect())
}

fn load_catalog(cfg: &RunConfig) -> Result<Catalog> {
    let inputs = input_paths(cfg)?;
    let fingerprint = fingerprint(cfg, &inputs)?;
    match cfg.source {
        Source::Netflix => {
            let (records, report) = ingest::parse_netflix(ingest::open_input(&inputs[0])?)
                .with_context(|| format!("parsing {}", inputs[0].display()))?;
            Ok(Catalog {
                records,
                persons: Vec::new(),
                names: None,
                report,
                fingerprint,
            })
        }
        Source::Imdb => {
            let filter = match cfg.kind {
                None => TitleKindFilter::All,
                Some(KindArg::Movie) => TitleKindFilter::Movies,
                Some(KindArg::Tv) => TitleKindFilter::TvShows,
            };
            let cat = ingest::parse_imdb(
                ingest::open_input(&inputs[0])?,
                ingest::open_input(&inputs[1])?,
                ingest::open_input(&inputs[2])?,
                filter,
            )
            .context("parsing IMDb dumps")?;
            let names = cat
                .persons
                .iter()
                .map(|p| (p.person_id.clone(), p.name.clone()))
                .collect();
            Ok(Catalog {
                records: cat.titles,
                persons: cat.persons,
                names: Some(names),
                report: cat.report,
                fingerprint,
            })
        }
    }
}

#[derive(Debug, Default, Serialize)]
struct RunReport {
    command: String,
    source: Option<Source>,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    ingest: Option<IngestSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    build: Option<BuildReport>,
    graph: Option<GraphSummary>,
    events: Vec<String>,
}

#[derive(Debug, Serialize)]
struct IngestSummary {
    data_rows: u64,
    records: u64,
    filtered: u64,
    skipped: u64,
    skipped_rows: Vec<ingest::SkippedRow>,
}

impl From<&IngestReport> for IngestSummary {
    fn from(r: &IngestReport) -> Self {
        IngestSummary {
            data_rows: r.data_rows,
            records: r.records,
            filtered: r.filtered,
            skipped: r.skipped_count(),
            skipped_rows: r.skipped.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
struct GraphSummary {
    nodes: usize,
    edges: usize,
    total_weight: u64,
    from_cache: bool,
}

#[derive(Debug, Serialize, serde::Deserialize)]
struct CacheMeta {
    fingerprint: String,
    version: u32,
}

fn cache_paths(out: &Path) -> (PathBuf, PathBuf) {
    (out.join("graph.bin"), out.join("graph.meta.json"))
}

/// Loads the graph cache when its fingerprint matches the inputs, otherwise
/// parses, builds and refreshes the cache.
fn load_graph(cfg: &RunConfig, report: &mut RunReport) -> Result<CoGraph> {
    let inputs = input_paths(cfg)?;
    let fp = fingerprint(cfg, &inputs)?;
    let (bin, meta) = cache_paths(&cfg.out);
    if let Ok(text) = fs::read_to_string(&meta) {
        if let Ok(m) = serde_json::from_str::<CacheMeta>(&text) {
            if m.fingerprint == fp && m.version == graph::CACHE_VERSION {
                match File::open(&bin).map_err(graph::GraphError::from).and_then(graph::read_cache) {
                    Ok(g) => {
                        report.graph = Some(summary(&g, true));
                        return Ok(g);
                    }
                    Err(e) => report.events.push(format!("graph cache rejected: {e}")),
                }
            }
        }
    }
    let cat = load_catalog(cfg)?;
    build_and_cache(cfg, &cat, report)
}

fn summary(g: &CoGraph, from_cache: bool) -> GraphSummary {
    GraphSummary {
        nodes: g.node_count(),
        edges: g.edge_count(),
        total_weight: g.total_weight(),
        from_cache,
    }
}

fn build_and_cache(cfg: &RunConfig, cat: &Catalog, report: &mut RunReport) -> Result<CoGraph> {
    report.ingest = Some((&cat.report).into());
    let store = build_bipartite(&cat.records, &filters(cfg)?, cat.names.as_ref())?;
    if store.report.oversized > 0 {
        report
            .events
            .push(format!("{} titles rejected for oversized casts", store.report.oversized));
    }
    report.build = Some(store.report.clone());
    let g = project(&store, true);
    fs::create_dir_all(&cfg.out)?;
    let (bin, meta) = cache_paths(&cfg.out);
    graph::write_cache(&g, File::create(&bin)?)?;
    write_json(
        &meta,
        &CacheMeta {
            fingerprint: cat.fingerprint.clone(),
            version: graph::CACHE_VERSION,
        },
    )?;
    report.graph = Some(summary(&g, false));
    Ok(g)
}

fn execute(cfg: &RunConfig, command: &Command) -> Result<()> {
    fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    let mut report = RunReport {
        command: command.name().to_string(),
        source: Some(cfg.source),
        seed: cfg.seed,
        ..Default::default()
    };
    let mut out = OutputSet::new(&cfg.out);
    let fmt = |allowed: &[Format], default: Format| -> Result<Format> {
        let f = cfg.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(usage(format!("--format {f:?} is not available for `{}`", command.name()).to_lowercase()))
        }
    };

    match command {
        Command::Ingest => {
            fmt(&[Format::Json], Format::Json)?;
            let cat = load_catalog(cfg)?;
            report.ingest = Some((&cat.report).into());
            ingest::write_jsonl(&cat.records, out.create("records.jsonl")?)?;
            if cfg.source == Source::Imdb {
                ingest::write_jsonl(&cat.persons, out.create("persons.jsonl")?)?;
            }
            eprintln!(
                "castnet: {} records, {} skipped rows",
                cat.records.len(),
                cat.report.skipped_count()
            );
        }
        Command::Build => {
            fmt(&[Format::Json], Format::Json)?;
            let cat = load_catalog(cfg)?;
            let g = build_and_cache(cfg, &cat, &mut report)?;
            eprintln!("castnet: {} actors, {} edges", g.node_count(), g.edge_count());
        }
        Command::Stats { top } => {
            let f = fmt(&[Format::Json, Format::Csv], Format::Csv)?;
            let cat = load_catalog(cfg)?;
            report.ingest = Some((&cat.report).into());
            let s = stats::summarize(&cat.records, *top, cat.names.as_ref());
            write_json(&out.path("stats.json"), &s)?;
            let years: Vec<Vec<String>> = s
                .per_year
                .iter()
                .map(|(y, c)| vec![y.to_string(), c.movies.to_string(), c.tv.to_string()])
                .collect();
            write_csv(out.create("stats_per_year.csv")?, &["year", "movies", "tv"], &years)?;
            let casts: Vec<Vec<String>> = s
                .cast_histogram
                .iter()
                .map(|(k, c)| vec![k.to_string(), c.to_string()])
                .collect();
            write_csv(out.create("stats_cast_size.csv")?, &["cast_size", "count"], &casts)?;
            let board = |b: &[(String, u64)]| -> Vec<Vec<String>> {
                b.iter().map(|(n, c)| vec![n.clone(), c.to_string()]).collect()
            };
            let actors = board(&s.top_actors);
            let directors = board(&s.top_directors);
            write_csv(out.create("stats_top_actors.csv")?, &["name", "count"], &actors)?;
            write_csv(out.create("stats_top_directors.csv")?, &["name", "count"], &directors)?;
            match f {
                Format::Json => {
                    print_json(&s)?;
                }
                _ => write_csv(io::stdout().lock(), &["name", "count"], &actors)?,
            }
        }
        Command::Centrality { measure, tol, max_iter } => {
            let f = fmt(&[Format::Csv, Format::Json], Format::Csv)?;
            let g = load_graph(cfg, &mut report)?;
            let table = match measure {
                Measure::Eigenvector => match centrality::eigenvector_centrality(&g, *tol, *max_iter) {
                    Ok(t) => t,
                    Err(CentralityError::NoConvergence(t)) => {
                        report.events.push(format!(
                            "eigenvector centrality did not converge after {max_iter} iterations"
                        ));
                        *t
                    }
                    Err(e) => return Err(e.into()),
                },
                Measure::Participation => {
                    let p = louvain(&g, cfg.seed, 1.0)?;
                    crossover_scores(&g, &p)?
                }
                m => centrality::compute(&g, *m)?,
            };
            let name = format!("centrality_{}", measure.as_str());
            emit_scores(&mut out, &g, &table, &name, f)?;
        }
        Command::Path { a, b } => {
            let f = fmt(&[Format::Csv, Format::Json], Format::Csv)?;
            let g = load_graph(cfg, &mut report)?;
            let outcome = paths::shortest_path(&g, a, b)?;
            write_json(&out.path("path.json"), &outcome)?;
            match (f, &outcome) {
                (Format::Json, _) => {
                    print_json(&outcome)?;
                }
                (_, PathOutcome::Found(p)) => writeln!(io::stdout().lock(), "{}", p.render(&g))?,
                (_, PathOutcome::Unreachable) => writeln!(io::stdout().lock(), "unreachable")?,
            }
        }
        Command::Partners { top } => {
            let f = fmt(&[Format::Csv, Format::Json], Format::Csv)?;
            let g = load_graph(cfg, &mut report)?;
            let pairs = paths::top_partnerships(&g, *top);
            let rows: Vec<Vec<String>> = pairs
                .iter()
                .map(|p| vec![p.actor_a.clone(), p.actor_b.clone(), p.shared_titles.to_string()])
                .collect();
            let header = ["actor_a", "actor_b", "shared_titles"];
            write_csv(out.create("partners.csv")?, &header, &rows)?;
            write_json(&out.path("partners.json"), &pairs)?;
            emit_table(f, &header, &rows, &pairs)?;
        }
        Command::Predict {
            method,
            top,
            min_common,
            include_unconnected,
            max_candidates,
        } => {
            let f = fmt(&[Format::Csv, Format::Json], Format::Csv)?;
            let g = load_graph(cfg, &mut report)?;
            let opts = PredictOptions {
                min_common: *min_common,
                include_unconnected: *include_unconnected,
                max_candidates: *max_candidates,
            };
            let scores = match linkpred::predict_top(&g, *method, *top, &opts) {
                Err(e @ linkpred::LinkPredError::ZeroCommon) => return Err(usage(e.to_string())),
                other => other?,
            };
            let rows: Vec<Vec<String>> = scores
                .iter()
                .map(|s| vec![s.u.clone(), s.v.clone(), method.as_str().to_string(), crate::format::sig6(s.score)])
                .collect();
            let header = ["actor_a", "actor_b", "method", "score"];
            let name = format!("predict_{}", method.as_str());
            write_csv(out.create(&format!("{name}.csv"))?, &header, &rows)?;
            let rounded: Vec<_> = scores
                .iter()
                .map(|s| linkpred::PairScore {
                    score: crate::format::round6(s.score),
                    ..s.clone()
                })
                .collect();
            write_json(&out.path(&format!("{name}.json")), &rounded)?;
            emit_table(f, &header, &rows, &rounded)?;
        }
        Command::Communities { resolution } => {
            let f = fmt(&[Format::Csv, Format::Json], Format::Csv)?;
            let g = load_graph(cfg, &mut report)?;
            let p = louvain(&g, cfg.seed, *resolution)?;
            eprintln!(
                "castnet: {} communities, modularity {}",
                p.community_count(),
                crate::format::sig6(p.q)
            );
            let rows: Vec<Vec<String>> = (0..g.node_count())
                .map(|u| vec![g.label(u).to_string(), p.assignment[u].to_string()])
                .collect();
            write_csv(out.create("communities.csv")?, &["name", "community"], &rows)?;
            let summary = PartitionSummary::new(&p);
            write_json(&out.path("communities.json"), &summary)?;
            emit_table(f, &["name", "community"], &rows, &summary)?;
        }
        Command::Clusters {
            tau,
            labels,
            resolution,
        } => {
            let f = fmt(&[Format::Json, Format::Dot], Format::Json)?;
            for &t in tau {
                if !(t > 0.0 && t <= 1.0) {
                    return Err(usage(format!("--tau {t} is outside (0, 1]")));
                }
            }
            let overrides: BTreeMap<u32, String> = match labels {
                Some(p) => serde_json::from_str(
                    &fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
                )
                .with_context(|| format!("parsing label overrides {}", p.display()))?,
                None => BTreeMap::new(),
            };
            let g = load_graph(cfg, &mut report)?;
            let p = louvain(&g, cfg.seed, *resolution)?;
            let cg = build_cluster_graph(&g, &p, &CountryLabeler { overrides })?;
            let mut counts = Vec::new();
            for &t in tau {
                let filtered = filter_interactions(&cg, t)?;
                let stem = format!("clusters_tau{}", crate::format::sig6(t));
                let rounded = round_clusters(&filtered);
                write_json(&out.path(&format!("{stem}.json")), &rounded)?;
                community::write_cluster_dot(&filtered, out.create(&format!("{stem}.dot"))?, crate::format::sig6)?;
                counts.push(vec![crate::format::sig6(t), filtered.links.len().to_string()]);
                if f == Format::Dot {
                    community::write_cluster_dot(&filtered, io::stdout().lock(), crate::format::sig6)?;
                }
            }
            if f == Format::Json {
                write_csv(io::stdout().lock(), &["tau", "links"], &counts)?;
            }
        }
        Command::Crossover { resolution } => {
            let f = fmt(&[Format::Csv, Format::Json], Format::Csv)?;
            let g = load_graph(cfg, &mut report)?;
            let p = louvain(&g, cfg.seed, *resolution)?;
            let table = crossover_scores(&g, &p)?;
            emit_scores(&mut out, &g, &table, "crossover", f)?;
        }
        Command::Evolve { window, step } => {
            fmt(&[Format::Json], Format::Json)?;
            let cat = load_catalog(cfg)?;
            report.ingest = Some((&cat.report).into());
            let timeline = community_evolution(
                &cat.records,
                *window,
                *step,
                cfg.seed,
                &filters(cfg)?,
                cat.names.as_ref(),
            )
            .map_err(|e| match e {
                community::CommunityError::InvalidWindow { .. } => usage(e.to_string()),
                other => other.into(),
            })?;
            let view = EvolutionView::new(&timeline);
            write_json(&out.path("evolution.json"), &view)?;
            print_json(&view.summary())?;
        }
        Command::Export => {
            let f = fmt(&[Format::Graphml, Format::Dot], Format::Graphml)?;
            let g = load_graph(cfg, &mut report)?;
            match f {
                Format::Dot => graph::write_dot(&g, BufWriter::new(out.create("graph.dot")?))?,
                _ => graph::write_graphml(&g, BufWriter::new(out.create("graph.graphml")?))?,
            }
        }
    }
    write_json(&out.path("run_report.json"), &report)?;
    Ok(())
}

fn print_json<T: Serialize + ?Sized>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<io::Error>()
            .is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
            || c.downcast_ref::<serde_json::Error>()
                .and_then(|j| j.io_error_kind())
                .is_some_and(|k| k == io::ErrorKind::BrokenPipe)
            || c.downcast_ref::<csv::Error>().is_some_and(|c| match c.kind() {
                csv::ErrorKind::Io(io) => io.kind() == io::ErrorKind::BrokenPipe,
                _ => false,
            })
    })
}

fn emit_table<T: Serialize>(f: Format, header: &[&str], rows: &[Vec<String>], json: &T) -> Result<()> {
    match f {
        Format::Json => {
            print_json(json)?;
        }
        _ => write_csv(io::stdout().lock(), header, rows)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct ScoreView<'a> {
    measure: Measure,
    params: BTreeMap<&'a str, f64>,
    scores: Vec<NamedScore>,
}

#[derive(Serialize)]
struct NamedScore {
    name: String,
    score: f64,
}

fn emit_scores(out: &mut OutputSet, g: &CoGraph, table: &ScoreTable, name: &str, f: Format) -> Result<()> {
    let ranking = table.ranking(g);
    let rows: Vec<Vec<String>> = ranking
        .iter()
        .map(|&u| vec![g.label(u).to_string(), crate::format::sig6(table.scores[u])])
        .collect();
    write_csv(out.create(&format!("{name}.csv"))?, &["name", "score"], &rows)?;
    let view = ScoreView {
        measure: table.measure,
        params: table
            .params
            .iter()
            .map(|(k, v)| (k.as_str(), crate::format::round6(*v)))
            .collect(),
        scores: ranking
            .iter()
            .map(|&u| NamedScore {
                name: g.label(u).to_string(),
                score: crate::format::round6(table.scores[u]),
            })
            .collect(),
    };
    write_json(&out.path(&format!("{name}.json")), &view)?;
    emit_table(f, &["name", "score"], &rows, &view)
}

#[derive(Serialize)]
struct PartitionSummary {
    communities: usize,
    q: f64,
    seed: u64,
    resolution: f64,
    passes: usize,
    level_q: Vec<f64>,
    sizes: Vec<usize>,
}

impl PartitionSummary {
    fn new(p: &community::Partition) -> Self {
        PartitionSummary {
            communities: p.community_count(),
            q: crate::format::round6(p.q),
            seed: p.seed,
            resolution: p.resolution,
            passes: p.passes,
            level_q: p.level_q.iter().map(|&q| crate::format::round6(q)).collect(),
            sizes: p.members().iter().map(Vec::len).collect(),
        }
    }
}

fn round_clusters(cg: &community::ClusterGraph) -> community::ClusterGraph {
    let mut cg = cg.clone();
    for l in &mut cg.links {
        l.frequency = crate::format::round6(l.frequency);
    }
    cg
}

#[derive(Serialize)]
struct EvolutionView<'a> {
    windows: Vec<WindowView<'a>>,
    matches: Vec<Vec<community::CommunityMatch>>,
}

#[derive(Serialize)]
struct WindowView<'a> {
    start: i32,
    end: i32,
    titles: usize,
    status: community::WindowStatus,
    q: Option<f64>,
    labels: &'a [String],
    sizes: Vec<usize>,
    communities: &'a [Vec<String>],
}

impl<'a> EvolutionView<'a> {
    fn new(t: &'a community::EvolutionTimeline) -> Self {
        EvolutionView {
            windows: t
                .windows
                .iter()
                .map(|w| WindowView {
                    start: w.start,
                    end: w.end,
                    titles: w.titles,
                    status: w.status,
                    q: w.partition.as_ref().map(|p| crate::format::round6(p.q)),
                    labels: &w.labels,
                    sizes: w.communities.iter().map(Vec::len).collect(),
                    communities: &w.communities,
                })
                .collect(),
            matches: t
                .matches
                .iter()
                .map(|ms| {
                    ms.iter()
                        .map(|m| community::CommunityMatch {
                            overlap: crate::format::round6(m.overlap),
                            ..m.clone()
                        })
                        .collect()
                })
                .collect(),
        }
    }

    fn summary(&self) -> Vec<serde_json::Value> {
        self.windows
            .iter()
            .map(|w| {
                serde_json::json!({
                    "start": w.start,
                    "end": w.end,
                    "titles": w.titles,
                    "status": w.status,
                    "communities": w.sizes.len(),
                    "q": w.q,
                })
            })
            .collect()
    }
}
