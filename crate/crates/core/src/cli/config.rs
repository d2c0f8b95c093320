//! `RunConfig` and its `key = value` file format.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::community::DEFAULT_SEED;
use crate::ingest::TitleKind;

pub const DATA_DIR_ENV: &str = "CASTNET_DATA_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Netflix,
    Imdb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Dot,
    Graphml,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
pub enum KindArg {
    Movie,
    Tv,
}

impl From<KindArg> for TitleKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Movie => TitleKind::Movie,
            KindArg::Tv => TitleKind::TvShow,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub source: Source,
    pub netflix: Option<PathBuf>,
    pub imdb_basics: Option<PathBuf>,
    pub imdb_principals: Option<PathBuf>,
    pub imdb_names: Option<PathBuf>,
    pub kind: Option<KindArg>,
    pub year_from: Option<i32>,
    pub year_to: Option<i32>,
    pub min_cast: Option<usize>,
    pub max_cast: Option<usize>,
    pub seed: u64,
    pub out: PathBuf,
    pub format: Option<Format>,
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            source: Source::Netflix,
            netflix: None,
            imdb_basics: None,
            imdb_principals: None,
            imdb_names: None,
            kind: None,
            year_from: None,
            year_to: None,
            min_cast: None,
            max_cast: None,
            seed: DEFAULT_SEED,
            out: PathBuf::from("castnet-out"),
            format: None,
            threads: 0,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}:{line}: {msg}")]
    Syntax { path: String, line: usize, msg: String },
    #[error("cannot read config {0}: {1}")]
    Io(String, std::io::Error),
}

fn parse_enum<T: clap::ValueEnum>(v: &str) -> Result<T, String> {
    T::from_str(v, true).map_err(|_| format!("invalid value `{v}`"))
}

fn parse_num<T: std::str::FromStr>(v: &str) -> Result<T, String> {
    v.parse().map_err(|_| format!("invalid number `{v}`"))
}

#[allow(clippy::unit_arg)]
impl RunConfig {
    /// Applies `key = value` lines. `#` starts a comment; keys match the field names.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| ConfigError::Io(path.display().to_string(), e))?;
        self.apply_str(&text, &path.display().to_string())
    }

    pub fn apply_str(&mut self, text: &str, origin: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| ConfigError::Syntax {
                path: origin.to_string(),
                line: i + 1,
                msg,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err("expected `key = value`".into()))?;
            let value = value.trim().trim_matches('"');
            let path = || Some(PathBuf::from(value));
            let result: Result<(), String> = match key.trim() {
                "source" => parse_enum(value).map(|v| self.source = v),
                "netflix" => Ok(self.netflix = path()),
                "imdb_basics" => Ok(self.imdb_basics = path()),
                "imdb_principals" => Ok(self.imdb_principals = path()),
                "imdb_names" => Ok(self.imdb_names = path()),
                "kind" => parse_enum(value).map(|v| self.kind = Some(v)),
                "year_from" => parse_num(value).map(|v| self.year_from = Some(v)),
                "year_to" => parse_num(value).map(|v| self.year_to = Some(v)),
                "min_cast" => parse_num(value).map(|v| self.min_cast = Some(v)),
                "max_cast" => parse_num(value).map(|v| self.max_cast = Some(v)),
                "seed" => parse_num(value).map(|v| self.seed = v),
                "out" => Ok(self.out = PathBuf::from(value)),
                "format" => parse_enum(value).map(|v| self.format = Some(v)),
                "threads" => parse_num(value).map(|v| self.threads = v),
                other => Err(format!("unknown key `{other}`")),
            };
            result.map_err(err)?;
        }
        Ok(())
    }

    /// Resolves an input path: relative paths are taken under `$CASTNET_DATA_DIR` when set.
    pub fn resolve(&self, given: Option<&Path>, defaults: &[&str]) -> Option<PathBuf> {
        let root = std::env::var_os(DATA_DIR_ENV).map(PathBuf::from);
        match given {
            Some(p) if p.is_absolute() => Some(p.to_path_buf()),
            Some(p) => match &root {
                Some(r) if !p.exists() => Some(r.join(p)),
                _ => Some(p.to_path_buf()),
            },
            None => {
                let root = root?;
                defaults
                    .iter()
                    .map(|d| root.join(d))
                    .find(|p| p.exists())
                    .or_else(|| defaults.first().map(|d| root.join(d)))
            }
        }
    }
}
