//! Catalog summary statistics: yearly counts, cast sizes, leaderboards.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::ingest::{TitleKind, TitleRecord};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KindCounts {
    pub movies: u64,
    pub tv: u64,
}

impl KindCounts {
    fn add(&mut self, kind: TitleKind) {
        match kind {
            TitleKind::Movie => self.movies += 1,
            TitleKind::TvShow => self.tv += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.movies + self.tv
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogSummary {
    pub total_titles: u64,
    pub per_year: BTreeMap<i32, KindCounts>,
    pub unknown_year: KindCounts,
    /// Cast size → number of titles.
    pub cast_histogram: BTreeMap<usize, u64>,
    pub top_actors: Vec<(String, u64)>,
    pub top_directors: Vec<(String, u64)>,
    pub type_totals: KindCounts,
    pub rating_counts: BTreeMap<String, u64>,
}

/// Count descending, then name ascending.
pub fn leaderboard(counts: HashMap<&str, u64>) -> Vec<(String, u64)> {
    let mut board: Vec<(String, u64)> = counts.into_iter().map(|(n, c)| (n.to_string(), c)).collect();
    board.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    board
}

/// Summarizes a catalog. `names` resolves person keys to display names
/// (IMDb `nconst`); keys without an entry are shown as-is.
pub fn summarize(records: &[TitleRecord], top_k: usize, names: Option<&HashMap<String, String>>) -> CatalogSummary {
    let resolve = |key: &'_ str| -> String {
        names
            .and_then(|m| m.get(key))
            .cloned()
            .unwrap_or_else(|| key.to_string())
    };
    let mut per_year: BTreeMap<i32, KindCounts> = BTreeMap::new();
    let mut unknown_year = KindCounts::default();
    let mut cast_histogram = BTreeMap::new();
    let mut type_totals = KindCounts::default();
    let mut rating_counts = BTreeMap::new();
    let mut actors: HashMap<&str, u64> = HashMap::new();
    let mut directors: HashMap<&str, u64> = HashMap::new();
    for r in records {
        match r.release_year {
            Some(y) => per_year.entry(y).or_default().add(r.kind),
            None => unknown_year.add(r.kind),
        }
        type_totals.add(r.kind);
        *cast_histogram.entry(r.cast.len()).or_insert(0) += 1;
        if let Some(rating) = &r.rating {
            *rating_counts.entry(rating.clone()).or_insert(0) += 1;
        }
        for a in &r.cast {
            *actors.entry(a).or_insert(0) += 1;
        }
        for d in &r.directors {
            *directors.entry(d).or_insert(0) += 1;
        }
    }
    let top = |counts: HashMap<&str, u64>| -> Vec<(String, u64)> {
        // resolve before ranking so ties order by display name
        let mut resolved: HashMap<String, u64> = HashMap::new();
        for (k, c) in counts {
            *resolved.entry(resolve(k)).or_insert(0) += c;
        }
        let mut board = leaderboard(resolved.iter().map(|(k, &c)| (k.as_str(), c)).collect());
        board.truncate(top_k);
        board
    };
    CatalogSummary {
        total_titles: records.len() as u64,
        per_year,
        unknown_year,
        cast_histogram,
        top_actors: top(actors),
        top_directors: top(directors),
        type_totals,
        rating_counts,
    }
}
