//! Sliding-window community tracking over release years.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{louvain, CommunityError, Partition};
use crate::graph::{build_bipartite, project, BuildFilters, GraphError};
use crate::ingest::TitleRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowStatus {
    Ok,
    /// No titles were released in the window.
    Empty,
    /// Titles exist but no two actors share one.
    NoEdges,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionWindow {
    /// Inclusive year range.
    pub start: i32,
    pub end: i32,
    pub titles: usize,
    pub status: WindowStatus,
    /// Member keys per community, sorted.
    pub communities: Vec<Vec<String>>,
    /// Smallest member display name per community.
    pub labels: Vec<String>,
    pub partition: Option<Partition>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityMatch {
    pub old: u32,
    pub new: u32,
    /// Jaccard overlap of the two member sets.
    pub overlap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionTimeline {
    pub windows: Vec<EvolutionWindow>,
    /// `matches[i]` links window `i` to window `i + 1`.
    pub matches: Vec<Vec<CommunityMatch>>,
}

fn run_window(
    records: &[TitleRecord],
    start: i32,
    end: i32,
    base: &BuildFilters,
    names: Option<&HashMap<String, String>>,
    seed: u64,
) -> Result<EvolutionWindow, CommunityError> {
    let filters = BuildFilters {
        year_range: Some((start, end)),
        ..base.clone()
    };
    let mut window = EvolutionWindow {
        start,
        end,
        titles: 0,
        status: WindowStatus::Empty,
        communities: Vec::new(),
        labels: Vec::new(),
        partition: None,
    };
    let store = match build_bipartite(records, &filters, names) {
        Ok(s) => s,
        Err(GraphError::EmptyInput) => return Ok(window),
        Err(e) => return Err(e.into()),
    };
    window.titles = store.titles.len();
    let g = project(&store, false);
    if g.edge_count() == 0 {
        window.status = WindowStatus::NoEdges;
        return Ok(window);
    }
    let partition = louvain(&g, seed, 1.0)?;
    for members in partition.members() {
        let mut keys: Vec<String> = members.iter().map(|&u| g.key(u).to_string()).collect();
        keys.sort();
        window.labels.push(
            members
                .iter()
                .map(|&u| g.label(u))
                .min()
                .unwrap_or_default()
                .to_string(),
        );
        window.communities.push(keys);
    }
    window.status = WindowStatus::Ok;
    window.partition = Some(partition);
    Ok(window)
}

fn jaccard(a: &BTreeSet<&str>, b: &BTreeSet<&str>) -> f64 {
    let inter = a.intersection(b).count();
    let union = a.len() + b.len() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

/// Best-overlap match for every community of `old`; ties go to the
/// lexicographically smaller community label.
fn match_windows(old: &EvolutionWindow, new: &EvolutionWindow) -> Vec<CommunityMatch> {
    let new_sets: Vec<BTreeSet<&str>> = new
        .communities
        .iter()
        .map(|c| c.iter().map(String::as_str).collect())
        .collect();
    old.communities
        .iter()
        .enumerate()
        .filter_map(|(i, members)| {
            let set: BTreeSet<&str> = members.iter().map(String::as_str).collect();
            new_sets
                .iter()
                .enumerate()
                .map(|(j, s)| (j, jaccard(&set, s)))
                .max_by(|x, y| {
                    x.1.total_cmp(&y.1)
                        .then_with(|| new.labels[y.0].cmp(&new.labels[x.0]))
                        .then(y.0.cmp(&x.0))
                })
                .map(|(j, overlap)| CommunityMatch {
                    old: i as u32,
                    new: j as u32,
                    overlap,
                })
        })
        .collect()
}

/// Runs Louvain per release-year window `[start, start + window_years − 1]`,
/// advancing by `step_years` from the earliest known year, and matches
/// communities between consecutive windows.
pub fn community_evolution(
    records: &[TitleRecord],
    window_years: i32,
    step_years: i32,
    seed: u64,
    filters: &BuildFilters,
    names: Option<&HashMap<String, String>>,
) -> Result<EvolutionTimeline, CommunityError> {
    if step_years < 1 || window_years < step_years {
        return Err(CommunityError::InvalidWindow {
            window: window_years,
            step: step_years,
        });
    }
    let years = records.iter().filter_map(|r| r.release_year);
    let (Some(first), Some(last)) = (years.clone().min(), years.max()) else {
        return Err(CommunityError::NoYears);
    };
    let mut windows = Vec::new();
    let mut start = first;
    loop {
        windows.push(run_window(records, start, start + window_years - 1, filters, names, seed)?);
        if start + window_years > last {
            break;
        }
        start += step_years;
    }
    let matches = windows.windows(2).map(|w| match_windows(&w[0], &w[1])).collect();
    Ok(EvolutionTimeline { windows, matches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::TitleKind;

    fn rec(id: &str, year: i32, cast: &[&str]) -> TitleRecord {
        TitleRecord {
            title_id: id.into(),
            title: id.into(),
            kind: TitleKind::Movie,
            release_year: Some(year),
            directors: vec![],
            cast: cast.iter().map(|s| s.to_string()).collect(),
            country: None,
            language_hint: None,
            rating: None,
            date_added: None,
            genres: vec![],
            duration: None,
        }
    }

    fn evolve(records: &[TitleRecord]) -> EvolutionTimeline {
        community_evolution(records, 1, 1, 42, &BuildFilters::default(), None).unwrap()
    }

    #[test]
    fn identical_casts_overlap_fully() {
        let t = evolve(&[
            rec("a", 2000, &["A", "B", "C"]),
            rec("b", 2000, &["X", "Y"]),
            rec("c", 2001, &["A", "B", "C"]),
            rec("d", 2001, &["X", "Y"]),
        ]);
        assert_eq!(t.windows.len(), 2);
        assert_eq!(t.matches[0].len(), 2);
        assert!(t.matches[0].iter().all(|m| m.overlap == 1.0));
    }

    #[test]
    fn disjoint_casts_overlap_zero() {
        let t = evolve(&[rec("a", 2000, &["A", "B"]), rec("b", 2001, &["C", "D"])]);
        assert_eq!(t.matches[0].len(), 1);
        assert_eq!(t.matches[0][0].overlap, 0.0);
    }

    #[test]
    fn split_community_half_overlap() {
        let t = evolve(&[
            rec("a", 2000, &["A", "B", "C", "D"]),
            rec("b", 2001, &["A", "B"]),
            rec("c", 2001, &["C", "D"]),
        ]);
        assert_eq!(t.windows[0].communities.len(), 1);
        assert_eq!(t.windows[1].communities.len(), 2);
        let m = &t.matches[0][0];
        assert_eq!(m.overlap, 0.5);
        // tie between {A,B} and {C,D} resolves to label "A"
        assert_eq!(t.windows[1].labels[m.new as usize], "A");
    }

    #[test]
    fn empty_windows_are_recorded() {
        let t = community_evolution(
            &[rec("a", 2000, &["A", "B"]), rec("b", 2004, &["A", "B"]), rec("c", 2002, &["Solo"])],
            2,
            2,
            1,
            &BuildFilters::default(),
            None,
        )
        .unwrap();
        let statuses: Vec<_> = t.windows.iter().map(|w| (w.start, w.status)).collect();
        assert_eq!(
            statuses,
            vec![(2000, WindowStatus::Ok), (2002, WindowStatus::NoEdges), (2004, WindowStatus::Ok)]
        );
        assert!(t.matches[0].is_empty());
    }

    #[test]
    fn rejects_bad_windows() {
        let recs = [rec("a", 2000, &["A", "B"])];
        let f = BuildFilters::default();
        assert!(matches!(
            community_evolution(&recs, 1, 2, 1, &f, None),
            Err(CommunityError::InvalidWindow { .. })
        ));
        assert!(matches!(
            community_evolution(&recs, 1, 0, 1, &f, None),
            Err(CommunityError::InvalidWindow { .. })
        ));
        let mut undated = rec("x", 2000, &["A"]);
        undated.release_year = None;
        assert!(matches!(
            community_evolution(&[undated], 1, 1, 1, &f, None),
            Err(CommunityError::NoYears)
        ));
    }
}
