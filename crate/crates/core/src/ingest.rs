//! Catalog ingestion: the Kaggle Netflix CSV and the IMDb non-commercial TSV dumps.
//!
//! Parsers are tolerant. A malformed row is skipped and recorded in the
//! [`IngestReport`]; only structural problems with the header are fatal.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use chrono::NaiveDate;
use flate2::read::MultiGzDecoder;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MIN_YEAR: i32 = 1870;
pub const MAX_YEAR: i32 = 2100;

const IMDB_NULL: &str = "\\N";

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("missing required column `{0}`")]
    MissingColumn(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("malformed record on line {line}: {source}")]
    Json {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TitleKind {
    Movie,
    TvShow,
}

impl TitleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TitleKind::Movie => "Movie",
            TitleKind::TvShow => "TV Show",
        }
    }
}

/// One catalog entry, normalized across sources.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TitleRecord {
    pub title_id: String,
    pub title: String,
    pub kind: TitleKind,
    pub release_year: Option<i32>,
    pub directors: Vec<String>,
    pub cast: Vec<String>,
    pub country: Option<String>,
    pub language_hint: Option<String>,
    pub rating: Option<String>,
    pub date_added: Option<NaiveDate>,
    #[serde(default)]
    pub genres: Vec<String>,
    #[serde(default)]
    pub duration: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PersonRole {
    Actor,
    Director,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersonRecord {
    pub person_id: String,
    pub name: String,
    pub roles: BTreeSet<PersonRole>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SkipReason {
    /// Field count disagrees with the header, or the row could not be split.
    RowArity,
    DuplicateId,
    /// A principals row points at a title or person that does not exist.
    DanglingReference,
    MissingField,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedRow {
    pub file: String,
    /// 1-based data row number (the header is row 0).
    pub row: u64,
    pub reason: SkipReason,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub data_rows: u64,
    pub records: u64,
    /// Rows that were valid but excluded by a filter (title kind, irrelevant
    /// principals category, or a person never referenced).
    /// `records + filtered + skipped == data_rows` always holds.
    pub filtered: u64,
    pub skipped: Vec<SkippedRow>,
}

impl IngestReport {
    pub fn skipped_count(&self) -> u64 {
        self.skipped.len() as u64
    }

    fn skip(&mut self, file: &str, row: u64, reason: SkipReason) {
        self.skipped.push(SkippedRow {
            file: file.to_string(),
            row,
            reason,
        });
    }
}

/// Trims and collapses internal whitespace runs to a single space. Case is preserved.
pub fn normalize_name(raw: &str) -> String {
    raw.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Splits a comma-separated multi-value cell into normalized, non-empty,
/// first-occurrence-deduplicated entries.
pub fn split_names(cell: &str) -> Vec<String> {
    let mut seen = HashSet::new();
    cell.split(',')
        .map(normalize_name)
        .filter(|s| !s.is_empty())
        .filter(|s| seen.insert(s.clone()))
        .collect()
}

fn parse_year(cell: &str) -> Option<i32> {
    cell.trim()
        .parse::<i32>()
        .ok()
        .filter(|y| (MIN_YEAR..=MAX_YEAR).contains(y))
}

fn non_empty(cell: &str) -> Option<String> {
    let s = normalize_name(cell);
    (!s.is_empty()).then_some(s)
}

fn parse_date_added(cell: &str) -> Option<NaiveDate> {
    let s = normalize_name(cell);
    if s.is_empty() {
        return None;
    }
    NaiveDate::parse_from_str(&s, "%B %d, %Y")
        .or_else(|_| NaiveDate::parse_from_str(&s, "%Y-%m-%d"))
        .ok()
}

/// Opens a file for reading, transparently decompressing gzip (detected by magic bytes).
pub fn open_input(path: &Path) -> Result<Box<dyn BufRead>, IngestError> {
    let mut reader = BufReader::with_capacity(1 << 16, File::open(path)?);
    let is_gzip = reader.fill_buf()?.starts_with(&[0x1f, 0x8b]);
    if is_gzip {
        Ok(Box::new(BufReader::with_capacity(
            1 << 16,
            MultiGzDecoder::new(reader),
        )))
    } else {
        Ok(Box::new(reader))
    }
}

struct Columns(HashMap<String, usize>);

impl Columns {
    fn from_header(header: &csv::StringRecord) -> Self {
        Columns(
            header
                .iter()
                .enumerate()
                .map(|(i, h)| (h.trim().trim_start_matches('\u{feff}').to_string(), i))
                .collect(),
        )
    }

    fn require(&self, name: &str) -> Result<usize, IngestError> {
        self.0
            .get(name)
            .copied()
            .ok_or_else(|| IngestError::MissingColumn(name.to_string()))
    }

    fn optional(&self, name: &str) -> Option<usize> {
        self.0.get(name).copied()
    }
}

fn cell(record: &csv::StringRecord, idx: Option<usize>) -> &str {
    idx.and_then(|i| record.get(i)).unwrap_or("")
}

/// Parses the Kaggle `netflix_titles.csv` schema.
pub fn parse_netflix<R: Read>(stream: R) -> Result<(Vec<TitleRecord>, IngestReport), IngestError> {
    const FILE: &str = "netflix_titles.csv";
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(stream);
    let header = rdr.headers()?.clone();
    let cols = Columns::from_header(&header);
    let show_id = cols.require("show_id")?;
    let kind_col = cols.require("type")?;
    let title_col = cols.require("title")?;
    let director_col = cols.require("director")?;
    let cast_col = cols.require("cast")?;
    let year_col = cols.require("release_year")?;
    let country_col = cols.optional("country");
    let rating_col = cols.optional("rating");
    let added_col = cols.optional("date_added");
    let listed_col = cols.optional("listed_in");
    let duration_col = cols.optional("duration");

    let mut report = IngestReport::default();
    let mut records = Vec::new();
    let mut seen_ids = HashSet::new();
    let mut raw = csv::StringRecord::new();
    loop {
        let row = report.data_rows + 1;
        match rdr.read_record(&mut raw) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) if e.is_io_error() => return Err(e.into()),
            Err(_) => {
                report.data_rows += 1;
                report.skip(FILE, row, SkipReason::RowArity);
                continue;
            }
        }
        report.data_rows += 1;
        if raw.len() != header.len() {
            report.skip(FILE, row, SkipReason::RowArity);
            continue;
        }
        let title_id = normalize_name(&raw[show_id]);
        let kind = match normalize_name(&raw[kind_col]).as_str() {
            "Movie" => TitleKind::Movie,
            "TV Show" => TitleKind::TvShow,
            _ => {
                report.skip(FILE, row, SkipReason::MissingField);
                continue;
            }
        };
        if title_id.is_empty() {
            report.skip(FILE, row, SkipReason::MissingField);
            continue;
        }
        if !seen_ids.insert(title_id.clone()) {
            report.skip(FILE, row, SkipReason::DuplicateId);
            continue;
        }
        let country = non_empty(cell(&raw, country_col))
            .and_then(|c| split_names(&c).into_iter().next());
        records.push(TitleRecord {
            title_id,
            title: normalize_name(&raw[title_col]),
            kind,
            release_year: parse_year(&raw[year_col]),
            directors: split_names(&raw[director_col]),
            cast: split_names(&raw[cast_col]),
            country,
            language_hint: None,
            rating: non_empty(cell(&raw, rating_col)),
            date_added: parse_date_added(cell(&raw, added_col)),
            genres: split_names(cell(&raw, listed_col)),
            duration: non_empty(cell(&raw, duration_col)),
        });
    }
    report.records = records.len() as u64;
    Ok((records, report))
}

/// Which IMDb `titleType` values are admitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TitleKindFilter {
    #[default]
    All,
    Movies,
    TvShows,
}

impl TitleKindFilter {
    fn classify(self, title_type: &str) -> Option<TitleKind> {
        let kind = match title_type {
            "movie" | "tvMovie" => TitleKind::Movie,
            "tvSeries" | "tvMiniSeries" => TitleKind::TvShow,
            _ => return None,
        };
        match (self, kind) {
            (TitleKindFilter::All, k) => Some(k),
            (TitleKindFilter::Movies, TitleKind::Movie) => Some(kind),
            (TitleKindFilter::TvShows, TitleKind::TvShow) => Some(kind),
            _ => None,
        }
    }
}

fn tsv_reader<R: Read>(stream: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .quoting(false)
        .has_headers(true)
        .flexible(true)
        .from_reader(stream)
}

fn imdb_field(cell: &str) -> Option<&str> {
    let c = cell.trim();
    (!c.is_empty() && c != IMDB_NULL).then_some(c)
}

struct PendingCredit {
    tconst_idx: usize,
    ordering: u32,
    nconst: String,
    role: PersonRole,
    row: u64,
}

/// Output of [`parse_imdb`]. Cast and director entries hold `nconst` ids;
/// `persons` resolves them to display names.
#[derive(Debug, Clone, Default)]
pub struct ImdbCatalog {
    pub titles: Vec<TitleRecord>,
    pub persons: Vec<PersonRecord>,
    pub report: IngestReport,
}

/// Joins `title.basics`, `title.principals` and `name.basics`.
pub fn parse_imdb<B: Read, P: Read, N: Read>(
    basics: B,
    principals: P,
    names: N,
    filter: TitleKindFilter,
) -> Result<ImdbCatalog, IngestError> {
    let mut report = IngestReport::default();

    // title.basics
    let mut rdr = tsv_reader(basics);
    let header = rdr.headers()?.clone();
    let cols = Columns::from_header(&header);
    let tconst_col = cols.require("tconst")?;
    let type_col = cols.require("titleType")?;
    let ptitle_col = cols.require("primaryTitle")?;
    let year_col = cols.require("startYear")?;
    let genres_col = cols.optional("genres");
    let runtime_col = cols.optional("runtimeMinutes");

    let mut titles: Vec<TitleRecord> = Vec::new();
    let mut title_index: HashMap<String, usize> = HashMap::new();
    let mut excluded: HashSet<String> = HashSet::new();
    let mut raw = csv::StringRecord::new();
    let mut row = 0u64;
    loop {
        row += 1;
        match rdr.read_record(&mut raw) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) if e.is_io_error() => return Err(e.into()),
            Err(_) => {
                report.data_rows += 1;
                report.skip("title.basics", row, SkipReason::RowArity);
                continue;
            }
        }
        report.data_rows += 1;
        if raw.len() != header.len() {
            report.skip("title.basics", row, SkipReason::RowArity);
            continue;
        }
        let Some(tconst) = imdb_field(&raw[tconst_col]) else {
            report.skip("title.basics", row, SkipReason::MissingField);
            continue;
        };
        if title_index.contains_key(tconst) || excluded.contains(tconst) {
            report.skip("title.basics", row, SkipReason::DuplicateId);
            continue;
        }
        let Some(kind) = filter.classify(raw[type_col].trim()) else {
            report.filtered += 1;
            excluded.insert(tconst.to_string());
            continue;
        };
        let genres = imdb_field(cell(&raw, genres_col))
            .map(split_names)
            .unwrap_or_default();
        title_index.insert(tconst.to_string(), titles.len());
        titles.push(TitleRecord {
            title_id: tconst.to_string(),
            title: normalize_name(imdb_field(&raw[ptitle_col]).unwrap_or("")),
            kind,
            release_year: imdb_field(&raw[year_col]).and_then(parse_year),
            directors: Vec::new(),
            cast: Vec::new(),
            country: None,
            language_hint: genres.first().cloned(),
            rating: None,
            date_added: None,
            genres,
            duration: imdb_field(cell(&raw, runtime_col)).map(|m| format!("{m} min")),
        });
    }

    // title.principals
    let mut rdr = tsv_reader(principals);
    let header = rdr.headers()?.clone();
    let cols = Columns::from_header(&header);
    let p_tconst = cols.require("tconst")?;
    let p_ordering = cols.require("ordering")?;
    let p_nconst = cols.require("nconst")?;
    let p_category = cols.require("category")?;
    let mut pending: Vec<PendingCredit> = Vec::new();
    let mut wanted: HashSet<String> = HashSet::new();
    row = 0;
    loop {
        row += 1;
        match rdr.read_record(&mut raw) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) if e.is_io_error() => return Err(e.into()),
            Err(_) => {
                report.data_rows += 1;
                report.skip("title.principals", row, SkipReason::RowArity);
                continue;
            }
        }
        report.data_rows += 1;
        if raw.len() != header.len() {
            report.skip("title.principals", row, SkipReason::RowArity);
            continue;
        }
        let role = match raw[p_category].trim() {
            "actor" | "actress" => PersonRole::Actor,
            "director" => PersonRole::Director,
            _ => {
                report.filtered += 1;
                continue;
            }
        };
        let (Some(tconst), Some(nconst)) = (imdb_field(&raw[p_tconst]), imdb_field(&raw[p_nconst]))
        else {
            report.skip("title.principals", row, SkipReason::MissingField);
            continue;
        };
        let Some(&tconst_idx) = title_index.get(tconst) else {
            if excluded.contains(tconst) {
                report.filtered += 1;
            } else {
                report.skip("title.principals", row, SkipReason::DanglingReference);
            }
            continue;
        };
        let ordering = raw[p_ordering].trim().parse::<u32>().unwrap_or(u32::MAX);
        wanted.insert(nconst.to_string());
        pending.push(PendingCredit {
            tconst_idx,
            ordering,
            nconst: nconst.to_string(),
            role,
            row,
        });
    }

    // name.basics, restricted to people referenced above
    let mut rdr = tsv_reader(names);
    let header = rdr.headers()?.clone();
    let cols = Columns::from_header(&header);
    let n_nconst = cols.require("nconst")?;
    let n_name = cols.require("primaryName")?;
    let mut person_names: HashMap<String, String> = HashMap::new();
    row = 0;
    loop {
        row += 1;
        match rdr.read_record(&mut raw) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) if e.is_io_error() => return Err(e.into()),
            Err(_) => {
                report.data_rows += 1;
                report.skip("name.basics", row, SkipReason::RowArity);
                continue;
            }
        }
        report.data_rows += 1;
        if raw.len() != header.len() {
            report.skip("name.basics", row, SkipReason::RowArity);
            continue;
        }
        let Some(nconst) = imdb_field(&raw[n_nconst]) else {
            report.skip("name.basics", row, SkipReason::MissingField);
            continue;
        };
        if !wanted.contains(nconst) {
            report.filtered += 1;
            continue;
        }
        let name = normalize_name(imdb_field(&raw[n_name]).unwrap_or(""));
        if name.is_empty() {
            report.skip("name.basics", row, SkipReason::MissingField);
            continue;
        }
        if person_names.contains_key(nconst) {
            report.skip("name.basics", row, SkipReason::DuplicateId);
            continue;
        }
        person_names.insert(nconst.to_string(), name);
        report.records += 1;
    }

    // join; stable sort keeps file order among equal `ordering` values
    pending.sort_by_key(|c| (c.tconst_idx, c.ordering));
    let mut roles: HashMap<String, BTreeSet<PersonRole>> = HashMap::new();
    let mut person_order: Vec<String> = Vec::new();
    for credit in pending {
        if !person_names.contains_key(&credit.nconst) {
            report.skip("title.principals", credit.row, SkipReason::DanglingReference);
            continue;
        }
        let title = &mut titles[credit.tconst_idx];
        let list = match credit.role {
            PersonRole::Actor => &mut title.cast,
            PersonRole::Director => &mut title.directors,
        };
        if !list.contains(&credit.nconst) {
            list.push(credit.nconst.clone());
        }
        report.records += 1;
        roles
            .entry(credit.nconst.clone())
            .or_insert_with(|| {
                person_order.push(credit.nconst.clone());
                BTreeSet::new()
            })
            .insert(credit.role);
    }
    report.skipped.sort_by(|a, b| (a.file.as_str(), a.row).cmp(&(b.file.as_str(), b.row)));

    let persons = person_order
        .into_iter()
        .map(|id| PersonRecord {
            name: person_names[&id].clone(),
            roles: roles.remove(&id).unwrap_or_default(),
            person_id: id,
        })
        .collect();
    report.records += titles.len() as u64;
    Ok(ImdbCatalog {
        titles,
        persons,
        report,
    })
}

/// Writes one JSON object per line.
pub fn write_jsonl<T: Serialize, W: Write>(items: &[T], out: W) -> Result<(), IngestError> {
    let mut out = BufWriter::new(out);
    for item in items {
        serde_json::to_writer(&mut out, item).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_jsonl<T: for<'de> Deserialize<'de>, R: BufRead>(input: R) -> Result<Vec<T>, IngestError> {
    let mut items = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        items.push(
            serde_json::from_str(&line).map_err(|source| IngestError::Json { line: i + 1, source })?,
        );
    }
    Ok(items)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str =
        "show_id,type,title,director,cast,country,date_added,release_year,rating,duration,listed_in,description\n";

    fn netflix(rows: &str) -> (Vec<TitleRecord>, IngestReport) {
        parse_netflix(format!("{HEADER}{rows}").as_bytes()).unwrap()
    }

    #[test]
    fn normalizes_names() {
        assert_eq!(normalize_name("  Anupam  Kher "), "Anupam Kher");
        assert_eq!(normalize_name(""), "");
        assert_eq!(normalize_name("Om\tPuri"), "Om Puri");
        assert_eq!(normalize_name("om puri"), "om puri");
    }

    #[test]
    fn cast_is_split_and_trimmed() {
        let (recs, report) = netflix(
            "s1,Movie,Film,Dir X,\"A, B\",\"India, United States\",\"September 25, 2021\",2020,PG,90 min,\"Dramas, Comedies\",desc\n",
        );
        assert_eq!(report.skipped_count(), 0);
        let r = &recs[0];
        assert_eq!(r.cast, vec!["A", "B"]);
        assert_eq!(r.directors, vec!["Dir X"]);
        assert_eq!(r.country.as_deref(), Some("India"));
        assert_eq!(r.kind, TitleKind::Movie);
        assert_eq!(r.release_year, Some(2020));
        assert_eq!(r.date_added, NaiveDate::from_ymd_opt(2021, 9, 25));
        assert_eq!(r.genres, vec!["Dramas", "Comedies"]);
    }

    #[test]
    fn empty_cast_is_retained() {
        let (recs, _) = netflix("s1,TV Show,Show,,,,,2019,,,,\n");
        assert_eq!(recs.len(), 1);
        assert!(recs[0].cast.is_empty());
        assert!(recs[0].directors.is_empty());
        assert_eq!(recs[0].country, None);
        assert_eq!(recs[0].kind, TitleKind::TvShow);
    }

    #[test]
    fn duplicate_cast_entries_collapse() {
        let (recs, _) = netflix("s1,Movie,F,,\"A, A ,B,,\",,,2000,,,,\n");
        assert_eq!(recs[0].cast, vec!["A", "B"]);
    }

    #[test]
    fn missing_column_is_fatal() {
        let err = parse_netflix("show_id,type,title,director,release_year\n".as_bytes()).unwrap_err();
        assert!(matches!(err, IngestError::MissingColumn(c) if c == "cast"));
    }

    #[test]
    fn bad_rows_are_counted() {
        let (recs, report) = netflix(
            "s1,Movie,F,,A,,,2000,,,,\ns2,Movie,too,few\ns1,Movie,dup,,B,,,2001,,,,\ns3,Movie,G,,C,,,1700,,,,\n",
        );
        assert_eq!(recs.len(), 2);
        assert_eq!(report.data_rows, 4);
        assert_eq!(report.records + report.skipped_count(), report.data_rows);
        assert_eq!(report.skipped[0].row, 2);
        assert_eq!(report.skipped[0].reason, SkipReason::RowArity);
        assert_eq!(report.skipped[1].reason, SkipReason::DuplicateId);
        // out-of-range years become unknown rather than dropping the title
        assert_eq!(recs[1].release_year, None);
    }

    const BASICS: &str = "tconst\ttitleType\tprimaryTitle\toriginalTitle\tisAdult\tstartYear\tendYear\truntimeMinutes\tgenres\n\
tt1\tmovie\tDesk Film\tDesk Film\t0\t1989\t\\N\t128\tComedy,Drama\n\
tt2\ttvEpisode\tEp\tEp\t0\t\\N\t\\N\t\\N\t\\N\n";
    const PRINCIPALS: &str = "tconst\tordering\tnconst\tcategory\tjob\tcharacters\n\
tt1\t3\tnm2\tactress\t\\N\t\\N\n\
tt1\t1\tnm1\tactor\t\\N\t\\N\n\
tt1\t5\tnm3\tdirector\t\\N\t\\N\n\
tt1\t6\tnm4\twriter\t\\N\t\\N\n";
    const NAMES: &str = "nconst\tprimaryName\tbirthYear\tdeathYear\tprimaryProfession\tknownForTitles\n\
nm1\tRobin Williams\t1951\t2014\tactor\ttt1\n\
nm2\tEthan  Hawke\t1970\t\\N\tactor\ttt1\n\
nm3\tPeter Weir\t1944\t\\N\tdirector\ttt1\n";

    #[test]
    fn imdb_desk_fixture_joins() {
        let cat = parse_imdb(
            BASICS.as_bytes(),
            PRINCIPALS.as_bytes(),
            NAMES.as_bytes(),
            TitleKindFilter::All,
        )
        .unwrap();
        assert_eq!(cat.titles.len(), 1);
        let t = &cat.titles[0];
        assert_eq!(t.cast, vec!["nm1", "nm2"]);
        assert_eq!(t.directors, vec!["nm3"]);
        assert_eq!(t.release_year, Some(1989));
        assert_eq!(cat.persons.len(), 3);
        assert_eq!(cat.persons[1].name, "Ethan Hawke");
        assert!(cat.report.skipped.is_empty());
    }

    #[test]
    fn imdb_null_year_and_dangling() {
        let basics = "tconst\ttitleType\tprimaryTitle\tstartYear\n\
tt9\tmovie\tNo Year\t\\N\n";
        let principals = "tconst\tordering\tnconst\tcategory\n\
tt9\t1\tnm1\tactor\n\
tt9\t2\tnm404\tactress\n\
tt404\t1\tnm1\tactor\n";
        let names = "nconst\tprimaryName\nnm1\tSomeone\n";
        let cat = parse_imdb(
            basics.as_bytes(),
            principals.as_bytes(),
            names.as_bytes(),
            TitleKindFilter::Movies,
        )
        .unwrap();
        assert_eq!(cat.titles[0].release_year, None);
        assert_eq!(cat.titles[0].cast, vec!["nm1"]);
        let dangling: Vec<_> = cat
            .report
            .skipped
            .iter()
            .filter(|s| s.reason == SkipReason::DanglingReference)
            .map(|s| s.row)
            .collect();
        assert_eq!(dangling, vec![2, 3]);
    }

    #[test]
    fn imdb_filter_excludes_tv() {
        let basics = "tconst\ttitleType\tprimaryTitle\tstartYear\n\
tt1\tmovie\tA\t2000\ntt2\ttvSeries\tB\t2001\n";
        let empty_p = "tconst\tordering\tnconst\tcategory\n";
        let empty_n = "nconst\tprimaryName\n";
        let cat = parse_imdb(basics.as_bytes(), empty_p.as_bytes(), empty_n.as_bytes(), TitleKindFilter::TvShows)
            .unwrap();
        assert_eq!(cat.titles.len(), 1);
        assert_eq!(cat.titles[0].kind, TitleKind::TvShow);
    }

    #[test]
    fn gzip_input_is_detected() {
        use flate2::{write::GzEncoder, Compression};
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("n.csv.gz");
        let mut enc = GzEncoder::new(File::create(&path).unwrap(), Compression::default());
        enc.write_all(format!("{HEADER}s1,Movie,F,,A,,,2000,,,,\n").as_bytes())
            .unwrap();
        enc.finish().unwrap();
        let (recs, _) = parse_netflix(open_input(&path).unwrap()).unwrap();
        assert_eq!(recs.len(), 1);
    }

    #[test]
    fn jsonl_round_trip() {
        let (recs, _) = netflix(
            "s1,Movie,F,D,\"A, B\",Japan,\"January 1, 2020\",2000,TV-MA,1 Season,Anime,x\ns2,TV Show,G,,,,,,,,,\n",
        );
        let mut buf = Vec::new();
        write_jsonl(&recs, &mut buf).unwrap();
        let back: Vec<TitleRecord> = read_jsonl(buf.as_slice()).unwrap();
        assert_eq!(back, recs);
    }
}
