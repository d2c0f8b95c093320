//! Binary graph cache.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! magic      8 bytes  "CASTNET\0"
//! version    u32
//! n          u64      node count
//! slots      u64      adjacency slot count (2 × edges)
//! titles     u64      title name count
//! flags      u32      bit 0: per-slot title lists present
//! keys       n × str
//! labels     n × str
//! country    n × (u8 present, str if present)
//! offsets    (n+1) × u64
//! targets    slots × u32
//! weights    slots × u32
//! title_names titles × str
//! edge titles (if flag) slots × (u32 count, count × u32)
//! ```
//!
//! `str` is a u32 byte length followed by UTF-8 bytes. A different magic or
//! version is rejected, which forces a rebuild.

use std::io::{self, Read, Write};

use super::{CoGraph, GraphError};

pub const CACHE_MAGIC: &[u8; 8] = b"CASTNET\0";
pub const CACHE_VERSION: u32 = 1;

struct Sink<W: Write>(W);

impl<W: Write> Sink<W> {
    fn u32(&mut self, v: u32) -> io::Result<()> {
        self.0.write_all(&v.to_le_bytes())
    }
    fn u64(&mut self, v: u64) -> io::Result<()> {
        self.0.write_all(&v.to_le_bytes())
    }
    fn str(&mut self, s: &str) -> io::Result<()> {
        self.u32(s.len() as u32)?;
        self.0.write_all(s.as_bytes())
    }
}

struct Source<R: Read>(R);

impl<R: Read> Source<R> {
    fn bytes<const N: usize>(&mut self) -> Result<[u8; N], GraphError> {
        let mut b = [0u8; N];
        self.0
            .read_exact(&mut b)
            .map_err(|e| GraphError::Cache(format!("truncated: {e}")))?;
        Ok(b)
    }
    fn u8(&mut self) -> Result<u8, GraphError> {
        Ok(self.bytes::<1>()?[0])
    }
    fn u32(&mut self) -> Result<u32, GraphError> {
        Ok(u32::from_le_bytes(self.bytes()?))
    }
    fn u64(&mut self) -> Result<u64, GraphError> {
        Ok(u64::from_le_bytes(self.bytes()?))
    }
    fn len(&mut self) -> Result<usize, GraphError> {
        usize::try_from(self.u64()?).map_err(|_| GraphError::Cache("length overflow".into()))
    }
    fn str(&mut self) -> Result<String, GraphError> {
        let n = self.u32()? as usize;
        let mut buf = vec![0u8; n];
        self.0
            .read_exact(&mut buf)
            .map_err(|e| GraphError::Cache(format!("truncated: {e}")))?;
        String::from_utf8(buf).map_err(|_| GraphError::Cache("invalid utf-8".into()))
    }
}

pub fn write_cache<W: Write>(g: &CoGraph, out: W) -> Result<(), GraphError> {
    let mut s = Sink(io::BufWriter::new(out));
    s.0.write_all(CACHE_MAGIC)?;
    s.u32(CACHE_VERSION)?;
    s.u64(g.node_count() as u64)?;
    s.u64(g.targets.len() as u64)?;
    s.u64(g.title_names.len() as u64)?;
    s.u32(u32::from(g.edge_titles.is_some()))?;
    for k in &g.keys {
        s.str(k)?;
    }
    for l in &g.labels {
        s.str(l)?;
    }
    for c in &g.node_country {
        match c {
            Some(c) => {
                s.0.write_all(&[1])?;
                s.str(c)?;
            }
            None => s.0.write_all(&[0])?,
        }
    }
    for &o in &g.offsets {
        s.u64(o as u64)?;
    }
    for &t in &g.targets {
        s.u32(t)?;
    }
    for &w in &g.weights {
        s.u32(w)?;
    }
    for t in &g.title_names {
        s.str(t)?;
    }
    if let Some(et) = &g.edge_titles {
        for list in et {
            s.u32(list.len() as u32)?;
            for &t in list {
                s.u32(t)?;
            }
        }
    }
    s.0.flush()?;
    Ok(())
}

pub fn read_cache<R: Read>(input: R) -> Result<CoGraph, GraphError> {
    let mut s = Source(io::BufReader::new(input));
    if &s.bytes::<8>()? != CACHE_MAGIC {
        return Err(GraphError::Cache("not a castnet graph cache".into()));
    }
    let version = s.u32()?;
    if version != CACHE_VERSION {
        return Err(GraphError::Cache(format!(
            "version {version} does not match {CACHE_VERSION}"
        )));
    }
    let n = s.len()?;
    let slots = s.len()?;
    let titles = s.len()?;
    let flags = s.u32()?;
    let keys = (0..n).map(|_| s.str()).collect::<Result<Vec<_>, _>>()?;
    let labels = (0..n).map(|_| s.str()).collect::<Result<Vec<_>, _>>()?;
    let mut country = Vec::with_capacity(n);
    for _ in 0..n {
        country.push(match s.u8()? {
            0 => None,
            _ => Some(s.str()?),
        });
    }
    let offsets = (0..=n)
        .map(|_| s.len())
        .collect::<Result<Vec<_>, _>>()?;
    let targets = (0..slots).map(|_| s.u32()).collect::<Result<Vec<_>, _>>()?;
    let weights = (0..slots).map(|_| s.u32()).collect::<Result<Vec<_>, _>>()?;
    let title_names = (0..titles).map(|_| s.str()).collect::<Result<Vec<_>, _>>()?;
    let edge_titles = if flags & 1 == 1 {
        let mut et = Vec::with_capacity(slots);
        for _ in 0..slots {
            let k = s.u32()? as usize;
            et.push((0..k).map(|_| s.u32()).collect::<Result<Vec<_>, _>>()?);
        }
        Some(et)
    } else {
        None
    };
    if offsets.first() != Some(&0) || offsets.last() != Some(&slots) || offsets.windows(2).any(|w| w[0] > w[1]) {
        return Err(GraphError::Cache("corrupt offsets".into()));
    }
    if targets.iter().any(|&t| t as usize >= n) {
        return Err(GraphError::Cache("corrupt adjacency".into()));
    }
    Ok(CoGraph::assemble(
        keys,
        labels,
        offsets,
        targets,
        weights,
        edge_titles,
        title_names,
        country,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_bipartite, project, BuildFilters};
    use crate::ingest::{TitleKind, TitleRecord};

    fn graph() -> CoGraph {
        let recs: Vec<TitleRecord> = [("t1", &["A", "B", "C"][..], Some("Japan")), ("t2", &["A", "B"][..], None)]
            .iter()
            .map(|(id, cast, country)| TitleRecord {
                title_id: id.to_string(),
                title: format!("Film {id}"),
                kind: TitleKind::Movie,
                release_year: Some(2000),
                directors: vec![],
                cast: cast.iter().map(|s| s.to_string()).collect(),
                country: country.map(String::from),
                language_hint: None,
                rating: None,
                date_added: None,
                genres: vec![],
                duration: None,
            })
            .collect();
        project(&build_bipartite(&recs, &BuildFilters::default(), None).unwrap(), true)
    }

    #[test]
    fn round_trip_preserves_everything() {
        let g = graph();
        let mut buf = Vec::new();
        write_cache(&g, &mut buf).unwrap();
        let back = read_cache(buf.as_slice()).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.country(2), Some("Japan"));
        assert_eq!(back.shared_titles(0, 1), vec!["Film t1", "Film t2"]);
    }

    #[test]
    fn rejects_other_versions() {
        let mut buf = Vec::new();
        write_cache(&graph(), &mut buf).unwrap();
        buf[8] = 99;
        assert!(matches!(read_cache(buf.as_slice()), Err(GraphError::Cache(_))));
        assert!(read_cache(&b"garbage!"[..]).is_err());
        let mut ok = Vec::new();
        write_cache(&graph(), &mut ok).unwrap();
        ok.truncate(ok.len() - 3);
        assert!(read_cache(ok.as_slice()).is_err());
    }
}
