#![allow(dead_code, clippy::needless_range_loop)]

use std::path::Path;

use castnet::CoGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const INDUSTRIES: [(&str, &str); 5] = [
    ("United States", "Hollywood"),
    ("India", "Bollywood"),
    ("United Kingdom", "British"),
    ("Japan", "Anime"),
    ("Spain", "Spanish"),
];

/// Writes a seeded Netflix-schema catalog with clustered casts: each title
/// draws most of its cast from one industry pool and a few crossovers.
pub fn write_catalog(path: &Path, titles: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = 40;
    let mut w = csv::Writer::from_path(path).unwrap();
    w.write_record([
        "show_id",
        "type",
        "title",
        "director",
        "cast",
        "country",
        "date_added",
        "release_year",
        "rating",
        "duration",
        "listed_in",
        "description",
    ])
    .unwrap();
    for i in 0..titles {
        let home = rng.gen_range(0..INDUSTRIES.len());
        let (country, tag) = INDUSTRIES[home];
        let size = rng.gen_range(0..9);
        let mut cast: Vec<String> = Vec::new();
        for _ in 0..size {
            let ind = if rng.gen_bool(0.08) {
                rng.gen_range(0..INDUSTRIES.len())
            } else {
                home
            };
            // skewed toward low ids so some actors are prolific
            let a = (rng.gen_range(0.0f64..1.0).powi(2) * pool as f64) as usize;
            let name = format!("{} Actor {a:02}", INDUSTRIES[ind].1);
            if !cast.contains(&name) {
                cast.push(name);
            }
        }
        let tv = rng.gen_bool(0.3);
        let year = 1995 + rng.gen_range(0..27);
        let director = if rng.gen_bool(0.8) {
            format!("{tag} Director {}", rng.gen_range(0..12))
        } else {
            String::new()
        };
        w.write_record([
            format!("s{}", i + 1),
            (if tv { "TV Show" } else { "Movie" }).to_string(),
            format!("{tag} Title {i}"),
            director,
            cast.join(", "),
            country.to_string(),
            "September 25, 2021".to_string(),
            year.to_string(),
            (if tv { "TV-MA" } else { "PG-13" }).to_string(),
            (if tv { "2 Seasons" } else { "95 min" }).to_string(),
            "Dramas".to_string(),
            "A story.".to_string(),
        ])
        .unwrap();
    }
    w.flush().unwrap();
}

/// Random simple graph on `n` nodes. Density ranges from sparse forests to
/// near-complete; `connected` first lays down a random spanning tree.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64, connected: bool) -> (CoGraph, Vec<Vec<bool>>) {
    let mut adj = vec![vec![false; n]; n];
    if connected {
        for v in 1..n {
            let u = rng.gen_range(0..v);
            adj[u][v] = true;
            adj[v][u] = true;
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                adj[u][v] = true;
                adj[v][u] = true;
            }
        }
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if adj[u][v] {
                edges.push((u, v));
            }
        }
    }
    (CoGraph::from_unweighted(n, &edges).unwrap(), adj)
}

pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> CoGraph {
    CoGraph::from_unweighted(n, edges).unwrap()
}
