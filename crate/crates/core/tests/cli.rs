mod common;

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

use flate2::write::GzEncoder;
use flate2::Compression;

const TWO_TRIANGLES: &str = "show_id,type,title,director,cast,country,date_added,release_year,rating,duration,listed_in,description
s1,Movie,Left,Dee,\"Ann, Bob, Cid\",India,,2001,PG,90 min,Dramas,x
s2,Movie,Right,Dee,\"Xan, Yul, Zoe\",Spain,,2002,PG,90 min,Dramas,x
";

fn castnet(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_castnet"))
        .args(args)
        .current_dir(dir)
        .env_remove("CASTNET_DATA_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("two.csv"), TWO_TRIANGLES).unwrap();
    dir
}

#[test]
fn exit_codes() {
    let dir = setup();
    let d = dir.path();
    assert_eq!(castnet(&["--help"], d).status.code(), Some(0));
    assert_eq!(castnet(&["centrality", "pagerank", "--netflix", "two.csv"], d).status.code(), Some(2));
    assert_eq!(castnet(&["build"], d).status.code(), Some(2), "no input configured");
    assert_eq!(castnet(&["build", "--netflix", "missing.csv"], d).status.code(), Some(1));
    assert_eq!(
        castnet(&["path", "Ann", "Nobody", "--netflix", "two.csv"], d).status.code(),
        Some(1)
    );
    assert_eq!(
        castnet(&["predict", "jaccard", "--min-common", "0", "--netflix", "two.csv"], d).status.code(),
        Some(2)
    );
    assert_eq!(
        castnet(&["clusters", "--tau", "1.5", "--netflix", "two.csv"], d).status.code(),
        Some(2)
    );
    assert_eq!(
        castnet(&["export", "--format", "csv", "--netflix", "two.csv"], d).status.code(),
        Some(2)
    );
}

#[test]
fn path_to_self_and_across_components() {
    let dir = setup();
    let same = castnet(&["path", "Ann", "Ann", "--netflix", "two.csv"], dir.path());
    assert_eq!(same.status.code(), Some(0));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("castnet-out/path.json")).unwrap()).unwrap();
    assert_eq!(json["status"], "found");
    assert_eq!(json["length"], 0);

    let apart = castnet(&["path", "Ann", "Zoe", "--netflix", "two.csv"], dir.path());
    assert_eq!(stdout(&apart).trim(), "unreachable");
    let near = castnet(&["path", "Ann", "Cid", "--netflix", "two.csv"], dir.path());
    assert_eq!(stdout(&near).trim(), "Ann —[Left]→ Cid");
}

#[test]
fn predict_on_two_triangles_is_empty() {
    let dir = setup();
    let o = castnet(&["predict", "adamic_adar", "--netflix", "two.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "actor_a,actor_b,method,score\n");
    let pa = castnet(
        &[
            "predict",
            "preferential_attachment",
            "--min-common",
            "0",
            "--include-unconnected",
            "--top",
            "1",
            "--netflix",
            "two.csv",
        ],
        dir.path(),
    );
    assert_eq!(stdout(&pa), "actor_a,actor_b,method,score\nAnn,Xan,preferential_attachment,4\n");
}

#[test]
fn centrality_csv_is_sorted_and_rounded() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("p3.csv"),
        "show_id,type,title,director,cast,release_year\ns1,Movie,A,,\"Ann, Bob\",2000\ns2,Movie,B,,\"Bob, Cid\",2000\n",
    )
    .unwrap();
    let o = castnet(&["centrality", "closeness", "--netflix", "p3.csv"], dir.path());
    assert_eq!(stdout(&o), "name,score\nBob,1\nAnn,0.666667\nCid,0.666667\n");
}

#[test]
fn config_file_and_flags() {
    let dir = setup();
    fs::write(
        dir.path().join("run.conf"),
        "# shared settings\nnetflix = two.csv\nout = conf-out\nseed = 9\n",
    )
    .unwrap();
    let o = castnet(&["communities", "--config", "run.conf"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = fs::read_to_string(dir.path().join("conf-out/run_report.json")).unwrap();
    assert!(report.contains("\"seed\": 9"));

    let o = castnet(&["communities", "--config", "run.conf", "--out", "flag-out"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("flag-out/communities.csv").exists());

    fs::write(dir.path().join("bad.conf"), "colour = blue\n").unwrap();
    assert_eq!(castnet(&["build", "--config", "bad.conf"], dir.path()).status.code(), Some(2));
}

#[test]
fn data_dir_supplies_default_input() {
    let dir = setup();
    let o = Command::new(env!("CARGO_BIN_EXE_castnet"))
        .args(["build", "--out", "o"])
        .current_dir(dir.path())
        .env("CASTNET_DATA_DIR", dir.path().join("data"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1), "data dir without the catalog");
    fs::create_dir(dir.path().join("data")).unwrap();
    fs::copy(dir.path().join("two.csv"), dir.path().join("data/netflix_titles.csv")).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_castnet"))
        .args(["build", "--out", "o"])
        .current_dir(dir.path())
        .env("CASTNET_DATA_DIR", dir.path().join("data"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn graph_cache_is_reused_and_invalidated() {
    let dir = setup();
    let d = dir.path();
    let report = || fs::read_to_string(d.join("castnet-out/run_report.json")).unwrap();
    castnet(&["build", "--netflix", "two.csv"], d);
    castnet(&["centrality", "degree", "--netflix", "two.csv"], d);
    assert!(report().contains("\"from_cache\": true"));

    castnet(&["centrality", "degree", "--netflix", "two.csv", "--year-from", "2002"], d);
    assert!(report().contains("\"from_cache\": false"), "filters are part of the fingerprint");
    let csv = fs::read_to_string(d.join("castnet-out/centrality_degree.csv")).unwrap();
    assert!(!csv.contains("Ann"));

    fs::write(d.join("two.csv"), TWO_TRIANGLES.replace("Zoe", "Zed")).unwrap();
    castnet(&["centrality", "degree", "--netflix", "two.csv"], d);
    assert!(report().contains("\"from_cache\": false"), "input change rebuilds");
    let csv = fs::read_to_string(d.join("castnet-out/centrality_degree.csv")).unwrap();
    assert!(csv.contains("Zed"));
}

#[test]
fn gzip_input_matches_plain() {
    let dir = setup();
    let mut gz = GzEncoder::new(Vec::new(), Compression::default());
    gz.write_all(TWO_TRIANGLES.as_bytes()).unwrap();
    fs::write(dir.path().join("two.csv.gz"), gz.finish().unwrap()).unwrap();
    let plain = castnet(&["partners", "--netflix", "two.csv", "--out", "a"], dir.path());
    let packed = castnet(&["partners", "--netflix", "two.csv.gz", "--out", "b"], dir.path());
    assert_eq!(stdout(&plain), stdout(&packed));
    assert_eq!(stdout(&plain).lines().count(), 7);
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let catalog = dir.path().join("cat.csv");
    common::write_catalog(&catalog, 600, 21);
    let cat = catalog.to_str().unwrap();
    for cmd in [&["centrality", "betweenness"][..], &["centrality", "eigenvector"], &["crossover"], &["predict", "resource_allocation", "--top", "50"]] {
        let one = castnet(&[cmd, &["--netflix", cat, "--threads", "1", "--out", "t1"]].concat(), dir.path());
        let many = castnet(&[cmd, &["--netflix", cat, "--threads", "4", "--out", "t4"]].concat(), dir.path());
        assert_eq!(one.status.code(), Some(0));
        assert_eq!(stdout(&one), stdout(&many), "{cmd:?}");
    }
}

#[test]
fn imdb_source_uses_display_names() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(
        d.join("basics.tsv"),
        "tconst\ttitleType\tprimaryTitle\tstartYear\ntt1\tmovie\tDead Poets Society\t1989\ntt2\ttvSeries\tShow\t2001\n",
    )
    .unwrap();
    fs::write(
        d.join("principals.tsv"),
        "tconst\tordering\tnconst\tcategory\ntt1\t1\tnm1\tactor\ntt1\t2\tnm2\tactor\ntt2\t1\tnm2\tactor\ntt2\t2\tnm3\tactress\n",
    )
    .unwrap();
    fs::write(
        d.join("names.tsv"),
        "nconst\tprimaryName\nnm1\tRobin Williams\nnm2\tEthan Hawke\nnm3\tJo Smith\n",
    )
    .unwrap();
    let base = [
        "--source",
        "imdb",
        "--imdb-basics",
        "basics.tsv",
        "--imdb-principals",
        "principals.tsv",
        "--imdb-names",
        "names.tsv",
    ];
    let o = castnet(&[&["path", "Robin Williams", "Jo Smith"][..], &base].concat(), d);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        stdout(&o).trim(),
        "Robin Williams —[Dead Poets Society]→ Ethan Hawke —[Show]→ Jo Smith"
    );
    let movies = castnet(&[&["partners"][..], &base, &["--kind", "movie"]].concat(), d);
    assert_eq!(stdout(&movies), "actor_a,actor_b,shared_titles\nEthan Hawke,Robin Williams,1\n");
    castnet(&[&["ingest"][..], &base].concat(), d);
    assert!(fs::read_to_string(d.join("castnet-out/persons.jsonl")).unwrap().contains("Jo Smith"));
}
