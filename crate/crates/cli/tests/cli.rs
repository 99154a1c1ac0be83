use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

fn gramsey(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gramsey")).current_dir(dir).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn digest(path: &Path) -> Vec<u8> {
    Sha256::digest(fs::read(path).unwrap()).to_vec()
}

#[test]
fn bounds_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = gramsey(dir.path(), &["bounds", "--mode", "complete", "--n", "12", "--k", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("name,direction,exactness,numerator,denominator,decimal\n"));
    assert!(text.lines().any(|l| l == "cycle_lower,lower,exact,6,1,6.0"), "{text}");
}

#[test]
fn p6_construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let o = gramsey(dir.path(), &["construct", "--family", "p6", "--n", "13", "--seed", "1", "--out", "c.grc"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).lines().any(|l| l == "palette,39"));
    let o = gramsey(dir.path(), &["verify", "c.grc", "--kind", "path", "--t", "6", "--q", "4", "--exhaustive"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "kind,param,q,copies_checked,violations,first_witness\npath,6,4,617760,0,\n");
}

#[test]
fn monochromatic_k5_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("grc 1 complete 5 2 1\n");
    for j in 1..5 {
        for i in 0..j {
            text.push_str(&format!("e {i} {j} 0\n"));
        }
    }
    fs::write(dir.path().join("mono.grc"), text).unwrap();
    let o = gramsey(dir.path(), &["verify", "mono.grc", "--kind", "cycle", "--m", "4", "--q", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    assert!(row.starts_with("cycle,4,3,15,15,"), "{row}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("witness: cycle 4"));
}

#[test]
fn usage_and_runtime_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(gramsey(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(gramsey(dir.path(), &["verify", "missing.grc", "--kind", "cycle", "--m", "4", "--q", "3"]).status.code(), Some(2));
    assert_eq!(gramsey(dir.path(), &["bounds", "--mode", "complete", "--n", "12", "--k", "3"]).status.code(), Some(2));
    assert_eq!(gramsey(dir.path(), &[]).status.code(), Some(2));
}

#[test]
fn exact_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let o = gramsey(dir.path(), &["exact", "--mode", "complete", "--n", "4", "--family", "path", "--k", "4", "--q", "3", "--out", "w.grc"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("value,6\n"));
    let o = gramsey(dir.path(), &["verify", "w.grc", "--kind", "path", "--t", "4", "--q", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let o = gramsey(dir.path(), &["stats", "--mode", "complete", "--n", "5", "--kind", "cycle", "--param", "5"]);
    assert_eq!(stdout(&o), "kind,param,count\ncycle,5,12\n");
}

#[test]
fn construct_reports_and_replays_identically() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["construct", "--family", "cycles", "--n", "24", "--k", "4", "--seed", "9", "--out", "c.grc"];
    let o = gramsey(dir.path(), &args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let files = ["c.grc", "c.grc.csv", "c.grc.attempts.csv"];
    let first: Vec<Vec<u8>> = files.iter().map(|f| digest(&dir.path().join(f))).collect();
    let csv = fs::read_to_string(dir.path().join("c.grc.csv")).unwrap();
    for key in ["coverage,", "max_uncolored_degree,", "resamples,", "retries,0", "c2,"] {
        assert!(csv.contains(key), "{key} missing from {csv}");
    }
    for f in files {
        fs::remove_file(dir.path().join(f)).unwrap();
    }
    let o = gramsey(dir.path(), &["--manifest", "c.grc.manifest.json"]);
    assert_eq!(o.status.code(), Some(0));
    let again: Vec<Vec<u8>> = files.iter().map(|f| digest(&dir.path().join(f))).collect();
    assert_eq!(first, again);
    let o = gramsey(dir.path(), &["verify", "c.grc", "--kind", "cycle", "--m", "4", "--q", "3", "--threads", "2"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn stage1_only_writes_partial_coloring() {
    let dir = tempfile::tempdir().unwrap();
    let o = gramsey(dir.path(), &["construct", "--family", "hyper-cliques", "--n", "9", "--k", "3", "--stage1-only", "--out", "h.grc"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("h.grc.csv")).unwrap();
    assert!(csv.contains("total_edges,84"));
    assert!(!csv.contains("resamples"));
    // Only fully colored copies are judged, and stage one creates no bad ones.
    let o = gramsey(dir.path(), &["verify", "h.grc", "--kind", "clique", "--p", "5", "--q", "9"]);
    assert_eq!(o.status.code(), Some(0));
}
