use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sts_core::io::{parse, SystemFile};
use sts_core::TripleStructure;

const STS: &str = env!("CARGO_BIN_EXE_sts");

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sts-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn sts(dir: &Path, args: &[&str]) -> Output {
    Command::new(STS)
        .args(args)
        .current_dir(dir)
        .env_remove("STS_NODE_BUDGET")
        .output()
        .unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = sts(dir, args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn load(path: &Path) -> SystemFile {
    parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn fano(dir: &Path) {
    ok(dir, &["construct", "pg", "--dim", "2", "--out", "fano.sts"]);
}

/// Counts permutations of the points that map triples onto triples.
fn brute_aut_count(n: usize, triples: &[[u32; 3]]) -> usize {
    let set: BTreeSet<[u32; 3]> = triples.iter().copied().collect();
    let mut perm: Vec<u32> = (0..n as u32).collect();
    let mut count = 0;
    loop {
        let preserved = triples.iter().all(|t| {
            let mut img = t.map(|p| perm[p as usize]);
            img.sort_unstable();
            set.contains(&img)
        });
        count += preserved as usize;
        // next lexicographic permutation
        let Some(i) = (0..n - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
            return count;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}

#[test]
fn constructions_write_valid_files() {
    let dir = scratch("construct");
    fano(&dir);
    ok(&dir, &["construct", "moore", "--x", "1", "--y", "7", "--v", "3", "--out", "m.sts"]);
    ok(&dir, &["construct", "double", "--input", "fano.sts", "--out", "d.sts"]);
    ok(&dir, &["construct", "pg", "--dim", "3", "--out", "pg3.sts"]);
    for (file, n) in [("fano.sts", 7), ("m.sts", 19), ("d.sts", 15), ("pg3.sts", 15)] {
        let ts = load(&dir.join(file)).into_steiner().unwrap();
        assert_eq!(ts.n_points(), n, "{file}");
        assert!(ts.validate().is_ok());
        assert!(dir.join(format!("{file}.manifest.json")).exists());
        assert!(dir.join(format!("{file}.names")).exists());
        assert!(ok(&dir, &["verify", "--sts", file]).contains("ok"));
    }
}

#[test]
fn aut_of_fano() {
    let dir = scratch("aut");
    fano(&dir);
    let text = ok(&dir, &["aut", "fano.sts"]);
    let ts = load(&dir.join("fano.sts")).into_steiner().unwrap();
    let expected = brute_aut_count(7, ts.triples());
    assert_eq!(expected, 168);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(format!("order {expected}").as_str()));
    assert_eq!(lines.next(), Some("generators 2"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn iso_reports_the_verdict() {
    let dir = scratch("iso");
    fano(&dir);
    ok(&dir, &["construct", "double", "--input", "fano.sts", "--out", "d.sts"]);
    ok(&dir, &["construct", "pg", "--dim", "3", "--out", "pg3.sts"]);
    ok(&dir, &["construct", "random", "--n", "15", "--out", "r.sts"]);
    assert!(ok(&dir, &["iso", "d.sts", "pg3.sts"]).starts_with("isomorphic"));
    let out = sts(&dir, &["iso", "pg3.sts", "r.sts"]);
    let random_is_pg = String::from_utf8_lossy(&out.stdout).starts_with("isomorphic");
    assert_eq!(out.status.code(), Some(if random_is_pg { 0 } else { 1 }));
}

#[test]
fn verify_predicates() {
    let dir = scratch("verify");
    ok(&dir, &["construct", "pg", "--dim", "3", "--out", "pg3.sts"]);
    ok(&dir, &["verify", "--sts", "pg3.sts", "--pointed", "0", "--two-pointed", "0", "1", "--paired"]);
    ok(&dir, &["construct", "ag", "--out", "ag.sts"]);
    let out = sts(&dir, &["verify", "--sts", "ag.sts", "--pointed", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn classify_fano_summary() {
    let dir = scratch("classify");
    let text = ok(&dir, &["classify-fano", "--x", "1", "--y", "7", "--v", "3"]);
    assert_eq!(text.lines().last(), Some("# in-yv 3 vsf 0 type31 0 unclassified 0"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn solve_params_certificates_round_trip() {
    let dir = scratch("solve");
    let text = ok(&dir, &["solve-params", "--v1", "9", "--v2", "15", "--threshold"]);
    let threshold: u128 = text
        .lines()
        .find_map(|l| l.strip_prefix("threshold = "))
        .unwrap()
        .parse()
        .unwrap();
    let u = (threshold..).find(|u| u % 6 == 1 || u % 6 == 3).unwrap().to_string();
    ok(&dir, &["solve-params", "--u", &u, "--v1", "9", "--v2", "15", "--out", "cert.txt"]);
    assert!(ok(&dir, &["solve-params", "--check", "cert.txt"]).contains("ok"));

    let cert = std::fs::read_to_string(dir.join("cert.txt")).unwrap();
    let bent: String = cert
        .lines()
        .map(|l| match l.strip_prefix("u = ") {
            Some(v) => format!("u = {}\n", v.parse::<u128>().unwrap() + 6),
            None => format!("{l}\n"),
        })
        .collect();
    std::fs::write(dir.join("bent.txt"), bent).unwrap();
    assert_eq!(sts(&dir, &["solve-params", "--check", "bent.txt"]).status.code(), Some(1));
}

#[test]
fn embeddings_validate() {
    let dir = scratch("embed");
    fano(&dir);
    ok(&dir, &["embed-pstss", "--input", "fano.sts", "--mode", "theorem13", "--skip-gadgets", "--out", "u.sts"]);
    let u = load(&dir.join("u.sts")).into_steiner().unwrap();
    assert_eq!(u.n_points(), 127);
    assert!(u.validate().is_ok());
    let names = std::fs::read_to_string(dir.join("u.sts.names")).unwrap();
    assert!(names.contains("point 5 = {1,2}"));

    let out = sts(&dir, &["embed-pstss", "--input", "fano.sts", "--mode", "theorem13", "--out", "big.sts"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));

    ok(&dir, &["embed-pstss", "--input", "fano.sts", "--mode", "cor47", "--subset", "0", "--out", "w.pstss"]);
    let w = load(&dir.join("w.pstss"));
    assert!(sts_core::validate_pstss(w.as_partial().n_points(), w.as_partial().triples()).is_ok());
}

#[test]
fn malformed_input_reports_position() {
    let dir = scratch("malformed");
    std::fs::write(dir.join("bad.sts"), "sts 7\n0 1 2\n0 3 x\n").unwrap();
    let out = sts(&dir, &["verify", "--sts", "bad.sts"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3, column 5"), "{err}");
}

#[test]
fn exit_codes() {
    let dir = scratch("codes");
    fano(&dir);
    assert_eq!(sts(&dir, &["--budget", "1", "aut", "fano.sts"]).status.code(), Some(3));
    let env_budget = Command::new(STS)
        .args(["aut", "fano.sts"])
        .current_dir(&dir)
        .env("STS_NODE_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(env_budget.status.code(), Some(3));
    assert_eq!(sts(&dir, &["no-such-command"]).status.code(), Some(2));
    assert_eq!(sts(&dir, &["construct", "pg", "--dim", "2"]).status.code(), Some(2));
    assert_eq!(sts(&dir, &["verify", "--sts", "fano.sts", "--pstss", "fano.sts"]).status.code(), Some(2));
    assert_eq!(sts(&dir, &["--help"]).status.code(), Some(0));
}

#[test]
fn replay_reproduces_outputs() {
    let dir = scratch("replay");
    ok(&dir, &["--seed", "7", "construct", "random", "--n", "19", "--out", "r.sts"]);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("r.sts.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 7);
    assert_eq!(manifest["subcommand"], "construct random");
    let before = std::fs::read(dir.join("r.sts")).unwrap();
    std::fs::remove_file(dir.join("r.sts")).unwrap();
    let text = ok(&dir, &["replay", "r.sts.manifest.json"]);
    assert!(text.contains("r.sts: identical"));
    assert_eq!(std::fs::read(dir.join("r.sts")).unwrap(), before);

    ok(&dir, &["--seed", "8", "construct", "random", "--n", "19", "--out", "r.sts"]);
    let other = load(&dir.join("r.sts")).into_steiner().unwrap();
    assert!(other.validate().is_ok());
}
