use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn homdom(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homdom")).env("HOMDOM_OUT", out).args(args).output().expect("spawn homdom")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(rel)
}

#[test]
fn compare_p6_p4_prints_three_line_primal() {
    let dir = tempfile::tempdir().unwrap();
    let o = homdom(dir.path(), &["compare", "--h", "P6", "--t", "P4"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let mut lines = s.lines();
    assert!(lines.next().unwrap().starts_with("DOMINATES value=3/1"));
    assert_eq!(lines.next(), Some("primal H=P6 T=P4"));
    assert_eq!(lines.filter(|l| l.starts_with("w ")).count(), 3);
}

#[test]
fn compare_certify_writes_verified_dual() {
    let dir = tempfile::tempdir().unwrap();
    let o = homdom(dir.path(), &["compare", "--h", "T9", "--t", "T6", "--certify"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("NOT_DOMINATES value=70/19"));
    assert!(s.contains("verified=true"));
    let written = fs::read_to_string(dir.path().join("T6-T9.txt")).unwrap();
    assert!(written.starts_with("dual H=T9 T=T6"));
}

#[test]
fn inline_edge_lists_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let o = homdom(dir.path(), &["compare", "--h", "1-2,2-3,3-4,4-5,5-6", "--t", "P4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("DOMINATES value=3/1"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(homdom(dir.path(), &["compare", "--h", "X9", "--t", "P4"]).status.code(), Some(2));
    assert_eq!(homdom(dir.path(), &["compare", "--h", "P3"]).status.code(), Some(2));
    assert_eq!(homdom(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(homdom(dir.path(), &["certify", "--dir", "/nonexistent/dir"]).status.code(), Some(2));
    assert_eq!(homdom(dir.path(), &["enumerate", "--n", "0"]).status.code(), Some(2));
}

#[test]
fn enumerate_counts() {
    let dir = tempfile::tempdir().unwrap();
    for (n, count) in [(1, 1), (4, 2), (7, 11), (8, 23)] {
        let o = homdom(dir.path(), &["enumerate", "--n", &n.to_string()]);
        assert_eq!(o.status.code(), Some(0));
        let s = stdout(&o);
        assert!(s.starts_with(&format!("{count} trees on {n} vertices")), "{s}");
        assert_eq!(s.lines().count(), count + 2);
    }
}

#[test]
fn poset_small_matches_reference() {
    let dir = tempfile::tempdir().unwrap();
    let o = homdom(dir.path(), &["poset", "--max-n", "6", "--diff-reference"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let s = stdout(&o);
    assert!(s.contains("0 discrepancies / Tables 1"), "{s}");
    let csv = fs::read_to_string(dir.path().join("relation.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 13 * 13);
    assert!(fs::read_to_string(dir.path().join("hasse.dot")).unwrap().starts_with("digraph"));
    assert!(fs::read_dir(dir.path().join("certificates")).unwrap().count() > 0);
}

#[test]
fn certify_flags_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let certs = dir.path().join("certs");
    fs::create_dir(&certs).unwrap();
    fs::copy(fixture("appendix_b/11-17.txt"), certs.join("11-17.txt")).unwrap();
    let o = homdom(dir.path(), &["certify", "--dir", certs.to_str().unwrap(), "--no-cross-check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("1 of 1 certificates verified"));

    fs::copy(fixture("appendix_b/15-26.txt"), certs.join("15-26.txt")).unwrap();
    let o = homdom(dir.path(), &["certify", "--dir", certs.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&o);
    assert!(s.contains("dual:15-26 MALFORMED"), "{s}");
    assert!(s.contains("lp: NOT_DOMINATES"), "{s}");
}

#[test]
fn falsify_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["falsify", "--h", "P3", "--t", "P4", "--mode", "blowup", "--schedule", "2,3", "--seed", "7"];
    let a = homdom(dir.path(), &args);
    let b = homdom(dir.path(), &args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("SEPARATED"));
}

#[test]
fn falsify_dary_and_emitted_graph() {
    let dir = tempfile::tempdir().unwrap();
    let o = homdom(dir.path(), &["falsify", "--h", "P5", "--t", "S4", "--mode", "dary", "--emit-graph"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("construction dary d=2"));
    assert!(dir.path().join("witness-P5-S4.txt").exists());
}

#[test]
fn falsify_rejects_infeasible_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let cert = fixture("appendix_b/6-9.txt");
    let o = homdom(dir.path(), &["falsify", "--h", "T9", "--t", "T6", "--cert", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("certificate invalid"));
}

#[test]
fn falsify_on_dominating_pair_reports_nothing_to_refute() {
    let dir = tempfile::tempdir().unwrap();
    let o = homdom(dir.path(), &["falsify", "--h", "P6", "--t", "P4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("nothing to refute"));
}
