use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gcsb_cli::document::BoundsReport;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn gcsb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcsb")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn net() -> String {
    data("two-sink.json").display().to_string()
}

#[test]
fn bounds_json_report() {
    let o = gcsb(&["bounds", &net()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: BoundsReport = serde_json::from_str(&stdout(&o)).unwrap();
    let rhs: Vec<_> = report.iter().map(|r| r.rhs_value.clone().unwrap()).collect();
    assert_eq!(rhs, ["3", "3", "4"]);
    assert_eq!(report[2].rate_coeffs.len(), 3);
    assert_eq!(report[0].capacity_coeffs["a12"], "1");
}

#[test]
fn bounds_to_file_and_text() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.txt");
    let o = gcsb(&["bounds", &net(), "--out", "text", "--output", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "3 inequalities\n");
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.lines().last().unwrap().ends_with("= 4"), "{text}");
}

#[test]
fn supplied_cuts() {
    let good = data("two-sink-cuts.json");
    let o = gcsb(&["bounds", &net(), "--cuts", good.to_str().unwrap(), "--rules", "csb"]);
    assert_eq!(code(&o), 0);

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never.json");
    let bad = data("bad-cuts.json");
    let o = gcsb(&["bounds", &net(), "--cuts", bad.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).is_empty());
    assert!(!out.exists());
}

#[test]
fn malformed_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("n.json");
    std::fs::write(&p, "{\"nodes\": [}").unwrap();
    assert_eq!(code(&gcsb(&["bounds", p.to_str().unwrap()])), 2);
    let text = std::fs::read_to_string(data("two-sink.json")).unwrap().replace("\"source\"", "\"colour\": 1, \"source\"");
    std::fs::write(&p, text).unwrap();
    assert_eq!(code(&gcsb(&["bounds", p.to_str().unwrap()])), 2);
    assert_eq!(code(&gcsb(&["bounds", "/nonexistent/net.json"])), 2);
    assert_eq!(code(&gcsb(&["bounds", &net(), "--rules", "nope"])), 2);
}

#[test]
fn verify_campaigns() {
    let o = gcsb(&["verify", "--lemma", "1", "--trials", "20", "--ground", "4", "--k", "3", "--seed", "7"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("violations: 0"), "{}", stdout(&o));
    let o = gcsb(&["verify", "--lemma", "multiway", "--trials", "5", "--functions", "modular"]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&gcsb(&["verify", "--lemma", "1", "--ground", "40"])), 2);
    assert_eq!(code(&gcsb(&["verify", "--lemma", "7"])), 2);
}

#[test]
fn verify_rejects_negative_tolerance() {
    let o = gcsb(&["verify", "--lemma", "2", "--trials", "5", "--tolerance=-10"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("tolerance"));
}

#[test]
fn symmetric_region_and_comparison() {
    let o = gcsb(&["region", "--symmetric", "3", "1", "1", "1", "--compare", "cutset"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    for v in ["(4, 0)", "(3, 3)", "(1, 6)", "(0, 7)"] {
        assert!(s.contains(v), "{s}");
    }
    assert!(s.contains("gcsb region within cutset region: yes"));
    assert!(s.contains("cutset region within gcsb region: no, e.g. (5/2, 9/2)"));
    assert_eq!(code(&gcsb(&["region", "--symmetric", "3", "1", "1"])), 2);
    assert_eq!(code(&gcsb(&["region", "--symmetric", "2", "1", "-1"])), 2);
}

#[test]
fn network_region_with_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("v.csv");
    let o = gcsb(&["region", &net(), "--axes", "R0=W0,Rsp=W1+W2", "--emit", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), "x,y\n0,0\n3,0\n2,2\n0,4\n");
    // three messages and no axes
    assert_eq!(code(&gcsb(&["region", &net()])), 2);
    assert_eq!(code(&gcsb(&["region"])), 2);
}

#[test]
fn unbounded_system() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s.txt");
    std::fs::write(&p, "variables: x y\nx - y <= 1\n").unwrap();
    let csv = dir.path().join("v.csv");
    let o = gcsb(&["region", "--system", p.to_str().unwrap(), "--emit", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 4);
    assert!(!csv.exists());
    std::fs::write(&p, "variables: x y\nx + y <= 1\n").unwrap();
    let o = gcsb(&["region", "--system", p.to_str().unwrap(), "--emit", "-"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).ends_with("x,y\n0,0\n1,0\n0,1\n"), "{}", stdout(&o));
}

#[test]
fn golden_cases() {
    let o = gcsb(&["golden", "--case", "k3-complete"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("match (15 rows)"));
    assert_eq!(code(&gcsb(&["paper", "--case", "k3-symmetric"])), 0);
    let o = gcsb(&["golden", "--case", "fm-derivation"]);
    assert_eq!(code(&o), 1);
    let s = stdout(&o);
    assert!(s.contains("cut-set system: match (7 rows)"));
    assert!(s.contains("  - 2 R0 + Rsp <= 3 C1 + 5 C2 + 2 C3"));
    assert!(s.contains("same region: yes"));
}
