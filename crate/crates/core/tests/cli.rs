use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_subforge");

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(BIN).args(args).current_dir(dir).env_remove("SUBFORGE_SEED").output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const C9: &str = "9 9\n0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n7 8\n0 8\n";
const K3: &str = "3 3\n0 1\n0 2\n1 2\n";
const C9_CERT: &str = r#"{"mode":"balanced","ell":2,"branch_map":[[0,0],[1,3],[2,6]],
"paths":[{"edge":[0,1],"vertices":[0,1,2,3]},{"edge":[0,2],"vertices":[0,8,7,6]},{"edge":[1,2],"vertices":[3,4,5,6]}]}"#;

#[test]
fn verify_accepts_the_nine_cycle_triangle() {
    let t = TempDir::new().unwrap();
    write(t.path(), "g.txt", C9);
    write(t.path(), "h.txt", K3);
    write(t.path(), "c.json", C9_CERT);
    let o = run(&["verify", "g.txt", "h.txt", "--cert", "c.json"], t.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "accept");
}

#[test]
fn verify_rejects_a_wrong_length_claim() {
    let t = TempDir::new().unwrap();
    write(t.path(), "g.txt", C9);
    write(t.path(), "h.txt", K3);
    write(t.path(), "c.json", &C9_CERT.replace("\"ell\":2", "\"ell\":3"));
    let o = run(&["verify", "g.txt", "h.txt", "--cert", "c.json"], t.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("reject"));
}

#[test]
fn find_subdivision_writes_a_certificate_that_verifies() {
    let t = TempDir::new().unwrap();
    let g = run(&["generate", "complete-bipartite", "60", "60", "--out", "g.txt"], t.path());
    assert_eq!(g.status.code(), Some(0));
    write(t.path(), "h.txt", K3);
    let o = run(&["find-subdivision", "g.txt", "h.txt", "--out", "c.json"], t.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(t.path().join("c.json").exists());
    let v = run(&["verify", "g.txt", "h.txt", "--cert", "c.json"], t.path());
    assert_eq!(stdout(&v).trim(), "accept");
}

#[test]
fn find_subdivision_miss_exits_two() {
    let t = TempDir::new().unwrap();
    write(t.path(), "g.txt", "4 3\n0 1\n1 2\n2 3\n");
    write(t.path(), "h.txt", K3);
    let o = run(&["find-subdivision", "g.txt", "h.txt", "--engine", "sparse"], t.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn malformed_edge_list_exits_three() {
    let t = TempDir::new().unwrap();
    write(t.path(), "g.txt", "3 2\n0 1\n1 x\n");
    let o = run(&["stats", "g.txt"], t.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
}

#[test]
fn bad_config_exits_three() {
    let t = TempDir::new().unwrap();
    write(t.path(), "g.txt", C9);
    write(t.path(), "bad.cfg", "no_such_key = 1\n");
    let o = run(&["--config", "bad.cfg", "stats", "g.txt"], t.path());
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(BIN).args(["stats", "g.txt"]).current_dir(t.path()).env("SUBFORGE_SEED", "abc").output().unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn seeded_runs_are_byte_identical() {
    let t = TempDir::new().unwrap();
    let gen = || {
        Command::new(BIN)
            .args(["generate", "random-bipartite", "30", "30", "0.4"])
            .current_dir(t.path())
            .env("SUBFORGE_SEED", "11")
            .output()
            .unwrap()
            .stdout
    };
    let a = gen();
    assert_eq!(a, gen());
    std::fs::write(t.path().join("g.txt"), &a).unwrap();
    write(t.path(), "h.txt", K3);
    let x = run(&["extract-expander", "g.txt"], t.path());
    let y = run(&["extract-expander", "g.txt"], t.path());
    assert_eq!(x.stdout, y.stdout);
    let l = |jobs: &str| run(&["lowerbound", "--clique", "4", "--n1", "12", "--samples", "300", "--seeds", "3", "--jobs", jobs, "--format", "csv"], t.path()).stdout;
    assert_eq!(l("1"), l("3"));
}

#[test]
fn gadget_round_trip() {
    let t = TempDir::new().unwrap();
    run(&["generate", "complete-bipartite", "20", "20", "--out", "g.txt"], t.path());
    let o = run(&["build-gadget", "g.txt", "--kind", "unit", "--out", "u.json"], t.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = run(&["verify", "g.txt", "--gadget", "--cert", "u.json"], t.path());
    assert_eq!(stdout(&v).trim(), "accept");
}

#[test]
fn exhaustive_lowerbound_on_a_tiny_host() {
    let t = TempDir::new().unwrap();
    let o = run(&["lowerbound", "--clique", "3", "--n1", "4", "--exhaustive"], t.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["samples"], 8 * 7 * 6);
    assert_eq!(v[0]["exhaustive"], true);
}
