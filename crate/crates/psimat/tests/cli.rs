//! End-to-end runs of every verb through the text formats.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn psimat(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_psimat"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    if let Some(s) = stdin {
        child.stdin.take().unwrap().write_all(s.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str], stdin: Option<&str>) -> String {
    let o = psimat(args, stdin);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn temp(name: &str, body: &str) -> String {
    let mut p = std::env::temp_dir();
    p.push(format!("psimat-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn check_axioms_on_k4() {
    let out = ok(&["check-axioms", &fixture("k4.system")], None);
    assert!(out.trim_end().ends_with("PASS (8/8)"));
}

#[test]
fn failing_axioms_exit_one() {
    let o = psimat(&["check-axioms", &fixture("broken.system")], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("(O1): FAIL"));
}

#[test]
fn malformed_file_exits_two_with_position() {
    let o = psimat(&["check-axioms", &fixture("bad.system")], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3, column 6"));
    let o = psimat(&["induced", &fixture("bad.presentation")], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 8"));
}

#[test]
fn reconstruct_round_trips_through_matroid_info() {
    let m = ok(&["reconstruct", &fixture("k4.system")], None);
    assert!(m.starts_with("matroid k4\n"));
    let info = ok(&["matroid-info", "-"], Some(&m));
    assert!(info.contains("rank: 3"));
    assert!(info.contains("bases: 16"));
    let o = psimat(&["reconstruct", &fixture("broken.system")], None);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn matroid_info_minor() {
    let out = ok(&["matroid-info", &fixture("u13.matroid"), "--delete", "a"], None);
    assert!(out.contains("minor / {} \\ {a}\nground: b c\nrank: 1\ncircuit: b c\n"));
}

#[test]
fn base_extend_reports_a_base() {
    let out = ok(
        &["base-extend", &fixture("k4.system"), "--independent", "a", "--within", "a,b,c,d,e,f"],
        None,
    );
    let line = out.lines().find(|l| l.starts_with("independent: ")).unwrap();
    assert_eq!(line.matches(',').count(), 2, "{line}");
    assert!(line.contains('a'));
}

#[test]
fn glue_of_triangles_is_a_four_cycle() {
    let out = ok(&["glue", &fixture("k3a.matroid"), &fixture("k3b.matroid")], None);
    let info = ok(&["matroid-info", "-"], Some(&out));
    assert!(info.contains("ground: a b c d\nrank: 3\ncircuit: a b c d\n"));
}

#[test]
fn tgame_pipeline() {
    let p = ok(&["gen", "tgame"], None);
    let out = ok(&["solve", "-", "--edge", "d0"], Some(&p));
    assert!(out.contains("winner: Sarah; d0 is a Ψ-circuit (loop)\n"), "{out}");
    let co = ok(&["gen", "tgame", "--psi", "cobuchi"], None);
    let out = ok(&["solve", "-", "--edge", "d0", "--representable"], Some(&co));
    assert!(out.contains("winner: Colin; d0 is a Ψᶜ-cocircuit (coloop)"), "{out}");
}

#[test]
fn induced_and_duality_check() {
    let p = ok(&["gen", "tgame", "--psi", "buchi"], None);
    let m = ok(&["induced", "-"], Some(&p));
    assert_eq!(m, "matroid tgame\nground: d0\ncircuit: d0\n");
    let d = ok(&["duality-check", "-"], Some(&p));
    assert!(d.ends_with("agree: 1/1\n"));
    let d = ok(&["--json", "duality-check", "-", "--representable"], Some(&p));
    let v: serde_json::Value = serde_json::from_str(&d).unwrap();
    assert_eq!(v["checks"].as_array().unwrap().len(), 1);
}

#[test]
fn structure_and_torso_chain() {
    let s = ok(&["tree-structure", &fixture("c4.graph"), "--root", "1"], None);
    assert_eq!(s, "structure c4\nclass 1: 1\nclass 2: 2 3 4\ntedge 1 2\n");
    let sp = temp("c4.structure", &s);
    let t = ok(&["torso", &fixture("c4.graph"), &sp, "--class", "2"], None);
    assert!(t.starts_with("graph torso-2\n"));
    assert!(t.contains("d:a:d"));
    let o = psimat(&["torso", &fixture("c4.graph"), &sp, "--class", "9"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn undominate_round_trip() {
    let out = ok(
        &["undominate", &fixture("c4.graph"), &fixture("c4path.graph"), "--walk", "1,2,3,4,1"],
        None,
    );
    assert!(out.contains("g(u(P)): 1 2 3 4 1\nround trip: ok\n"), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("edge ")).count(), 4 + 4 * 3);
}

#[test]
fn generated_graphs_parse_back() {
    let g = ok(&["gen", "t2k3", "--depth", "1"], None);
    let s = ok(&["gen", "t2k3", "--depth", "1", "--structure"], None);
    let gp = temp("t2k3.graph", &g);
    let sp = temp("t2k3.structure", &s);
    let t = ok(&["torso", &gp, &sp, "--class", "r"], None);
    assert!(t.starts_with("graph torso-r\n"));
    let k = ok(&["gen", "tk2", "--depth", "2"], None);
    assert!(ok(&["tree-structure", "-", "--root", "v2"], Some(&k)).starts_with("structure "));
}

#[test]
fn selftest_subset() {
    let out = ok(&["selftest", "--only", "5,6"], None);
    assert!(out.ends_with("2/2 criteria pass\n"), "{out}");
}

#[test]
fn reports_are_deterministic() {
    let p = ok(&["gen", "tgame", "--psi", "buchi"], None);
    let a = ok(&["--json", "solve", "-", "--edge", "d0"], Some(&p));
    let b = ok(&["--json", "solve", "-", "--edge", "d0"], Some(&p));
    assert_eq!(a, b);
}
