use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn kcross(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kcross")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn tangle_summary() {
    let o = kcross(&["tangle", "2 2 2 1"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("fraction 17/12, |r| = 7\n"));
    let o = kcross(&["tangle", "-2 -2 -2 -1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["fraction"], "-17/12");
    assert_eq!(v["crossing_number"], 7);
}

#[test]
fn automorphisms_of_k5() {
    let o = kcross(&["aut", &data("k5.graph")]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("order 120, blocks: [5] → strongly minimalizable"));
}

#[test]
fn criterion_is_deterministic() {
    let args = ["criterion", &data("k5.diagram"), "--vertex", "0", "--json"];
    let a = kcross(&args);
    let b = kcross(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = kcross(&["criterion", &data("k5.diagram"), "--vertex", "3"]);
    assert!(stdout(&text).starts_with("non-planar"));
}

#[test]
fn verify_accepts_and_rejects() {
    let dir = std::env::temp_dir().join(format!("kcross-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cert = dir.join("k5.json");
    let o = kcross(&["criterion", &data("k5.diagram"), "--vertex", "1", "--out", cert.to_str().unwrap()]);
    assert!(o.status.success());
    let o = kcross(&["verify", cert.to_str().unwrap(), "--diagram", &data("k5.diagram")]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let lk = &mut v["per_assignment"][0]["certificate"]["linking_number"];
    *lk = serde_json::json!(-lk.as_i64().unwrap());
    let forged = dir.join("forged.json");
    std::fs::write(&forged, v.to_string()).unwrap();
    let o = kcross(&["verify", forged.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(kcross(&["tangle", "2 x"]).status.code(), Some(1));
    assert_eq!(kcross(&["invariant", "/nonexistent/file"]).status.code(), Some(1));
    let o = kcross(&["simplify", &data("k5.diagram"), "--budget-crossings", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = kcross(&["criterion", &data("k5.diagram"), "--vertex", "0", "--budget-crossings", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reads_stdin_and_reports_inconclusive() {
    use std::io::Write;
    use std::process::Stdio;
    let diagram = "diagram\nvertex 0 4\narc 0.0 0.1\narc 0.2 0.3\n";
    let mut child = Command::new(env!("CARGO_BIN_EXE_kcross"))
        .args(["criterion", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(diagram.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success());
    assert_eq!(stdout(&o), "inconclusive\n");
}
