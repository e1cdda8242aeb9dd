use std::io::Write;
use std::process::{Command, Output, Stdio};

fn crystrep(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_crystrep"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    if let Some(s) = stdin {
        // argument errors exit before reading stdin
        if let Err(e) = child.stdin.take().unwrap().write_all(s.as_bytes()) {
            assert_eq!(e.kind(), std::io::ErrorKind::BrokenPipe, "{e}");
        }
    } else {
        drop(child.stdin.take());
    }
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn rdef_k1() {
    let o = crystrep(&["topology", "rdef", "1"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("π₀ = ℤ ⊕ ℤ/2"), "{}", stdout(&o));
}

#[test]
fn gamma_k_definition_validates() {
    let def = crystrep(&["group", "gamma-k", "2"], None);
    assert_eq!(def.status.code(), Some(0));
    let o = crystrep(&["group", "validate", "-"], Some(&stdout(&def)));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("valid"));
}

#[test]
fn malformed_input_exits_2_with_one_line() {
    for args in [
        vec!["group", "validate", "-"],
        vec!["topology", "rdef", "x"],
        vec!["topology", "rdef", "0"],
        vec!["rep", "verify", "gamma-k:1", "-"],
        vec!["torus", "orbit", "gamma-k:1", "a,b"],
        vec!["accept", "--only", "11"],
    ] {
        let o = crystrep(&args, Some("garbage"));
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn rep_roundtrip_through_files() {
    let fam = crystrep(&["rep", "family", "1", "--z", "0.25", "--alpha", "0.1"], None);
    assert_eq!(fam.status.code(), Some(0));
    let rep = stdout(&fam);
    for cmd in [["rep", "verify"], ["rep", "classify"], ["probe", "dim"], ["rep", "decompose"]] {
        let o = crystrep(&[cmd[0], cmd[1], "gamma-k:1", "-"], Some(&rep));
        assert_eq!(o.status.code(), Some(0), "{cmd:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = crystrep(&["--json", "paths", "trivialize", "gamma-k:1", "-"], Some(&rep));
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["multiplier"], 2);
}

#[test]
fn failed_verification_exits_1() {
    let bad = r#"{"group_ref":"gamma-k:1","n":1,"lattice_images":[[[[1.0,0.0]]],[[[0.0,1.0]]]],"lift_images":{"1":[[[1.0,0.0]]]}}"#;
    let o = crystrep(&["rep", "verify", "gamma-k:1", "-"], Some(bad));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn accept_is_deterministic() {
    let a = crystrep(&["--json", "accept", "--seed", "0"], None);
    let b = crystrep(&["--json", "accept", "--seed", "0"], None);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
}
