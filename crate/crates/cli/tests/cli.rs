use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gfwigner")).args(args).output().unwrap()
}

#[test]
fn geometry_summary() {
    let out = run(&["geometry", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "striations=9 lines=72 incidence=OK");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["wigner", "--n", "2", "--state", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["interference-stats", "--n-range", "5..2", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(run(&["overlap-search", "--n", "4"]).status.code(), Some(3));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn selftests_pass() {
    for cmd in ["geometry", "wigner", "overlap-search", "interference-stats", "code5"] {
        let out = run(&[cmd, "--selftest"]);
        let text = String::from_utf8_lossy(&out.stdout);
        assert_eq!(out.status.code(), Some(0), "{cmd}: {text}");
        assert!(text.lines().all(|l| l.contains("PASS")), "{cmd}: {text}");
    }
}

#[test]
fn bell_table_and_net_file() {
    let dir = tempfile::tempdir().unwrap();
    let net = gfwigner::QuantumNet::random(gfwigner::PhaseSpace::standard(2).unwrap(), 31);
    let path = dir.path().join("net.json");
    std::fs::write(&path, net.to_json()).unwrap();
    let out = run(&["wigner", "--net-file", path.to_str().unwrap(), "--state", "bell"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("q_index,p_index,value"));
    let sum: f64 = lines.map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap()).sum();
    assert!((sum - 1.0).abs() < 1e-12);
}

#[test]
fn state_file_and_json_format() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("psi.txt");
    std::fs::write(&path, "0.6 0\n0 0.8\n").unwrap();
    let state = format!("file:{}", path.display());
    let out = run(&["wigner", "--n", "1", "--state", &state, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.is_object());
}

#[test]
fn code5_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["code5", "--format", "json", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("code5.json")).unwrap()).unwrap();
    assert_eq!(v["syndrome"]["offsets"].as_array().unwrap().len(), 15);
}
