use std::process::{Command, Output};

fn nilfill(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilfill")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_presets_and_files() {
    let o = nilfill(&["verify", "class3_rank8_relators"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("relators: pass"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let text = r#"{"generators":["a","b","c"],"relators":["[a,b]"],"algebra":"heisenberg(3)",
        "generator_map":[["1","0","0"],["0","1","0"],["0","0","1"]]}"#;
    std::fs::write(&bad, text).unwrap();
    let o = nilfill(&["verify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("relators: FAIL"));
}

#[test]
fn fill_methods_and_dump() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("f.json");
    let o = nilfill(&[
        "fill", "--pres", "h5_commutator_form", "--word", "[a1,b2]", "--method", "shuffle", "--t", "6", "--dump",
        dump.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("word length 24, area 36, verified pass"));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&dump).unwrap()).unwrap();
    assert_eq!(json["cells"].as_array().unwrap().len(), 36);

    let o = nilfill(&["fill", "--pres", "h5_commutator_form", "--word", "[a1,b1^2]", "--method", "bfs", "--t", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("area 8, verified pass"));

    let o = nilfill(&["fill", "--pres", "h5_commutator_form", "--word", "[a1b2,a2b1]", "--method", "mainscale", "--t", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("area 688, verified pass"), "{}", stdout(&o));
}

#[test]
fn exit_codes() {
    // area 16 exceeds the default search cap
    let o = nilfill(&["fill", "--pres", "h5_commutator_form", "--word", "[a1^4,b1^4]", "--method", "bfs"]);
    assert_eq!(o.status.code(), Some(2));
    let o = nilfill(&["fill", "--pres", "h5_commutator_form", "--word", "[a1,b1", "--method", "bfs"]);
    assert_eq!(o.status.code(), Some(1));
    let o = nilfill(&["fill", "--pres", "h5_raw", "--word", "[a1,a2][b1,b2]^-1", "--method", "shuffle"]);
    assert_eq!(o.status.code(), Some(1));
    let o = nilfill(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn measure_writes_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"presentation":"h5_commutator_form","family":{"kind":"relator-scaling"},
            "scales":[1,2,4,8],"fillers":["shuffle"],"seed":3,"record_time":false}"#,
    )
    .unwrap();
    let mut outputs = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let o = nilfill(&["measure", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(std::fs::read(out.join("rows.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let csv = String::from_utf8(outputs.pop().unwrap()).unwrap();
    assert_eq!(csv.lines().next(), Some("t,word_len,filler,area,bound,ms"));
    assert_eq!(csv.lines().count(), 1 + 5 * 4);
}

#[test]
fn measure_reports_limit_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"presentation":"h5_commutator_form","family":{"kind":"relator-scaling","relators":[1]},
            "scales":[1,4],"fillers":["bfs"],"output":"unused","limits":{"bfs":{"max_len":64,"max_area":8,"max_nodes":100000}}}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = nilfill(&["measure", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["errors"], 1);
}

#[test]
fn central_power_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h5.json");
    let o = nilfill(&["central-power", "--base", "h3", "--n", "2", "--out", out.to_str().unwrap(), "--commutator-form"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = nilfill(&["verify", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("dimension 5, class 2, pass"));
    let o = nilfill(&["fill", "--pres", out.to_str().unwrap(), "--word", "[a1_1,a2_2]", "--method", "bfs", "--t", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn appendix_check_passes() {
    let o = nilfill(&["appendix-check"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.trim_end().ends_with("63 steps, 63 passed, 0 failed"), "{out}");
    assert!(out.lines().all(|l| !l.starts_with("FAIL")));
}
