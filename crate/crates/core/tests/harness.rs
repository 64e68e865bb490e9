use std::collections::BTreeMap;

use nilfill::harness::*;

fn config(pres: &str, family: WordFamily, scales: Vec<usize>, fillers: Vec<FillerKind>) -> ExperimentConfig {
    ExperimentConfig {
        presentation: pres.into(),
        family,
        scales,
        fillers,
        word_fillers: BTreeMap::new(),
        limits: Limits::default(),
        output: None,
        seed: 7,
        record_time: false,
    }
}

fn all_relators() -> WordFamily {
    WordFamily::RelatorScaling { relators: None }
}

#[test]
fn h5_shuffle_exponent_is_two() {
    let cfg = config("h5_commutator_form", all_relators(), vec![1, 2, 4, 8, 16, 32, 64], vec![FillerKind::Shuffle]);
    let report = run_experiment(&cfg).unwrap();
    assert_eq!(report.errors, 0);
    assert_eq!(report.rows.len(), 5 * 7);
    for s in &report.series {
        let fit = s.top_half.unwrap();
        assert!((1.95..=2.05).contains(&fit.slope), "{}: {}", s.word_text, fit.slope);
    }
    for r in &report.rows {
        assert!(r.area.unwrap() as u128 <= r.bound.unwrap());
    }
}

#[test]
fn csv_is_deterministic() {
    let cfg = config(
        "h5_commutator_form",
        all_relators(),
        vec![2, 4, 8],
        vec![FillerKind::Shuffle, FillerKind::Mainscale, FillerKind::Standard],
    );
    let a = run_experiment(&cfg).unwrap();
    let b = run_experiment(&cfg).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    assert!(a.to_csv().starts_with("t,word_len,filler,area,bound,ms\n"));
    let dir = std::env::temp_dir().join(format!("nilfill-harness-{}", std::process::id()));
    a.write(&dir).unwrap();
    assert_eq!(std::fs::read_to_string(dir.join("rows.csv")).unwrap(), b.to_csv());
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["errors"], 0);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn mainscale_series_reports_constants() {
    let family = WordFamily::RelatorScaling { relators: Some(vec![0]) };
    let cfg = config("h5_commutator_form", family, vec![4, 8, 16, 32], vec![FillerKind::Mainscale]);
    let report = run_experiment(&cfg).unwrap();
    let s = &report.series[0];
    assert!(s.c6.unwrap() > 0 && s.max_segment.unwrap() > 0);
    assert!(s.top_half.unwrap().slope <= 2.1);
}

#[test]
fn threefold_family_has_exponent_three() {
    let file = std::env::temp_dir().join(format!("nilfill-threefold-{}.json", std::process::id()));
    let pres = r#"{"generators":["a","b","c"],"relators":["[[a,b],c]","[[a,b],a]","[[a,b],b]"]}"#;
    std::fs::write(&file, pres).unwrap();
    let family = WordFamily::RelatorScaling { relators: Some(vec![0]) };
    let cfg = config(file.to_str().unwrap(), family, vec![1, 2, 4, 8, 16], vec![FillerKind::Kfold]);
    let report = run_experiment(&cfg).unwrap();
    std::fs::remove_file(file).unwrap();
    let areas: Vec<u64> = report.rows.iter().map(|r| r.area.unwrap()).collect();
    let fit = report.series[0].top_half.unwrap();
    assert!((fit.slope - 3.0).abs() < 0.3, "{areas:?} {}", fit.slope);
}

#[test]
fn filler_failures_become_error_rows() {
    // relator 0 of h5_raw is a product of two commutators, so the plain
    // shuffle does not apply
    let cfg = config("h5_raw", all_relators(), vec![1, 2], vec![FillerKind::Shuffle]);
    let report = run_experiment(&cfg).unwrap();
    assert_eq!(report.errors, 2);
    assert!(report.rows.iter().filter(|r| r.word == 0).all(|r| r.area.is_none() && r.error.is_some()));
    assert_eq!(report.summary_json()["failed_rows"].as_array().unwrap().len(), 2);
}

#[test]
fn commutator_power_family() {
    let family = WordFamily::CommutatorPower { x: "a1".into(), y: "b1".into() };
    let cfg = config("h5_commutator_form", family, vec![1, 2, 3], vec![FillerKind::Shuffle, FillerKind::Bfs]);
    let report = run_experiment(&cfg).unwrap();
    let shuffle: Vec<u64> =
        report.rows.iter().filter(|r| r.filler == FillerKind::Shuffle).map(|r| r.area.unwrap()).collect();
    assert_eq!(shuffle, vec![1, 4, 9]);
    let bfs: Vec<u64> = report.rows.iter().filter(|r| r.filler == FillerKind::Bfs).map(|r| r.area.unwrap()).collect();
    assert_eq!(bfs, vec![1, 4, 9]);
}

#[test]
fn per_word_fillers_and_custom_file() {
    let file = std::env::temp_dir().join(format!("nilfill-words-{}.txt", std::process::id()));
    std::fs::write(&file, "# identity words\n[a1,b1^2]\n[a2,b2^3]\n").unwrap();
    let mut cfg = config(
        "h5_commutator_form",
        WordFamily::Custom { words: vec![], file: Some(file.to_str().unwrap().into()) },
        vec![1, 2],
        vec![FillerKind::Bfs],
    );
    cfg.word_fillers.insert(1, vec![FillerKind::Mainscale]);
    let report = run_experiment(&cfg).unwrap();
    std::fs::remove_file(file).unwrap();
    assert_eq!(report.errors, 0, "{:?}", report.summary_json()["failed_rows"]);
    assert!(report.rows.iter().all(|r| (r.word == 0) == (r.filler == FillerKind::Bfs)));
    let areas: Vec<u64> = report.rows.iter().filter(|r| r.word == 0).map(|r| r.area.unwrap()).collect();
    assert_eq!(areas, vec![2, 8]);
}
