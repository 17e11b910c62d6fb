use krull::report::{Case, Format, PrecisionProfile, VerificationReport, SCHEMA_VERSION};
use krull::suites::{is_registered, run_suite, SuiteParams, SUITES};
use krull::Error;

fn sample() -> VerificationReport {
    let mut r = VerificationReport::new(
        "demo",
        7,
        PrecisionProfile { precision: Some(12), depth: None, comparison: "exact".into() },
    );
    r.cases.push(Case::compare("first", &[("p", "3".into())], "2", "2"));
    r.cases.push(Case::compare("second lemma", &[("p", "5".into()), ("q", "2".into())], "4", "3"));
    r
}

#[test]
fn case_pass_is_equality() {
    let r = sample();
    assert!(r.cases[0].pass);
    assert!(!r.cases[1].pass);
    assert!(!r.all_pass());
}

#[test]
fn json_round_trips_and_is_versioned() {
    let r = sample();
    let js = r.to_json();
    assert!(js.ends_with('\n'));
    assert!(js.contains(&format!("\"schema\": {SCHEMA_VERSION}")));
    assert_eq!(VerificationReport::from_json(&js).unwrap(), r);
    let other = js.replace("\"schema\": 1", "\"schema\": 99");
    assert!(matches!(VerificationReport::from_json(&other), Err(Error::Parse { .. })));
    assert!(VerificationReport::from_json("{").is_err());
}

#[test]
fn text_has_one_row_per_case() {
    let r = sample();
    let text = r.render(Format::Text);
    let lines: Vec<&str> = text.lines().collect();
    // title, header, one row per case, summary
    assert_eq!(lines.len(), 2 + r.cases.len() + 1);
    assert!(lines[2].starts_with("first") && lines[2].contains("PASS"));
    assert!(lines[3].starts_with("second lemma") && lines[3].contains("FAIL"));
    assert_eq!(*lines.last().unwrap(), "1/2 cases passed");
    // aligned: the expected column starts at the same offset on every row
    let col = lines[1].find("expected").unwrap();
    assert_eq!(&lines[2][col..col + 1], "2");
    assert_eq!(&lines[3][col..col + 1], "4");
}

#[test]
fn emit_writes_files_and_reports_io_context() {
    let r = sample();
    let dir = std::env::temp_dir().join(format!("krull_report_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    r.emit(Format::Json, Some(&path)).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), r.to_json());
    let bad = dir.join("missing").join("r.json");
    match r.emit(Format::Text, Some(&bad)) {
        Err(Error::Io(msg)) => assert!(msg.contains("missing")),
        other => panic!("{other:?}"),
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn every_registered_suite_passes_with_defaults() {
    assert_eq!(SUITES.len(), 11);
    for (id, _) in SUITES {
        let r = run_suite(id, &SuiteParams::default()).unwrap();
        assert_eq!(&r.suite_id, id);
        assert!(!r.cases.is_empty(), "{id}");
        assert!(r.all_pass(), "{id}:\n{}", r.to_text());
        assert!(r.cases.iter().all(|c| c.elapsed_ms == 0));
    }
}

#[test]
fn suites_are_reproducible() {
    let params = SuiteParams { seed: 42, ..Default::default() };
    for id in ["standard-decomposition", "jr-formula", "tilt-iso"] {
        let a = run_suite(id, &params).unwrap().to_json();
        let b = run_suite(id, &params).unwrap().to_json();
        assert_eq!(a, b, "{id}");
    }
}

#[test]
fn suite_examples() {
    let r = run_suite("residue-p-over-pi", &SuiteParams::default()).unwrap();
    assert_eq!(r.cases.len(), 3);
    let computed: Vec<&str> = r.cases.iter().map(|c| c.computed.as_str()).collect();
    assert_eq!(computed, ["2", "4", "6"]);

    let r = run_suite("norm-counterexample", &SuiteParams { p: Some(2), ..Default::default() }).unwrap();
    assert!(r.all_pass());
    assert!(r.cases.iter().any(|c| c.computed == "<2,3> = {1,2,3,6}"));
    assert!(r.cases.iter().any(|c| c.lemma.contains("-1") && c.computed == "false"));
    assert!(r.cases.iter().all(|c| c.parameters["extension"].starts_with("Qp(2)")));

    assert!(matches!(run_suite("unknown", &SuiteParams::default()), Err(Error::UnknownSuite(_))));
    assert!(!is_registered("unknown"));
}

#[test]
fn field_overrides() {
    let p = |field: &str, q: Option<u64>| SuiteParams { field: Some(field.into()), q, ..Default::default() };
    // tame ranks: 2 iff q | p^f - 1
    for (field, q, dim) in [("Qp(7)", 3, "2"), ("Qp(7)", 5, "1"), ("Qp(5)[unram,2]", 3, "2")] {
        let r = run_suite("degree-lemma", &p(field, Some(q))).unwrap();
        assert_eq!(r.cases[0].computed, dim, "{field} q={q}");
        assert!(r.all_pass());
    }
    let r = run_suite("semiperfect", &p("Qp(5)[zeta_p]((t))", None)).unwrap();
    assert!(r.all_pass() && r.cases[0].computed == "false");
    assert!(matches!(
        run_suite("degree-lemma", &p("Qp(3", None)),
        Err(Error::Parse { .. })
    ));
    assert!(matches!(run_suite("tilt-iso", &p("Qp(3)", None)), Err(Error::NotApplicable(_))));
}
