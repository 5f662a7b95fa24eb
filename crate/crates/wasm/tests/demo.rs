use statgeo::fixture::builtin_fixture;
use statgeo::report::CheckReport;
use statgeo::spec_file::ManifoldSpec;
use statgeo_wasm::{builtins, check_report, classification, table_json, tables};

#[test]
fn check_builtin_and_spec_agree() {
    let a = CheckReport::from_json(&check_report("dacko-variant-2", 5, 42).unwrap()).unwrap();
    assert!(a.all_passed());
    assert_eq!(a.points, 5);
    let spec = ManifoldSpec::from_fixture(&builtin_fixture("dacko-variant-2").unwrap()).unwrap().to_json();
    let b = CheckReport::from_json(&check_report(&spec, 5, 42).unwrap()).unwrap();
    let names = |r: &CheckReport| r.checks.iter().map(|c| (c.name.clone(), c.status)).collect::<Vec<_>>();
    assert_eq!(names(&a), names(&b));
}

#[test]
fn classify_returns_summary() {
    let v: serde_json::Value = serde_json::from_str(&classification("dacko-variant-1").unwrap()).unwrap();
    assert_eq!(v["summary"], "almost cosymplectic, non-normal");
    assert_eq!(classification("flat-kaehler").unwrap(), "null");
}

#[test]
fn table_of_a_on_dacko_variant_2() {
    let v: serde_json::Value = serde_json::from_str(&table_json("dacko-variant-2", "A").unwrap()).unwrap();
    assert_eq!(v["rows"][1]["values"], serde_json::json!([0.0, -1.0, 0.0]));
    assert_eq!(v["point"], serde_json::json!([0.0, 0.0, 0.0]));
}

#[test]
fn errors_are_messages() {
    assert!(check_report("nope", 5, 1).unwrap_err().contains("unknown builtin"));
    assert!(check_report("dacko-variant-1", 0, 1).is_err());
    assert!(table_json("dacko-variant-1", "Q").unwrap_err().contains("unknown table"));
    assert!(classification("{\"dim\": 2").unwrap_err().contains("line 1"));
    assert_eq!(builtins().len(), 9);
    assert_eq!(tables()[3], "K");
}
