use std::path::Path;
use std::process::{Command, Output};

use statgeo::fixture::builtin_fixture;
use statgeo::report::{CheckReport, Status};
use statgeo::spec_file::{Entry, ManifoldSpec};

fn statgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_statgeo")).args(args).env_remove("STATGEO_TOL").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn report(o: &Output) -> CheckReport {
    CheckReport::from_json(&stdout(o)).unwrap()
}

fn write_spec(dir: &Path, name: &str, spec: &ManifoldSpec) -> String {
    let path = dir.join(name);
    std::fs::write(&path, spec.to_json()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn check_dacko_variant_1_passes() {
    let o = statgeo(&["check", "--builtin", "dacko-variant-1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert!(r.all_passed());
    assert_eq!(r.get("CURV-RZZ").unwrap().status, Status::HypothesisUnmet);
    assert_eq!((r.points, r.seed, r.tolerance), (20, 42, 1e-9));
}

#[test]
fn check_flat_cosymplectic_is_exact() {
    let r = report(&statgeo(&["check", "--builtin", "flat-cosymplectic", "--json"]));
    for c in r.checks.iter().filter(|c| c.status == Status::Pass) {
        assert!(c.max_residual <= 1e-12, "{}: {:e}", c.name, c.max_residual);
    }
    assert!(r.all_passed());
}

#[test]
fn corrupted_nabla_star_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let mut spec = ManifoldSpec::from_fixture(&builtin_fixture("dacko-variant-1").unwrap()).unwrap();
    spec.connections.nabla_star.as_mut().unwrap()[2][0][1] = Entry::Text("x".into());
    let path = write_spec(dir.path(), "bad.json", &spec);
    let o = statgeo(&["check", &path, "--json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(report(&o).get("DUAL-STAT1").unwrap().status, Status::Fail);
    let o = statgeo(&["check", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().any(|l| l.starts_with("FAIL") && l.contains("DUAL-STAT1")));
}

#[test]
fn input_errors_exit_two_with_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\n  \"dim\": 2,\n  \"coords\": [\"u\",]\n}\n").unwrap();
    let o = statgeo(&["check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let mut spec = ManifoldSpec::from_fixture(&builtin_fixture("flat-cosymplectic").unwrap()).unwrap();
    spec.metric[0][0] = Entry::Text("sin(".into());
    let path = write_spec(dir.path(), "field.json", &spec);
    let o = statgeo(&["classify", &path]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("metric[0][0]"), "{}", stderr(&o));

    assert_eq!(statgeo(&["check", "--builtin", "no-such-fixture"]).status.code(), Some(2));
    assert_eq!(statgeo(&["check"]).status.code(), Some(2));
    assert_eq!(statgeo(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(statgeo(&["check", "--builtin", "flat-kaehler", "--box=-1,1", "--box=0,1", "--box=0,2"]).status.code(), Some(2));
    assert_eq!(statgeo(&["table", "A", "--builtin", "flat-kaehler"]).status.code(), Some(2));
}

#[test]
fn classify_examples() {
    let text = |name: &str| stdout(&statgeo(&["classify", "--builtin", name])).trim().to_string();
    assert_eq!(text("dacko-variant-1"), "almost cosymplectic, non-normal");
    assert!(text("flat-cosymplectic").starts_with("cosymplectic"));
    assert!(text("kenmotsu-model").contains("almost Kenmotsu"));
    assert_eq!(text("flat-kaehler"), "no almost contact structure");
    let o = statgeo(&["classify", "--builtin", "dacko-variant-2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["almost_cosymplectic"]["value"], true);
    assert_eq!(v["cosymplectic"]["value"], false);
}

fn table_rows(args: &[&str]) -> Vec<(String, Vec<String>)> {
    let o = statgeo(args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    stdout(&o)
        .lines()
        .skip(2)
        .map(|l| {
            let cells: Vec<&str> = l.split_whitespace().collect();
            let split = cells.len() - 3;
            (cells[..split].join(" "), cells[split..].iter().map(|c| c.to_string()).collect())
        })
        .collect()
}

#[test]
fn table_k_on_dacko_variant_1() {
    let rows = table_rows(&["table", "K", "--builtin", "dacko-variant-1"]);
    let expected = [
        "1 0 0", "0 0 1", "0 1 0", //
        "0 0 1", "0 0 1", "1 1 0", //
        "0 1 0", "1 1 0", "0 0 1",
    ];
    assert_eq!(rows.len(), 9);
    for ((label, cells), want) in rows.iter().zip(expected) {
        assert_eq!(cells.join(" "), want, "{label}");
    }
    assert_eq!(rows[5].0, "K_E1 E2");
}

#[test]
fn table_levi_civita_on_flat_is_zero() {
    let rows = table_rows(&["table", "levi-civita", "--builtin", "flat-cosymplectic", "--at", "0.3,-0.2,0.9"]);
    assert!(rows.iter().all(|(_, c)| c.iter().all(|v| v == "0")));
}

#[test]
fn table_a_on_dacko_variant_2() {
    let rows = table_rows(&["table", "A", "--builtin", "dacko-variant-2"]);
    let a: Vec<String> = rows.iter().take(3).map(|(_, c)| c.join(" ")).collect();
    assert_eq!(a, ["0 0 0", "0 -1 0", "0 0 1"]);
    let o = statgeo(&["table", "A", "--builtin", "dacko-variant-2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"][1]["label"], "A E1");
    assert_eq!(v["rows"][1]["values"][1], -1.0);
}

#[test]
fn table_entries_keep_twelve_significant_digits() {
    let rows = table_rows(&["table", "levi-civita", "--builtin", "kenmotsu-model", "--at", "0.3,0.1,0.2"]);
    let all: Vec<&String> = rows.iter().flat_map(|(_, c)| c).collect();
    assert!(all.iter().all(|c| c.trim_start_matches('-').chars().filter(char::is_ascii_digit).count() <= 12));
}

#[test]
fn product_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("product.json");
    let o = statgeo(&["product", "--builtin", "flat-kaehler", "--lambda", "0", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut got = ManifoldSpec::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let flat = ManifoldSpec::from_fixture(&builtin_fixture("flat-cosymplectic").unwrap()).unwrap();
    got.name = flat.name.clone();
    got.coords = flat.coords.clone();
    assert_eq!(got, flat);
    let o = statgeo(&["check", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));

    let t_out = dir.path().join("t.json");
    let o = statgeo(&["product", "--builtin", "hyperbolic-kaehler", "--lambda", "t", "-o", t_out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let spec = ManifoldSpec::from_json(&std::fs::read_to_string(&t_out).unwrap()).unwrap();
    let cubic = spec.connections.cubic.expect("cubic form");
    assert_eq!(cubic[0][0][0], Entry::Text("t".into()));
    let path = t_out.to_str().unwrap();
    let rows = table_rows(&["table", "nabla", path, "--at", "0.7,0.2,-0.1"]);
    assert_eq!(rows[0].1, ["0.7", "0", "0"]);
    let rows = table_rows(&["table", "nabla-star", path, "--at", "0.7,0.2,-0.1"]);
    assert_eq!(rows[0].1, ["-0.7", "0", "0"]);

    let o = statgeo(&["product", "--builtin", "almost-kaehler-r4", "--lambda", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Kaehler"));
    assert_eq!(statgeo(&["product", "--builtin", "flat-kaehler", "--lambda", "u"]).status.code(), Some(2));
}

#[test]
fn tolerance_precedence() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_statgeo"));
        c.args(["check", "--builtin", "flat-cosymplectic", "--json", "--points", "2"]).env_remove("STATGEO_TOL");
        if let Some(v) = env {
            c.env("STATGEO_TOL", v);
        }
        if let Some(v) = flag {
            c.args(["--tol", v]);
        }
        let o = c.output().unwrap();
        (o.status.code(), CheckReport::from_json(&stdout(&o)).map(|r| r.tolerance).ok())
    };
    assert_eq!(run(None, None), (Some(0), Some(1e-9)));
    assert_eq!(run(Some("1e-4"), None), (Some(0), Some(1e-4)));
    assert_eq!(run(Some("1e-4"), Some("1e-6")), (Some(0), Some(1e-6)));
    assert_eq!(run(Some("lots"), None).0, Some(2));
}

#[test]
fn sampling_flags_are_reported() {
    let r = report(&statgeo(&["check", "--builtin", "dacko-variant-2", "--json", "--points", "4", "--seed", "9", "--box=-0.5,0.5"]));
    assert_eq!((r.points, r.seed), (4, 9));
    assert!(r.checks.iter().filter(|c| c.status == Status::Pass).all(|c| c.points_evaluated == 4));
}

#[test]
fn reports_round_trip_and_are_sorted() {
    let text = stdout(&statgeo(&["check", "--builtin", "product-hyperbolic", "--json"]));
    let r = CheckReport::from_json(&text).unwrap();
    assert_eq!(r.to_json().trim(), text.trim());
    assert!(r.checks.windows(2).all(|w| w[0].name < w[1].name));
}
