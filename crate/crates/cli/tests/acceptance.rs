//! Acceptance criteria, one printed line each. Runs without the test harness
//! so the lines always appear; exits non-zero when any criterion fails.

use std::process::Command;

use statgeo::connection::{coefficients_at, Christoffel};
use statgeo::cosymplectic::product_construct;
use statgeo::curvature::{curvature_suite, nabla_a, nabla_a_applied, ricci, xi_hypotheses};
use statgeo::expr::{parse, Expr, Func};
use statgeo::fixture::{builtin_fixture, Fixture};
use statgeo::point::{Snapshot, Which};
use statgeo::report::{sample_points, CheckReport, Sampling, Status};
use statgeo::statistical::{check_dualistic, conjugate, difference_tensor, levi_civita};
use statgeo::structures::classify;
use statgeo::verify::check_fixture;

const EXACT_TOL: f64 = 1e-12;
const CHECK_TOL: f64 = 1e-9;
const FD_TOL: f64 = 1e-6;
const FD_STEP: f64 = 1e-5;
const RANDOM_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];
const POINTS: usize = 20;

/// Frame components of `∇_{E_i}E_j` as `rows[i][j]`, written out from the
/// example's tables.
type Rows = [[[f64; 3]; 3]; 3];

const LEVI_CIVITA: Rows = [
    [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
    [[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
    [[0.0, 0.0, -1.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]],
];
const NABLA: Rows = [
    [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]],
    [[0.0, 1.0, 1.0], [-1.0, 0.0, 1.0], [1.0, 1.0, 0.0]],
    [[0.0, 1.0, -1.0], [1.0, 1.0, 0.0], [1.0, 0.0, 1.0]],
];
const NABLA_STAR: Rows = [
    [[-1.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, -1.0, 0.0]],
    [[0.0, 1.0, -1.0], [-1.0, 0.0, -1.0], [-1.0, -1.0, 0.0]],
    [[0.0, -1.0, -1.0], [-1.0, -1.0, 0.0], [1.0, 0.0, -1.0]],
];
const K: Rows = [
    [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]],
    [[0.0, 0.0, 1.0], [0.0, 0.0, 1.0], [1.0, 1.0, 0.0]],
    [[0.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn table_residual(c: &Christoffel, rows: &Rows) -> f64 {
    let mut worst = 0.0_f64;
    for (i, block) in rows.iter().enumerate() {
        for (j, row) in block.iter().enumerate() {
            for (k, want) in row.iter().enumerate() {
                worst = worst.max((c.get(i, j, k) - want).abs());
            }
        }
    }
    worst
}

fn table_reproduction() -> Outcome {
    let f = builtin_fixture("dacko-variant-1").unwrap();
    let m = &f.manifold;
    let (mut lc, mut conj, mut k) = (0.0_f64, 0.0_f64, 0.0_f64);
    for p in sample_points(&f.sample_box, POINTS, 42) {
        let local = m.local(&p).unwrap();
        let lc_table = coefficients_at(m, &levi_civita(m), &p).unwrap();
        lc = lc.max(table_residual(&lc_table, &LEVI_CIVITA));
        let from_nabla = statgeo::connection::Connection::from_rows(&NABLA);
        conj = conj.max(table_residual(&coefficients_at(m, &conjugate(m, &from_nabla), &p).unwrap(), &NABLA_STAR));
        k = k.max(table_residual(&difference_tensor(&local, &from_nabla, &levi_civita(m)).unwrap(), &K));
    }
    outcome(
        lc <= EXACT_TOL && conj <= CHECK_TOL && k <= CHECK_TOL,
        format!("levi-civita {lc:.1e} <= {EXACT_TOL:e}, conjugate {conj:.1e} <= {CHECK_TOL:e}, K {k:.1e} <= {CHECK_TOL:e}"),
    )
}

fn max_passed(r: &CheckReport) -> f64 {
    r.checks.iter().filter(|c| c.status == Status::Pass).map(|c| c.max_residual).fold(0.0, f64::max)
}

fn dualistic_validity() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for name in ["dacko-variant-1", "dacko-variant-2"] {
        let f = builtin_fixture(name).unwrap();
        let r = check_dualistic(&f.manifold, &f.nabla, &f.nabla_star, &Sampling::default());
        let ok = r.checks.iter().all(|c| c.status == Status::Pass && c.points_evaluated == POINTS);
        pass &= ok && max_passed(&r) <= CHECK_TOL;
        details.push(format!("{name} {} checks max {:.1e}", r.checks.len(), max_passed(&r)));
    }
    outcome(pass, details.join(", "))
}

fn product_fixture(seed: u64) -> Fixture {
    let base = builtin_fixture("hyperbolic-kaehler").unwrap().with_random_statistical(seed);
    product_construct(&base, &Expr::call(Func::Sin, Expr::var(0))).unwrap()
}

fn identity_catalog() -> Outcome {
    let mut fixtures: Vec<Fixture> = Vec::new();
    for name in ["dacko-variant-1", "dacko-variant-2", "flat-cosymplectic"] {
        let f = builtin_fixture(name).unwrap();
        fixtures.extend(RANDOM_SEEDS.iter().map(|s| f.with_random_statistical(*s)));
        fixtures.push(f);
    }
    fixtures.extend(RANDOM_SEEDS.iter().map(|s| product_fixture(*s)));
    let (mut passed, mut failed, mut worst) = (0, Vec::new(), 0.0_f64);
    for f in &fixtures {
        let r = check_fixture(f, &Sampling::default());
        passed += r.checks.iter().filter(|c| c.status == Status::Pass).count();
        failed.extend(r.failures().map(|c| format!("{}:{}", f.name, c.name)));
        worst = worst.max(max_passed(&r));
    }
    outcome(
        failed.is_empty() && worst <= CHECK_TOL && passed > 0,
        format!("{} fixtures, {passed} passing checks, max {worst:.1e}, failures {failed:?}", fixtures.len()),
    )
}

/// `S(ξ,ξ)` from frame curvature directly; `−tr(A² + A*²)` from the `A` operators.
fn curvature_theorem() -> Outcome {
    let f = builtin_fixture("dacko-variant-2").unwrap();
    let (mut hyp, mut sum_err, mut trace_err) = (0.0_f64, 0.0_f64, 0.0_f64);
    for p in sample_points(&f.sample_box, POINTS, 42) {
        let s = Snapshot::new(&f, &p).unwrap();
        let (k_xi_phi, a_xi) = xi_hypotheses(&s);
        hyp = hyp.max(k_xi_phi).max(a_xi);
        let xi = s.xi();
        let sum = ricci(&s, Which::Nabla, &xi, &xi) + ricci(&s, Which::Star, &xi, &xi);
        let (a, a_star) = (s.a_operator(Which::Nabla).values(), s.a_operator(Which::Star).values());
        let trace = -((&a * &a).trace() + (&a_star * &a_star).trace());
        sum_err = sum_err.max((sum + 4.0).abs());
        trace_err = trace_err.max((trace + 4.0).abs());
    }
    let r = curvature_suite(&f, &Sampling::default());
    let rzz = r.get("CURV-RZZ").unwrap();
    let pass = hyp <= EXACT_TOL && rzz.status == Status::Pass && rzz.max_residual <= CHECK_TOL && sum_err <= CHECK_TOL && trace_err <= CHECK_TOL;
    outcome(
        pass,
        format!(
            "hypotheses {hyp:.1e} <= {EXACT_TOL:e}, RZZ {:?} {:.1e}, |S+S*+4| {sum_err:.1e}, |tr+4| {trace_err:.1e}",
            rzz.status, rzz.max_residual
        ),
    )
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_statgeo")).args(args).env_remove("STATGEO_TOL").output().unwrap()
}

fn hypothesis_gating() -> Outcome {
    let o = cli(&["check", "--builtin", "dacko-variant-1", "--json"]);
    let r = CheckReport::from_json(&String::from_utf8_lossy(&o.stdout)).unwrap();
    let rzz = r.get("CURV-RZZ").unwrap().status;
    let szz = r.get("CURV-SZZ").unwrap().status;
    outcome(
        rzz == Status::HypothesisUnmet && szz == Status::HypothesisUnmet && o.status.code() == Some(0),
        format!("CURV-RZZ {rzz:?}, CURV-SZZ {szz:?}, exit {:?}", o.status.code()),
    )
}

fn classification() -> Outcome {
    let s = Sampling::default();
    let class = |name: &str| classify(&builtin_fixture(name).unwrap(), &s).unwrap().unwrap();
    let (d1, d2) = (class("dacko-variant-1"), class("dacko-variant-2"));
    let dacko = [d1, d2].iter().all(|c| c.almost_cosymplectic.value && !c.cosymplectic.value);
    let flat = class("flat-cosymplectic").cosymplectic.value;
    let kenmotsu = class("kenmotsu-model").almost_kenmotsu.value;
    outcome(dacko && flat && kenmotsu, format!("dacko {dacko}, flat cosymplectic {flat}, almost Kenmotsu {kenmotsu}"))
}

/// Fixed family of 100 smooth expressions in three variables.
fn expressions() -> Vec<String> {
    let templates = [
        "sin({a}*x)*exp(y)",
        "cos(x*y+{a})*z",
        "exp(-{a}*x^2)*sin(z)",
        "y/({a}^2+x^2+1)",
        "log(2+{a}*y^2)+x*z",
        "(3+{a}*z+x^2)^0.5",
        "sinh({a}*x-y)/cosh({a}*x-y)*cos(z)",
        "x^3*y-{a}*z^2*x",
        "exp(sin({a}*y))/(2+cos(x))",
        "sinh({a}*z)*cosh(x*y)",
    ];
    let coefficients = ["0.3", "0.5", "0.7", "1", "1.3", "1.7", "2", "2.5", "-0.4", "-1.1"];
    templates.iter().flat_map(|t| coefficients.iter().map(move |a| t.replace("{a}", a))).collect()
}

fn oracle_cross_checks() -> Outcome {
    let coords: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    let exprs = expressions();
    let points = sample_points(&[(-0.8, 0.8); 3], 5, 42);
    let mut fd = 0.0_f64;
    for text in &exprs {
        let e = parse(text, &coords).unwrap();
        for p in &points {
            for v in 0..3 {
                let (mut hi, mut lo) = (p.clone(), p.clone());
                hi[v] += FD_STEP;
                lo[v] -= FD_STEP;
                let numeric = (e.eval(&hi).unwrap() - e.eval(&lo).unwrap()) / (2.0 * FD_STEP);
                let exact = e.diff(v).eval(p).unwrap();
                fd = fd.max((exact - numeric).abs() / (1.0 + exact.abs()));
            }
        }
    }
    let mut tie = 0.0_f64;
    let mut involution = 0.0_f64;
    for (name, seed) in [("dacko-variant-1", 3), ("kenmotsu-model", 4), ("sasakian-heisenberg", 5)] {
        let f = builtin_fixture(name).unwrap().with_random_statistical(seed);
        for p in sample_points(&f.sample_box, POINTS, 42) {
            let s = Snapshot::new(&f, &p).unwrap();
            let x = 0.3 * s.e(0) - 1.2 * s.e(1) + 0.7 * s.e(2);
            let y = -0.5 * s.e(0) + 0.4 * s.e(1) + 1.1 * s.e(2);
            for by in [Which::Nabla, Which::Star, Which::LeviCivita] {
                for of in [Which::Nabla, Which::Star] {
                    let a = nabla_a(&s, by, of, &x) * &y;
                    let b = nabla_a_applied(&s, by, of, &x, &y);
                    tie = tie.max((a - b).amax());
                }
            }
        }
        let r = check_dualistic(&f.manifold, &f.nabla, &f.nabla_star, &Sampling::default());
        involution = involution.max(r.get("DUAL-INVOLUTION").unwrap().max_residual);
    }
    outcome(
        exprs.len() == 100 && fd <= FD_TOL && tie <= CHECK_TOL && involution <= CHECK_TOL,
        format!(
            "{} expressions fd {fd:.1e} <= {FD_TOL:e}, nabla A tie {tie:.1e}, involution {involution:.1e}",
            exprs.len()
        ),
    )
}

fn determinism() -> Outcome {
    let mut identical = true;
    let names = ["dacko-variant-1", "product-hyperbolic", "almost-kaehler-r4"];
    for name in names {
        let args = ["check", "--builtin", name, "--json", "--seed", "7"];
        let (a, b) = (cli(&args), cli(&args));
        identical &= !a.stdout.is_empty() && a.stdout == b.stdout;
    }
    outcome(identical, format!("{} fixtures, two runs each byte-identical: {identical}", names.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("table reproduction", table_reproduction),
        ("dualistic validity", dualistic_validity),
        ("identity catalog", identity_catalog),
        ("curvature theorem", curvature_theorem),
        ("hypothesis gating", hypothesis_gating),
        ("classification", classification),
        ("oracle cross-checks", oracle_cross_checks),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failures += usize::from(!o.pass);
        println!("acceptance {} {name}: {} ({})", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
