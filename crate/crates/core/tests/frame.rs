use nalgebra::DVector;
use proptest::prelude::*;
use statgeo::expr::{Expr, Func};
use statgeo::fixture::{builtin_fixture, Fixture, Provenance};
use statgeo::frame::{constant_jets, wedge_one_two, FrameManifold};
use statgeo::point::Snapshot;
use statgeo::report::{run_checks, Sampling, Status};
use statgeo::structures::d_eta;
use statgeo::verify::frame_checks;

const P: [f64; 3] = [0.3, -0.4, 0.8];

fn dacko() -> Snapshot {
    Snapshot::new(&builtin_fixture("dacko-variant-1").unwrap(), &P).unwrap()
}

#[test]
fn frame_derivatives_on_dacko_frame() {
    let f = builtin_fixture("dacko-variant-1").unwrap();
    let m = &f.manifold;
    let e = m.frame_derivative(&m.parse_expr("exp(-t)", "test").unwrap(), 0);
    assert!((e.eval(&P).unwrap() + (-P[0]).exp()).abs() < 1e-15);
    let e = m.frame_derivative(&m.parse_expr("x", "test").unwrap(), 1);
    assert!((e.eval(&P).unwrap() - (-P[0]).exp()).abs() < 1e-15);
    assert!(m.frame_derivative(&Expr::num(4.0), 2).is_zero());
}

#[test]
fn forms_on_dacko_structure() {
    let s = dacko();
    let c = s.contact();
    assert!(d_eta(&s).amax() < 1e-15);
    let phi = s.fundamental_form();
    assert_eq!(phi[(1, 2)].v, 1.0);
    assert!(s.local.d_two_form(&phi, 0, 1, 2).abs() < 1e-15);
    let eta = s.eta();
    let pv = phi.values();
    let (e0, e1, e2) = (s.e(0), s.e(1), s.e(2));
    assert!((wedge_one_two(&eta, &pv, &e0, &e1, &e2) - 1.0 / 3.0).abs() < 1e-15);
    assert_eq!(s.local.interior_one(&c.xi, &c.eta).v, 1.0);
    assert!(s.local.interior_two(&c.xi, &phi).iter().all(|j| j.v == 0.0));
    let zero = constant_jets(&DVector::zeros(3));
    assert_eq!(s.local.interior_one(&zero, &c.eta).v, 0.0);
}

#[test]
fn lie_derivatives_on_dacko_structure() {
    let s = dacko();
    let c = s.contact();
    assert!(s.local.lie_derivative_one_form(&c.xi, &c.eta).amax() < 1e-15);
    // (L_ξ g)(E_1,E_1) = −2g(A⁰E_1,E_1) = 2
    let lg = s.local.lie_derivative_bilinear(&c.xi, &s.local.g);
    assert!((lg[(1, 1)] - 2.0).abs() < 1e-14);
    let zero = constant_jets(&DVector::zeros(3));
    assert_eq!(s.local.lie_derivative_bilinear(&zero, &s.local.g).amax(), 0.0);
}

#[test]
fn kenmotsu_model_pins_the_wedge_convention() {
    let f = builtin_fixture("kenmotsu-model").unwrap();
    for p in Sampling::default().sample(&f) {
        let s = Snapshot::new(&f, &p).unwrap();
        let phi = s.fundamental_form();
        let (eta, pv) = (s.eta(), phi.values());
        let (e0, e1, e2) = (s.e(0), s.e(1), s.e(2));
        let lhs = s.local.d_two_form(&phi, 0, 1, 2);
        assert!((lhs - 2.0 * wedge_one_two(&eta, &pv, &e0, &e1, &e2)).abs() < 1e-12);
        assert!(lhs.abs() > 0.1, "non-trivial on the model");
    }
}

#[test]
fn frame_checks_pass_on_builtins() {
    for name in statgeo::fixture::BUILTIN_NAMES {
        let r = run_checks(&builtin_fixture(name).unwrap(), &frame_checks(), &Sampling::default());
        assert!(r.checks.iter().all(|c| c.status == Status::Pass), "{name}: {:?}", r.checks);
    }
}

/// Random frame `I + small polynomial/trig perturbation` with a constant SPD metric.
fn random_frame() -> impl Strategy<Value = Fixture> {
    let coef = prop::collection::vec((-0.3..0.3f64, 0usize..3, 0usize..4), 9);
    let metric = prop::collection::vec(-0.3..0.3f64, 3);
    (coef, metric).prop_map(|(coef, m)| {
        let coords: Vec<String> = ["t", "x", "y"].iter().map(|s| s.to_string()).collect();
        let frame: Vec<Vec<Expr>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|a| {
                        let (c, v, kind) = coef[i * 3 + a];
                        let x = Expr::var(v);
                        let pert = match kind {
                            0 => x,
                            1 => Expr::call(Func::Sin, x),
                            2 => Expr::mul(x.clone(), x),
                            _ => Expr::call(Func::Exp, Expr::mul(Expr::num(0.5), x)),
                        };
                        Expr::add(Expr::num(if i == a { 1.0 } else { 0.0 }), Expr::mul(Expr::num(c), pert))
                    })
                    .collect()
            })
            .collect();
        let metric = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| {
                        let off = |a: usize, b: usize| m[a + b - 1];
                        Expr::num(if i == j { 2.0 } else { off(i, j) })
                    })
                    .collect()
            })
            .collect();
        Fixture::new("random-frame", Provenance::User, FrameManifold::new(coords, frame, metric).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, rng_seed: proptest::test_runner::RngSeed::Fixed(42), ..ProptestConfig::default() })]

    #[test]
    fn brackets_cartan_and_dd_hold_on_random_frames(f in random_frame()) {
        let sampling = Sampling { points: 4, sample_box: Some(vec![(-0.5, 0.5); 3]), ..Sampling::default() };
        let r = run_checks(&f, &frame_checks(), &sampling);
        for c in &r.checks {
            prop_assert_eq!(c.status, Status::Pass, "{} residual {:e}", c.name, c.max_residual);
        }
    }
}
