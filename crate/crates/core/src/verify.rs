//! Suite orchestration, frame-calculus self-checks and hypothesis gates.

use nalgebra::DVector;

use crate::expr::{Expr, Func};
use crate::fixture::Fixture;
use crate::frame::{TensorField, Valence};
use crate::jet::Jet;
use crate::point::{Snapshot, Which};
use crate::report::{rel, rel_vec, run_checks, CheckDef, CheckReport, Gate, Sampling};
use crate::structures::{d_eta, d_form_norm, k_xi_phi_norm, lc_parallel_defect, zero_residual};

/// Residual of a gate's hypothesis at one point; zero means the hypothesis holds.
pub fn gate_residual(gate: Gate, s: &Snapshot) -> f64 {
    match gate {
        Gate::None | Gate::Contact | Gate::Hermitian | Gate::SkewOperator => 0.0,
        Gate::AlmostKaehler => d_form_norm(s, &s.fundamental_form_of(hermitian(s))),
        Gate::Kaehler | Gate::Holomorphic => lc_parallel_defect(s, hermitian(s)),
        Gate::AlmostCosymplectic => almost_cosymplectic(s),
        Gate::Cosymplectic => almost_cosymplectic(s).max(lc_parallel_defect(s, &s.contact().phi)),
        Gate::KaehlerLeaves => almost_cosymplectic(s).max(crate::cosymplectic::leaves_criterion(s)),
        Gate::XiHypotheses => {
            let a_xi = s.a_operator(Which::Nabla).values() * s.xi();
            almost_cosymplectic(s).max(k_xi_phi_norm(s)).max(rel_vec(&a_xi, &DVector::zeros(s.n())))
        }
        Gate::SelfDual => (0..s.n()).map(|i| zero_residual(&s.k(i))).fold(0.0, f64::max),
    }
}

fn hermitian(s: &Snapshot) -> &crate::jet::JetMatrix {
    s.hermitian.as_ref().expect("gate checked for a Hermitian structure")
}

fn almost_cosymplectic(s: &Snapshot) -> f64 {
    zero_residual(&d_eta(s)).max(d_form_norm(s, &s.fundamental_form()))
}

/// Generic probe fields in the coordinates: a 1-form and a vector field.
fn probes(n: usize) -> (TensorField, TensorField) {
    let x = |i: usize| Expr::var(i % n);
    let form = (0..n)
        .map(|j| Expr::add(Expr::mul(Expr::call(Func::Sin, Expr::add(x(j), Expr::num(0.3 * j as f64))), x(j + 1)), Expr::num(j as f64)))
        .collect();
    let field = (0..n)
        .map(|i| Expr::add(Expr::mul(Expr::call(Func::Cos, x(i + 2)), x(i)), Expr::num(1.0)))
        .collect();
    (
        TensorField::new(Valence::Covector, form, n).expect("probe form"),
        TensorField::new(Valence::Vector, field, n).expect("probe field"),
    )
}

fn max_nan(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0, |a, v| if v.is_nan() { f64::INFINITY } else { a.max(v) })
}

pub const CARTAN_NOTE: &str = "with d normalized by 1/(p+1) the Cartan formula reads L_X w = d(i_X w) + 2 i_X dw";

/// Self-checks of the frame calculus on every fixture.
pub fn frame_checks() -> Vec<CheckDef> {
    vec![
        CheckDef::new("FRAME-ANTISYM", Gate::None, |s| {
            let n = s.n();
            max_nan((0..n * n * n).map(|f| {
                let (i, j, k) = (f / (n * n), (f / n) % n, f % n);
                rel(s.local.c(i, j, k).v, -s.local.c(j, i, k).v)
            }))
        }),
        CheckDef::new("FRAME-JACOBI", Gate::None, |s| {
            let n = s.n();
            let l = &s.local;
            // [[E_i,E_j],E_k] = Σ_l c^l_ij [E_l,E_k] − E_k(c^m_ij) E_m
            let nested = |i: usize, j: usize, k: usize| -> DVector<f64> {
                DVector::from_fn(n, |m, _| {
                    (0..n).map(|p| l.c(i, j, p).v * l.c(p, k, m).v).sum::<f64>() - l.deriv(&l.c(i, j, m), k)
                })
            };
            max_nan((0..n * n * n).map(|f| {
                let (i, j, k) = (f / (n * n), (f / n) % n, f % n);
                let sum = nested(i, j, k) + nested(j, k, i) + nested(k, i, j);
                rel_vec(&sum, &DVector::zeros(n))
            }))
        }),
        CheckDef::new("FORM-CARTAN", Gate::None, |s| {
            let n = s.n();
            let (form, field) = probes(n);
            let l = &s.local;
            let (Ok(w), Ok(x)) = (form.jets(l), field.jets(l)) else { return f64::INFINITY };
            let lie = l.lie_derivative_one_form(&x, &w);
            let iw: Jet = l.interior_one(&x, &w);
            let dw = l.d_one_form(&w);
            let xv = DVector::from_iterator(n, x.iter().map(|j| j.v));
            let rhs = DVector::from_fn(n, |j, _| l.deriv(&iw, j) + 2.0 * (0..n).map(|i| xv[i] * dw[(i, j)]).sum::<f64>());
            rel_vec(&lie, &rhs)
        })
        .with_note(CARTAN_NOTE),
        CheckDef::new("FORM-DD", Gate::None, |s| {
            let n = s.n();
            let (form, _) = probes(n);
            let Ok(dw) = s.local.d_one_form_jets(&form) else { return f64::INFINITY };
            max_nan((0..n * n * n).map(|f| rel(s.local.d_two_form(&dw, f / (n * n), (f / n) % n, f % n), 0.0)))
        }),
    ]
}

/// Every check of every suite.
pub fn all_checks() -> Vec<CheckDef> {
    let mut out = frame_checks();
    out.extend(crate::statistical::dualistic_checks());
    out.extend(crate::structures::identity_checks());
    out.extend(crate::cosymplectic::proposition_checks());
    out.extend(crate::cosymplectic::leaves_checks());
    out.extend(crate::curvature::curvature_checks());
    out
}

/// Runs all applicable suites; checks needing an absent structure are skipped.
pub fn check_fixture(fixture: &Fixture, sampling: &Sampling) -> CheckReport {
    run_checks(fixture, &all_checks(), sampling)
}
