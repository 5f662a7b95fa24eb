//! Almost cosymplectic statistical manifolds: the `A` operators, the
//! proposition suite, the Kaehler-leaves criterion and the `ℝ × N` product.

use nalgebra::{DMatrix, DVector};

use crate::connection::Connection;
use crate::error::{GeometryError, Result};
use crate::expr::Expr;
use crate::fixture::{AlmostContactStructure, Fixture, Provenance};
use crate::frame::{Field, FrameManifold};
use crate::point::{along, Snapshot, Which};
use crate::report::{rel, rel_mat, rel_vec, run_checks, CheckDef, CheckReport, Gate, Sampling};
use crate::structures::{basis, cyclic_residual, k_anti, k_op, lower, nabla_form, nabla_op, per_x};

pub use crate::fixture::builtin_fixture;

fn shift(e: &Expr) -> Expr {
    e.remap_vars(&|v| v + 1)
}

/// Embeds a connection on `N` into `ℝ × N` with `∇_{∂t}∂t = λ ∂t` and every
/// other coefficient involving `∂t` zero.
fn embed(conn: &Connection, n: usize, lambda: &Expr) -> Result<Connection> {
    let m = n + 1;
    let cubic_with = |base: Option<&[Field]>, c000: Expr| -> Vec<Expr> {
        let mut out = vec![Expr::zero(); m * m * m];
        out[0] = c000;
        if let Some(base) = base {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        out[((i + 1) * m + j + 1) * m + k + 1] = shift(base[(i * n + j) * n + k].expr());
                    }
                }
            }
        }
        out
    };
    Ok(match conn {
        Connection::Table(fields) => Connection::table(cubic_with(Some(fields), lambda.clone()), m)?,
        Connection::LeviCivita => Connection::cubic(cubic_with(None, lambda.clone()), m, 1.0)?,
        Connection::Cubic { cubic, sign } => {
            let c000 = Expr::mul(Expr::num(*sign), lambda.clone());
            Connection::cubic(cubic_with(Some(cubic), c000), m, *sign)?
        }
        // conjugation flips the sign of the ∂t coefficient
        Connection::Conjugate(inner) => embed(inner, n, &Expr::neg(lambda.clone()))?.conjugate(),
    })
}

/// `max |∇⁰J|` over the default sample points of a Hermitian fixture.
fn kaehler_defect(base: &Fixture) -> Result<f64> {
    let mut worst = 0.0_f64;
    for p in Sampling::default().sample(base) {
        let s = Snapshot::new(base, &p)?;
        let j = s.hermitian.as_ref().expect("hermitian checked");
        worst = worst.max(crate::structures::lc_parallel_defect(&s, j));
    }
    Ok(worst)
}

/// Builds the cosymplectic statistical manifold `ℝ × N` from a Kaehler
/// statistical manifold `N` and a function `λ(t)` (variable index 0).
pub fn product_construct(base: &Fixture, lambda: &Expr) -> Result<Fixture> {
    let hermitian = base
        .hermitian
        .as_ref()
        .ok_or_else(|| GeometryError::Invalid("product base needs an almost Hermitian structure".into()))?;
    if !base.flags.kaehler {
        return Err(GeometryError::Invalid(format!("product base `{}` is not flagged Kaehler", base.name)));
    }
    let defect = kaehler_defect(base)?;
    if defect > crate::report::DEFAULT_TOLERANCE {
        return Err(GeometryError::Invalid(format!(
            "product base `{}` is not Kaehler: max |nabla0 J| residual {defect:.3e}",
            base.name
        )));
    }
    if lambda.max_var().is_some_and(|v| v > 0) {
        return Err(GeometryError::Invalid("lambda may only depend on t".into()));
    }
    let n = base.dim();
    let m = n + 1;
    let base_coords = base.manifold.coords();
    let mut t_name = "t".to_string();
    while base_coords.contains(&t_name) {
        t_name.push('\'');
    }
    let mut coords = vec![t_name];
    coords.extend(base_coords.iter().cloned());

    let block = |f: &dyn Fn(usize, usize) -> Expr| -> Vec<Vec<Expr>> {
        (0..m)
            .map(|i| {
                (0..m)
                    .map(|a| match (i, a) {
                        (0, 0) => Expr::one(),
                        (0, _) | (_, 0) => Expr::zero(),
                        _ => shift(&f(i - 1, a - 1)),
                    })
                    .collect()
            })
            .collect()
    };
    let frame = block(&|i, a| base.manifold.frame_expr(i, a).clone());
    let metric = block(&|i, j| base.manifold.metric_expr(i, j).clone());
    let manifold = FrameManifold::new(coords, frame, metric)?;

    let j = hermitian.j.exprs();
    let mut phi = block(&|k, l| j[k * n + l].clone());
    phi[0][0] = Expr::zero();
    let e0: Vec<Expr> = (0..m).map(|k| if k == 0 { Expr::one() } else { Expr::zero() }).collect();
    let contact = AlmostContactStructure::new(phi, e0.clone(), e0, m)?;

    let mut f = Fixture::new(&format!("R x {}", base.name), Provenance::Product, manifold);
    f.contact = Some(contact);
    f.nabla = embed(&base.nabla, n, lambda)?;
    f.nabla_star = embed(&base.nabla_star, n, &Expr::neg(lambda.clone()))?;
    f.sample_box = std::iter::once((-1.0, 1.0)).chain(base.sample_box.iter().copied()).collect();
    Ok(f)
}

/// `A`, `A*`, `A⁰` at a point, with `AX = −∇_Xξ`.
#[derive(Debug, Clone)]
pub struct ATensors {
    pub a: DMatrix<f64>,
    pub a_star: DMatrix<f64>,
    pub a0: DMatrix<f64>,
}

pub fn a_tensors(s: &Snapshot) -> ATensors {
    ATensors {
        a: s.a_operator(Which::Nabla).values(),
        a_star: s.a_operator(Which::Star).values(),
        a0: s.a_operator(Which::LeviCivita).values(),
    }
}

/// `Γ_X` with `∇_X E_y = Γ_X e_y`.
fn gamma_along(s: &Snapshot, which: Which, x: &DVector<f64>) -> DMatrix<f64> {
    along(s.n(), x, |i| s.gamma(which).matrix(i))
}

/// `∇_X(φY) − φ∇*_X Y` as an operator in `Y`.
fn mixed_derivative(s: &Snapshot, x: &DVector<f64>) -> DMatrix<f64> {
    nabla_op(s, Which::Nabla, &s.contact().phi, x)
        + s.phi() * (gamma_along(s, Which::Nabla, x) - gamma_along(s, Which::Star, x))
}

/// `g(A⁰X,φY)ξ + η(Y)φA⁰X` as an operator in `Y`.
fn leaves_term(s: &Snapshot, x: &DVector<f64>) -> DMatrix<f64> {
    let phi = s.phi();
    let a0x = s.a_operator(Which::LeviCivita).values() * x;
    s.xi() * (phi.transpose() * s.g() * &a0x).transpose() + (&phi * &a0x) * s.eta().transpose()
}

/// Residual of `(∇⁰_Xφ)Y = g(A⁰X,φY)ξ + η(Y)φA⁰X`, which characterizes
/// almost cosymplectic manifolds with Kaehler leaves.
pub fn leaves_criterion(s: &Snapshot) -> f64 {
    per_x(s, |x| (nabla_op(s, Which::LeviCivita, &s.contact().phi, x), leaves_term(s, x)))
}

fn norm(s: &Snapshot, v: &DVector<f64>) -> f64 {
    s.inner(v, v).max(0.0).sqrt()
}

pub const AFI_IV_NOTE: &str = "checked as A xi = -K_xi xi and A* xi = K_xi xi; the form A xi = K_xi xi has the opposite sign";
pub const LKSI_NOTE: &str = "the stated form is a tautology; checked as the symmetry (nabla_X eta)Y = (nabla_Y eta)X";
pub const DAZIZ3_NOTE: &str = "nabla_X(phi Y) - phi nabla*_X Y - K_X phi Y - phi K_X Y equals (nabla0_X phi)Y identically";

/// Almost cosymplectic statistical proposition suite.
pub fn proposition_checks() -> Vec<CheckDef> {
    use Which::{Nabla, Star};
    let g = Gate::AlmostCosymplectic;
    let nf = |s: &Snapshot, w: Which, x: &DVector<f64>| nabla_form(s, w, &s.fundamental_form(), x);
    vec![
        CheckDef::new("COSYM-AFI-i", g, |s| {
            let c = s.contact();
            s.local.lie_derivative_one_form(&c.xi, &c.eta).iter().map(|v| rel(*v, 0.0)).fold(0.0, f64::max)
        }),
        CheckDef::new("COSYM-AFI-ii", g, |s| {
            let l = lower(s, &a_tensors(s).a);
            rel_mat(&l, &l.transpose())
        }),
        CheckDef::new("COSYM-AFI-iii", g, |s| {
            let l = lower(s, &a_tensors(s).a_star);
            rel_mat(&l, &l.transpose())
        }),
        CheckDef::new("COSYM-AFI-iv", g, |s| {
            let t = a_tensors(s);
            let xi = s.xi();
            let kxx = s.k_along(&xi) * &xi;
            let a = &t.a * &xi;
            let b = &t.a_star * &xi;
            rel_vec(&a, &(-&kxx)).max(rel_vec(&b, &kxx))
        })
        .with_note(AFI_IV_NOTE),
        CheckDef::new("COSYM-AFI-v", g, |s| {
            let t = a_tensors(s);
            let phi = s.phi();
            rel_mat(&nabla_op(s, Nabla, &s.contact().phi, &s.xi()), &(&phi * &t.a + &t.a_star * &phi))
        }),
        CheckDef::new("COSYM-AFI-vi", g, |s| {
            let t = a_tensors(s);
            let phi = s.phi();
            rel_mat(&nabla_op(s, Star, &s.contact().phi, &s.xi()), &(&phi * &t.a_star + &t.a * &phi))
        }),
        CheckDef::new("COSYM-AFI-vii", g, |s| {
            let t = a_tensors(s);
            let phi = s.phi();
            rel_mat(&(&t.a * &phi + &phi * &t.a), &(-(&t.a_star * &phi + &phi * &t.a_star)))
        }),
        CheckDef::new("COSYM-AKSI", g, |s| {
            let t = a_tensors(s);
            let xi = s.xi();
            rel(norm(s, &(&t.a * &xi)), norm(s, &(&t.a_star * &xi)))
        })
        .with_note("A xi and A* xi are compared by norm, so they vanish together"),
        CheckDef::new("COSYM-KF1a", g, move |s| cyclic_residual(&basis(s).iter().map(|x| nf(s, Nabla, x)).collect::<Vec<_>>())),
        CheckDef::new("COSYM-KF2a", g, move |s| cyclic_residual(&basis(s).iter().map(|x| nf(s, Star, x)).collect::<Vec<_>>())),
        CheckDef::new("COSYM-LKSI-i", g, |s| {
            let c = s.contact();
            let lg = s.local.lie_derivative_bilinear(&c.xi, &s.local.g);
            let t = a_tensors(s);
            rel_mat(&lg, &(-lower(s, &(&t.a + &t.a_star)))).max(rel_mat(&lg, &(-2.0 * lower(s, &t.a0))))
        }),
        CheckDef::new("COSYM-LKSI-ii", g, |s| {
            let m = s.cov_one_form(Nabla, &s.contact().eta);
            rel_mat(&m, &m.transpose())
        })
        .with_note(LKSI_NOTE),
        CheckDef::new("COSYM-LKSI-iii", g, |s| {
            let m = s.cov_one_form(Star, &s.contact().eta);
            rel_mat(&m, &m.transpose())
        })
        .with_note(LKSI_NOTE),
        CheckDef::new("COSYM-DF1", g, move |s| {
            let t = a_tensors(s);
            let (phi, eta, gm) = (s.phi(), s.eta(), s.g());
            per_x(s, |x| {
                let lhs = nf(s, Nabla, x) * &phi + (nf(s, Star, x) * &phi).transpose();
                let u = &gm * &t.a * x;
                let v = &gm * &t.a_star * x;
                (lhs, &eta * u.transpose() + v * eta.transpose())
            })
        }),
        CheckDef::new("COSYM-DF2", g, move |s| {
            let t = a_tensors(s);
            let (phi, eta, gm) = (s.phi(), s.eta(), s.g());
            per_x(s, |x| {
                let lhs = (phi.transpose() * nf(s, Star, x) * &phi).transpose() - nf(s, Nabla, x);
                let w = phi.transpose() * &gm * &t.a * x;
                (lhs, &eta * w.transpose() - w * eta.transpose())
            })
        }),
        CheckDef::new("COSYM-DAZIZ1", Gate::Cosymplectic, |s| {
            per_x(s, |x| (nabla_op(s, Nabla, &s.contact().phi, x), k_op(s, &s.phi(), x)))
        }),
        CheckDef::new("COSYM-DAZIZ2", Gate::Cosymplectic, |s| {
            per_x(s, |x| (nabla_op(s, Star, &s.contact().phi, x), -k_op(s, &s.phi(), x)))
        }),
        CheckDef::new("COSYM-DAZIZ3", Gate::Cosymplectic, |s| per_x(s, |x| (mixed_derivative(s, x), k_anti(s, &s.phi(), x))))
            .with_note(DAZIZ3_NOTE),
    ]
}

/// Kaehler statistical leaves: the theorem in `∇` and `∇*` form, the corollary
/// form and the agreement between them.
pub fn leaves_checks() -> Vec<CheckDef> {
    use Which::{Nabla, Star};
    let thm = |s: &Snapshot, x: &DVector<f64>| {
        nabla_op(s, Nabla, &s.contact().phi, x) - k_op(s, &s.phi(), x) - leaves_term(s, x)
    };
    let o1 = |s: &Snapshot, x: &DVector<f64>| mixed_derivative(s, x) - leaves_term(s, x) - k_anti(s, &s.phi(), x);
    vec![
        CheckDef::new("KLEAVES-THM", Gate::KaehlerLeaves, move |s| {
            per_x(s, |x| (thm(s, x), DMatrix::zeros(s.n(), s.n())))
        }),
        CheckDef::new("KLEAVES-THM-STAR", Gate::KaehlerLeaves, |s| {
            per_x(s, |x| {
                (nabla_op(s, Star, &s.contact().phi, x), -k_op(s, &s.phi(), x) + leaves_term(s, x))
            })
        }),
        CheckDef::new("KLEAVES-O1", Gate::KaehlerLeaves, move |s| {
            per_x(s, |x| (o1(s, x), DMatrix::zeros(s.n(), s.n())))
        }),
        CheckDef::new("KLEAVES-AGREE", Gate::AlmostCosymplectic, move |s| per_x(s, |x| (thm(s, x), o1(s, x)))),
    ]
}

pub fn proposition_suite(fixture: &Fixture, sampling: &Sampling) -> CheckReport {
    run_checks(fixture, &proposition_checks(), sampling)
}

pub fn kaehler_leaves_defect(fixture: &Fixture, sampling: &Sampling) -> CheckReport {
    run_checks(fixture, &leaves_checks(), sampling)
}
