//! Almost Hermitian and almost contact metric structures: fundamental forms,
//! Nijenhuis tensors, classification and the identity suites.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::fixture::Fixture;
use crate::jet::{Jet, JetMatrix};
use crate::point::{Snapshot, Which};
use crate::report::{rel, rel_mat, CheckDef, Gate, Sampling};

/// `T X` as a vector field with jet components, for constant-component `X`.
pub fn apply_field(op: &JetMatrix, x: &DVector<f64>) -> Vec<Jet> {
    let n = op.dim();
    (0..n).map(|k| (0..n).map(|j| op[(k, j)].scale(x[j])).sum()).collect()
}

pub fn bilinear(m: &DMatrix<f64>, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    (x.transpose() * m * y)[(0, 0)]
}

/// `[T,T](X,Y) = T²[X,Y] + [TX,TY] − T[TX,Y] − T[X,TY]`, extended tensorially.
pub fn nijenhuis(s: &Snapshot, op: &JetMatrix, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    let n = s.n();
    let mut out = DVector::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let w = x[i] * y[j];
            if w != 0.0 {
                out += w * s.nijenhuis_bracket(op, i, j);
            }
        }
    }
    out
}

/// `dη` as a matrix `dη(E_i,E_j)`.
pub fn d_eta(s: &Snapshot) -> DMatrix<f64> {
    s.local.d_one_form(&s.contact().eta)
}

/// `N^(1)(X,Y) = [φ,φ](X,Y) + 2dη(X,Y)ξ`. The `+` sign is the one under which
/// the Heisenberg structure with `dη = Φ` is normal.
pub fn n1(s: &Snapshot, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    nijenhuis(s, &s.contact().phi, x, y) + 2.0 * bilinear(&d_eta(s), x, y) * s.xi()
}

/// `dω(X,Y,Z)` of a 2-form with jet components.
pub fn d_form(s: &Snapshot, form: &JetMatrix, x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>) -> f64 {
    s.local.d_two_form_on(form, x, y, z)
}

/// `(L_V η)(Y)` for the field `V = T X`.
pub fn lie_eta_along(s: &Snapshot, v: &[Jet], y: &DVector<f64>) -> f64 {
    s.local.lie_derivative_one_form(v, &s.contact().eta).dot(y)
}

/// `(K_X T)` as a matrix: `K_X T − T K_X`.
pub fn k_op(s: &Snapshot, op: &DMatrix<f64>, x: &DVector<f64>) -> DMatrix<f64> {
    let k = s.k_along(x);
    &k * op - op * &k
}

/// `K_X T + T K_X` (the holomorphy defect operator for `T`).
pub fn k_anti(s: &Snapshot, op: &DMatrix<f64>, x: &DVector<f64>) -> DMatrix<f64> {
    let k = s.k_along(x);
    &k * op + op * &k
}

/// Largest entry of `g`-lowered operator, relative to zero.
pub fn zero_residual(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|v| rel(*v, 0.0)).fold(0.0, f64::max)
}

/// Frame vectors `E_0 … E_{n−1}`.
pub fn basis(s: &Snapshot) -> Vec<DVector<f64>> {
    (0..s.n()).map(|i| s.e(i)).collect()
}

/// Max over frame triples of `f(X,Y,Z)`.
pub fn over_triples(s: &Snapshot, mut f: impl FnMut(&DVector<f64>, &DVector<f64>, &DVector<f64>) -> f64) -> f64 {
    let b = basis(s);
    let mut worst = 0.0_f64;
    for x in &b {
        for y in &b {
            for z in &b {
                let v = f(x, y, z);
                worst = if v.is_nan() { f64::INFINITY } else { worst.max(v) };
            }
        }
    }
    worst
}

/// Max over frame pairs.
pub fn over_pairs(s: &Snapshot, mut f: impl FnMut(&DVector<f64>, &DVector<f64>) -> f64) -> f64 {
    let b = basis(s);
    let mut worst = 0.0_f64;
    for x in &b {
        for y in &b {
            let v = f(x, y);
            worst = if v.is_nan() { f64::INFINITY } else { worst.max(v) };
        }
    }
    worst
}

/// `(∇_X T)` as a matrix for an operator with jet entries.
pub fn nabla_op(s: &Snapshot, which: Which, op: &JetMatrix, x: &DVector<f64>) -> DMatrix<f64> {
    s.cov_operator_along(which, op, x)
}

/// `(∇_X ω)` as a matrix for a 2-form with jet entries.
pub fn nabla_form(s: &Snapshot, which: Which, form: &JetMatrix, x: &DVector<f64>) -> DMatrix<f64> {
    s.cov_bilinear_along(which, form, x)
}

/// `max |dω|` over frame triples.
pub fn d_form_norm(s: &Snapshot, form: &JetMatrix) -> f64 {
    over_triples(s, |x, y, z| d_form(s, form, x, y, z).abs())
}

/// `max |∇⁰T|` over the frame.
pub fn lc_parallel_defect(s: &Snapshot, op: &JetMatrix) -> f64 {
    (0..s.n())
        .map(|i| zero_residual(&s.cov_operator(Which::LeviCivita, op, i)))
        .fold(0.0, f64::max)
}

/// `max |K_X T + T K_X|` over frame `X`.
pub fn holomorphy_defect(s: &Snapshot, op: &DMatrix<f64>) -> f64 {
    (0..s.n()).map(|i| zero_residual(&k_anti(s, op, &s.e(i)))).fold(0.0, f64::max)
}

/// `max |K_ξ φ|`.
pub fn k_xi_phi_norm(s: &Snapshot) -> f64 {
    zero_residual(&k_op(s, &s.phi(), &s.xi()))
}

/// Classification flags with the residual each was decided on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Flag {
    pub value: bool,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StructureClass {
    pub almost_cosymplectic: Flag,
    pub almost_kenmotsu: Flag,
    pub contact_metric: Flag,
    pub normal: Flag,
    pub cosymplectic: Flag,
    pub kenmotsu: Flag,
    pub sasakian: Flag,
}

impl StructureClass {
    /// Most specific class name, with the non-normal qualifier where it applies.
    pub fn summary(&self) -> String {
        let strict = [
            (self.cosymplectic, "cosymplectic", "almost cosymplectic"),
            (self.kenmotsu, "Kenmotsu", "almost Kenmotsu"),
            (self.sasakian, "Sasakian", "contact metric"),
        ];
        if let Some((_, name, almost)) = strict.iter().find(|(f, _, _)| f.value) {
            return format!("{name} ({almost}, normal)");
        }
        let almost = [
            (self.almost_cosymplectic, "almost cosymplectic"),
            (self.almost_kenmotsu, "almost Kenmotsu"),
            (self.contact_metric, "contact metric"),
        ];
        match almost.iter().find(|(f, _)| f.value) {
            Some((_, name)) => format!("{name}, non-normal"),
            None if self.normal.value => "normal almost contact metric".to_string(),
            None => "almost contact metric".to_string(),
        }
    }
}

/// Pointwise residuals behind the classification.
#[derive(Debug, Clone, Copy, Default)]
struct ClassResiduals {
    d_eta: f64,
    d_phi: f64,
    kenmotsu: f64,
    contact: f64,
    n1: f64,
}

fn class_residuals(s: &Snapshot) -> ClassResiduals {
    let phi_form = s.fundamental_form();
    let de = d_eta(s);
    let pf = phi_form.values();
    let eta = s.eta();
    ClassResiduals {
        d_eta: zero_residual(&de),
        d_phi: d_form_norm(s, &phi_form),
        kenmotsu: over_triples(s, |x, y, z| {
            rel(d_form(s, &phi_form, x, y, z), 2.0 * crate::frame::wedge_one_two(&eta, &pf, x, y, z))
        }),
        contact: over_pairs(s, |x, y| rel(bilinear(&de, x, y), bilinear(&pf, x, y))),
        n1: over_pairs(s, |x, y| n1(s, x, y).iter().map(|v| rel(*v, 0.0)).fold(0.0, f64::max)),
    }
}

/// Classifies the almost contact metric structure of a fixture; `None` when
/// the fixture has none.
pub fn classify(fixture: &Fixture, sampling: &Sampling) -> crate::error::Result<Option<StructureClass>> {
    if fixture.contact.is_none() {
        return Ok(None);
    }
    let mut r = ClassResiduals::default();
    for p in sampling.sample(fixture) {
        let s = Snapshot::new(fixture, &p)?;
        let c = class_residuals(&s);
        r.d_eta = r.d_eta.max(c.d_eta);
        r.d_phi = r.d_phi.max(c.d_phi);
        r.kenmotsu = r.kenmotsu.max(c.kenmotsu);
        r.contact = r.contact.max(c.contact);
        r.n1 = r.n1.max(c.n1);
    }
    let tol = sampling.tolerance;
    let flag = |residual: f64| Flag { value: residual <= tol, residual };
    let almost_cosymplectic = flag(r.d_eta.max(r.d_phi));
    let almost_kenmotsu = flag(r.d_eta.max(r.kenmotsu));
    let contact_metric = flag(r.contact);
    let normal = flag(r.n1);
    Ok(Some(StructureClass {
        almost_cosymplectic,
        almost_kenmotsu,
        contact_metric,
        normal,
        cosymplectic: flag(almost_cosymplectic.residual.max(normal.residual)),
        kenmotsu: flag(almost_kenmotsu.residual.max(normal.residual)),
        sasakian: flag(contact_metric.residual.max(normal.residual)),
    }))
}

// --- identity suites ---

fn max_nan(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::INFINITY
    } else {
        a.max(b)
    }
}

/// Max over frame `X = E_i` of the componentwise residual between two matrices.
pub fn per_x(s: &Snapshot, mut f: impl FnMut(&DVector<f64>) -> (DMatrix<f64>, DMatrix<f64>)) -> f64 {
    (0..s.n())
        .map(|i| {
            let (a, b) = f(&s.e(i));
            rel_mat(&a, &b)
        })
        .fold(0.0, max_nan)
}

/// `B[(y,z)] = g(N E_y, E_z)`.
pub fn lower(s: &Snapshot, m: &DMatrix<f64>) -> DMatrix<f64> {
    m.transpose() * s.g()
}

/// `B[(y,z)] = g(E_y, N E_z)`.
pub fn lower_right(s: &Snapshot, m: &DMatrix<f64>) -> DMatrix<f64> {
    s.g() * m
}

/// Cyclic sum `F_x(y,z) + F_z(x,y) + F_y(z,x)` compared against zero, where
/// `forms[i]` is the bilinear form attached to `E_i`.
pub fn cyclic_residual(forms: &[DMatrix<f64>]) -> f64 {
    let n = forms.len();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let a = forms[i][(j, k)] + forms[k][(i, j)];
                worst = max_nan(worst, rel(a, -forms[j][(k, i)]));
            }
        }
    }
    worst
}

/// `dω(X, E_y, E_z)` as a matrix.
pub fn d_form_matrix(s: &Snapshot, form: &JetMatrix, x: &DVector<f64>) -> DMatrix<f64> {
    let b = basis(s);
    DMatrix::from_fn(s.n(), s.n(), |y, z| d_form(s, form, x, &b[y], &b[z]))
}

/// `g(N(E_y,E_z), T X)` for the Nijenhuis torsion of `T`.
pub fn nijenhuis_term(s: &Snapshot, op: &JetMatrix, x: &DVector<f64>) -> DMatrix<f64> {
    let tx = op.values() * x;
    let b = basis(s);
    DMatrix::from_fn(s.n(), s.n(), |y, z| s.inner(&nijenhuis(s, op, &b[y], &b[z]), &tx))
}

/// `3dω(X,Y,Z) − 3dω(X,TY,TZ) + g(N_T(Y,Z),TX)`, the Levi-Civita part shared by
/// the `∇J` formulas.
fn hermitian_core(s: &Snapshot, op: &JetMatrix, x: &DVector<f64>, with_d: bool) -> DMatrix<f64> {
    let t = op.values();
    let mut out = nijenhuis_term(s, op, x);
    if with_d {
        let d = d_form_matrix(s, &s.fundamental_form_of(op), x);
        out += 3.0 * &d - 3.0 * t.transpose() * &d * &t;
    }
    out
}

fn j_of(s: &Snapshot) -> &JetMatrix {
    s.hermitian.as_ref().expect("gated on a Hermitian structure")
}

fn skew_of(s: &Snapshot) -> &JetMatrix {
    s.hermitian.as_ref().unwrap_or_else(|| &s.contact().phi)
}

/// Levi-Civita part of `2g((∇_Xφ)Y,Z)` in the classical arrangement:
/// `3dΦ(X,Y,Z) − 3dΦ(X,φY,φZ) + g(N⁽¹⁾(Y,Z),φX) + ((L_{φY}η)Z − (L_{φZ}η)Y)η(X)
///  + 2dη(φY,X)η(Z) − 2dη(φZ,X)η(Y)`.
pub fn contact_core(s: &Snapshot, x: &DVector<f64>) -> DMatrix<f64> {
    let pm = &s.contact().phi;
    let phi = pm.values();
    let n = s.n();
    let b = basis(s);
    let eta = s.eta();
    let d = d_form_matrix(s, &s.fundamental_form(), x);
    let px = &phi * x;
    let n1_term = DMatrix::from_fn(n, n, |y, z| s.inner(&n1(s, &b[y], &b[z]), &px));
    let lie = DMatrix::from_fn(n, n, |y, z| lie_eta_along(s, &apply_field(pm, &b[y]), &b[z]));
    let de_x = phi.transpose() * d_eta(s) * x;
    let de = DMatrix::from_fn(n, n, |y, z| 2.0 * (de_x[y] * eta[z] - de_x[z] * eta[y]));
    3.0 * &d - 3.0 * phi.transpose() * &d * &phi + n1_term + (&lie - lie.transpose()) * eta.dot(x) + de
}

pub const ARRANGEMENT_NOTE: &str = "uses the classical arrangement g(N1(Y,Z),phi X) + ((L_{phi Y}eta)Z - (L_{phi Z}eta)Y)eta(X); other argument arrangements do not hold";

/// Almost Hermitian identity suite.
pub fn hermitian_checks() -> Vec<CheckDef> {
    use Which::{LeviCivita as Lc, Nabla, Star};
    let nab = |s: &Snapshot, w: Which, x: &DVector<f64>| nabla_op(s, w, j_of(s), x);
    let kj = |s: &Snapshot, x: &DVector<f64>| k_op(s, &j_of(s).values(), x);
    let ka = |s: &Snapshot, x: &DVector<f64>| k_anti(s, &j_of(s).values(), x);
    let kjy = |s: &Snapshot, x: &DVector<f64>| s.k_along(x) * j_of(s).values();
    let om = |s: &Snapshot| s.fundamental_form_of(j_of(s));
    let nf = move |s: &Snapshot, w: Which, x: &DVector<f64>| nabla_form(s, w, &om(s), x);
    vec![
        CheckDef::new("HERM-J2", Gate::Hermitian, |s| {
            let j = j_of(s).values();
            rel_mat(&(&j * &j), &(-DMatrix::identity(s.n(), s.n())))
        }),
        CheckDef::new("HERM-METRIC", Gate::Hermitian, |s| {
            let j = j_of(s).values();
            rel_mat(&(j.transpose() * s.g() * &j), &s.g())
        }),
        CheckDef::new("HERM-AZIZ1", Gate::Hermitian, move |s| {
            per_x(s, |x| (lower(s, &nab(s, Nabla, x)), -lower_right(s, &nab(s, Star, x))))
        }),
        CheckDef::new("HERM-AZIZ2", Gate::Hermitian, move |s| per_x(s, |x| (nab(s, Nabla, x), nab(s, Lc, x) + kj(s, x)))),
        CheckDef::new("HERM-AZIZ3", Gate::Hermitian, move |s| per_x(s, |x| (nab(s, Star, x), nab(s, Lc, x) - kj(s, x)))),
        CheckDef::new("HERM-AZIZ4", Gate::Hermitian, move |s| {
            per_x(s, |x| (nf(s, Nabla, x), lower(s, &nab(s, Nabla, x)) - 2.0 * lower(s, &kjy(s, x))))
        }),
        CheckDef::new("HERM-AZIZ5", Gate::Hermitian, move |s| {
            per_x(s, |x| (nf(s, Star, x), lower(s, &nab(s, Star, x)) + 2.0 * lower(s, &kjy(s, x))))
        }),
        CheckDef::new("HERM-AZIZ5A", Gate::Hermitian, move |s| {
            per_x(s, |x| (nf(s, Nabla, x), nf(s, Lc, x) - lower(s, &ka(s, x))))
        }),
        CheckDef::new("HERM-AZIZ5B", Gate::Hermitian, move |s| {
            per_x(s, |x| (nf(s, Star, x), nf(s, Lc, x) + lower(s, &ka(s, x))))
        }),
        CheckDef::new("HERM-AZIZ6", Gate::Hermitian, move |s| {
            per_x(s, |x| {
                (2.0 * lower(s, &nab(s, Nabla, x)), 2.0 * lower(s, &kj(s, x)) + hermitian_core(s, j_of(s), x, true))
            })
        }),
        CheckDef::new("HERM-Y7", Gate::Hermitian, move |s| {
            per_x(s, |x| {
                (2.0 * lower(s, &nab(s, Star, x)), -2.0 * lower(s, &kj(s, x)) + hermitian_core(s, j_of(s), x, true))
            })
        }),
        CheckDef::new("HERM-AZIZ8", Gate::AlmostKaehler, move |s| {
            per_x(s, |x| {
                (2.0 * lower(s, &nab(s, Nabla, x)), 2.0 * lower(s, &kj(s, x)) + hermitian_core(s, j_of(s), x, false))
            })
        }),
        CheckDef::new("HERM-AZIZ9", Gate::AlmostKaehler, move |s| {
            per_x(s, |x| {
                (2.0 * lower(s, &nab(s, Star, x)), -2.0 * lower(s, &kj(s, x)) + hermitian_core(s, j_of(s), x, false))
            })
        }),
        CheckDef::new("HERM-AZIZ81", Gate::AlmostKaehler, move |s| {
            cyclic_residual(&basis(s).iter().map(|x| nf(s, Nabla, x)).collect::<Vec<_>>())
        }),
        CheckDef::new("HERM-AZIZ82", Gate::AlmostKaehler, move |s| {
            cyclic_residual(&basis(s).iter().map(|x| nf(s, Star, x)).collect::<Vec<_>>())
        }),
        CheckDef::new("HERM-AZIZ10", Gate::Kaehler, move |s| per_x(s, |x| (nab(s, Nabla, x), kj(s, x)))),
        CheckDef::new("HERM-AZIZ11", Gate::Kaehler, move |s| per_x(s, |x| (nab(s, Star, x), -kj(s, x)))),
        CheckDef::new("HOLO-EQUIV", Gate::Kaehler, move |s| {
            let b = basis(s);
            let norm = |f: &dyn Fn(&DVector<f64>) -> DMatrix<f64>| b.iter().map(|x| f(x).amax()).fold(0.0, f64::max);
            let a = norm(&|x| nf(s, Nabla, x));
            let d = norm(&|x| lower(s, &ka(s, x)));
            let c = norm(&|x| nf(s, Star, x));
            rel(a, d).max(rel(c, d))
        })
        .with_note("nabla Omega, the holomorphy defect and nabla* Omega are compared by norm, so they vanish together"),
        CheckDef::new("HOLO-DEFECT", Gate::Holomorphic, move |s| {
            basis(s).iter().map(|x| zero_residual(&ka(s, x))).fold(0.0, f64::max)
        }),
        CheckDef::new("CYCLIC-86", Gate::SkewOperator, |s| {
            let psi = skew_of(s).values();
            cyclic_residual(&basis(s).iter().map(|x| lower(s, &k_anti(s, &psi, x))).collect::<Vec<_>>())
        }),
    ]
}

/// Structure validation for `(φ, ξ, η, g)`.
pub fn contact_structure_checks() -> Vec<CheckDef> {
    vec![
        CheckDef::new("STRUCT-PHI2", Gate::Contact, |s| {
            let phi = s.phi();
            let n = s.n();
            rel_mat(&(&phi * &phi), &(-DMatrix::identity(n, n) + s.xi() * s.eta().transpose()))
        }),
        CheckDef::new("STRUCT-ETA-XI", Gate::Contact, |s| rel(s.eta().dot(&s.xi()), 1.0)),
        CheckDef::new("STRUCT-METRIC", Gate::Contact, |s| {
            let phi = s.phi();
            let eta = s.eta();
            rel_mat(&(phi.transpose() * s.g() * &phi), &(s.g() - &eta * eta.transpose()))
        }),
        CheckDef::new("STRUCT-ETA-G", Gate::Contact, |s| {
            let gx = s.g() * s.xi();
            gx.iter().zip(s.eta().iter()).map(|(a, b)| rel(*a, *b)).fold(0.0, f64::max)
        }),
        CheckDef::new("STRUCT-PHI-XI", Gate::Contact, |s| (s.phi() * s.xi()).iter().map(|v| rel(*v, 0.0)).fold(0.0, f64::max)),
        CheckDef::new("STRUCT-ETA-PHI", Gate::Contact, |s| {
            (s.eta().transpose() * s.phi()).iter().map(|v| rel(*v, 0.0)).fold(0.0, f64::max)
        }),
    ]
}

/// Almost contact metric statistical identity suite.
pub fn contact_checks() -> Vec<CheckDef> {
    use Which::{LeviCivita as Lc, Nabla, Star};
    let nab = |s: &Snapshot, w: Which, x: &DVector<f64>| nabla_op(s, w, &s.contact().phi, x);
    let kp = |s: &Snapshot, x: &DVector<f64>| k_op(s, &s.phi(), x);
    let ka = |s: &Snapshot, x: &DVector<f64>| k_anti(s, &s.phi(), x);
    let kpy = |s: &Snapshot, x: &DVector<f64>| s.k_along(x) * s.phi();
    let nf = |s: &Snapshot, w: Which, x: &DVector<f64>| nabla_form(s, w, &s.fundamental_form(), x);
    vec![
        CheckDef::new("AC-AA3", Gate::Contact, move |s| {
            per_x(s, |x| (lower(s, &nab(s, Nabla, x)), -lower_right(s, &nab(s, Star, x))))
        }),
        CheckDef::new("AC-AAB1", Gate::Contact, move |s| per_x(s, |x| (nab(s, Nabla, x), nab(s, Lc, x) + kp(s, x)))),
        CheckDef::new("AC-AAB2", Gate::Contact, move |s| per_x(s, |x| (nab(s, Star, x), nab(s, Lc, x) - kp(s, x)))),
        CheckDef::new("AC-AA4a", Gate::Contact, move |s| {
            per_x(s, |x| (nf(s, Nabla, x), lower(s, &nab(s, Nabla, x)) - 2.0 * lower(s, &kpy(s, x))))
        }),
        CheckDef::new("AC-AA5", Gate::Contact, move |s| {
            per_x(s, |x| (nf(s, Star, x), lower(s, &nab(s, Star, x)) + 2.0 * lower(s, &kpy(s, x))))
        }),
        CheckDef::new("AC-BB1", Gate::Contact, move |s| per_x(s, |x| (nf(s, Nabla, x), nf(s, Lc, x) - lower(s, &ka(s, x))))),
        CheckDef::new("AC-BB2", Gate::Contact, move |s| per_x(s, |x| (nf(s, Star, x), nf(s, Lc, x) + lower(s, &ka(s, x))))),
        CheckDef::new("AC-BBB1", Gate::Contact, move |s| {
            per_x(s, |x| (nf(s, Nabla, x) - nf(s, Star, x), -2.0 * lower(s, &ka(s, x))))
        }),
        CheckDef::new("AC-BB3", Gate::Contact, move |s| per_x(s, |x| (2.0 * lower(s, &nab(s, Lc, x)), contact_core(s, x))))
            .with_note(ARRANGEMENT_NOTE),
        CheckDef::new("AC-BB4", Gate::Contact, move |s| {
            per_x(s, |x| (2.0 * lower(s, &nab(s, Nabla, x)), 2.0 * lower(s, &kp(s, x)) + contact_core(s, x)))
        })
        .with_note(ARRANGEMENT_NOTE),
        CheckDef::new("AC-BB5", Gate::Contact, move |s| {
            per_x(s, |x| (2.0 * lower(s, &nab(s, Star, x)), -2.0 * lower(s, &kp(s, x)) + contact_core(s, x)))
        })
        .with_note(ARRANGEMENT_NOTE),
    ]
}

/// Structure validation and every Hermitian and almost contact identity.
pub fn identity_checks() -> Vec<CheckDef> {
    let mut out = contact_structure_checks();
    out.extend(hermitian_checks());
    out.extend(contact_checks());
    out
}

/// Runs the identity checks whose names start with `prefix` (all when empty).
pub fn identity_suite(prefix: &str, fixture: &crate::fixture::Fixture, sampling: &crate::report::Sampling) -> crate::report::CheckReport {
    let checks: Vec<CheckDef> = identity_checks().into_iter().filter(|c| c.name.starts_with(prefix)).collect();
    crate::report::run_checks(fixture, &checks, sampling)
}
