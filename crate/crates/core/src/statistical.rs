//! Dualistic structures: Levi-Civita, conjugate connections, the difference
//! tensor and the structural checks tying them together.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::connection::{conjugate_at, Christoffel, Connection};
use crate::error::Result;
use crate::expr::Expr;
use crate::fixture::{Fixture, Provenance};
use crate::frame::{FrameManifold, Local};
use crate::point::{Snapshot, Which};
use crate::report::{rel, run_checks, CheckDef, CheckReport, Gate, Sampling};

/// Half-width of the uniform distribution used for random cubic forms.
pub const RANDOM_K_MAGNITUDE: f64 = 0.5;

pub fn levi_civita(_m: &FrameManifold) -> Connection {
    Connection::LeviCivita
}

pub fn conjugate(_m: &FrameManifold, c: &Connection) -> Connection {
    c.clone().conjugate()
}

/// `K = ∇ − ∇⁰` at a point.
pub fn difference_tensor(local: &Local, c: &Connection, c0: &Connection) -> Result<Christoffel> {
    Ok(c.coefficients(local)?.minus(&c0.coefficients(local)?))
}

/// A totally symmetric constant cubic array, flat index `(i*n + j)*n + k`.
///
/// With `skip = Some(a)` every component carrying index `a` is zero, which
/// gives `K_{E_a} = 0`.
pub fn random_cubic(n: usize, seed: u64, skip: Option<usize>) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = vec![0.0; n * n * n];
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                let v = rng.random_range(-RANDOM_K_MAGNITUDE..RANDOM_K_MAGNITUDE);
                let v = if skip.is_some_and(|a| a == i || a == j || a == k) { 0.0 } else { v };
                for (a, b, d) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
                    c[(a * n + b) * n + d] = v;
                }
            }
        }
    }
    c
}

/// The pair `(∇⁰ + K, ∇⁰ − K)` for a cubic form.
pub fn statistical_pair(cubic: &[f64], n: usize) -> (Connection, Connection) {
    let exprs: Vec<Expr> = cubic.iter().map(|v| Expr::num(*v)).collect();
    let plus = Connection::cubic(exprs.clone(), n, 1.0).expect("cubic size");
    let minus = Connection::cubic(exprs, n, -1.0).expect("cubic size");
    (plus, minus)
}

/// Random statistical structure with `g(K_{E_i}E_j,E_k) = C_ijk` drawn per seed.
pub fn random_statistical(m: &FrameManifold, seed: u64) -> (Connection, Connection) {
    let n = m.dim();
    statistical_pair(&random_cubic(n, seed, None), n)
}

fn frame_max(n: usize, f: impl Fn(usize, usize, usize) -> f64) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v = f(i, j, k);
                worst = if v.is_nan() { f64::INFINITY } else { worst.max(v) };
            }
        }
    }
    worst
}

/// `max |E_i g_jk − g(∇_iE_j,E_k) − g(E_j,∇'_iE_k)|` over frame triples.
pub fn stat1_residual(s: &Snapshot, a: &Christoffel, b: &Christoffel) -> f64 {
    let n = s.n();
    let g = s.g();
    frame_max(n, |i, j, k| {
        let lhs = s.local.dg[i][(j, k)].v;
        let ga: f64 = (0..n).map(|l| a.get(i, j, l) * g[(l, k)]).sum();
        let gb: f64 = (0..n).map(|l| b.get(i, k, l) * g[(l, j)]).sum();
        rel(lhs, ga + gb)
    })
}

/// `Γ^k_ij − Γ^k_ji − c^k_ij`.
pub fn torsion_residual(s: &Snapshot, c: &Christoffel) -> f64 {
    frame_max(s.n(), |i, j, k| rel(c.get(i, j, k) - c.get(j, i, k), s.local.c(i, j, k).v))
}

fn lowered(s: &Snapshot, c: &Christoffel, i: usize, j: usize, k: usize) -> f64 {
    let g = s.g();
    (0..s.n()).map(|l| c.get(i, j, l) * g[(l, k)]).sum()
}

/// Checks of the dualistic structure and of the difference tensor.
pub fn dualistic_checks() -> Vec<CheckDef> {
    vec![
        CheckDef::new("DUAL-STAT1", Gate::None, |s| stat1_residual(s, &s.nabla, &s.star)),
        CheckDef::new("DUAL-TORSION", Gate::None, |s| torsion_residual(s, &s.nabla).max(torsion_residual(s, &s.star))),
        CheckDef::new("DUAL-MEAN", Gate::None, |s| {
            frame_max(s.n(), |i, j, k| rel(2.0 * s.lc.get(i, j, k), s.nabla.get(i, j, k) + s.star.get(i, j, k)))
        }),
        CheckDef::new("DUAL-K2-SYM", Gate::None, |s| {
            let k = s.nabla.minus(&s.lc);
            frame_max(s.n(), |i, j, l| rel(k.get(i, j, l), k.get(j, i, l)))
        }),
        CheckDef::new("DUAL-K2-ADJ", Gate::None, |s| {
            let k = s.nabla.minus(&s.lc);
            frame_max(s.n(), |i, j, l| rel(lowered(s, &k, i, j, l), lowered(s, &k, i, l, j)))
        }),
        CheckDef::new("DUAL-K3", Gate::None, |s| {
            frame_max(s.n(), |i, j, k| rel(s.nabla.get(i, j, k) - s.lc.get(i, j, k), s.lc.get(i, j, k) - s.star.get(i, j, k)))
        }),
        CheckDef::new("DUAL-K4", Gate::None, |s| {
            frame_max(s.n(), |i, j, k| {
                rel(2.0 * (s.nabla.get(i, j, k) - s.lc.get(i, j, k)), s.nabla.get(i, j, k) - s.star.get(i, j, k))
            })
        }),
        CheckDef::new("DUAL-K5", Gate::None, |s| {
            let k = s.nabla.minus(&s.lc);
            frame_max(s.n(), |i, j, l| rel(lowered(s, &s.nabla, i, j, l), lowered(s, &k, i, j, l) + lowered(s, &s.lc, i, j, l)))
        }),
        CheckDef::new("DUAL-INVOLUTION", Gate::None, |s| {
            let back = conjugate_at(&s.local, &s.star);
            frame_max(s.n(), |i, j, k| rel(back.get(i, j, k), s.nabla.get(i, j, k)))
        }),
        CheckDef::new("LC-METRIC", Gate::None, |s| stat1_residual(s, &s.lc, &s.lc)),
        CheckDef::new("LC-TORSION", Gate::None, |s| torsion_residual(s, &s.lc)),
    ]
}

/// Runs the dualistic checks for a connection pair on a bare manifold.
pub fn check_dualistic(m: &FrameManifold, c: &Connection, c_star: &Connection, sampling: &Sampling) -> CheckReport {
    let mut f = Fixture::new("pair", Provenance::User, m.clone());
    f.nabla = c.clone();
    f.nabla_star = c_star.clone();
    run_checks(&f, &dualistic_checks(), sampling)
}

/// `K` at a snapshot for the selected connection (`Which::Star` gives `−K`).
pub fn k_of(s: &Snapshot, which: Which) -> Christoffel {
    s.gamma(which).minus(&s.lc)
}
