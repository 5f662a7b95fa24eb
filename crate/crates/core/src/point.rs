//! Everything a fixture needs at one sample point.

use nalgebra::{DMatrix, DVector};

use crate::connection::Christoffel;
use crate::error::Result;
use crate::fixture::Fixture;
use crate::frame::{constant_jets, unit_jets, Local};
use crate::jet::{Jet, JetMatrix};

/// Almost contact data evaluated at a point.
#[derive(Debug, Clone)]
pub struct ContactAt {
    pub phi: JetMatrix,
    pub xi: Vec<Jet>,
    pub eta: Vec<Jet>,
    /// `dxi[i][k] = E_i(ξ^k)` as jets.
    pub dxi: Vec<Vec<Jet>>,
}

/// Frame data, the three connections and the structure tensors at a point.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub local: Local,
    pub lc: Christoffel,
    pub nabla: Christoffel,
    pub star: Christoffel,
    pub contact: Option<ContactAt>,
    pub hermitian: Option<JetMatrix>,
}

/// Selects one of the fixture's connections.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Nabla,
    Star,
    LeviCivita,
}

impl Snapshot {
    pub fn new(fixture: &Fixture, point: &[f64]) -> Result<Snapshot> {
        let local = fixture.manifold.local(point)?;
        let lc = crate::connection::Connection::LeviCivita.coefficients(&local)?;
        let nabla = fixture.nabla.coefficients(&local)?;
        let star = fixture.nabla_star.coefficients(&local)?;
        let contact = match &fixture.contact {
            Some(s) => {
                let phi = s.phi.matrix(&local)?;
                let xi = s.xi.jets(&local)?;
                let eta = s.eta.jets(&local)?;
                let dxi = s.xi.frame_derivative_jets(&local)?;
                Some(ContactAt { phi, xi, eta, dxi })
            }
            None => None,
        };
        let hermitian = match &fixture.hermitian {
            Some(h) => Some(h.j.matrix(&local)?),
            None => None,
        };
        Ok(Snapshot { local, lc, nabla, star, contact, hermitian })
    }

    pub fn n(&self) -> usize {
        self.local.n
    }

    pub fn gamma(&self, which: Which) -> &Christoffel {
        match which {
            Which::Nabla => &self.nabla,
            Which::Star => &self.star,
            Which::LeviCivita => &self.lc,
        }
    }

    pub fn e(&self, i: usize) -> DVector<f64> {
        self.local.basis(i)
    }

    pub fn g(&self) -> DMatrix<f64> {
        self.local.g.values()
    }

    pub fn inner(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        self.local.inner(x, y)
    }

    /// `K_i = Γ_i − Γ⁰_i`, so `K_{E_i}Y = K_i Y`.
    pub fn k(&self, i: usize) -> DMatrix<f64> {
        self.nabla.matrix(i) - self.lc.matrix(i)
    }

    /// `K_X` for arbitrary `X`.
    pub fn k_along(&self, x: &DVector<f64>) -> DMatrix<f64> {
        along(self.n(), x, |i| self.k(i))
    }

    /// `∇_{E_i}Y` for constant-component `Y`.
    pub fn cov_vec(&self, which: Which, i: usize, y: &DVector<f64>) -> DVector<f64> {
        self.gamma(which).matrix(i) * y
    }

    /// `∇_X Y` for constant-component `X`, `Y`.
    pub fn cov_along(&self, which: Which, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        self.gamma(which).apply(x, y)
    }

    /// `E_i` applied entrywise to a jet matrix.
    pub fn deriv_matrix(&self, m: &JetMatrix, i: usize) -> DMatrix<f64> {
        let n = self.n();
        DMatrix::from_fn(n, n, |r, c| self.local.deriv(&m[(r, c)], i))
    }

    /// `(∇_{E_i}T)` for a (1,1) operator `T`: `E_i(T) + Γ_i T − T Γ_i`.
    pub fn cov_operator(&self, which: Which, t: &JetMatrix, i: usize) -> DMatrix<f64> {
        let gi = self.gamma(which).matrix(i);
        let tv = t.values();
        self.deriv_matrix(t, i) + &gi * &tv - &tv * &gi
    }

    pub fn cov_operator_along(&self, which: Which, t: &JetMatrix, x: &DVector<f64>) -> DMatrix<f64> {
        along(self.n(), x, |i| self.cov_operator(which, t, i))
    }

    /// `(∇_{E_i}ω)` for a (0,2) tensor: `E_i(ω) − Γ_iᵀ ω − ω Γ_i`.
    pub fn cov_bilinear(&self, which: Which, w: &JetMatrix, i: usize) -> DMatrix<f64> {
        let gi = self.gamma(which).matrix(i);
        let wv = w.values();
        self.deriv_matrix(w, i) - gi.transpose() * &wv - &wv * &gi
    }

    pub fn cov_bilinear_along(&self, which: Which, w: &JetMatrix, x: &DVector<f64>) -> DMatrix<f64> {
        along(self.n(), x, |i| self.cov_bilinear(which, w, i))
    }

    /// `(∇_{E_i}η)(E_j) = E_i η_j − Σ_l Γ^l_ij η_l`, as row `i`.
    pub fn cov_one_form(&self, which: Which, eta: &[Jet]) -> DMatrix<f64> {
        let n = self.n();
        let g = self.gamma(which);
        DMatrix::from_fn(n, n, |i, j| {
            self.local.deriv(&eta[j], i) - (0..n).map(|l| g.get(i, j, l) * eta[l].v).sum::<f64>()
        })
    }

    /// Curvature operator `R(E_i,E_j)` with `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_{[X,Y]}Z`.
    pub fn riemann(&self, which: Which, i: usize, j: usize) -> DMatrix<f64> {
        let g = self.gamma(which);
        let (gi, gj) = (g.matrix(i), g.matrix(j));
        let mut r = g.deriv_matrix(&self.local, i, j) - g.deriv_matrix(&self.local, j, i) + &gi * &gj - &gj * &gi;
        for l in 0..self.n() {
            let c = self.local.c(i, j, l).v;
            if c != 0.0 {
                r -= c * g.matrix(l);
            }
        }
        r
    }

    /// `R(X,Y)` for arbitrary `X`, `Y`.
    pub fn riemann_along(&self, which: Which, x: &DVector<f64>, y: &DVector<f64>) -> DMatrix<f64> {
        let n = self.n();
        let mut out = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let w = x[i] * y[j];
                if w != 0.0 {
                    out += w * self.riemann(which, i, j);
                }
            }
        }
        out
    }

    /// Ricci `S(X,Y) = tr(Z ↦ R(Z,X)Y)` in a Gram-Schmidt orthonormal frame.
    pub fn ricci(&self, which: Which, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        self.orthonormal_frame()
            .iter()
            .map(|e| self.inner(&(self.riemann_along(which, e, x) * y), e))
            .sum()
    }

    /// A g-orthonormal basis obtained by Gram-Schmidt on the frame.
    pub fn orthonormal_frame(&self) -> Vec<DVector<f64>> {
        let mut out: Vec<DVector<f64>> = Vec::with_capacity(self.n());
        for i in 0..self.n() {
            let mut v = self.e(i);
            for u in &out {
                let c = self.inner(&v, u);
                v -= c * u;
            }
            let norm = self.inner(&v, &v).sqrt();
            out.push(v / norm);
        }
        out
    }

    // --- almost contact data ---

    pub fn contact(&self) -> &ContactAt {
        self.contact.as_ref().expect("fixture has an almost contact structure")
    }

    pub fn phi(&self) -> DMatrix<f64> {
        self.contact().phi.values()
    }

    pub fn xi(&self) -> DVector<f64> {
        DVector::from_iterator(self.n(), self.contact().xi.iter().map(|j| j.v))
    }

    pub fn eta(&self) -> DVector<f64> {
        DVector::from_iterator(self.n(), self.contact().eta.iter().map(|j| j.v))
    }

    /// `Φ(E_i,E_j) = g(φE_i, E_j)` as jets (also `Ω` for a Hermitian `J`).
    pub fn fundamental_form_of(&self, op: &JetMatrix) -> JetMatrix {
        op.transpose().mul(&self.local.g)
    }

    pub fn fundamental_form(&self) -> JetMatrix {
        self.fundamental_form_of(&self.contact().phi)
    }

    /// `A X = −∇_X ξ` as jets: `A[(k,j)] = −(E_j ξ^k + Σ_m Γ^k_jm ξ^m)`.
    pub fn a_operator(&self, which: Which) -> JetMatrix {
        let c = self.contact();
        let g = self.gamma(which);
        let n = self.n();
        JetMatrix::from_fn(n, |k, j| {
            let s: Jet = (0..n).map(|m| g.jet(j, m, k) * c.xi[m]).sum();
            -(c.dxi[j][k] + s)
        })
    }

    /// Frame components of `[φ,φ](X,Y) = φ²[X,Y] + [φX,φY] − φ[φX,Y] − φ[X,φY]` for
    /// any (1,1) operator with jet entries.
    pub fn nijenhuis_bracket(&self, op: &JetMatrix, i: usize, j: usize) -> DVector<f64> {
        let n = self.n();
        let ov = op.values();
        let col = |c: usize| -> Vec<Jet> { (0..n).map(|k| op[(k, c)]).collect() };
        let ei = unit_jets(n, i);
        let ej = unit_jets(n, j);
        let (oi, oj) = (col(i), col(j));
        &ov * &ov * self.local.bracket_fields(&ei, &ej) + self.local.bracket_fields(&oi, &oj)
            - &ov * self.local.bracket_fields(&oi, &ej)
            - &ov * self.local.bracket_fields(&ei, &oj)
    }

    /// `[X, Y]` for constant-component vectors.
    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        self.local.bracket_fields(&constant_jets(x), &constant_jets(y))
    }
}

/// `Σ_i x^i f(i)` for matrix-valued `f`.
pub fn along(n: usize, x: &DVector<f64>, f: impl Fn(usize) -> DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        if x[i] != 0.0 {
            out += x[i] * f(i);
        }
    }
    out
}
