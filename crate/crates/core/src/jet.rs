//! First-order jets: a value together with its exact coordinate gradient.
//!
//! Quantities derived pointwise from expressions (inverse metrics, derived
//! connection coefficients, structure operators) are carried as jets so that
//! their frame derivatives stay exact without finite differencing.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use nalgebra::DMatrix;

/// Largest supported manifold dimension.
pub const MAX_DIM: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d: [f64; MAX_DIM],
}

impl Default for Jet {
    fn default() -> Self {
        Jet::ZERO
    }
}

impl Jet {
    pub const ZERO: Jet = Jet { v: 0.0, d: [0.0; MAX_DIM] };

    pub fn constant(v: f64) -> Jet {
        Jet { v, d: [0.0; MAX_DIM] }
    }

    pub fn new(v: f64, grad: &[f64]) -> Jet {
        let mut d = [0.0; MAX_DIM];
        d[..grad.len()].copy_from_slice(grad);
        Jet { v, d }
    }

    pub fn scale(self, s: f64) -> Jet {
        let mut out = self;
        out.v *= s;
        out.d.iter_mut().for_each(|x| *x *= s);
        out
    }

    pub fn recip(self) -> Jet {
        let r = 1.0 / self.v;
        let mut out = Jet::constant(r);
        for (o, x) in out.d.iter_mut().zip(self.d) {
            *o = -x * r * r;
        }
        out
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Jet) -> Jet {
        self += rhs;
        self
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        self.v += rhs.v;
        for (a, b) in self.d.iter_mut().zip(rhs.d) {
            *a += b;
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: Jet) -> Jet {
        self -= rhs;
        self
    }
}

impl SubAssign for Jet {
    fn sub_assign(&mut self, rhs: Jet) {
        self.v -= rhs.v;
        for (a, b) in self.d.iter_mut().zip(rhs.d) {
            *a -= b;
        }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut out = Jet::constant(self.v * rhs.v);
        for k in 0..MAX_DIM {
            out.d[k] = self.d[k] * rhs.v + self.v * rhs.d[k];
        }
        out
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Jet) -> Jet {
        self * rhs.recip()
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl std::iter::Sum for Jet {
    fn sum<I: Iterator<Item = Jet>>(iter: I) -> Jet {
        iter.fold(Jet::ZERO, |a, b| a + b)
    }
}

/// Square matrix of jets, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JetMatrix {
    n: usize,
    data: Vec<Jet>,
}

impl JetMatrix {
    pub fn zeros(n: usize) -> Self {
        JetMatrix { n, data: vec![Jet::ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Jet::constant(1.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Jet) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                data.push(f(r, c));
            }
        }
        JetMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |r, c| self[(r, c)].v)
    }

    /// Component-wise partial derivative with respect to coordinate `a`.
    pub fn partial(&self, a: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |r, c| self[(r, c)].d[a])
    }

    pub fn transpose(&self) -> JetMatrix {
        JetMatrix::from_fn(self.n, |r, c| self[(c, r)])
    }

    pub fn mul(&self, rhs: &JetMatrix) -> JetMatrix {
        JetMatrix::from_fn(self.n, |r, c| (0..self.n).map(|k| self[(r, k)] * rhs[(k, c)]).sum())
    }

    pub fn mul_vec(&self, v: &[Jet]) -> Vec<Jet> {
        (0..self.n).map(|r| (0..self.n).map(|k| self[(r, k)] * v[k]).sum()).collect()
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting on values.
    /// Returns `None` when a pivot falls below `1e-13` times the largest entry.
    pub fn inverse(&self) -> Option<JetMatrix> {
        let n = self.n;
        let scale = self.data.iter().map(|j| j.v.abs()).fold(0.0, f64::max);
        if scale == 0.0 {
            return None;
        }
        let mut a = self.clone();
        let mut inv = JetMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[(x, col)].v.abs().total_cmp(&a[(y, col)].v.abs()))
                .expect("non-empty range");
            if a[(pivot, col)].v.abs() <= 1e-13 * scale {
                return None;
            }
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p = a[(col, col)].recip();
            for c in 0..n {
                a[(col, c)] = a[(col, c)] * p;
                inv[(col, c)] = inv[(col, c)] * p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f.v == 0.0 && f.d.iter().all(|x| *x == 0.0) {
                    continue;
                }
                for c in 0..n {
                    let ac = a[(col, c)];
                    let ic = inv[(col, c)];
                    a[(r, c)] -= f * ac;
                    inv[(r, c)] -= f * ic;
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.n {
            self.data.swap(a * self.n + c, b * self.n + c);
        }
    }
}

impl std::ops::Index<(usize, usize)> for JetMatrix {
    type Output = Jet;
    fn index(&self, (r, c): (usize, usize)) -> &Jet {
        &self.data[r * self.n + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for JetMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Jet {
        &mut self.data[r * self.n + c]
    }
}
