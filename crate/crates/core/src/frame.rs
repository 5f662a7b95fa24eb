//! Frame-based manifold representation and pointwise exterior calculus.
//!
//! A manifold is given by coordinate names, a frame `E_i = Σ_a F[i][a] ∂_a`
//! and the metric components `g(E_i, E_j)`, all as expressions. Evaluating
//! at a point yields a [`Local`] carrying jets of the frame, its inverse,
//! the bracket structure functions and the metric.
//!
//! Forms use the normalization `dω(X_0..X_p) = 1/(p+1) [...]`, so that
//! `2dη(X,Y) = Xη(Y) − Yη(X) − η([X,Y])`.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeometryError, Result};
use crate::expr::{self, Expr};
use crate::jet::{Jet, JetMatrix, MAX_DIM};

/// An expression together with its first and second symbolic partials.
#[derive(Debug, Clone)]
pub struct Field {
    expr: Expr,
    d1: Vec<Expr>,
    d2: Vec<Vec<Expr>>,
}

impl Field {
    pub fn new(expr: Expr, dim: usize) -> Field {
        let d1: Vec<Expr> = (0..dim).map(|a| expr.diff(a)).collect();
        let d2 = d1.iter().map(|da| (0..dim).map(|b| da.diff(b)).collect()).collect();
        Field { expr, d1, d2 }
    }

    pub fn constant(v: f64, dim: usize) -> Field {
        Field::new(Expr::num(v), dim)
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    fn eval(e: &Expr, p: &[f64]) -> Result<f64> {
        e.eval(p).map_err(|source| GeometryError::Eval { point: p.to_vec(), source })
    }

    pub fn value(&self, p: &[f64]) -> Result<f64> {
        Field::eval(&self.expr, p)
    }

    /// Value and coordinate gradient.
    pub fn jet(&self, p: &[f64]) -> Result<Jet> {
        let mut j = Jet::constant(self.value(p)?);
        for (a, da) in self.d1.iter().enumerate() {
            j.d[a] = Field::eval(da, p)?;
        }
        Ok(j)
    }

    /// Jet of the coordinate partial `∂_a f`.
    pub fn partial_jet(&self, a: usize, p: &[f64]) -> Result<Jet> {
        let mut j = Jet::constant(Field::eval(&self.d1[a], p)?);
        for (b, dab) in self.d2[a].iter().enumerate() {
            j.d[b] = Field::eval(dab, p)?;
        }
        Ok(j)
    }
}

/// Frame components of a tensor field of one of the supported valences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valence {
    /// (1,0): components `X^k`.
    Vector,
    /// (0,1): components `ω(E_j)`.
    Covector,
    /// (0,2): components `ω(E_i, E_j)`, row-major.
    Bilinear,
    /// (1,1): entry `[k][j]` is component `k` of `T(E_j)`, row-major.
    Operator,
}

/// A tensor field with expression components in the frame basis.
#[derive(Debug, Clone)]
pub struct TensorField {
    pub valence: Valence,
    comps: Vec<Field>,
}

impl TensorField {
    pub fn new(valence: Valence, comps: Vec<Expr>, dim: usize) -> Result<TensorField> {
        let want = match valence {
            Valence::Vector | Valence::Covector => dim,
            Valence::Bilinear | Valence::Operator => dim * dim,
        };
        if comps.len() != want {
            return Err(GeometryError::Dimension(format!(
                "{valence:?} field on a {dim}-manifold needs {want} components, got {}",
                comps.len()
            )));
        }
        Ok(TensorField { valence, comps: comps.into_iter().map(|e| Field::new(e, dim)).collect() })
    }

    pub fn exprs(&self) -> Vec<Expr> {
        self.comps.iter().map(|f| f.expr().clone()).collect()
    }

    pub fn fields(&self) -> &[Field] {
        &self.comps
    }

    /// Component jets at the local point (flat, row-major for rank 2).
    pub fn jets(&self, local: &Local) -> Result<Vec<Jet>> {
        self.comps.iter().map(|f| f.jet(&local.point)).collect()
    }

    pub fn matrix(&self, local: &Local) -> Result<JetMatrix> {
        let n = local.n;
        let jets = self.jets(local)?;
        Ok(JetMatrix::from_fn(n, |r, c| jets[r * n + c]))
    }

    /// Jets of `E_i(component)` for every frame index `i`: entry `[i][c]`.
    pub fn frame_derivative_jets(&self, local: &Local) -> Result<Vec<Vec<Jet>>> {
        let per_comp: Vec<Vec<Jet>> =
            self.comps.iter().map(|f| local.frame_derivative_jets(f)).collect::<Result<_>>()?;
        Ok((0..local.n).map(|i| per_comp.iter().map(|d| d[i]).collect()).collect())
    }
}

#[derive(Debug, Clone)]
pub struct FrameManifold {
    coords: Vec<String>,
    frame: Vec<Field>,
    metric: Vec<Field>,
}

impl FrameManifold {
    /// `frame[i][a]` is the coefficient of `∂/∂coords[a]` in `E_i`;
    /// `metric[i][j] = g(E_i, E_j)`.
    pub fn new(coords: Vec<String>, frame: Vec<Vec<Expr>>, metric: Vec<Vec<Expr>>) -> Result<Self> {
        let n = coords.len();
        if n == 0 || n > MAX_DIM {
            return Err(GeometryError::Dimension(format!("dimension {n} outside 1..={MAX_DIM}")));
        }
        for name in &coords {
            if expr::Func::from_name(name).is_some() {
                return Err(GeometryError::Invalid(format!("coordinate name `{name}` is a builtin function")));
            }
        }
        let square = |m: &Vec<Vec<Expr>>, what: &str| -> Result<()> {
            if m.len() != n || m.iter().any(|r| r.len() != n) {
                return Err(GeometryError::Dimension(format!("{what} must be {n}x{n}")));
            }
            Ok(())
        };
        square(&frame, "frame")?;
        square(&metric, "metric")?;
        let flat = |m: Vec<Vec<Expr>>| m.into_iter().flatten().map(|e| Field::new(e, n)).collect();
        Ok(FrameManifold { coords, frame: flat(frame), metric: flat(metric) })
    }

    /// Parses all entries against `coords`.
    pub fn parse(coords: &[&str], frame: &[&[&str]], metric: &[&[&str]]) -> Result<Self> {
        let coords: Vec<String> = coords.iter().map(|s| s.to_string()).collect();
        let parse_matrix = |m: &[&[&str]], what: &str| -> Result<Vec<Vec<Expr>>> {
            m.iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(j, s)| parse_expr(s, &coords, &format!("{what}[{i}][{j}]")))
                        .collect()
                })
                .collect()
        };
        let f = parse_matrix(frame, "frame")?;
        let g = parse_matrix(metric, "metric")?;
        FrameManifold::new(coords, f, g)
    }

    /// Coordinate frame with identity metric.
    pub fn euclidean(coords: &[&str]) -> Self {
        let n = coords.len();
        let id = |i: usize, j: usize| Expr::num(if i == j { 1.0 } else { 0.0 });
        let m: Vec<Vec<Expr>> = (0..n).map(|i| (0..n).map(|j| id(i, j)).collect()).collect();
        FrameManifold::new(coords.iter().map(|s| s.to_string()).collect(), m.clone(), m)
            .expect("valid euclidean manifold")
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn frame_expr(&self, i: usize, a: usize) -> &Expr {
        self.frame[i * self.dim() + a].expr()
    }

    pub fn metric_expr(&self, i: usize, j: usize) -> &Expr {
        self.metric[i * self.dim() + j].expr()
    }

    pub fn parse_expr(&self, text: &str, context: &str) -> Result<Expr> {
        parse_expr(text, &self.coords, context)
    }

    /// Symbolic `E_i f = Σ_a F[i][a] ∂f/∂x_a`.
    pub fn frame_derivative(&self, f: &Expr, i: usize) -> Expr {
        (0..self.dim()).fold(Expr::zero(), |acc, a| acc + self.frame_expr(i, a).clone() * f.diff(a))
    }

    /// Evaluates frame, metric and structure functions at `point`.
    pub fn local(&self, point: &[f64]) -> Result<Local> {
        let n = self.dim();
        if point.len() != n {
            return Err(GeometryError::Dimension(format!("point has {} coordinates, manifold {n}", point.len())));
        }
        let p = point.to_vec();
        let jets = |fields: &[Field]| -> Result<JetMatrix> {
            let v: Vec<Jet> = fields.iter().map(|f| f.jet(&p)).collect::<Result<_>>()?;
            Ok(JetMatrix::from_fn(n, |r, c| v[r * n + c]))
        };
        let frame = jets(&self.frame)?;
        let frame_inv = frame.inverse().ok_or_else(|| GeometryError::SingularFrame(p.clone()))?;
        let g = jets(&self.metric)?;
        for i in 0..n {
            for j in 0..i {
                let (a, b) = (g[(i, j)].v, g[(j, i)].v);
                if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
                    return Err(GeometryError::AsymmetricMetric { point: p.clone(), i, j });
                }
            }
        }
        let g_inv = g.inverse().ok_or_else(|| GeometryError::SingularMetric(p.clone()))?;

        let mut local =
            Local { n, point: p, frame, frame_inv, bracket: Vec::new(), g, g_inv, dg: Vec::new() };

        // E_i(F[j][a]) jets, indexed [j*n + a][i]
        let dframe: Vec<Vec<Jet>> =
            self.frame.iter().map(|f| local.frame_derivative_jets(f)).collect::<Result<_>>()?;
        let mut bracket = vec![Jet::ZERO; n * n * n];
        for i in 0..n {
            for j in 0..n {
                let coord: Vec<Jet> =
                    (0..n).map(|a| dframe[j * n + a][i] - dframe[i * n + a][j]).collect();
                for k in 0..n {
                    bracket[(i * n + j) * n + k] = (0..n).map(|a| coord[a] * local.frame_inv[(a, k)]).sum();
                }
            }
        }
        local.bracket = bracket;

        let dmetric: Vec<Vec<Jet>> =
            self.metric.iter().map(|f| local.frame_derivative_jets(f)).collect::<Result<_>>()?;
        local.dg = (0..n).map(|i| JetMatrix::from_fn(n, |j, k| dmetric[j * n + k][i])).collect();
        Ok(local)
    }
}

pub(crate) fn parse_expr(text: &str, coords: &[String], context: &str) -> Result<Expr> {
    expr::parse(text, coords).map_err(|source| GeometryError::Parse {
        context: context.to_string(),
        text: text.to_string(),
        source,
    })
}

/// Frame data evaluated at a single point.
#[derive(Debug, Clone)]
pub struct Local {
    pub n: usize,
    pub point: Vec<f64>,
    /// `frame[(i, a)]`: coefficient of `∂_a` in `E_i`.
    pub frame: JetMatrix,
    /// `frame_inv[(a, k)]`.
    pub frame_inv: JetMatrix,
    bracket: Vec<Jet>,
    pub g: JetMatrix,
    pub g_inv: JetMatrix,
    /// `dg[i][(j, k)] = E_i g(E_j, E_k)`.
    pub dg: Vec<JetMatrix>,
}

impl Local {
    /// `E_i` applied to a jet, as a plain value.
    pub fn deriv(&self, f: &Jet, i: usize) -> f64 {
        (0..self.n).map(|a| self.frame[(i, a)].v * f.d[a]).sum()
    }

    /// Jets of `E_i f` for all `i`.
    pub fn frame_derivative_jets(&self, f: &Field) -> Result<Vec<Jet>> {
        let partials: Vec<Jet> = (0..self.n).map(|a| f.partial_jet(a, &self.point)).collect::<Result<_>>()?;
        Ok((0..self.n).map(|i| (0..self.n).map(|a| self.frame[(i, a)] * partials[a]).sum()).collect())
    }

    /// Structure function `c^k_ij` with `[E_i, E_j] = Σ_k c^k_ij E_k`.
    pub fn c(&self, i: usize, j: usize, k: usize) -> Jet {
        self.bracket[(i * self.n + j) * self.n + k]
    }

    /// `[E_i, E_j]` in frame components.
    pub fn lie_bracket(&self, i: usize, j: usize) -> DVector<f64> {
        DVector::from_fn(self.n, |k, _| self.c(i, j, k).v)
    }

    /// Matrix `C_i` with `(C_i)[(k, j)] = c^k_ij`, i.e. `[E_i, Y] = E_i(Y) + C_i Y`
    /// for constant-component `Y`.
    pub fn bracket_matrix(&self, i: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |k, j| self.c(i, j, k).v)
    }

    /// `[X, Y]` for vector fields with jet components.
    pub fn bracket_fields(&self, x: &[Jet], y: &[Jet]) -> DVector<f64> {
        let n = self.n;
        DVector::from_fn(n, |k, _| {
            let mut s = 0.0;
            for i in 0..n {
                s += x[i].v * self.deriv(&y[k], i) - y[i].v * self.deriv(&x[k], i);
                for j in 0..n {
                    s += x[i].v * y[j].v * self.c(i, j, k).v;
                }
            }
            s
        })
    }

    /// Directional derivative `X(f)` along a field with jet components.
    pub fn directional(&self, x: &[Jet], f: &Jet) -> f64 {
        (0..self.n).map(|i| x[i].v * self.deriv(f, i)).sum()
    }

    pub fn metric(&self) -> DMatrix<f64> {
        self.g.values()
    }

    pub fn inner(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        (x.transpose() * self.metric() * y)[(0, 0)]
    }

    pub fn basis(&self, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(self.n);
        v[i] = 1.0;
        v
    }

    /// `2dω(E_i, E_j)`-normalized exterior derivative of a 1-form, as the
    /// 2-form `dω(E_i,E_j) = ½(E_i ω_j − E_j ω_i − ω([E_i,E_j]))`.
    pub fn d_one_form(&self, omega: &[Jet]) -> DMatrix<f64> {
        let n = self.n;
        DMatrix::from_fn(n, n, |i, j| {
            let bracket: f64 = (0..n).map(|k| self.c(i, j, k).v * omega[k].v).sum();
            0.5 * (self.deriv(&omega[j], i) - self.deriv(&omega[i], j) - bracket)
        })
    }

    /// Jets of `dω` for a 1-form with expression components; used for `d∘d`.
    pub fn d_one_form_jets(&self, omega: &TensorField) -> Result<JetMatrix> {
        let w = omega.jets(self)?;
        let dw = omega.frame_derivative_jets(self)?;
        let n = self.n;
        Ok(JetMatrix::from_fn(n, |i, j| {
            let bracket: Jet = (0..n).map(|k| self.c(i, j, k) * w[k]).sum();
            (dw[i][j] - dw[j][i] - bracket).scale(0.5)
        }))
    }

    /// `dω(E_i,E_j,E_k)` of a 2-form with jet components, with the 1/3 normalization.
    pub fn d_two_form(&self, omega: &JetMatrix, i: usize, j: usize, k: usize) -> f64 {
        let w = |a: &DVector<f64>, b: usize| -> f64 { (0..self.n).map(|l| a[l] * omega[(l, b)].v).sum() };
        let term = self.deriv(&omega[(j, k)], i) - self.deriv(&omega[(i, k)], j) + self.deriv(&omega[(i, j)], k)
            - w(&self.lie_bracket(i, j), k)
            + w(&self.lie_bracket(i, k), j)
            - w(&self.lie_bracket(j, k), i);
        term / 3.0
    }

    /// `dω` evaluated on arbitrary vectors by multilinearity.
    pub fn d_two_form_on(&self, omega: &JetMatrix, x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                if y[j] == 0.0 {
                    continue;
                }
                for k in 0..n {
                    if z[k] != 0.0 {
                        s += x[i] * y[j] * z[k] * self.d_two_form(omega, i, j, k);
                    }
                }
            }
        }
        s
    }

    /// `i_V ω` of a 2-form: the 1-form `ω(V, ·)`.
    pub fn interior_two(&self, v: &[Jet], omega: &JetMatrix) -> Vec<Jet> {
        (0..self.n).map(|j| (0..self.n).map(|i| v[i] * omega[(i, j)]).sum()).collect()
    }

    /// `i_V ω = ω(V)` of a 1-form.
    pub fn interior_one(&self, v: &[Jet], omega: &[Jet]) -> Jet {
        (0..self.n).map(|i| v[i] * omega[i]).sum()
    }

    /// `(L_X ω)(E_j) = X(ω_j) − ω([X, E_j])`.
    pub fn lie_derivative_one_form(&self, x: &[Jet], omega: &[Jet]) -> DVector<f64> {
        let n = self.n;
        DVector::from_fn(n, |j, _| {
            let br = self.bracket_fields(x, &unit_jets(n, j));
            self.directional(x, &omega[j]) - (0..n).map(|k| br[k] * omega[k].v).sum::<f64>()
        })
    }

    /// `(L_X T)(E_j,E_k) = X(T_jk) − T([X,E_j],E_k) − T(E_j,[X,E_k])`.
    pub fn lie_derivative_bilinear(&self, x: &[Jet], t: &JetMatrix) -> DMatrix<f64> {
        let n = self.n;
        let tv = t.values();
        let brs: Vec<DVector<f64>> = (0..n).map(|j| self.bracket_fields(x, &unit_jets(n, j))).collect();
        DMatrix::from_fn(n, n, |j, k| {
            self.directional(x, &t[(j, k)])
                - (brs[j].transpose() * tv.column(k))[(0, 0)]
                - (tv.row(j) * &brs[k])[(0, 0)]
        })
    }

    /// `(L_X T)E_j = [X, T E_j] − T[X, E_j]`; column `j` of the result.
    pub fn lie_derivative_operator(&self, x: &[Jet], t: &JetMatrix) -> DMatrix<f64> {
        let n = self.n;
        let tv = t.values();
        let mut out = DMatrix::zeros(n, n);
        for j in 0..n {
            let tej: Vec<Jet> = (0..n).map(|k| t[(k, j)]).collect();
            let col = self.bracket_fields(x, &tej) - &tv * self.bracket_fields(x, &unit_jets(n, j));
            out.set_column(j, &col);
        }
        out
    }
}

/// Jet components of the constant frame vector `E_j`.
pub fn unit_jets(n: usize, j: usize) -> Vec<Jet> {
    (0..n).map(|k| Jet::constant(if k == j { 1.0 } else { 0.0 })).collect()
}

/// Lifts value components to constant jets.
pub fn constant_jets(v: &DVector<f64>) -> Vec<Jet> {
    v.iter().map(|x| Jet::constant(*x)).collect()
}

/// `(η∧Φ)(X,Y,Z) = ⅓[η(X)Φ(Y,Z) + η(Y)Φ(Z,X) + η(Z)Φ(X,Y)]`.
pub fn wedge_one_two(
    eta: &DVector<f64>,
    phi: &DMatrix<f64>,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
) -> f64 {
    let form = |a: &DVector<f64>, b: &DVector<f64>| (a.transpose() * phi * b)[(0, 0)];
    (eta.dot(x) * form(y, z) + eta.dot(y) * form(z, x) + eta.dot(z) * form(x, y)) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn dacko() -> FrameManifold {
        FrameManifold::parse(
            &["t", "x", "y"],
            &[&["1", "0", "0"], &["0", "exp(-t)", "0"], &["0", "0", "exp(t)"]],
            &[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]],
        )
        .unwrap()
    }

    #[test]
    fn frame_derivative_examples() {
        let m = dacko();
        let f = m.parse_expr("exp(-t)", "f").unwrap();
        let e0f = m.frame_derivative(&f, 0);
        let x = m.parse_expr("x", "x").unwrap();
        let e1x = m.frame_derivative(&x, 1);
        for p in [[0.0, 0.1, 0.2], [0.8, -0.4, 0.3]] {
            assert!((e0f.eval(&p).unwrap() + (-p[0]).exp()).abs() < 1e-15);
            assert!((e1x.eval(&p).unwrap() - (-p[0]).exp()).abs() < 1e-15);
        }
        assert!(m.frame_derivative(&Expr::num(3.0), 2).is_zero());
    }

    #[test]
    fn brackets_of_dacko_frame() {
        let m = dacko();
        let l = m.local(&[0.3, -0.2, 0.9]).unwrap();
        let close = |v: DVector<f64>, w: [f64; 3]| (v - DVector::from_row_slice(&w)).amax() < 1e-14;
        assert!(close(l.lie_bracket(0, 1), [0.0, -1.0, 0.0]));
        assert!(close(l.lie_bracket(0, 2), [0.0, 0.0, 1.0]));
        assert!(close(l.lie_bracket(1, 2), [0.0, 0.0, 0.0]));
        let flat = FrameManifold::euclidean(&["a", "b", "c"]).local(&[0.1, 0.2, 0.3]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(flat.lie_bracket(i, j).amax(), 0.0);
            }
        }
    }

    #[test]
    fn singular_frame_is_reported() {
        let m = FrameManifold::parse(&["u", "v"], &[&["u", "0"], &["0", "1"]], &[&["1", "0"], &["0", "1"]]).unwrap();
        assert!(matches!(m.local(&[0.0, 0.5]), Err(GeometryError::SingularFrame(_))));
        assert!(m.local(&[0.5, 0.5]).is_ok());
    }

    #[test]
    fn wedge_on_dacko_frame() {
        let eta = DVector::from_row_slice(&[1.0, 0.0, 0.0]);
        let mut phi = DMatrix::zeros(3, 3);
        phi[(1, 2)] = 1.0;
        phi[(2, 1)] = -1.0;
        let e = |i: usize| {
            let mut v = DVector::zeros(3);
            v[i] = 1.0;
            v
        };
        assert!((wedge_one_two(&eta, &phi, &e(0), &e(1), &e(2)) - 1.0 / 3.0).abs() < 1e-15);
        // arguments inside the contact distribution
        assert_eq!(wedge_one_two(&eta, &phi, &e(1), &e(2), &e(1)), 0.0);
    }

    #[test]
    fn exterior_derivative_of_closed_forms() {
        let m = dacko();
        let l = m.local(&[0.2, 0.5, -0.7]).unwrap();
        let dt = TensorField::new(Valence::Covector, vec![Expr::one(), Expr::zero(), Expr::zero()], 3).unwrap();
        assert!(l.d_one_form(&dt.jets(&l).unwrap()).amax() < 1e-15);
        let mut phi = JetMatrix::zeros(3);
        phi[(1, 2)] = Jet::constant(1.0);
        phi[(2, 1)] = Jet::constant(-1.0);
        assert!(l.d_two_form(&phi, 0, 1, 2).abs() < 1e-15);
    }
}
