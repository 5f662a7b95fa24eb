//! Affine connections in a frame and their pointwise coefficients.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeometryError, Result};
use crate::expr::Expr;
use crate::frame::{Field, FrameManifold, Local};
use crate::jet::{Jet, JetMatrix};

/// A connection `∇_{E_i}E_j = Σ_k Γ^k_ij E_k`.
///
/// Tables carry expression coefficients; the other variants are recipes
/// that are materialized as jets at each evaluation point.
#[derive(Debug, Clone)]
pub enum Connection {
    /// Expression coefficients, flat index `(i*n + j)*n + k`.
    Table(Vec<Field>),
    /// Levi-Civita connection of the metric (frame Koszul formula).
    LeviCivita,
    /// Metric conjugate of the inner connection.
    Conjugate(Box<Connection>),
    /// `∇⁰ + sign·K` where `g(K_{E_i}E_j, E_k) = C_ijk`, flat index as in `Table`.
    Cubic { cubic: Vec<Field>, sign: f64 },
}

impl Connection {
    pub fn table(exprs: Vec<Expr>, dim: usize) -> Result<Connection> {
        if exprs.len() != dim * dim * dim {
            return Err(GeometryError::Dimension(format!(
                "connection table needs {} entries, got {}",
                dim * dim * dim,
                exprs.len()
            )));
        }
        Ok(Connection::Table(exprs.into_iter().map(|e| Field::new(e, dim)).collect()))
    }

    /// Builds a table from `∇_{E_i}E_j` rows given as component lists.
    pub fn from_rows(rows: &[[[f64; 3]; 3]; 3]) -> Connection {
        let mut exprs = Vec::with_capacity(27);
        for row in rows {
            for entry in row {
                exprs.extend(entry.iter().map(|v| Expr::num(*v)));
            }
        }
        Connection::table(exprs, 3).expect("3x3x3 table")
    }

    pub fn cubic(cubic: Vec<Expr>, dim: usize, sign: f64) -> Result<Connection> {
        if cubic.len() != dim * dim * dim {
            return Err(GeometryError::Dimension(format!("cubic form needs {} entries", dim * dim * dim)));
        }
        Ok(Connection::Cubic { cubic: cubic.into_iter().map(|e| Field::new(e, dim)).collect(), sign })
    }

    /// The conjugate connection, computed pointwise from the metric.
    pub fn conjugate(self) -> Connection {
        Connection::Conjugate(Box::new(self))
    }

    /// Expression coefficients when the connection is a table.
    pub fn exprs(&self) -> Option<Vec<Expr>> {
        match self {
            Connection::Table(fields) => Some(fields.iter().map(|f| f.expr().clone()).collect()),
            _ => None,
        }
    }

    pub fn coefficients(&self, local: &Local) -> Result<Christoffel> {
        let n = local.n;
        match self {
            Connection::Table(fields) => {
                if fields.len() != n * n * n {
                    return Err(GeometryError::Dimension("connection table size".into()));
                }
                let data = fields.iter().map(|f| f.jet(&local.point)).collect::<Result<_>>()?;
                Ok(Christoffel { n, data })
            }
            Connection::LeviCivita => Ok(levi_civita_at(local)),
            Connection::Conjugate(inner) => Ok(conjugate_at(local, &inner.coefficients(local)?)),
            Connection::Cubic { cubic, sign } => {
                let lc = levi_civita_at(local);
                let c: Vec<Jet> = cubic.iter().map(|f| f.jet(&local.point)).collect::<Result<_>>()?;
                let mut out = lc;
                for i in 0..n {
                    for j in 0..n {
                        for m in 0..n {
                            let k: Jet = (0..n).map(|l| local.g_inv[(m, l)] * c[(i * n + j) * n + l]).sum();
                            out.data[(i * n + j) * n + m] += k.scale(*sign);
                        }
                    }
                }
                Ok(out)
            }
        }
    }
}

/// Frame Koszul formula:
/// `2g(∇_{E_i}E_j,E_k) = E_i g_jk + E_j g_ik − E_k g_ij + g([E_i,E_j],E_k) − g([E_i,E_k],E_j) − g([E_j,E_k],E_i)`.
pub(crate) fn levi_civita_at(local: &Local) -> Christoffel {
    let n = local.n;
    let g = &local.g;
    let gb = |a: usize, b: usize, c: usize| -> Jet { (0..n).map(|l| local.c(a, b, l) * g[(l, c)]).sum() };
    let mut data = vec![Jet::ZERO; n * n * n];
    for i in 0..n {
        for j in 0..n {
            let lowered: Vec<Jet> = (0..n)
                .map(|k| {
                    local.dg[i][(j, k)] + local.dg[j][(i, k)] - local.dg[k][(i, j)] + gb(i, j, k)
                        - gb(i, k, j)
                        - gb(j, k, i)
                })
                .collect();
            for m in 0..n {
                data[(i * n + j) * n + m] = (0..n).map(|k| local.g_inv[(m, k)] * lowered[k]).sum::<Jet>().scale(0.5);
            }
        }
    }
    Christoffel { n, data }
}

/// `g(∇*_{E_i}E_j, E_k) = E_i g_jk − g(∇_{E_i}E_k, E_j)`.
pub(crate) fn conjugate_at(local: &Local, gamma: &Christoffel) -> Christoffel {
    let n = local.n;
    let mut data = vec![Jet::ZERO; n * n * n];
    for i in 0..n {
        for j in 0..n {
            let lowered: Vec<Jet> = (0..n)
                .map(|k| {
                    local.dg[i][(j, k)] - (0..n).map(|l| gamma.jet(i, k, l) * local.g[(l, j)]).sum::<Jet>()
                })
                .collect();
            for m in 0..n {
                data[(i * n + j) * n + m] = (0..n).map(|k| local.g_inv[(m, k)] * lowered[k]).sum();
            }
        }
    }
    Christoffel { n, data }
}

/// Connection coefficients at one point, as jets.
#[derive(Debug, Clone, PartialEq)]
pub struct Christoffel {
    n: usize,
    data: Vec<Jet>,
}

impl Christoffel {
    pub fn from_jets(n: usize, data: Vec<Jet>) -> Christoffel {
        assert_eq!(data.len(), n * n * n);
        Christoffel { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `Γ^k_ij` as a jet.
    pub fn jet(&self, i: usize, j: usize, k: usize) -> Jet {
        self.data[(i * self.n + j) * self.n + k]
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.jet(i, j, k).v
    }

    /// `Γ_i` with `(Γ_i)[(k, j)] = Γ^k_ij`, so `∇_{E_i}E_j = Γ_i e_j`.
    pub fn matrix(&self, i: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |k, j| self.get(i, j, k))
    }

    pub fn jet_matrix(&self, i: usize) -> JetMatrix {
        JetMatrix::from_fn(self.n, |k, j| self.jet(i, j, k))
    }

    /// `E_l(Γ_i)` entrywise.
    pub fn deriv_matrix(&self, local: &Local, l: usize, i: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |k, j| local.deriv(&self.jet(i, j, k), l))
    }

    /// `∇_X Y` for constant-component `X`, `Y`.
    pub fn apply(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.n);
        for i in 0..self.n {
            if x[i] != 0.0 {
                out += x[i] * self.matrix(i) * y;
            }
        }
        out
    }

    /// Entrywise difference, `self − other`.
    pub fn minus(&self, other: &Christoffel) -> Christoffel {
        Christoffel { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| *a - *b).collect() }
    }

    pub fn max_abs_diff(&self, other: &Christoffel) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a.v - b.v).abs()).fold(0.0, f64::max)
    }
}

/// Connection coefficients for a manifold at a point.
pub fn coefficients_at(m: &FrameManifold, c: &Connection, point: &[f64]) -> Result<Christoffel> {
    c.coefficients(&m.local(point)?)
}
