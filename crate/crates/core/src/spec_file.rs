//! JSON manifold spec files: ingestion with field diagnostics, and emission.
//!
//! Connection tables are nested `[i][j][k]` arrays holding `Γ^k_ij`, the
//! `k`-th frame component of `∇_{E_i}E_j`. The optional `cubic` entry gives a
//! totally symmetric `C_ijk = g(K_{E_i}E_j, E_k)` and yields `∇⁰ ± K`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::connection::Connection;
use crate::expr::Expr;
use crate::fixture::{AlmostContactStructure, AlmostHermitianStructure, Fixture, Flags, Provenance};
use crate::frame::FrameManifold;
use crate::report::Sampling;
use crate::statistical;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
}

impl SpecError {
    fn field(field: impl Into<String>, message: impl ToString) -> SpecError {
        SpecError::Field { field: field.into(), message: message.to_string() }
    }
}

/// An expression entry: a string, or a bare JSON number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Text(String),
    Number(f64),
}

impl Entry {
    fn text(&self) -> String {
        match self {
            Entry::Text(t) => t.clone(),
            Entry::Number(v) => Expr::num(*v).to_text(&[]),
        }
    }
}

impl From<String> for Entry {
    fn from(s: String) -> Self {
        Entry::Text(s)
    }
}

pub type Table = Vec<Vec<Vec<Entry>>>;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nabla: Option<Table>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nabla_star: Option<Table>,
    #[serde(default, rename = "random_K_seed", skip_serializing_if = "Option::is_none")]
    pub random_k_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cubic: Option<Table>,
}

impl ConnectionsSpec {
    fn is_empty(&self) -> bool {
        *self == ConnectionsSpec::default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureSpec {
    pub phi: Vec<Vec<Entry>>,
    pub xi: Vec<Entry>,
    pub eta: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HermitianSpec {
    #[serde(rename = "J")]
    pub j: Vec<Vec<Entry>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingSpec {
    #[serde(default, rename = "box", skip_serializing_if = "Option::is_none")]
    pub sample_box: Option<Vec<(f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub coords: Vec<String>,
    pub frame: Vec<Vec<Entry>>,
    pub metric: Vec<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "ConnectionsSpec::is_empty")]
    pub connections: ConnectionsSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hermitian: Option<HermitianSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flags: Option<Flags>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling: Option<SamplingSpec>,
}

impl ManifoldSpec {
    pub fn from_json(text: &str) -> Result<ManifoldSpec, SpecError> {
        serde_json::from_str(text).map_err(|e| SpecError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string().split(" at line").next().unwrap_or_default().to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    /// Sampling from the spec over `base`; `None` fields keep `base`.
    pub fn sampling(&self, base: Sampling) -> Sampling {
        let Some(s) = &self.sampling else { return base };
        Sampling {
            points: s.points.unwrap_or(base.points),
            seed: s.seed.unwrap_or(base.seed),
            tolerance: s.tolerance.unwrap_or(base.tolerance),
            sample_box: s.sample_box.clone().or(base.sample_box),
        }
    }
}

fn square<'a>(field: &str, rows: &'a [Vec<Entry>], n: usize) -> Result<&'a [Vec<Entry>], SpecError> {
    if rows.len() != n {
        return Err(SpecError::field(field, format!("expected {n} rows, got {}", rows.len())));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(SpecError::field(format!("{field}[{i}]"), format!("expected {n} entries, got {}", r.len())));
    }
    Ok(rows)
}

fn parse_entry(m: &FrameManifold, field: &str, e: &Entry) -> Result<Expr, SpecError> {
    crate::expr::parse(&e.text(), m.coords()).map_err(|err| SpecError::field(field, err))
}

fn parse_matrix(coords: &[String], field: &str, rows: &[Vec<Entry>], n: usize) -> Result<Vec<Vec<Expr>>, SpecError> {
    square(field, rows, n)?
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, e)| {
                    crate::expr::parse(&e.text(), coords).map_err(|err| SpecError::field(format!("{field}[{i}][{j}]"), err))
                })
                .collect()
        })
        .collect()
}

fn parse_vector(m: &FrameManifold, field: &str, v: &[Entry]) -> Result<Vec<Expr>, SpecError> {
    let n = m.dim();
    if v.len() != n {
        return Err(SpecError::field(field, format!("expected {n} entries, got {}", v.len())));
    }
    v.iter().enumerate().map(|(i, e)| parse_entry(m, &format!("{field}[{i}]"), e)).collect()
}

/// Flattens an `[i][j][k]` table in the `(i*n + j)*n + k` order.
fn parse_table(m: &FrameManifold, field: &str, t: &Table) -> Result<Vec<Expr>, SpecError> {
    let n = m.dim();
    if t.len() != n {
        return Err(SpecError::field(field, format!("expected {n} blocks, got {}", t.len())));
    }
    let mut out = Vec::with_capacity(n * n * n);
    for (i, block) in t.iter().enumerate() {
        let name = format!("{field}[{i}]");
        for (j, row) in square(&name, block, n)?.iter().enumerate() {
            for (k, e) in row.iter().enumerate() {
                out.push(parse_entry(m, &format!("{field}[{i}][{j}][{k}]"), e)?);
            }
        }
    }
    Ok(out)
}

fn geometry(field: &str) -> impl Fn(crate::error::GeometryError) -> SpecError + '_ {
    move |e| SpecError::field(field, e)
}

impl ManifoldSpec {
    /// Validates the spec and builds a fixture.
    pub fn to_fixture(&self) -> Result<Fixture, SpecError> {
        let n = self.dim;
        if n == 0 || n > crate::jet::MAX_DIM {
            return Err(SpecError::field("dim", format!("must be between 1 and {}", crate::jet::MAX_DIM)));
        }
        if self.coords.len() != n {
            return Err(SpecError::field("coords", format!("expected {n} names, got {}", self.coords.len())));
        }
        let frame = parse_matrix(&self.coords, "frame", &self.frame, n)?;
        let metric = parse_matrix(&self.coords, "metric", &self.metric, n)?;
        let manifold = FrameManifold::new(self.coords.clone(), frame, metric).map_err(geometry("frame"))?;
        let name = self.name.clone().unwrap_or_else(|| "spec".to_string());
        let mut f = Fixture::new(&name, Provenance::User, manifold);

        if let Some(s) = &self.structure {
            let phi = parse_matrix(&self.coords, "structure.phi", &s.phi, n)?;
            let xi = parse_vector(&f.manifold, "structure.xi", &s.xi)?;
            let eta = parse_vector(&f.manifold, "structure.eta", &s.eta)?;
            f.contact = Some(AlmostContactStructure::new(phi, xi, eta, n).map_err(geometry("structure"))?);
        }
        if let Some(h) = &self.hermitian {
            let j = parse_matrix(&self.coords, "hermitian.J", &h.j, n)?;
            f.hermitian = Some(AlmostHermitianStructure::new(j, n).map_err(geometry("hermitian"))?);
        }
        f.flags = self.flags.unwrap_or_default();

        let c = &self.connections;
        let given = [c.nabla.is_some(), c.random_k_seed.is_some(), c.cubic.is_some()].iter().filter(|b| **b).count();
        if given > 1 {
            return Err(SpecError::field("connections", "give at most one of nabla, random_K_seed, cubic"));
        }
        if c.nabla_star.is_some() && c.nabla.is_none() {
            return Err(SpecError::field("connections.nabla_star", "requires connections.nabla"));
        }
        if let Some(t) = &c.nabla {
            let nabla = Connection::table(parse_table(&f.manifold, "connections.nabla", t)?, n).map_err(geometry("connections.nabla"))?;
            f.nabla_star = match &c.nabla_star {
                Some(t) => Connection::table(parse_table(&f.manifold, "connections.nabla_star", t)?, n)
                    .map_err(geometry("connections.nabla_star"))?,
                None => nabla.clone().conjugate(),
            };
            f.nabla = nabla;
        }
        if let Some(t) = &c.cubic {
            let cubic = parse_table(&f.manifold, "connections.cubic", t)?;
            check_symmetric(&f.manifold, &cubic)?;
            f.nabla = Connection::cubic(cubic.clone(), n, 1.0).map_err(geometry("connections.cubic"))?;
            f.nabla_star = Connection::cubic(cubic, n, -1.0).map_err(geometry("connections.cubic"))?;
        }
        if let Some(seed) = c.random_k_seed {
            let (a, b) = statistical::random_statistical(&f.manifold, seed);
            f.nabla = a;
            f.nabla_star = b;
        }
        if let Some(b) = self.sampling.as_ref().and_then(|s| s.sample_box.clone()) {
            if b.len() != n {
                return Err(SpecError::field("sampling.box", format!("expected {n} intervals, got {}", b.len())));
            }
            f.sample_box = b;
        }
        Ok(f)
    }

    /// A spec describing `fixture`. Connections must be tables, cubic pairs,
    /// or the Levi-Civita pair.
    pub fn from_fixture(fixture: &Fixture) -> Result<ManifoldSpec, SpecError> {
        let m = &fixture.manifold;
        let n = m.dim();
        let coords = m.coords().to_vec();
        let text = |e: &Expr| Entry::Text(e.to_text(&coords));
        let matrix = |f: &dyn Fn(usize, usize) -> Expr| -> Vec<Vec<Entry>> {
            (0..n).map(|i| (0..n).map(|j| text(&f(i, j))).collect()).collect()
        };
        let table = |flat: &[Expr]| -> Table {
            (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| text(&flat[(i * n + j) * n + k])).collect()).collect()).collect()
        };
        let structure = fixture.contact.as_ref().map(|c| {
            let phi = c.phi.exprs();
            StructureSpec {
                phi: matrix(&|k, j| phi[k * n + j].clone()),
                xi: c.xi.exprs().iter().map(text).collect(),
                eta: c.eta.exprs().iter().map(text).collect(),
            }
        });
        let hermitian = fixture.hermitian.as_ref().map(|h| {
            let j = h.j.exprs();
            HermitianSpec { j: matrix(&|k, l| j[k * n + l].clone()) }
        });
        let connections = emit_connections(fixture, &table)?;
        let flags = fixture.flags;
        Ok(ManifoldSpec {
            name: Some(fixture.name.clone()),
            dim: n,
            coords: coords.clone(),
            frame: matrix(&|i, a| m.frame_expr(i, a).clone()),
            metric: matrix(&|i, j| m.metric_expr(i, j).clone()),
            connections,
            structure,
            hermitian,
            flags: (flags != Flags::default()).then_some(flags),
            sampling: (fixture.sample_box != vec![(-1.0, 1.0); n])
                .then(|| SamplingSpec { sample_box: Some(fixture.sample_box.clone()), ..Default::default() }),
        })
    }
}

/// Points used to compare expression coefficients when emitting.
fn probe_points(n: usize) -> Vec<Vec<f64>> {
    crate::report::sample_points(&vec![(-0.9, 0.9); n], 5, 7)
}

fn same_values(a: &[Expr], b: &[Expr], n: usize) -> bool {
    probe_points(n).iter().all(|p| {
        a.iter().zip(b).all(|(x, y)| match (x.eval(p), y.eval(p)) {
            (Ok(u), Ok(v)) => (u - v).abs() <= 1e-12 * (1.0 + u.abs()),
            _ => false,
        })
    })
}

fn check_symmetric(m: &FrameManifold, cubic: &[Expr]) -> Result<(), SpecError> {
    let n = m.dim();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let a = &cubic[(i * n + j) * n + k];
                for (p, q, r) in [(j, i, k), (i, k, j)] {
                    if !same_values(std::slice::from_ref(a), std::slice::from_ref(&cubic[(p * n + q) * n + r]), n) {
                        return Err(SpecError::field(
                            format!("connections.cubic[{i}][{j}][{k}]"),
                            format!("not totally symmetric: differs from [{p}][{q}][{r}]"),
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

fn emit_connections(fixture: &Fixture, table: &dyn Fn(&[Expr]) -> Table) -> Result<ConnectionsSpec, SpecError> {
    let n = fixture.dim();
    let scaled = |cubic: &[crate::frame::Field], sign: f64| -> Vec<Expr> {
        cubic.iter().map(|f| Expr::mul(Expr::num(sign), f.expr().clone())).collect()
    };
    let zeros = vec![Expr::zero(); n * n * n];
    let unsupported = || SpecError::field("connections", "this connection pair has no spec-file form");
    Ok(match (&fixture.nabla, &fixture.nabla_star) {
        (Connection::LeviCivita, Connection::LeviCivita) => ConnectionsSpec::default(),
        (Connection::Table(_), star) => {
            let a = fixture.nabla.exprs().expect("table");
            let nabla_star = match star {
                Connection::Conjugate(inner) if matches!(**inner, Connection::Table(_)) => {
                    if !same_values(&inner.exprs().expect("table"), &a, n) {
                        return Err(unsupported());
                    }
                    None
                }
                Connection::Table(_) => Some(table(&star.exprs().expect("table"))),
                _ => return Err(unsupported()),
            };
            ConnectionsSpec { nabla: Some(table(&a)), nabla_star, ..Default::default() }
        }
        (Connection::Cubic { cubic, sign }, star) => {
            let c = scaled(cubic, *sign);
            let partner = match star {
                Connection::Cubic { cubic: c2, sign: s2 } => scaled(c2, -s2),
                Connection::LeviCivita => zeros.clone(),
                _ => return Err(unsupported()),
            };
            if !same_values(&c, &partner, n) {
                return Err(unsupported());
            }
            if same_values(&c, &zeros, n) {
                ConnectionsSpec::default()
            } else {
                ConnectionsSpec { cubic: Some(table(&c)), ..Default::default() }
            }
        }
        _ => return Err(unsupported()),
    })
}

/// Reads a spec from JSON text and builds its fixture and sampling.
pub fn load(text: &str, base: Sampling) -> Result<(Fixture, Sampling), SpecError> {
    let spec = ManifoldSpec::from_json(text)?;
    let fixture = spec.to_fixture()?;
    Ok((fixture, spec.sampling(base)))
}
