//! Coefficient tables at a point: connections, the difference tensor and
//! the operator families `A` and `h`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::connection::Christoffel;
use crate::curvature::h_tensors;
use crate::error::{GeometryError, Result};
use crate::fixture::Fixture;
use crate::point::{Snapshot, Which};
use crate::statistical::k_of;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    Nabla,
    NablaStar,
    LeviCivita,
    K,
    A,
    H,
}

impl TableKind {
    pub const NAMES: [&'static str; 6] = ["nabla", "nabla-star", "levi-civita", "K", "A", "h"];
    const ALL: [TableKind; 6] =
        [TableKind::Nabla, TableKind::NablaStar, TableKind::LeviCivita, TableKind::K, TableKind::A, TableKind::H];

    pub fn name(self) -> &'static str {
        Self::NAMES[Self::ALL.iter().position(|k| *k == self).expect("listed")]
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableKind {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<TableKind> {
        Self::NAMES.iter().position(|n| *n == s).map(|i| Self::ALL[i]).ok_or_else(|| {
            GeometryError::Invalid(format!("unknown table `{s}`; expected one of {}", Self::NAMES.join(", ")))
        })
    }
}

/// Rows of frame components, labelled by what they are components of.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub fixture: String,
    pub table: String,
    pub point: Vec<f64>,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub label: String,
    pub values: Vec<f64>,
}

/// Rows `∇_{E_i}E_j` for all frame pairs.
fn pair_rows(name: &str, c: &Christoffel) -> Vec<Row> {
    let n = c.dim();
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            rows.push(Row { label: format!("{name}_E{i} E{j}"), values: (0..n).map(|k| c.get(i, j, k)).collect() });
        }
    }
    rows
}

/// Rows `T E_j` of an operator with `entry(k, j)` = component `k` of `T E_j`.
fn operator_rows(name: &str, n: usize, entry: impl Fn(usize, usize) -> f64) -> Vec<Row> {
    (0..n).map(|j| Row { label: format!("{name} E{j}"), values: (0..n).map(|k| entry(k, j)).collect() }).collect()
}

pub fn coefficient_table(f: &Fixture, kind: TableKind, point: &[f64]) -> Result<Table> {
    if matches!(kind, TableKind::A | TableKind::H) && f.contact.is_none() {
        return Err(GeometryError::Invalid(format!("fixture `{}` has no almost contact structure", f.name)));
    }
    let s = Snapshot::new(f, point)?;
    let n = s.n();
    let rows = match kind {
        TableKind::Nabla => pair_rows("nabla", &s.nabla),
        TableKind::NablaStar => pair_rows("nabla*", &s.star),
        TableKind::LeviCivita => pair_rows("nabla0", &s.lc),
        TableKind::K => pair_rows("K", &k_of(&s, Which::Nabla)),
        TableKind::A => [("A", Which::Nabla), ("A*", Which::Star), ("A0", Which::LeviCivita)]
            .into_iter()
            .flat_map(|(name, w)| {
                let m = s.a_operator(w).values();
                operator_rows(name, n, |k, j| m[(k, j)])
            })
            .collect(),
        TableKind::H => {
            let h = h_tensors(&s);
            [("h0", &h.h0), ("h", &h.h), ("h*", &h.h_star)]
                .into_iter()
                .flat_map(|(name, m)| operator_rows(name, n, |k, j| m[(k, j)]))
                .collect()
        }
    };
    Ok(Table {
        fixture: f.name.clone(),
        table: kind.name().to_string(),
        point: point.to_vec(),
        columns: (0..n).map(|k| format!("E{k}")).collect(),
        rows,
    })
}

/// Center of the fixture's sampling box, or of `sample_box` when given.
pub fn box_center(f: &Fixture, sample_box: Option<&[(f64, f64)]>) -> Vec<f64> {
    sample_box.unwrap_or(&f.sample_box).iter().map(|(a, b)| 0.5 * (a + b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for name in TableKind::NAMES {
            assert_eq!(name.parse::<TableKind>().unwrap().name(), name);
        }
        assert!("k".parse::<TableKind>().is_err());
    }
}
