//! Fixtures: a frame manifold with optional structure tensors and a
//! statistical pair of connections, plus the built-in examples.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::connection::Connection;
use crate::error::{GeometryError, Result};
use crate::expr::Expr;
use crate::frame::{FrameManifold, TensorField, Valence};
use crate::statistical;

/// `(φ, ξ, η)` in frame components.
#[derive(Debug, Clone)]
pub struct AlmostContactStructure {
    pub phi: TensorField,
    pub xi: TensorField,
    pub eta: TensorField,
}

impl AlmostContactStructure {
    /// `phi[k][j]` is component `k` of `φE_j`; `xi[k]` is `ξ^k`; `eta[j] = η(E_j)`.
    pub fn new(phi: Vec<Vec<Expr>>, xi: Vec<Expr>, eta: Vec<Expr>, dim: usize) -> Result<Self> {
        if phi.len() != dim || phi.iter().any(|r| r.len() != dim) {
            return Err(GeometryError::Dimension(format!("phi must be {dim}x{dim}")));
        }
        Ok(AlmostContactStructure {
            phi: TensorField::new(Valence::Operator, phi.into_iter().flatten().collect(), dim)?,
            xi: TensorField::new(Valence::Vector, xi, dim)?,
            eta: TensorField::new(Valence::Covector, eta, dim)?,
        })
    }

    /// The standard structure `φE_1 = E_2, φE_2 = −E_1, ξ = E_0, η = E^0`
    /// (and `φE_{2a+1} = E_{2a+2}` in higher odd dimensions).
    pub fn canonical(dim: usize) -> Self {
        assert!(dim % 2 == 1, "almost contact manifolds are odd dimensional");
        let mut phi = vec![vec![Expr::zero(); dim]; dim];
        for a in (1..dim).step_by(2) {
            phi[a + 1][a] = Expr::one();
            phi[a][a + 1] = Expr::num(-1.0);
        }
        let e0 = |k: usize| Expr::num(if k == 0 { 1.0 } else { 0.0 });
        AlmostContactStructure::new(phi, (0..dim).map(e0).collect(), (0..dim).map(e0).collect(), dim)
            .expect("canonical structure")
    }
}

/// An almost complex structure `J` in frame components (`j[k][l]`: component `k` of `J E_l`).
#[derive(Debug, Clone)]
pub struct AlmostHermitianStructure {
    pub j: TensorField,
}

impl AlmostHermitianStructure {
    pub fn new(j: Vec<Vec<Expr>>, dim: usize) -> Result<Self> {
        if !dim.is_multiple_of(2) {
            return Err(GeometryError::Invalid("almost Hermitian manifolds are even dimensional".into()));
        }
        if j.len() != dim || j.iter().any(|r| r.len() != dim) {
            return Err(GeometryError::Dimension(format!("J must be {dim}x{dim}")));
        }
        Ok(AlmostHermitianStructure { j: TensorField::new(Valence::Operator, j.into_iter().flatten().collect(), dim)? })
    }

    /// `J E_{2a} = E_{2a+1}`, `J E_{2a+1} = −E_{2a}`.
    pub fn canonical(dim: usize) -> Self {
        let mut j = vec![vec![Expr::zero(); dim]; dim];
        for a in (0..dim).step_by(2) {
            j[a + 1][a] = Expr::one();
            j[a][a + 1] = Expr::num(-1.0);
        }
        AlmostHermitianStructure::new(j, dim).expect("canonical J")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    #[serde(rename = "dacko-variant-1")]
    DackoVariant1,
    #[serde(rename = "dacko-variant-2")]
    DackoVariant2,
    Flat,
    Product,
    Builtin,
    User,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::DackoVariant1 => "dacko-variant-1",
            Provenance::DackoVariant2 => "dacko-variant-2",
            Provenance::Flat => "flat",
            Provenance::Product => "product",
            Provenance::Builtin => "builtin",
            Provenance::User => "user",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    #[serde(default)]
    pub kaehler: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub holomorphic: bool,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub provenance: Provenance,
    pub manifold: FrameManifold,
    pub contact: Option<AlmostContactStructure>,
    pub hermitian: Option<AlmostHermitianStructure>,
    pub nabla: Connection,
    pub nabla_star: Connection,
    pub flags: Flags,
    /// Sampling box per coordinate.
    pub sample_box: Vec<(f64, f64)>,
}

impl Fixture {
    pub fn new(name: &str, provenance: Provenance, manifold: FrameManifold) -> Fixture {
        let n = manifold.dim();
        Fixture {
            name: name.to_string(),
            provenance,
            manifold,
            contact: None,
            hermitian: None,
            nabla: Connection::LeviCivita,
            nabla_star: Connection::LeviCivita,
            flags: Flags::default(),
            sample_box: vec![(-1.0, 1.0); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.manifold.dim()
    }

    /// Replaces the statistical pair by `(∇⁰+K, ∇⁰−K)` for a random totally
    /// symmetric cubic form drawn from `seed`.
    pub fn with_random_statistical(&self, seed: u64) -> Fixture {
        let (nabla, nabla_star) = statistical::random_statistical(&self.manifold, seed);
        let mut out = self.clone();
        out.name = format!("{}+K[{seed}]", self.name);
        out.nabla = nabla;
        out.nabla_star = nabla_star;
        out.flags.holomorphic = false;
        out
    }
}

fn dacko_manifold() -> FrameManifold {
    FrameManifold::parse(
        &["t", "x", "y"],
        &[&["1", "0", "0"], &["0", "exp(-t)", "0"], &["0", "0", "exp(t)"]],
        &[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]],
    )
    .expect("dacko manifold")
}

/// Rows `[i][j]` hold the frame components of `∇_{E_i}E_j`.
pub(crate) const DACKO_V1_NABLA: [[[f64; 3]; 3]; 3] = [
    [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]],
    [[0.0, 1.0, 1.0], [-1.0, 0.0, 1.0], [1.0, 1.0, 0.0]],
    [[0.0, 1.0, -1.0], [1.0, 1.0, 0.0], [1.0, 0.0, 1.0]],
];
pub(crate) const DACKO_V1_STAR: [[[f64; 3]; 3]; 3] = [
    [[-1.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, -1.0, 0.0]],
    [[0.0, 1.0, -1.0], [-1.0, 0.0, -1.0], [-1.0, -1.0, 0.0]],
    [[0.0, -1.0, -1.0], [-1.0, -1.0, 0.0], [1.0, 0.0, -1.0]],
];
pub(crate) const DACKO_V2_NABLA: [[[f64; 3]; 3]; 3] = [
    [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
    [[0.0, 1.0, 0.0], [-1.0, 0.0, 1.0], [0.0, 1.0, 0.0]],
    [[0.0, 0.0, -1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 1.0]],
];
pub(crate) const DACKO_V2_STAR: [[[f64; 3]; 3]; 3] = [
    [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
    [[0.0, 1.0, 0.0], [-1.0, 0.0, -1.0], [0.0, -1.0, 0.0]],
    [[0.0, 0.0, -1.0], [0.0, -1.0, 0.0], [1.0, 0.0, -1.0]],
];

/// Names accepted by [`builtin_fixture`].
pub const BUILTIN_NAMES: &[&str] = &[
    "dacko-variant-1",
    "dacko-variant-2",
    "flat-cosymplectic",
    "kenmotsu-model",
    "sasakian-heisenberg",
    "flat-kaehler",
    "hyperbolic-kaehler",
    "almost-kaehler-r4",
    "product-hyperbolic",
];

/// Looks up a built-in fixture by name.
pub fn builtin_fixture(name: &str) -> Result<Fixture> {
    let fixture = match name {
        "dacko-variant-1" | "dacko-variant-2" => {
            let v1 = name == "dacko-variant-1";
            let provenance = if v1 { Provenance::DackoVariant1 } else { Provenance::DackoVariant2 };
            let mut f = Fixture::new(name, provenance, dacko_manifold());
            f.contact = Some(AlmostContactStructure::canonical(3));
            let (nabla, star) = if v1 { (DACKO_V1_NABLA, DACKO_V1_STAR) } else { (DACKO_V2_NABLA, DACKO_V2_STAR) };
            f.nabla = Connection::from_rows(&nabla);
            f.nabla_star = Connection::from_rows(&star);
            f
        }
        "flat-cosymplectic" => {
            let mut f = Fixture::new(name, Provenance::Flat, FrameManifold::euclidean(&["t", "x", "y"]));
            f.contact = Some(AlmostContactStructure::canonical(3));
            f
        }
        "kenmotsu-model" => {
            let m = FrameManifold::parse(
                &["t", "x", "y"],
                &[&["1", "0", "0"], &["0", "exp(-t)", "0"], &["0", "0", "exp(-t)"]],
                &[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]],
            )?;
            let mut f = Fixture::new(name, Provenance::Builtin, m);
            f.contact = Some(AlmostContactStructure::canonical(3));
            f
        }
        "sasakian-heisenberg" => {
            // E_0 = ξ = 2∂z, E_1 = 2∂y, E_2 = 2(∂x + y∂z); [E_1, E_2] = 2ξ
            let m = FrameManifold::parse(
                &["x", "y", "z"],
                &[&["0", "0", "2"], &["0", "2", "0"], &["2", "0", "2*y"]],
                &[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]],
            )?;
            let mut f = Fixture::new(name, Provenance::Builtin, m);
            f.contact = Some(heisenberg_structure());
            f
        }
        "flat-kaehler" => {
            let mut f = Fixture::new(name, Provenance::Flat, FrameManifold::euclidean(&["u", "v"]));
            f.hermitian = Some(AlmostHermitianStructure::canonical(2));
            f.flags.kaehler = true;
            f.flags.holomorphic = true;
            f
        }
        "hyperbolic-kaehler" => {
            let mut f = Fixture::new(name, Provenance::Builtin, hyperbolic_plane());
            f.hermitian = Some(AlmostHermitianStructure::canonical(2));
            f.flags.kaehler = true;
            f.flags.holomorphic = true;
            f
        }
        "almost-kaehler-r4" => almost_kaehler_r4()?,
        "product-hyperbolic" => {
            let base = builtin_fixture("hyperbolic-kaehler")?.with_random_statistical(7);
            let lambda = Expr::call(crate::expr::Func::Sin, Expr::var(0));
            let mut f = crate::cosymplectic::product_construct(&base, &lambda)?;
            f.name = name.to_string();
            f
        }
        other => return Err(GeometryError::Invalid(format!("unknown builtin fixture `{other}`"))),
    };
    Ok(fixture)
}

/// Upper half-plane model `du² + e^{2u}dv²` with orthonormal frame `∂u, e^{-u}∂v`.
pub(crate) fn hyperbolic_plane() -> FrameManifold {
    FrameManifold::parse(&["u", "v"], &[&["1", "0"], &["0", "exp(-u)"]], &[&["1", "0"], &["0", "1"]])
        .expect("hyperbolic plane")
}

/// `φE_1 = −E_2`, `φE_2 = E_1`, so that `dη = Φ` for the Heisenberg frame.
fn heisenberg_structure() -> AlmostContactStructure {
    let z = Expr::zero;
    let phi = vec![vec![z(), z(), z()], vec![z(), z(), Expr::one()], vec![z(), Expr::num(-1.0), z()]];
    let e0 = vec![Expr::one(), z(), z()];
    AlmostContactStructure::new(phi, e0.clone(), e0, 3).expect("heisenberg structure")
}

/// Almost Kaehler structure on ℝ⁴ that is not Kaehler; see `almost_kaehler_r4` tests.
fn almost_kaehler_r4() -> Result<Fixture> {
    // Kodaira-Thurston type frame: E_0=∂a, E_1=∂b, E_2=∂c + a∂d, E_3=∂d with [E_0,E_2]=E_3.
    let m = FrameManifold::parse(
        &["a", "b", "c", "d"],
        &[&["1", "0", "0", "0"], &["0", "1", "0", "0"], &["0", "0", "1", "a"], &["0", "0", "0", "1"]],
        &[&["1", "0", "0", "0"], &["0", "1", "0", "0"], &["0", "0", "1", "0"], &["0", "0", "0", "1"]],
    )?;
    let mut f = Fixture::new("almost-kaehler-r4", Provenance::Builtin, m);
    f.hermitian = Some(AlmostHermitianStructure::canonical(4));
    Ok(f)
}
