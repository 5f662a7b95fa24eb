//! Check records, sampling and the pointwise check runner.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fixture::{Fixture, Provenance};
use crate::point::Snapshot;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_POINTS: usize = 20;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    HypothesisUnmet,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypothesis_residual: Option<f64>,
    pub max_residual: f64,
    pub points_evaluated: usize,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Result of running one or more suites on a fixture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub fixture: String,
    pub provenance: Provenance,
    pub tolerance: f64,
    pub seed: u64,
    pub points: usize,
    pub checks: Vec<CheckRecord>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn get(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn all_passed(&self) -> bool {
        self.failures().next().is_none()
    }

    /// Merges another report over the same fixture and sorts checks by name.
    pub fn merge(&mut self, other: CheckReport) {
        self.checks.extend(other.checks);
        for n in other.notes {
            if !self.notes.contains(&n) {
                self.notes.push(n);
            }
        }
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<CheckReport> {
        serde_json::from_str(text)
    }
}

/// Sample point generation and tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Sampling {
    pub points: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// Overrides the fixture's box when set.
    pub sample_box: Option<Vec<(f64, f64)>>,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling { points: DEFAULT_POINTS, seed: DEFAULT_SEED, tolerance: DEFAULT_TOLERANCE, sample_box: None }
    }
}

impl Sampling {
    pub fn with_points(mut self, points: usize) -> Self {
        self.points = points;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn sample(&self, fixture: &Fixture) -> Vec<Vec<f64>> {
        let bounds = self.sample_box.clone().unwrap_or_else(|| fixture.sample_box.clone());
        sample_points(&bounds, self.points, self.seed)
    }
}

/// Uniform points in a box, deterministic per seed.
pub fn sample_points(bounds: &[(f64, f64)], count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| bounds.iter().map(|&(lo, hi)| if hi > lo { rng.random_range(lo..hi) } else { lo }).collect())
        .collect()
}

/// `|a − b| / (1 + max(|a|, |b|))`.
pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs().max(b.abs()))
}

pub fn rel_vec(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| rel(*x, *y)).fold(0.0, f64::max)
}

pub fn rel_mat(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| rel(*x, *y)).fold(0.0, f64::max)
}

/// Preconditions a check depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    None,
    /// Requires an almost contact structure.
    Contact,
    /// Requires an almost Hermitian structure.
    Hermitian,
    /// Requires either structure; the skew operator is `J` or `φ`.
    SkewOperator,
    /// Hermitian with `dΩ = 0`.
    AlmostKaehler,
    /// Hermitian, flagged Kaehler.
    Kaehler,
    /// Hermitian, flagged Kaehler and flagged holomorphic.
    Holomorphic,
    /// Contact with `dη = 0`, `dΦ = 0`.
    AlmostCosymplectic,
    /// Almost cosymplectic with `∇⁰φ = 0`.
    Cosymplectic,
    /// Almost cosymplectic with leaves of `η = 0` Kaehler (Levi-Civita criterion).
    KaehlerLeaves,
    /// Almost cosymplectic with `K_ξφ = 0` and `Aξ = 0`.
    XiHypotheses,
    /// `∇ = ∇⁰`.
    SelfDual,
}

/// A named pointwise check. `eval` returns the normalized residual at one point.
pub struct CheckDef {
    pub name: &'static str,
    pub gate: Gate,
    pub eval: Box<dyn Fn(&Snapshot) -> f64 + Send + Sync>,
    /// Fixed remark attached to every record of this check.
    pub note: Option<&'static str>,
}

impl CheckDef {
    pub fn new(name: &'static str, gate: Gate, eval: impl Fn(&Snapshot) -> f64 + Send + Sync + 'static) -> Self {
        CheckDef { name, gate, eval: Box::new(eval), note: None }
    }

    pub fn with_note(mut self, note: &'static str) -> Self {
        self.note = Some(note);
        self
    }
}

#[derive(Default, Clone, Copy)]
struct Acc {
    max: f64,
    count: usize,
}

impl Acc {
    fn push(&mut self, v: f64) {
        self.count += 1;
        // NaN propagates as a failure
        if v.is_nan() || v > self.max {
            self.max = if v.is_nan() { f64::INFINITY } else { v };
        }
    }
}

fn gate_available(gate: Gate, fixture: &Fixture) -> std::result::Result<(), &'static str> {
    use Gate::*;
    match gate {
        None | SelfDual => Ok(()),
        SkewOperator => match (&fixture.contact, &fixture.hermitian) {
            (Option::None, Option::None) => Err("no skew structure operator"),
            _ => Ok(()),
        },
        Contact | AlmostCosymplectic | Cosymplectic | KaehlerLeaves | XiHypotheses => {
            fixture.contact.as_ref().map(|_| ()).ok_or("no almost contact structure")
        }
        Hermitian | AlmostKaehler | Kaehler | Holomorphic => {
            fixture.hermitian.as_ref().map(|_| ()).ok_or("no almost Hermitian structure")
        }
    }
}

/// Runs checks over the sample points of a fixture.
pub fn run_checks(fixture: &Fixture, checks: &[CheckDef], sampling: &Sampling) -> CheckReport {
    let points = sampling.sample(fixture);
    let snapshots: Vec<Result<Snapshot>> = points.iter().map(|p| Snapshot::new(fixture, p)).collect();
    let mut records = Vec::with_capacity(checks.len());
    let tol = sampling.tolerance;
    let mut notes = Vec::new();
    if let Some(Err(e)) = snapshots.iter().find(|s| s.is_err()) {
        notes.push(format!("evaluation error: {e}"));
    }

    let mut gate_cache: Vec<(Gate, Acc)> = Vec::new();
    for check in checks {
        if let Err(why) = gate_available(check.gate, fixture) {
            records.push(CheckRecord {
                name: check.name.to_string(),
                hypothesis_residual: Option::None,
                max_residual: 0.0,
                points_evaluated: 0,
                status: Status::Skipped,
                note: Some(why.to_string()),
            });
            continue;
        }
        let gate_acc = match gate_cache.iter().find(|(g, _)| *g == check.gate) {
            Some((_, acc)) => *acc,
            Option::None => {
                let mut acc = Acc::default();
                for s in snapshots.iter().flatten() {
                    acc.push(crate::verify::gate_residual(check.gate, s));
                }
                gate_cache.push((check.gate, acc));
                acc
            }
        };
        let mut acc = Acc::default();
        let mut failed_points = 0;
        for s in &snapshots {
            match s {
                Ok(s) => acc.push((check.eval)(s)),
                Err(_) => failed_points += 1,
            }
        }
        let flags_ok = match check.gate {
            Gate::Kaehler => fixture.flags.kaehler,
            Gate::Holomorphic => fixture.flags.kaehler && fixture.flags.holomorphic,
            _ => true,
        };
        let gated = !matches!(check.gate, Gate::None | Gate::Contact | Gate::Hermitian | Gate::SkewOperator);
        let hypothesis_residual = gated.then_some(gate_acc.max);
        let (status, note) = if failed_points > 0 {
            (Status::Fail, Some(format!("{failed_points} point(s) failed to evaluate")))
        } else if !flags_ok {
            (Status::HypothesisUnmet, Some("fixture not flagged for this hypothesis".to_string()))
        } else if gated && gate_acc.max > tol {
            (Status::HypothesisUnmet, Option::None)
        } else if acc.max <= tol {
            (Status::Pass, Option::None)
        } else {
            (Status::Fail, Option::None)
        };
        records.push(CheckRecord {
            name: check.name.to_string(),
            hypothesis_residual,
            max_residual: acc.max,
            points_evaluated: acc.count,
            status,
            note: note.or(check.note.map(String::from)),
        });
    }
    records.sort_by(|a, b| a.name.cmp(&b.name));
    CheckReport {
        fixture: fixture.name.clone(),
        provenance: fixture.provenance,
        tolerance: tol,
        seed: sampling.seed,
        points: points.len(),
        checks: records,
        notes,
    }
}
