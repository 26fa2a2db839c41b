//! Minimal-perturbation attacks in the ℓ∞ norm.
//!
//! Histograms and 1-NN partition the input space into convex cells with a
//! constant label, so the closest adversarial example is the ℓ∞ projection
//! onto the nearest cell carrying the wrong label. Both exact attacks work
//! that way; [`grid_attack`] is a brute-force oracle for everything else.
//!
//! Balls are closed. Cells are half-open, so a projection that lands on a
//! face owned by a neighbor is pushed inward by half the boundary tolerance.

mod grid;
mod histogram;
mod lp;
mod nn1;

use std::fmt;

pub use grid::{grid_attack, grid_attack_capped, DEFAULT_GRID_CAP};
pub use histogram::{histogram_attack, reachable_center_form, reachable_interval_form};
pub use lp::min_linf_in_polygon;
pub use nn1::{nn1_attack_exact, Nn1Attacker};

use crate::classifiers::{Classifier, TrainedModel};
use crate::data::Label;
use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Closed axis-aligned box.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxRegion {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxRegion {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.iter().zip(&hi).any(|(l, h)| !(l <= h)) {
            return Err(Error::param("domain", "needs lo <= hi in every dimension"));
        }
        Ok(BoxRegion { lo, hi })
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&v, (&l, &h))| v >= l && v <= h)
    }

    pub fn clamp(&self, x: &mut [f64]) {
        for (v, (&l, &h)) in x.iter_mut().zip(self.lo.iter().zip(&self.hi)) {
            *v = v.clamp(l, h);
        }
    }
}

/// Threat model: the closed ℓ∞ ball of radius `r`, optionally restricted to
/// the feature space `domain`.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackBudget {
    pub r: f64,
    pub tolerance: f64,
    pub domain: Option<BoxRegion>,
}

impl AttackBudget {
    pub fn new(r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::param("r", "attack radius must be a finite positive number"));
        }
        Ok(AttackBudget {
            r,
            tolerance: DEFAULT_TOLERANCE,
            domain: None,
        })
    }

    pub fn with_domain(mut self, domain: Option<BoxRegion>) -> Self {
        self.domain = domain;
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    fn admits(&self, x: &[f64]) -> bool {
        self.domain.as_ref().is_none_or(|d| d.contains(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Found,
    CertifiedAstute,
    Unknown,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Found => "found",
            Outcome::CertifiedAstute => "certified",
            Outcome::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttackResult {
    pub outcome: Outcome,
    pub witness: Option<Vec<f64>>,
    /// ℓ∞ distance from the target to the witness.
    pub radius: Option<f64>,
}

impl AttackResult {
    pub(crate) fn found(x: &[f64], witness: Vec<f64>) -> Self {
        let radius = crate::data::Metric::Linf.eval(x, &witness);
        AttackResult {
            outcome: Outcome::Found,
            witness: Some(witness),
            radius: Some(radius),
        }
    }

    pub(crate) fn certified() -> Self {
        AttackResult {
            outcome: Outcome::CertifiedAstute,
            witness: None,
            radius: None,
        }
    }

    pub(crate) fn unknown() -> Self {
        AttackResult {
            outcome: Outcome::Unknown,
            witness: None,
            radius: None,
        }
    }

    pub fn is_found(&self) -> bool {
        self.outcome == Outcome::Found
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AttackMethod {
    /// Exact attack for the model family (histogram or 2-D Euclidean 1-NN).
    Exact,
    /// Grid search at the given step.
    Grid { resolution: f64 },
}

/// Attack bound to one model, with any per-model precomputation done.
pub enum Attacker<'a> {
    Histogram(&'a crate::classifiers::HistogramModel),
    Nn1(Nn1Attacker<'a>),
    Grid {
        model: &'a dyn Classifier,
        resolution: f64,
        cap: u128,
    },
}

impl<'a> Attacker<'a> {
    pub fn new(model: &'a TrainedModel, method: AttackMethod) -> Result<Self> {
        match method {
            AttackMethod::Grid { resolution } => Ok(Attacker::grid(model, resolution)),
            AttackMethod::Exact => match model {
                TrainedModel::Histogram(h) => Ok(Attacker::Histogram(h)),
                TrainedModel::Knn(k) => Ok(Attacker::Nn1(Nn1Attacker::new(k)?)),
                TrainedModel::Kernel(_) => Err(Error::Unsupported(
                    "no exact attack for kernel classifiers; use the grid oracle".into(),
                )),
            },
        }
    }

    pub fn grid(model: &'a dyn Classifier, resolution: f64) -> Self {
        Attacker::Grid {
            model,
            resolution,
            cap: DEFAULT_GRID_CAP,
        }
    }

    pub fn classifier(&self) -> &dyn Classifier {
        match self {
            Attacker::Histogram(h) => *h,
            Attacker::Nn1(a) => a.model(),
            Attacker::Grid { model, .. } => *model,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Attacker::Grid { .. })
    }

    pub fn tag(&self) -> String {
        match self {
            Attacker::Histogram(_) => "exact-histogram".into(),
            Attacker::Nn1(_) => "exact-1nn".into(),
            Attacker::Grid { resolution, .. } => format!("grid({resolution})"),
        }
    }

    pub fn attack(&self, x: &[f64], y: Label, budget: &AttackBudget) -> Result<AttackResult> {
        match self {
            Attacker::Histogram(h) => histogram_attack(h, x, y, budget),
            Attacker::Nn1(a) => a.attack(x, y, budget),
            Attacker::Grid {
                model,
                resolution,
                cap,
            } => grid_attack_capped(*model, x, y, budget, *resolution, *cap),
        }
    }
}

/// Astute at `(x, y)`: correct at `x` and no adversarial example within the
/// budget. With the grid oracle "none found" is taken as astute, which only
/// approximates the truth.
pub fn is_astute(attacker: &Attacker<'_>, x: &[f64], y: Label, budget: &AttackBudget) -> Result<bool> {
    if attacker.classifier().predict(x)? != y {
        return Ok(false);
    }
    Ok(match attacker.attack(x, y, budget)?.outcome {
        Outcome::Found => false,
        Outcome::CertifiedAstute | Outcome::Unknown => true,
    })
}

/// Move `w` toward `target` by `step` in ℓ∞ (or onto it if closer).
pub(crate) fn nudge_toward(w: &mut [f64], target: &[f64], step: f64) {
    let gap = crate::data::Metric::Linf.eval(w, target);
    if gap <= step {
        w.copy_from_slice(target);
        return;
    }
    let t = step / gap;
    for (v, &g) in w.iter_mut().zip(target) {
        *v += t * (g - *v);
    }
}
