//! Accuracy and astuteness measurement, convergence sweeps and Monte-Carlo
//! probes of the r-consistency conditions.

mod example1;
mod probe;
mod sweep;

use std::collections::HashMap;

use rayon::prelude::*;

pub use example1::{bayes_gap_demo, Example1Report};
pub use probe::{probe_theorem1, probe_theorem4, sup_far_mass, BallCandidates, OuterLaw, ProbeConfig, ProbeResult, ProbeRow};
pub use sweep::{convergence_sweep, PruneSpec, SweepConfig, SweepResult, SweepRow, SWEEP_CSV_HEADER};

use crate::attacks::{AttackBudget, AttackMethod, AttackResult, Attacker, BoxRegion};
use crate::classifiers::{Classifier, RootRule, TrainedModel};
use crate::data::{Dataset, ScenarioKind};
use crate::error::{Error, Result};

/// Fraction of `test` labeled correctly.
pub fn accuracy(model: &dyn Classifier, test: &Dataset) -> Result<f64> {
    if test.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let hits = test
        .iter()
        .map(|(x, y)| model.predict(x).map(|p| (p == y) as usize))
        .sum::<Result<usize>>()?;
    Ok(hits as f64 / test.len() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub n_test: usize,
    pub accuracy: f64,
    pub astuteness: f64,
    pub r: f64,
    pub method: String,
    /// Set when astuteness rests on the grid oracle not finding anything.
    pub approximate: bool,
}

/// Attack every test point. Repeated `(x, y)` pairs are attacked once.
pub fn attack_all(attacker: &Attacker<'_>, test: &Dataset, budget: &AttackBudget) -> Result<Vec<AttackResult>> {
    let mut first: HashMap<(Vec<u64>, bool), usize> = HashMap::new();
    let mut unique = Vec::new();
    let slot: Vec<usize> = test
        .iter()
        .enumerate()
        .map(|(i, (x, y))| {
            let key = (x.iter().map(|v| v.to_bits()).collect(), y == crate::data::Label::Pos);
            *first.entry(key).or_insert_with(|| {
                unique.push(i);
                unique.len() - 1
            })
        })
        .collect();
    let results = unique
        .par_iter()
        .map(|&i| attacker.attack(test.point(i), test.label(i), budget))
        .collect::<Result<Vec<_>>>()?;
    Ok(slot.into_iter().map(|s| results[s].clone()).collect())
}

/// Accuracy and empirical astuteness of the attacker's model on `test`.
pub fn empirical_astuteness(attacker: &Attacker<'_>, test: &Dataset, budget: &AttackBudget) -> Result<EvalReport> {
    let acc = accuracy(attacker.classifier(), test)?;
    let results = attack_all(attacker, test, budget)?;
    // every attack reports a misclassified target as found at radius 0
    let astute = results.iter().filter(|r| !r.is_found()).count();
    Ok(EvalReport {
        n_test: test.len(),
        accuracy: acc,
        astuteness: astute as f64 / test.len() as f64,
        r: budget.r,
        method: attacker.tag(),
        approximate: !attacker.is_exact(),
    })
}

/// Train-free shortcut: attach the attack method to `model` and evaluate.
pub fn evaluate(model: &TrainedModel, test: &Dataset, budget: &AttackBudget, method: AttackMethod) -> Result<EvalReport> {
    empirical_astuteness(&Attacker::new(model, method)?, test, budget)
}

/// Feature-space box of a scenario with bounded support.
pub fn scenario_domain(kind: ScenarioKind) -> Option<BoxRegion> {
    kind.domain().map(|(lo, hi)| BoxRegion::new(lo, hi).expect("scenario domains are well formed"))
}

/// Histogram root covering the whole feature space of a bounded scenario,
/// or the data bounding cube otherwise.
pub fn scenario_root(kind: ScenarioKind) -> RootRule {
    match kind.domain() {
        Some((lo, hi)) => {
            let side = lo.iter().zip(&hi).map(|(l, h)| h - l).fold(0.0, f64::max);
            RootRule::Fixed {
                lo,
                side: side * crate::classifiers::ROOT_INFLATION,
            }
        }
        None => RootRule::DataBounds,
    }
}
