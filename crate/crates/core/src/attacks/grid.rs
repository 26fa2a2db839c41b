use std::ops::ControlFlow;

use super::{AttackBudget, AttackResult};
use crate::classifiers::Classifier;
use crate::data::Label;
use crate::error::{Error, Result};

/// Default cap on grid points per attack.
pub const DEFAULT_GRID_CAP: u128 = 50_000_000;

pub fn grid_attack(
    model: &dyn Classifier,
    x: &[f64],
    y: Label,
    budget: &AttackBudget,
    resolution: f64,
) -> Result<AttackResult> {
    grid_attack_capped(model, x, y, budget, resolution, DEFAULT_GRID_CAP)
}

/// Evaluate the classifier on the grid `x + resolution·ℤ^d` inside the ℓ∞
/// ball, shell by shell outward (lexicographic within a shell), stopping at
/// the first label mismatch. Finding nothing proves nothing, so the outcome
/// is then `Unknown`.
pub fn grid_attack_capped(
    model: &dyn Classifier,
    x: &[f64],
    y: Label,
    budget: &AttackBudget,
    resolution: f64,
    cap: u128,
) -> Result<AttackResult> {
    if x.len() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: x.len(),
        });
    }
    if !(resolution > 0.0 && resolution <= budget.r) {
        return Err(Error::param("resolution", "must lie in (0, r]"));
    }
    let steps = (budget.r / resolution + 1e-9).floor() as i64;
    let d = x.len() as u32;
    let total = (2 * steps as u128 + 1).checked_pow(d).unwrap_or(u128::MAX);
    if total > cap {
        return Err(Error::CostGuard { points: total, cap });
    }

    if model.predict(x)? != y {
        return Ok(AttackResult::found(x, x.to_vec()));
    }
    let mut offset = vec![0i64; x.len()];
    let mut probe = x.to_vec();
    for shell in 1..=steps {
        let flow = visit_shell(shell, 0, false, &mut offset, &mut |off| {
            for j in 0..x.len() {
                probe[j] = x[j] + resolution * off[j] as f64;
            }
            if !budget.admits(&probe) {
                return Ok(ControlFlow::Continue(()));
            }
            Ok(if model.predict(&probe)? != y {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            })
        })?;
        if flow.is_break() {
            return Ok(AttackResult::found(x, probe));
        }
    }
    Ok(AttackResult::unknown())
}

/// Lexicographic walk over integer vectors with max-norm exactly `shell`.
fn visit_shell(
    shell: i64,
    j: usize,
    on_shell: bool,
    offset: &mut [i64],
    f: &mut dyn FnMut(&[i64]) -> Result<ControlFlow<()>>,
) -> Result<ControlFlow<()>> {
    if j == offset.len() {
        return f(offset);
    }
    let last = j + 1 == offset.len();
    for i in -shell..=shell {
        let hits = i.abs() == shell;
        if last && !on_shell && !hits {
            continue;
        }
        offset[j] = i;
        if visit_shell(shell, j + 1, on_shell || hits, offset, f)?.is_break() {
            return Ok(ControlFlow::Break(()));
        }
    }
    Ok(ControlFlow::Continue(()))
}
