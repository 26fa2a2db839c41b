use super::{AttackBudget, AttackResult};
use crate::classifiers::{Cell, Classifier, HistogramModel};
use crate::data::{linf_to_box, Label, Metric};
use crate::error::Result;

/// Candidate region: `lo ≤ u`, `u ≤ hi` or `u < hi` where `open_hi` is set.
struct Region {
    lo: Vec<f64>,
    hi: Vec<f64>,
    open_hi: Vec<bool>,
}

impl Region {
    fn from_cell(c: &Cell) -> Self {
        let d = c.lo.len();
        Region {
            lo: c.lo.clone(),
            hi: c.hi(),
            open_hi: vec![true; d],
        }
    }

    /// Complement of the root cube as `2d` slabs: `u_j < lo_j` or `u_j ≥ hi_j`.
    fn exterior(root_lo: &[f64], side: f64) -> Vec<Region> {
        let d = root_lo.len();
        let mut out = Vec::with_capacity(2 * d);
        for j in 0..d {
            let mut below = Region {
                lo: vec![f64::NEG_INFINITY; d],
                hi: vec![f64::INFINITY; d],
                open_hi: vec![false; d],
            };
            below.hi[j] = root_lo[j];
            below.open_hi[j] = true;
            let mut above = Region {
                lo: vec![f64::NEG_INFINITY; d],
                hi: vec![f64::INFINITY; d],
                open_hi: vec![false; d],
            };
            above.lo[j] = root_lo[j] + side;
            out.push(below);
            out.push(above);
        }
        out
    }

    /// Intersection with the closed domain box; `None` when empty.
    fn restrict(mut self, budget: &AttackBudget) -> Option<Self> {
        if let Some(dom) = &budget.domain {
            for j in 0..self.lo.len() {
                self.lo[j] = self.lo[j].max(dom.lo[j]);
                if dom.hi[j] < self.hi[j] {
                    self.hi[j] = dom.hi[j];
                    self.open_hi[j] = false;
                }
            }
        }
        let empty = (0..self.lo.len()).any(|j| {
            self.lo[j] > self.hi[j] || (self.open_hi[j] && self.lo[j] >= self.hi[j])
        });
        (!empty).then_some(self)
    }

    /// Closest point of the region to `x`, pulled off open faces by `step`.
    fn witness(&self, x: &[f64], step: f64) -> Vec<f64> {
        let mut w: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(j, &v)| v.clamp(self.lo[j], self.hi[j]))
            .collect();
        for j in 0..w.len() {
            if self.open_hi[j] && w[j] >= self.hi[j] {
                let room = if self.lo[j].is_finite() {
                    (self.hi[j] - self.lo[j]) / 2.0
                } else {
                    step
                };
                w[j] = self.hi[j] - step.min(room);
            }
        }
        w
    }
}

/// Cell test in interval form: ℓ∞ distance from `x` to the closed cube is at
/// most `r`.
pub fn reachable_interval_form(cell: &Cell, x: &[f64], r: f64) -> bool {
    linf_to_box(x, &cell.lo, &cell.hi()) <= r
}

/// Cell test in center form: `‖x − center‖∞ ≤ side/2 + r`. Equivalent to the
/// interval form for cubes.
pub fn reachable_center_form(cell: &Cell, x: &[f64], r: f64) -> bool {
    Metric::Linf.eval(x, &cell.center()) <= cell.side / 2.0 + r
}

/// Exact ℓ∞ attack on a histogram.
///
/// Every leaf whose label differs from `y` is a candidate, and for `y = +1`
/// so is the exterior of the root cube (labeled `-1` by default). The
/// nearest candidate within `r` yields the witness; if none is within `r`
/// the point is certified astute.
pub fn histogram_attack(model: &HistogramModel, x: &[f64], y: Label, budget: &AttackBudget) -> Result<AttackResult> {
    if model.predict(x)? != y {
        return Ok(AttackResult::found(x, x.to_vec()));
    }
    let (root_lo, side) = model.root();
    let mut regions: Vec<Region> = model
        .leaf_cells()
        .iter()
        .filter(|c| c.label != y)
        .map(Region::from_cell)
        .collect();
    if y == Label::Pos {
        regions.extend(Region::exterior(root_lo, side));
    }

    let mut ranked: Vec<(f64, Region)> = regions
        .into_iter()
        .filter_map(|reg| reg.restrict(budget))
        .map(|reg| (linf_to_box(x, &reg.lo, &reg.hi), reg))
        .filter(|(d, _)| *d <= budget.r)
        .collect();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0));

    let step = budget.tolerance / 2.0;
    for (_, reg) in &ranked {
        let w = reg.witness(x, step);
        if model.predict(&w)? != y && Metric::Linf.eval(x, &w) <= budget.r + budget.tolerance {
            return Ok(AttackResult::found(x, w));
        }
    }
    Ok(AttackResult::certified())
}
