use super::{lp::{clip, min_linf_in_polygon}, nudge_toward, AttackBudget, AttackResult};
use crate::classifiers::{Classifier, KnnModel, WeightFunction};
use crate::data::{linf_to_box, Label, Metric};
use crate::error::{Error, Result};

/// Voronoi cell of one training point, clipped to a large frame: the
/// half-planes along its edges and its bounding box.
#[derive(Debug, Clone)]
struct VoronoiCell {
    halfplanes: Vec<[f64; 3]>,
    bbox_lo: [f64; 2],
    bbox_hi: [f64; 2],
    empty: bool,
}

/// Exact ℓ∞ attack on a 2-D Euclidean 1-NN classifier.
///
/// The region where training point `z` is the nearest neighbor is the
/// intersection of the half-planes `‖u − z‖² ≤ ‖u − x_i‖²`, which are linear
/// in `u`. The closest adversarial example is the minimum, over all `z` with
/// the wrong label, of the ℓ∞ distance from the target to `z`'s cell, each
/// found by a 3-variable LP. Cells are precomputed once per model; the LP only
/// sees bisectors that actually bound the cell.
pub struct Nn1Attacker<'a> {
    model: &'a KnnModel,
    cells: Vec<VoronoiCell>,
}

impl<'a> Nn1Attacker<'a> {
    pub fn new(model: &'a KnnModel) -> Result<Self> {
        if model.k() != 1 || model.metric() != Metric::L2 {
            return Err(Error::Unsupported(format!(
                "exact attack needs 1-NN under l2 (got k = {}, metric {}); use the grid oracle",
                model.k(),
                model.metric()
            )));
        }
        let ds = model.training();
        if ds.dim() != 2 {
            return Err(Error::Unsupported(format!(
                "exact 1-NN attack is 2-D only (got d = {}); use the grid oracle",
                ds.dim()
            )));
        }
        let pts: Vec<[f64; 2]> = ds.iter().map(|(p, _)| [p[0], p[1]]).collect();
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in &pts {
            for j in 0..2 {
                lo[j] = lo[j].min(p[j]);
                hi[j] = hi[j].max(p[j]);
            }
        }
        let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]);
        let pad = 100.0 * (extent + 1.0);
        let frame = [lo[0] - pad, lo[1] - pad, hi[0] + pad, hi[1] + pad];
        let eps = 1e-9 * (extent + 1.0);

        use rayon::prelude::*;
        let cells = (0..pts.len())
            .into_par_iter()
            .map(|z| voronoi_cell(&pts, z, frame, eps))
            .collect();
        Ok(Nn1Attacker { model, cells })
    }

    pub fn model(&self) -> &'a KnnModel {
        self.model
    }

    pub fn attack(&self, x: &[f64], y: Label, budget: &AttackBudget) -> Result<AttackResult> {
        if self.model.predict(x)? != y {
            return Ok(AttackResult::found(x, x.to_vec()));
        }
        let ds = self.model.training();
        let target = [x[0], x[1]];
        let mut domain_rows: Vec<[f64; 3]> = Vec::new();
        if let Some(dom) = &budget.domain {
            for j in 0..2 {
                let mut up = [0.0; 3];
                up[j] = 1.0;
                up[2] = dom.hi[j];
                let mut down = [0.0; 3];
                down[j] = -1.0;
                down[2] = -dom.lo[j];
                domain_rows.push(up);
                domain_rows.push(down);
            }
        }

        let slack = budget.tolerance;
        let mut hits: Vec<(f64, usize, [f64; 2])> = Vec::new();
        let mut best = f64::INFINITY;
        let mut rows: Vec<[f64; 3]> = Vec::new();
        for (z, cell) in self.cells.iter().enumerate() {
            if cell.empty || ds.label(z) == y {
                continue;
            }
            let lb = linf_to_box(x, &cell.bbox_lo, &cell.bbox_hi) - slack;
            if lb > budget.r || lb > best {
                continue;
            }
            rows.clear();
            rows.extend_from_slice(&cell.halfplanes);
            rows.extend_from_slice(&domain_rows);
            if let Some((u, t)) = min_linf_in_polygon(target, &rows) {
                if t <= budget.r {
                    best = best.min(t);
                    hits.push((t, z, u));
                }
            }
        }
        hits.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        // pull the LP optimum into the open cell interior; the owner is
        // strictly inside its own cell
        for (_, z, u) in hits {
            let owner = ds.point(z);
            for step in [slack / 2.0, slack / 8.0, slack] {
                let mut w = u.to_vec();
                nudge_toward(&mut w, owner, step);
                if let Some(dom) = &budget.domain {
                    dom.clamp(&mut w);
                }
                if self.model.predict(&w)? != y && Metric::Linf.eval(x, &w) <= budget.r + budget.tolerance {
                    return Ok(AttackResult::found(x, w));
                }
            }
        }
        Ok(AttackResult::certified())
    }
}

/// Convenience wrapper that builds the cells for a single query.
pub fn nn1_attack_exact(model: &KnnModel, x: &[f64], y: Label, budget: &AttackBudget) -> Result<AttackResult> {
    if x.len() != 2 {
        return Err(Error::Unsupported(format!(
            "exact 1-NN attack is 2-D only (got d = {}); use the grid oracle",
            x.len()
        )));
    }
    Nn1Attacker::new(model)?.attack(x, y, budget)
}

fn voronoi_cell(pts: &[[f64; 2]], z: usize, frame: [f64; 4], eps: f64) -> VoronoiCell {
    let p = pts[z];
    let mut poly: Vec<[f64; 2]> = vec![
        [frame[0], frame[1]],
        [frame[2], frame[1]],
        [frame[2], frame[3]],
        [frame[0], frame[3]],
    ];
    let empty_cell = || VoronoiCell {
        halfplanes: Vec::new(),
        bbox_lo: [0.0; 2],
        bbox_hi: [0.0; 2],
        empty: true,
    };

    let mut order: Vec<(f64, usize)> = pts
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != z)
        .map(|(i, q)| ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2), i))
        .collect();
    order.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let reach = |poly: &[[f64; 2]]| {
        poly.iter()
            .map(|v| ((v[0] - p[0]).powi(2) + (v[1] - p[1]).powi(2)).sqrt())
            .fold(0.0, f64::max)
    };
    let mut radius = reach(&poly);
    for (d2, i) in order {
        if d2 == 0.0 {
            // coincident points: the lower index owns the location
            if i < z {
                return empty_cell();
            }
            continue;
        }
        let d = d2.sqrt();
        if d / 2.0 > radius + eps {
            break;
        }
        let q = pts[i];
        let a = [(q[0] - p[0]) / d, (q[1] - p[1]) / d];
        let b = a[0] * (p[0] + q[0]) / 2.0 + a[1] * (p[1] + q[1]) / 2.0;
        let worst = poly
            .iter()
            .map(|v| a[0] * v[0] + a[1] * v[1] - b)
            .fold(f64::NEG_INFINITY, f64::max);
        if worst > 0.0 {
            poly = clip(&poly, a, b);
            if poly.len() < 3 {
                return empty_cell();
            }
            radius = reach(&poly);
        }
    }

    // many bisectors can meet in one vertex (cocircular sites); merging
    // near-coincident vertices and reading the constraints off the edges
    // keeps the LP small
    let mut merged: Vec<[f64; 2]> = Vec::with_capacity(poly.len());
    for v in poly {
        if merged.last().is_none_or(|u| (u[0] - v[0]).abs().max((u[1] - v[1]).abs()) > eps) {
            merged.push(v);
        }
    }
    while merged.len() > 1 {
        let (f, l) = (merged[0], merged[merged.len() - 1]);
        if (f[0] - l[0]).abs().max((f[1] - l[1]).abs()) > eps {
            break;
        }
        merged.pop();
    }
    if merged.len() < 3 {
        return empty_cell();
    }
    let mut halfplanes = Vec::with_capacity(merged.len());
    for k in 0..merged.len() {
        let (u, v) = (merged[k], merged[(k + 1) % merged.len()]);
        let n = [v[1] - u[1], u[0] - v[0]];
        let len = n[0].hypot(n[1]);
        halfplanes.push([n[0] / len, n[1] / len, (n[0] * u[0] + n[1] * u[1]) / len]);
    }

    let mut bbox_lo = [f64::INFINITY; 2];
    let mut bbox_hi = [f64::NEG_INFINITY; 2];
    for v in &merged {
        for j in 0..2 {
            bbox_lo[j] = bbox_lo[j].min(v[j] - eps);
            bbox_hi[j] = bbox_hi[j].max(v[j] + eps);
        }
    }
    VoronoiCell {
        halfplanes,
        bbox_lo,
        bbox_hi,
        empty: false,
    }
}
