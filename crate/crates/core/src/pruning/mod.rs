//! Adversarial pruning: the largest r-separated subset of a sample.
//!
//! Two points conflict when their labels differ and they are at distance
//! `≤ 2r`. Conflicts only join opposite labels, so the conflict graph is
//! bipartite and its maximum independent set follows exactly from a maximum
//! matching by König's construction.

mod matching;

use rayon::prelude::*;

pub use matching::{max_matching, Matching};

use crate::classifiers::{ClassifierConfig, TrainedModel};
use crate::data::{Dataset, Label, Metric};
use crate::error::{Error, Result};

/// Bipartite conflict graph. Left vertices are the `+1` points, right
/// vertices the `-1` points; both sides are stored as dataset indices in
/// increasing order, and edges as local (left, right) positions.
#[derive(Debug, Clone)]
pub struct ConflictGraph {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// For each left vertex, its right neighbors in increasing order.
    pub adj: Vec<Vec<usize>>,
}

impl ConflictGraph {
    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    /// Edges as dataset-index pairs `(plus_index, minus_index)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&v| (self.left[u], self.right[v])))
            .collect()
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::param("r", "must be a finite positive number"))
    }
}

/// Exact pairwise construction; the scan is sharded over left vertices and
/// merged in index order.
pub fn build_conflict_graph(ds: &Dataset, r: f64, metric: Metric) -> Result<ConflictGraph> {
    check_radius(r)?;
    let (left, right): (Vec<usize>, Vec<usize>) =
        (0..ds.len()).partition(|&i| ds.label(i) == Label::Pos);
    let reach = 2.0 * r;
    let adj = left
        .par_iter()
        .map(|&i| {
            let a = ds.point(i);
            right
                .iter()
                .enumerate()
                .filter(|&(_, &j)| metric.eval(a, ds.point(j)) <= reach)
                .map(|(v, _)| v)
                .collect()
        })
        .collect();
    Ok(ConflictGraph { left, right, adj })
}

/// Retained indices of a pruned sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrunedSet {
    /// Sorted dataset indices.
    pub kept: Vec<usize>,
    /// Size of the maximum matching; `kept.len() + matching_size == n`.
    pub matching_size: usize,
}

impl PrunedSet {
    pub fn apply(&self, ds: &Dataset) -> Dataset {
        ds.subset(&self.kept)
    }
}

/// Largest r-separated subset.
///
/// From a maximum matching, mark everything reachable by alternating paths
/// from unmatched `+1` vertices. Reachable `+1` vertices and unreachable
/// `-1` vertices form a maximum independent set (the complement of König's
/// minimum vertex cover).
pub fn adv_prune(ds: &Dataset, r: f64, metric: Metric) -> Result<PrunedSet> {
    let g = build_conflict_graph(ds, r, metric)?;
    let m = max_matching(&g);
    let (reach_left, reach_right) = alternating_reach(&g, &m);

    let mut kept: Vec<usize> = g
        .left
        .iter()
        .zip(&reach_left)
        .filter(|(_, &z)| z)
        .map(|(&i, _)| i)
        .chain(
            g.right
                .iter()
                .zip(&reach_right)
                .filter(|(_, &z)| !z)
                .map(|(&j, _)| j),
        )
        .collect();
    kept.sort_unstable();

    let matching_size = m.size();
    if kept.len() + matching_size != ds.len() {
        return Err(Error::Internal(format!(
            "König extraction kept {} of {} with matching {}",
            kept.len(),
            ds.len(),
            matching_size
        )));
    }
    Ok(PrunedSet {
        kept,
        matching_size,
    })
}

/// Alternating BFS from unmatched left vertices, lowest index first.
fn alternating_reach(g: &ConflictGraph, m: &Matching) -> (Vec<bool>, Vec<bool>) {
    let mut zl = vec![false; g.left.len()];
    let mut zr = vec![false; g.right.len()];
    let mut queue = std::collections::VecDeque::new();
    for (u, mate) in m.mate_left.iter().enumerate() {
        if mate.is_none() {
            zl[u] = true;
            queue.push_back(u);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &v in &g.adj[u] {
            if zr[v] {
                continue;
            }
            zr[v] = true;
            if let Some(w) = m.mate_right[v] {
                if !zl[w] {
                    zl[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    (zl, zr)
}

/// Prune at radius `r`, then train on what remains.
pub fn robust_nonpar_train(
    ds: &Dataset,
    cfg: &ClassifierConfig,
    r: f64,
    metric: Metric,
) -> Result<TrainedModel> {
    if ds.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let pruned = adv_prune(ds, r, metric)?;
    if pruned.kept.is_empty() {
        return Err(Error::Internal("pruned set is empty".into()));
    }
    cfg.train(&pruned.apply(ds))
}

/// `|S_r| / n`: no classifier is astute at radius `r` on a larger fraction
/// of the sample.
pub fn robust_accuracy_upper_bound(ds: &Dataset, r: f64, metric: Metric) -> Result<f64> {
    if ds.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(adv_prune(ds, r, metric)?.kept.len() as f64 / ds.len() as f64)
}
