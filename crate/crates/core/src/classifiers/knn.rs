use std::cmp::Ordering;

use super::{vote, Classifier, CountRule, WeightFunction};
use crate::data::{Dataset, Label, Metric};
use crate::error::{Error, Result};

/// k-nearest-neighbor weight function: `1/k` on the `k` closest training
/// points, ties at the k-th distance going to the lowest index.
#[derive(Debug, Clone)]
pub struct KnnModel {
    data: Dataset,
    k: usize,
    metric: Metric,
}

impl KnnModel {
    pub fn train(ds: &Dataset, k: CountRule, metric: Metric) -> Result<Self> {
        if ds.is_empty() {
            return Err(Error::EmptyDataset);
        }
        Ok(KnnModel {
            data: ds.clone(),
            k: k.resolve(ds.len()),
            metric,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    /// Indices of the `k` nearest training points, nearest first.
    pub fn neighbors(&self, x: &[f64]) -> Result<Vec<usize>> {
        self.data.check_dim(x)?;
        let mut keyed: Vec<(f64, usize)> = self
            .data
            .iter()
            .enumerate()
            .map(|(i, (p, _))| (self.metric.rank_key(x, p), i))
            .collect();
        let by_key = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if self.k < keyed.len() {
            keyed.select_nth_unstable_by(self.k - 1, by_key);
            keyed.truncate(self.k);
        }
        keyed.sort_unstable_by(by_key);
        Ok(keyed.into_iter().map(|(_, i)| i).collect())
    }

    /// Index of the single nearest neighbor (lowest index on ties).
    pub fn nearest(&self, x: &[f64]) -> Result<usize> {
        self.data.check_dim(x)?;
        let mut best = (f64::INFINITY, 0);
        for (i, (p, _)) in self.data.iter().enumerate() {
            let d = self.metric.rank_key(x, p);
            if d.total_cmp(&best.0) == Ordering::Less {
                best = (d, i);
            }
        }
        Ok(best.1)
    }
}

impl Classifier for KnnModel {
    fn dim(&self) -> usize {
        self.data.dim()
    }

    fn predict(&self, x: &[f64]) -> Result<Label> {
        if self.k == 1 {
            return Ok(self.data.label(self.nearest(x)?));
        }
        let v: f64 = self
            .neighbors(x)?
            .into_iter()
            .map(|i| self.data.label(i).sign())
            .sum();
        Ok(Label::from_vote(v))
    }
}

impl WeightFunction for KnnModel {
    fn training(&self) -> &Dataset {
        &self.data
    }

    fn weights(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut w = vec![0.0; self.data.len()];
        let share = 1.0 / self.k as f64;
        for i in self.neighbors(x)? {
            w[i] = share;
        }
        debug_assert_eq!(
            Label::from_vote((vote(&self.data, &w) * self.k as f64).round()),
            self.predict(x)?
        );
        Ok(w)
    }
}
