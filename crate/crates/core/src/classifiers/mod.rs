//! Weight-function classifiers.
//!
//! A weight function assigns each training point a non-negative weight that
//! depends on the query and the training *locations* only, never on labels.
//! The prediction is `+1` iff the weighted label sum is strictly positive.

mod histogram;
mod kernel;
mod knn;

use std::fmt;

pub use histogram::{Cell, HistogramModel, RootRule, ROOT_INFLATION};
pub use kernel::{BandwidthRule, KernelKind, KernelModel};
pub use knn::KnnModel;

use crate::data::{Dataset, Label, Metric};
use crate::error::{Error, Result};

/// Anything that labels points.
pub trait Classifier: Sync {
    fn dim(&self) -> usize;
    fn predict(&self, x: &[f64]) -> Result<Label>;
}

/// A classifier given by per-training-point weights.
pub trait WeightFunction: Classifier {
    fn training(&self) -> &Dataset;
    fn weights(&self, x: &[f64]) -> Result<Vec<f64>>;
}

/// Rule turning a sample size into a neighbor count or split threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CountRule {
    Fixed(usize),
    /// `⌈√n⌉`
    Sqrt,
}

impl CountRule {
    /// Resolved value, clamped into `[1, max(n, 1)]`.
    pub fn resolve(self, n: usize) -> usize {
        let v = match self {
            CountRule::Fixed(k) => k,
            CountRule::Sqrt => (n as f64).sqrt().ceil() as usize,
        };
        v.clamp(1, n.max(1))
    }
}

impl fmt::Display for CountRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountRule::Fixed(k) => write!(f, "{k}"),
            CountRule::Sqrt => f.write_str("sqrt"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClassifierConfig {
    Knn {
        k: CountRule,
        metric: Metric,
    },
    Kernel {
        kind: KernelKind,
        bandwidth: BandwidthRule,
        metric: Metric,
    },
    Histogram {
        k: CountRule,
        root: RootRule,
    },
}

impl ClassifierConfig {
    /// 1-NN under the Euclidean metric.
    pub fn nn1() -> Self {
        ClassifierConfig::Knn {
            k: CountRule::Fixed(1),
            metric: Metric::L2,
        }
    }

    pub fn histogram() -> Self {
        ClassifierConfig::Histogram {
            k: CountRule::Sqrt,
            root: RootRule::DataBounds,
        }
    }

    pub fn kernel(kind: KernelKind) -> Self {
        ClassifierConfig::Kernel {
            kind,
            bandwidth: BandwidthRule::Power,
            metric: Metric::L2,
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            ClassifierConfig::Knn { .. } => "knn",
            ClassifierConfig::Kernel { .. } => "kernel",
            ClassifierConfig::Histogram { .. } => "histogram",
        }
    }

    pub fn train(&self, ds: &Dataset) -> Result<TrainedModel> {
        Ok(match self {
            ClassifierConfig::Knn { k, metric } => TrainedModel::Knn(KnnModel::train(ds, *k, *metric)?),
            ClassifierConfig::Kernel {
                kind,
                bandwidth,
                metric,
            } => TrainedModel::Kernel(KernelModel::train(ds, *kind, *bandwidth, *metric)?),
            ClassifierConfig::Histogram { k, root } => {
                TrainedModel::Histogram(HistogramModel::train(ds, *k, root.clone())?)
            }
        })
    }
}

#[derive(Debug, Clone)]
pub enum TrainedModel {
    Knn(KnnModel),
    Kernel(KernelModel),
    Histogram(HistogramModel),
}

impl TrainedModel {
    fn inner(&self) -> &dyn WeightFunction {
        match self {
            TrainedModel::Knn(m) => m,
            TrainedModel::Kernel(m) => m,
            TrainedModel::Histogram(m) => m,
        }
    }
}

impl Classifier for TrainedModel {
    fn dim(&self) -> usize {
        self.inner().dim()
    }

    fn predict(&self, x: &[f64]) -> Result<Label> {
        self.inner().predict(x)
    }
}

impl WeightFunction for TrainedModel {
    fn training(&self) -> &Dataset {
        self.inner().training()
    }

    fn weights(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.inner().weights(x)
    }
}

/// Classifier that ignores its input.
#[derive(Debug, Clone, Copy)]
pub struct Constant {
    pub dim: usize,
    pub label: Label,
}

impl Classifier for Constant {
    fn dim(&self) -> usize {
        self.dim
    }

    fn predict(&self, x: &[f64]) -> Result<Label> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(self.label)
    }
}

pub(crate) fn vote(ds: &Dataset, weights: &[f64]) -> f64 {
    weights
        .iter()
        .zip(ds.labels())
        .map(|(w, l)| w * l.sign())
        .sum()
}
