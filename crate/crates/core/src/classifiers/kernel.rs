use std::fmt;
use std::str::FromStr;

use super::{Classifier, WeightFunction};
use crate::data::{Dataset, Label, Metric};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelKind {
    /// `K(u) = exp(-u²)`
    Gaussian,
    /// `K(u) = exp(-min(|u|, 0.2)²)`: flat beyond 0.2, so distant points all
    /// weigh the same.
    PlateauExample3,
    /// `K(u) = (1 + u)^(-p)`: decays only polynomially.
    InversePoly(f64),
}

impl KernelKind {
    /// `ln K(u)` for `u ≥ 0`.
    #[inline]
    pub fn log_eval(self, u: f64) -> f64 {
        match self {
            KernelKind::Gaussian => -u * u,
            KernelKind::PlateauExample3 => {
                let c = u.abs().min(0.2);
                -c * c
            }
            KernelKind::InversePoly(p) => -p * u.ln_1p(),
        }
    }

    pub fn eval(self, u: f64) -> f64 {
        self.log_eval(u).exp()
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelKind::Gaussian => f.write_str("gaussian"),
            KernelKind::PlateauExample3 => f.write_str("plateau"),
            KernelKind::InversePoly(p) => write!(f, "inverse_poly({p})"),
        }
    }
}

impl FromStr for KernelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" => Ok(KernelKind::Gaussian),
            "plateau" | "plateau_example3" => Ok(KernelKind::PlateauExample3),
            "inverse_poly" => Ok(KernelKind::InversePoly(2.0)),
            other => Err(format!(
                "unknown kernel `{other}` (expected gaussian, plateau or inverse_poly)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BandwidthRule {
    Fixed(f64),
    /// `h = n^(-1/(d+2))`
    Power,
}

impl BandwidthRule {
    pub fn resolve(self, n: usize, dim: usize) -> f64 {
        match self {
            BandwidthRule::Fixed(h) => h,
            BandwidthRule::Power => (n.max(1) as f64).powf(-1.0 / (dim as f64 + 2.0)),
        }
    }
}

/// Kernel weight function `w_i = K(d(x, x_i)/h) / Σ_j K(d(x, x_j)/h)`.
///
/// Weights are formed as `exp(ln K_i - max_j ln K_j)` before normalizing, so
/// the largest kernel value is exactly 1 and nothing underflows as `h → 0`.
#[derive(Debug, Clone)]
pub struct KernelModel {
    data: Dataset,
    kind: KernelKind,
    h: f64,
    metric: Metric,
}

impl KernelModel {
    pub fn train(ds: &Dataset, kind: KernelKind, bandwidth: BandwidthRule, metric: Metric) -> Result<Self> {
        if ds.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if let KernelKind::InversePoly(p) = kind {
            if !(p > 0.0 && p.is_finite()) {
                return Err(Error::param("kernel_p", "exponent must be positive"));
            }
        }
        let h = bandwidth.resolve(ds.len(), ds.dim());
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::param("bandwidth", "must be a finite positive number"));
        }
        Ok(KernelModel {
            data: ds.clone(),
            kind,
            h,
            metric,
        })
    }

    pub fn bandwidth(&self) -> f64 {
        self.h
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    /// Unnormalized weights with the maximum scaled to 1.
    fn relative(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.data.check_dim(x)?;
        let mut logs: Vec<f64> = self
            .data
            .iter()
            .map(|(p, _)| self.kind.log_eval(self.metric.eval(x, p) / self.h))
            .collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for v in &mut logs {
            *v = (*v - top).exp();
        }
        Ok(logs)
    }
}

impl Classifier for KernelModel {
    fn dim(&self) -> usize {
        self.data.dim()
    }

    fn predict(&self, x: &[f64]) -> Result<Label> {
        let rel = self.relative(x)?;
        Ok(Label::from_vote(super::vote(&self.data, &rel)))
    }
}

impl WeightFunction for KernelModel {
    fn training(&self) -> &Dataset {
        &self.data
    }

    fn weights(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut w = self.relative(x)?;
        let total: f64 = w.iter().sum();
        for v in &mut w {
            *v /= total;
        }
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{generate, LabeledPoint, RandomStream, ScenarioSpec};

    #[test]
    fn kernel_values() {
        assert_eq!(KernelKind::Gaussian.eval(0.0), 1.0);
        assert!((KernelKind::Gaussian.eval(1.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(KernelKind::PlateauExample3.eval(5.0), KernelKind::PlateauExample3.eval(0.2));
        assert!((KernelKind::InversePoly(2.0).eval(1.0) - 0.25).abs() < 1e-15);
        assert!((BandwidthRule::Power.resolve(1000, 1) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn equidistant_pair_splits_evenly() {
        let ds = Dataset::from_points(
            2,
            [
                LabeledPoint::new(vec![1.0, 0.0], Label::Pos),
                LabeledPoint::new(vec![-1.0, 0.0], Label::Neg),
            ],
        )
        .unwrap();
        let m = KernelModel::train(&ds, KernelKind::Gaussian, BandwidthRule::Fixed(0.3), Metric::L2).unwrap();
        assert_eq!(m.weights(&[0.0, 0.7]).unwrap(), vec![0.5, 0.5]);
    }

    #[test]
    fn tiny_bandwidth_does_not_underflow() {
        let ds = generate(&ScenarioSpec::half_moons(30, 0.0), RandomStream::new(1, 0));
        let m = KernelModel::train(&ds, KernelKind::Gaussian, BandwidthRule::Fixed(1e-6), Metric::L2).unwrap();
        let w = m.weights(&[5.0, 5.0]).unwrap();
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(w.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn plateau_gives_uniform_weights_away_from_support() {
        let ds = generate(&ScenarioSpec::example3(500), RandomStream::new(4, 0));
        let m = KernelModel::train(&ds, KernelKind::PlateauExample3, BandwidthRule::Fixed(0.05), Metric::L2).unwrap();
        let w = m.weights(&[-0.7]).unwrap();
        assert!(w.iter().all(|&v| v == 1.0 / 500.0));
    }

    #[test]
    fn gaussian_weights_decrease_with_distance() {
        let ds = generate(&ScenarioSpec::half_moons(80, 0.1), RandomStream::new(6, 0));
        let m = KernelModel::train(&ds, KernelKind::Gaussian, BandwidthRule::Fixed(0.5), Metric::L2).unwrap();
        let q = [0.4, 0.1];
        let w = m.weights(&q).unwrap();
        for i in 0..ds.len() {
            for j in 0..ds.len() {
                let (di, dj) = (Metric::L2.eval(&q, ds.point(i)), Metric::L2.eval(&q, ds.point(j)));
                if di < dj {
                    assert!(w[i] > w[j]);
                }
            }
        }
    }

    #[test]
    fn bad_parameters() {
        let ds = generate(&ScenarioSpec::example3(5), RandomStream::new(4, 0));
        assert!(KernelModel::train(&ds, KernelKind::Gaussian, BandwidthRule::Fixed(0.0), Metric::L2).is_err());
        assert!(KernelModel::train(&ds, KernelKind::InversePoly(-1.0), BandwidthRule::Power, Metric::L2).is_err());
    }
}
