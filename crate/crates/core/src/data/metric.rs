use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    L2,
    Linf,
}

impl Metric {
    /// Distance without a dimension check; callers guarantee equal lengths.
    #[inline]
    pub fn eval(self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        match self {
            Metric::L2 => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
            Metric::Linf => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max),
        }
    }

    /// Squared Euclidean distance, or the plain distance for ℓ∞. Monotone in
    /// the true distance, which is all neighbor ranking needs.
    #[inline]
    pub(crate) fn rank_key(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Metric::L2 => a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum(),
            Metric::Linf => self.eval(a, b),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::L2 => "l2",
            Metric::Linf => "linf",
        })
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "l2" => Ok(Metric::L2),
            "linf" => Ok(Metric::Linf),
            other => Err(format!("unknown metric `{other}` (expected l2 or linf)")),
        }
    }
}

pub fn distance(metric: Metric, a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(metric.eval(a, b))
}

/// ℓ∞ distance from `x` to the closed box `[lo, hi]` (bounds may be infinite).
#[inline]
pub fn linf_to_box(x: &[f64], lo: &[f64], hi: &[f64]) -> f64 {
    let mut d: f64 = 0.0;
    for j in 0..x.len() {
        let gap = if x[j] < lo[j] {
            lo[j] - x[j]
        } else if x[j] > hi[j] {
            x[j] - hi[j]
        } else {
            0.0
        };
        d = d.max(gap);
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_values() {
        assert_eq!(distance(Metric::Linf, &[0.0, 0.0], &[0.3, -0.1]).unwrap(), 0.3);
        assert_eq!(distance(Metric::L2, &[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
    }

    #[test]
    fn mismatch_is_error() {
        assert!(distance(Metric::L2, &[0.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn box_distance() {
        assert_eq!(linf_to_box(&[0.2], &[0.25], &[0.5]), 0.04999999999999999);
        assert_eq!(linf_to_box(&[0.3, 0.0], &[0.25, -1.0], &[0.5, 1.0]), 0.0);
        assert_eq!(
            linf_to_box(&[0.0, 3.0], &[f64::NEG_INFINITY, 1.0], &[f64::INFINITY, 2.0]),
            1.0
        );
    }

    fn triple() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
        (1usize..5).prop_flat_map(|d| {
            let v = || proptest::collection::vec(-10.0f64..10.0, d);
            (v(), v(), v())
        })
    }

    proptest! {
        #[test]
        fn metric_axioms((a, b, c) in triple()) {
            for m in [Metric::L2, Metric::Linf] {
                let ab = m.eval(&a, &b);
                prop_assert!(ab >= 0.0);
                prop_assert_eq!(m.eval(&a, &a), 0.0);
                prop_assert_eq!(ab, m.eval(&b, &a));
                prop_assert!(m.eval(&a, &c) <= ab + m.eval(&b, &c) + 1e-12);
            }
        }
    }
}
