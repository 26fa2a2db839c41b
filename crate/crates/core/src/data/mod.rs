//! Points, labels, datasets and the synthetic scenarios.

mod io;
mod metric;
mod rng;
mod scenario;

use std::fmt;
use std::str::FromStr;

pub use io::{read_csv, write_csv, CsvReader};
pub(crate) use io::fmt_real;
pub use metric::{distance, linf_to_box, Metric};
pub use rng::RandomStream;
pub use scenario::{example1_posterior, generate, ScenarioKind, ScenarioSpec};

use crate::error::{Error, Result};

/// Binary label in `{+1, -1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Neg,
    Pos,
}

impl Label {
    /// The label as a real number, `+1.0` or `-1.0`.
    #[inline]
    pub fn sign(self) -> f64 {
        match self {
            Label::Pos => 1.0,
            Label::Neg => -1.0,
        }
    }

    /// Sign rule shared by every weight function: `+1` iff the vote is
    /// strictly positive.
    #[inline]
    pub fn from_vote(vote: f64) -> Label {
        if vote > 0.0 {
            Label::Pos
        } else {
            Label::Neg
        }
    }

    pub fn flip(self) -> Label {
        match self {
            Label::Pos => Label::Neg,
            Label::Neg => Label::Pos,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Pos => "+1",
            Label::Neg => "-1",
        })
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "+1" => Ok(Label::Pos),
            "-1" => Ok(Label::Neg),
            other => Err(format!("unknown label token `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPoint {
    pub point: Vec<f64>,
    pub label: Label,
}

impl LabeledPoint {
    pub fn new(point: Vec<f64>, label: Label) -> Self {
        LabeledPoint { point, label }
    }
}

/// Labeled sample with a fixed dimension.
///
/// Coordinates are stored row-major in one buffer. Indices are stable and
/// are the identity every tie-break downstream relies on.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    dim: usize,
    coords: Vec<f64>,
    labels: Vec<Label>,
}

impl Dataset {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::param("dimension", "must be at least 1"));
        }
        Ok(Dataset {
            dim,
            coords: Vec::new(),
            labels: Vec::new(),
        })
    }

    pub fn from_points(dim: usize, points: impl IntoIterator<Item = LabeledPoint>) -> Result<Self> {
        let mut ds = Dataset::new(dim)?;
        for p in points {
            ds.push(&p.point, p.label)?;
        }
        Ok(ds)
    }

    pub fn push(&mut self, point: &[f64], label: Label) -> Result<()> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: point.len(),
            });
        }
        if point.iter().any(|c| !c.is_finite()) {
            return Err(Error::param("point", "coordinates must be finite"));
        }
        self.coords.extend_from_slice(point);
        self.labels.push(label);
        Ok(())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    pub fn label(&self, i: usize) -> Label {
        self.labels[i]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = (&[f64], Label)> + '_ {
        self.coords
            .chunks_exact(self.dim)
            .zip(self.labels.iter().copied())
    }

    /// New dataset holding the given indices, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            coords.extend_from_slice(self.point(i));
            labels.push(self.labels[i]);
        }
        Dataset {
            dim: self.dim,
            coords,
            labels,
        }
    }

    /// Same points with labels replaced.
    pub fn with_labels(&self, labels: Vec<Label>) -> Result<Dataset> {
        if labels.len() != self.len() {
            return Err(Error::param("labels", "length differs from point count"));
        }
        Ok(Dataset {
            dim: self.dim,
            coords: self.coords.clone(),
            labels,
        })
    }

    pub fn count_label(&self, label: Label) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    pub(crate) fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }
}

/// Minimum distance over opposite-label pairs; `+inf` when either class is
/// absent.
pub fn min_interclass_distance(ds: &Dataset, metric: Metric) -> f64 {
    let (pos, neg): (Vec<usize>, Vec<usize>) =
        (0..ds.len()).partition(|&i| ds.label(i) == Label::Pos);
    let mut best = f64::INFINITY;
    for &i in &pos {
        let a = ds.point(i);
        for &j in &neg {
            let d = metric.eval(a, ds.point(j));
            if d < best {
                best = d;
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(rows: &[(&[f64], Label)]) -> Dataset {
        let mut d = Dataset::new(rows[0].0.len()).unwrap();
        for (p, l) in rows {
            d.push(p, *l).unwrap();
        }
        d
    }

    #[test]
    fn label_tokens() {
        assert_eq!("+1".parse::<Label>().unwrap(), Label::Pos);
        assert_eq!("-1".parse::<Label>().unwrap(), Label::Neg);
        assert!("1".parse::<Label>().is_err());
        assert_eq!(Label::Pos.to_string(), "+1");
        assert_eq!(Label::from_vote(0.0), Label::Neg);
    }

    #[test]
    fn push_rejects_wrong_dimension_and_nan() {
        let mut d = Dataset::new(2).unwrap();
        assert!(matches!(
            d.push(&[1.0], Label::Pos),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
        assert!(d.push(&[f64::NAN, 0.0], Label::Pos).is_err());
        assert!(Dataset::new(0).is_err());
    }

    #[test]
    fn interclass_single_pair() {
        let d = ds(&[(&[0.0], Label::Pos), (&[0.15], Label::Neg)]);
        assert!((min_interclass_distance(&d, Metric::Linf) - 0.15).abs() < 1e-15);
    }

    #[test]
    fn interclass_single_class_is_infinite() {
        let d = ds(&[(&[0.0], Label::Pos), (&[0.5], Label::Pos)]);
        assert_eq!(min_interclass_distance(&d, Metric::L2), f64::INFINITY);
    }

    #[test]
    fn interclass_matches_exhaustive_scan() {
        let spec = ScenarioSpec::half_moons(50, 0.3);
        let d = generate(&spec, RandomStream::new(3, 0));
        let mut best = f64::INFINITY;
        for i in 0..d.len() {
            for j in 0..d.len() {
                if d.label(i) != d.label(j) {
                    best = best.min(distance(Metric::L2, d.point(i), d.point(j)).unwrap());
                }
            }
        }
        assert_eq!(min_interclass_distance(&d, Metric::L2), best);
    }

    #[test]
    fn subset_keeps_order() {
        let d = ds(&[
            (&[0.0], Label::Pos),
            (&[1.0], Label::Neg),
            (&[2.0], Label::Pos),
        ]);
        let s = d.subset(&[2, 0]);
        assert_eq!(s.point(0), &[2.0]);
        assert_eq!(s.label(1), Label::Pos);
    }
}
