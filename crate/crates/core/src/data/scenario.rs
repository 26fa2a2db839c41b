use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::{Dataset, Label, RandomStream};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    /// Two interleaved half circles in the plane with optional Gaussian noise.
    HalfMoons,
    /// Uniform on `[0, 1]` with a posterior that oscillates at scale `r`.
    Example1,
    /// `+1` uniform on `[0, 0.25)`, `-1` uniform on `(0.5, 1]`.
    Example2,
    /// Point masses: `(-1, -1)` with probability 0.1, `(+1, +1)` otherwise.
    Example3,
}

impl ScenarioKind {
    pub fn dim(self) -> usize {
        match self {
            ScenarioKind::HalfMoons => 2,
            _ => 1,
        }
    }

    /// Bounding box of the support, for scenarios defined on a bounded
    /// interval. Half-moons live on the whole plane.
    pub fn domain(self) -> Option<(Vec<f64>, Vec<f64>)> {
        match self {
            ScenarioKind::HalfMoons => None,
            ScenarioKind::Example1 | ScenarioKind::Example2 => Some((vec![0.0], vec![1.0])),
            ScenarioKind::Example3 => Some((vec![-1.0], vec![1.0])),
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScenarioKind::HalfMoons => "half_moons",
            ScenarioKind::Example1 => "example1",
            ScenarioKind::Example2 => "example2",
            ScenarioKind::Example3 => "example3",
        })
    }
}

impl FromStr for ScenarioKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "half_moons" | "halfmoons" | "moons" => Ok(ScenarioKind::HalfMoons),
            "example1" => Ok(ScenarioKind::Example1),
            "example2" => Ok(ScenarioKind::Example2),
            "example3" => Ok(ScenarioKind::Example3),
            other => Err(format!(
                "unknown scenario `{other}` (expected half_moons, example1, example2 or example3)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    pub n: usize,
    /// Per-coordinate Gaussian noise; half-moons only.
    pub sigma: f64,
    /// Oscillation scale of the posterior; example 1 only.
    pub r: f64,
}

impl ScenarioSpec {
    pub fn half_moons(n: usize, sigma: f64) -> Self {
        ScenarioSpec {
            kind: ScenarioKind::HalfMoons,
            n,
            sigma,
            r: 0.1,
        }
    }

    pub fn example1(n: usize, r: f64) -> Self {
        ScenarioSpec {
            kind: ScenarioKind::Example1,
            n,
            sigma: 0.0,
            r,
        }
    }

    pub fn example2(n: usize) -> Self {
        ScenarioSpec {
            kind: ScenarioKind::Example2,
            n,
            sigma: 0.0,
            r: 0.1,
        }
    }

    pub fn example3(n: usize) -> Self {
        ScenarioSpec {
            kind: ScenarioKind::Example3,
            n,
            sigma: 0.0,
            r: 0.1,
        }
    }

    pub fn with_n(self, n: usize) -> Self {
        ScenarioSpec { n, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::param("sigma", "must be a finite non-negative number"));
        }
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(Error::param("r", "must be a finite positive number"));
        }
        Ok(())
    }
}

/// `P(y = +1 | x)` for example 1, clamped into `[0, 1]`.
pub fn example1_posterior(x: f64, r: f64) -> f64 {
    (0.5 + (4.0 * PI * x / r).sin()).clamp(0.0, 1.0)
}

/// Draw `spec.n` i.i.d. labeled points.
///
/// Half-moons: the `+1` arc is `(cos t, sin t)` and the `-1` arc is
/// `(1 - cos t, 0.5 - sin t)` for `t` uniform on `[0, π]`; the class is a fair
/// coin per point.
pub fn generate(spec: &ScenarioSpec, stream: RandomStream) -> Dataset {
    let mut rng = stream.rng();
    let mut ds = Dataset::new(spec.kind.dim()).expect("scenario dimension is positive");
    match spec.kind {
        ScenarioKind::HalfMoons => {
            let noise = (spec.sigma > 0.0).then(|| Normal::new(0.0, spec.sigma).expect("sigma validated"));
            for _ in 0..spec.n {
                let label = if rng.random_bool(0.5) { Label::Pos } else { Label::Neg };
                let t = rng.random::<f64>() * PI;
                let mut p = match label {
                    Label::Pos => [t.cos(), t.sin()],
                    Label::Neg => [1.0 - t.cos(), 0.5 - t.sin()],
                };
                if let Some(noise) = &noise {
                    p[0] += noise.sample(&mut rng);
                    p[1] += noise.sample(&mut rng);
                }
                push(&mut ds, &p, label);
            }
        }
        ScenarioKind::Example1 => {
            for _ in 0..spec.n {
                let x = rng.random::<f64>();
                let label = if rng.random::<f64>() < example1_posterior(x, spec.r) {
                    Label::Pos
                } else {
                    Label::Neg
                };
                push(&mut ds, &[x], label);
            }
        }
        ScenarioKind::Example2 => {
            for _ in 0..spec.n {
                let u = rng.random::<f64>();
                if rng.random_bool(0.5) {
                    push(&mut ds, &[0.25 * u], Label::Pos);
                } else {
                    push(&mut ds, &[1.0 - 0.5 * u], Label::Neg);
                }
            }
        }
        ScenarioKind::Example3 => {
            for _ in 0..spec.n {
                if rng.random::<f64>() < 0.1 {
                    push(&mut ds, &[-1.0], Label::Neg);
                } else {
                    push(&mut ds, &[1.0], Label::Pos);
                }
            }
        }
    }
    ds
}

fn push(ds: &mut Dataset, p: &[f64], label: Label) {
    ds.push(p, label).expect("generated points are finite");
}
