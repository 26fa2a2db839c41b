use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::sweep::PruneSpec;
use crate::classifiers::{ClassifierConfig, WeightFunction};
use crate::data::{generate, Dataset, Metric, RandomStream, ScenarioSpec};
use crate::error::{Error, Result};
use crate::pruning::adv_prune;

/// Where the outer expectation draws its ball centers from.
#[derive(Debug, Clone, PartialEq)]
pub enum OuterLaw {
    /// Fresh draws from the scenario distribution.
    Distribution,
    /// A fixed center.
    Anchor(Vec<f64>),
    /// Every training point, i.e. the empirical distribution of the sample.
    Empirical,
}

/// Finite stand-in for the supremum over a ball: the center, points on the
/// sphere and points inside it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallCandidates {
    pub boundary: usize,
    pub interior: usize,
}

impl Default for BallCandidates {
    fn default() -> Self {
        BallCandidates {
            boundary: 64,
            interior: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    pub classifier: ClassifierConfig,
    /// Scenario family; its `n` is replaced by each probed size.
    pub scenario: ScenarioSpec,
    /// Inner radius: the ball the supremum ranges over.
    pub a: f64,
    /// Outer radius: weight on training points farther than this counts.
    pub b: f64,
    pub sizes: Vec<usize>,
    /// Training sets drawn per size.
    pub outer: usize,
    /// Ball centers drawn per training set under [`OuterLaw::Distribution`].
    pub inner: usize,
    pub candidates: BallCandidates,
    pub metric: Metric,
    pub law: OuterLaw,
    /// Robustness gap; recorded, not used by the estimator.
    pub gamma: f64,
    pub seed: u64,
}

impl ProbeConfig {
    pub fn new(classifier: ClassifierConfig, scenario: ScenarioSpec, a: f64, b: f64) -> Self {
        ProbeConfig {
            classifier,
            scenario,
            a,
            b,
            sizes: vec![100, 1000],
            outer: 200,
            inner: 1,
            candidates: BallCandidates::default(),
            metric: Metric::L2,
            law: OuterLaw::Distribution,
            gamma: 0.0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        if !(self.a > 0.0 && self.a < self.b && self.b.is_finite()) {
            return Err(Error::param("a", "radii need 0 < a < b"));
        }
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(Error::param("sizes", "must be a non-empty list of positive sizes"));
        }
        if self.outer == 0 || self.inner == 0 {
            return Err(Error::param("outer", "Monte-Carlo counts must be at least 1"));
        }
        if let OuterLaw::Anchor(x) = &self.law {
            if x.len() != self.scenario.kind.dim() {
                return Err(Error::param("anchor", "dimension does not match the scenario"));
            }
        }
        if !(self.gamma >= 0.0) {
            return Err(Error::param("gamma", "must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeRow {
    pub n: usize,
    pub estimate: f64,
    pub std_err: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    pub rows: Vec<ProbeRow>,
}

impl ProbeResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,estimate,std_err\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{}\n",
                r.n,
                crate::data::fmt_real(r.estimate),
                crate::data::fmt_real(r.std_err)
            ));
        }
        out
    }
}

/// Largest weight mass on training points farther than `b`, over the
/// candidates `x + a·offset`.
pub fn sup_far_mass(
    model: &dyn WeightFunction,
    x: &[f64],
    a: f64,
    b: f64,
    metric: Metric,
    offsets: &[Vec<f64>],
) -> Result<f64> {
    let train = model.training();
    let mut cand = vec![0.0; x.len()];
    let mut best: f64 = 0.0;
    for off in offsets {
        for j in 0..x.len() {
            cand[j] = x[j] + a * off[j];
        }
        let w = model.weights(&cand)?;
        let mass: f64 = w
            .iter()
            .enumerate()
            .filter(|&(i, _)| metric.eval(train.point(i), &cand) > b)
            .map(|(_, &wi)| wi)
            .sum();
        best = best.max(mass);
    }
    Ok(best.min(1.0))
}

/// Unit-ball offsets: the origin, `boundary` points on the unit sphere and
/// `interior` points inside, all in the given metric.
fn ball_offsets(dim: usize, c: BallCandidates, metric: Metric, stream: RandomStream) -> Vec<Vec<f64>> {
    let mut rng = stream.rng();
    let zero = vec![0.0; dim];
    let dir = |rng: &mut rand_chacha::ChaCha8Rng| loop {
        let u: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let norm = metric.eval(&u, &zero);
        if norm > 0.0 {
            return u.into_iter().map(|v| v / norm).collect::<Vec<f64>>();
        }
    };
    let mut out = vec![zero.clone()];
    for _ in 0..c.boundary {
        out.push(dir(&mut rng));
    }
    for _ in 0..c.interior {
        let rho = rng.random::<f64>().powf(1.0 / dim as f64);
        out.push(dir(&mut rng).into_iter().map(|v| v * rho).collect());
    }
    out
}

fn summarize(n: usize, draws: &[f64]) -> ProbeRow {
    let m = draws.len() as f64;
    let estimate = draws.iter().sum::<f64>() / m;
    let std_err = if draws.len() < 2 {
        0.0
    } else {
        let var = draws.iter().map(|v| (v - estimate).powi(2)).sum::<f64>() / (m - 1.0);
        (var / m).sqrt()
    };
    ProbeRow { n, estimate, std_err }
}

/// Monte-Carlo estimate of `E sup_{x' ∈ B(X, a)} Σ wᵢ(x') 1{‖xᵢ − x'‖ > b}`
/// per sample size, with the standard error over training draws.
///
/// The supremum is taken over a finite candidate set, so estimates are lower
/// bounds on the true expectation.
pub fn probe_theorem1(cfg: &ProbeConfig) -> Result<ProbeResult> {
    cfg.validate()?;
    run(cfg, None)
}

/// Same estimator on the pruned sample: weights come from `S_r` and the
/// outer expectation is the average over the pruned points.
pub fn probe_theorem4(cfg: &ProbeConfig, prune: PruneSpec) -> Result<ProbeResult> {
    cfg.validate()?;
    if !(prune.r > 0.0 && prune.r.is_finite()) {
        return Err(Error::param("prune_r", "must be a finite positive number"));
    }
    run(cfg, Some(prune))
}

fn run(cfg: &ProbeConfig, prune: Option<PruneSpec>) -> Result<ProbeResult> {
    let dim = cfg.scenario.kind.dim();
    let offsets = ball_offsets(dim, cfg.candidates, cfg.metric, RandomStream::job(cfg.seed, &[2]));
    let mut rows = Vec::with_capacity(cfg.sizes.len());
    for &n in &cfg.sizes {
        let draws = (0..cfg.outer)
            .into_par_iter()
            .map(|s| {
                let sample = generate(&cfg.scenario.with_n(n), RandomStream::job(cfg.seed, &[10, n as u64, s as u64]));
                let (train, centers) = match prune {
                    Some(p) => {
                        let kept = adv_prune(&sample, p.r, p.metric)?.apply(&sample);
                        let centers = kept.clone();
                        (kept, centers)
                    }
                    None => {
                        let centers = match &cfg.law {
                            OuterLaw::Distribution => generate(
                                &cfg.scenario.with_n(cfg.inner),
                                RandomStream::job(cfg.seed, &[11, n as u64, s as u64]),
                            ),
                            OuterLaw::Anchor(x) => {
                                let mut d = Dataset::new(dim)?;
                                d.push(x, crate::data::Label::Pos)?;
                                d
                            }
                            OuterLaw::Empirical => sample.clone(),
                        };
                        (sample, centers)
                    }
                };
                let model = cfg.classifier.train(&train)?;
                let mut total = 0.0;
                for (x, _) in centers.iter() {
                    total += sup_far_mass(&model, x, cfg.a, cfg.b, cfg.metric, &offsets)?;
                }
                Ok(total / centers.len() as f64)
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(summarize(n, &draws));
    }
    Ok(ProbeResult { rows })
}
