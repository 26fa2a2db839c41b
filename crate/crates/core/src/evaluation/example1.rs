use crate::data::{example1_posterior, generate, Label, RandomStream, ScenarioSpec};
use crate::error::{Error, Result};

/// Scan steps per radius in the 1-D robustness check.
const SCAN_STEPS: usize = 1000;

/// Bayes-optimal versus constant `+1` on the oscillating-posterior scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example1Report {
    pub n: usize,
    pub r: f64,
    pub bayes_accuracy: f64,
    pub bayes_astuteness: f64,
    pub constant_accuracy: f64,
    pub constant_astuteness: f64,
    /// Fraction of test points where the constant classifier is robust.
    pub constant_robustness: f64,
}

fn bayes(x: f64, r: f64) -> Label {
    Label::from_vote(example1_posterior(x, r) - 0.5)
}

/// Every point of `[x − r, x + r] ∩ [0, 1]` at step `r / 1000` gets the
/// same label as `x`.
fn robust_1d(f: impl Fn(f64) -> Label, x: f64, r: f64) -> bool {
    let at = f(x);
    let lo = (x - r).max(0.0);
    let hi = (x + r).min(1.0);
    let step = r / SCAN_STEPS as f64;
    let mut u = lo;
    while u <= hi {
        if f(u) != at {
            return false;
        }
        u += step;
    }
    f(hi) == at
}

pub fn bayes_gap_demo(r: f64, n: usize, seed: u64) -> Result<Example1Report> {
    let spec = ScenarioSpec::example1(n, r);
    spec.validate()?;
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    let test = generate(&spec, RandomStream::new(seed, 0));
    let mut counts = [0usize; 5];
    for (x, y) in test.iter() {
        let x = x[0];
        let b = bayes(x, r);
        counts[0] += (b == y) as usize;
        counts[1] += (b == y && robust_1d(|u| bayes(u, r), x, r)) as usize;
        counts[2] += (y == Label::Pos) as usize;
        let robust = robust_1d(|_| Label::Pos, x, r);
        counts[3] += (y == Label::Pos && robust) as usize;
        counts[4] += robust as usize;
    }
    let f = |c: usize| c as f64 / n as f64;
    Ok(Example1Report {
        n,
        r,
        bayes_accuracy: f(counts[0]),
        bayes_astuteness: f(counts[1]),
        constant_accuracy: f(counts[2]),
        constant_astuteness: f(counts[3]),
        constant_robustness: f(counts[4]),
    })
}
