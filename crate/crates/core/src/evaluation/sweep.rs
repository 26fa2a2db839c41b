use std::path::Path;

use rayon::prelude::*;

use super::empirical_astuteness;
use crate::attacks::{AttackBudget, AttackMethod, Attacker};
use crate::classifiers::ClassifierConfig;
use crate::data::{generate, fmt_real, Metric, RandomStream, ScenarioSpec};
use crate::error::{Error, Result};
use crate::pruning::robust_nonpar_train;

pub const SWEEP_CSV_HEADER: &str = "n,accuracy_mean,accuracy_std,astuteness_mean,astuteness_std";

/// Adversarial pruning applied to every training draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PruneSpec {
    pub r: f64,
    pub metric: Metric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Scenario family; its `n` is replaced by each training size.
    pub scenario: ScenarioSpec,
    pub sizes: Vec<usize>,
    pub repeats: usize,
    pub test_size: usize,
    pub classifier: ClassifierConfig,
    pub prune: Option<PruneSpec>,
    pub budget: AttackBudget,
    pub method: AttackMethod,
    pub seed: u64,
}

impl SweepConfig {
    pub const DEFAULT_SIZES: [usize; 8] = [20, 50, 100, 200, 500, 1000, 2000, 3000];

    pub fn new(scenario: ScenarioSpec, classifier: ClassifierConfig, budget: AttackBudget) -> Self {
        SweepConfig {
            scenario,
            sizes: Self::DEFAULT_SIZES.to_vec(),
            repeats: 5,
            test_size: 1000,
            classifier,
            prune: None,
            budget,
            method: AttackMethod::Exact,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        if self.sizes.is_empty() || self.sizes[0] == 0 || self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("sizes", "must be positive and strictly increasing"));
        }
        if self.repeats == 0 {
            return Err(Error::param("repeats", "must be at least 1"));
        }
        if self.test_size == 0 {
            return Err(Error::param("test_size", "must be at least 1"));
        }
        if let Some(p) = &self.prune {
            if !(p.r > 0.0 && p.r.is_finite()) {
                return Err(Error::param("prune_r", "must be a finite positive number"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub accuracy_mean: f64,
    pub accuracy_std: f64,
    pub astuteness_mean: f64,
    pub astuteness_std: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// True when any cell relied on the grid oracle.
    pub approximate: bool,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SWEEP_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.n,
                fmt_real(r.accuracy_mean),
                fmt_real(r.accuracy_std),
                fmt_real(r.astuteness_mean),
                fmt_real(r.astuteness_std)
            ));
        }
        out
    }

    pub fn parse_csv(text: &str) -> std::result::Result<SweepResult, (usize, String)> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, h)) if h.trim() == SWEEP_CSV_HEADER => {}
            Some((i, _)) => return Err((i + 1, format!("expected header `{SWEEP_CSV_HEADER}`"))),
            None => return Err((0, "file is empty".into())),
        }
        let mut rows = Vec::new();
        for (i, line) in lines {
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != 5 {
                return Err((i + 1, format!("expected 5 fields, found {}", f.len())));
            }
            let n = f[0].parse().map_err(|_| (i + 1, format!("bad size `{}`", f[0])))?;
            let mut v = [0.0; 4];
            for (k, s) in f[1..].iter().enumerate() {
                v[k] = s.parse().map_err(|_| (i + 1, format!("bad number `{s}`")))?;
            }
            rows.push(SweepRow {
                n,
                accuracy_mean: v[0],
                accuracy_std: v[1],
                astuteness_mean: v[2],
                astuteness_std: v[3],
            });
        }
        Ok(SweepResult { rows, approximate: false })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<SweepResult> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        SweepResult::parse_csv(&text).map_err(|(line, msg)| Error::Parse {
            path: path.to_path_buf(),
            line,
            msg,
        })
    }
}

/// Mean and sample standard deviation, summed in slice order.
fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let ss = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>();
    (mean, (ss / (n - 1.0)).sqrt())
}

/// Accuracy/astuteness curves over training sizes.
///
/// Each `(size, repeat)` cell draws its training and test sets from its own
/// stream, so cells run in parallel and the result does not depend on the
/// schedule.
pub fn convergence_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let cells: Vec<(usize, usize)> = cfg
        .sizes
        .iter()
        .flat_map(|&n| (0..cfg.repeats).map(move |rep| (n, rep)))
        .collect();
    let scores = cells
        .par_iter()
        .map(|&(n, rep)| run_cell(cfg, n, rep))
        .collect::<Result<Vec<_>>>()?;

    let mut approximate = false;
    let rows = cfg
        .sizes
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let chunk = &scores[i * cfg.repeats..(i + 1) * cfg.repeats];
            approximate |= chunk.iter().any(|c| c.2);
            let acc: Vec<f64> = chunk.iter().map(|c| c.0).collect();
            let ast: Vec<f64> = chunk.iter().map(|c| c.1).collect();
            let (accuracy_mean, accuracy_std) = mean_std(&acc);
            let (astuteness_mean, astuteness_std) = mean_std(&ast);
            SweepRow {
                n,
                accuracy_mean,
                accuracy_std,
                astuteness_mean,
                astuteness_std,
            }
        })
        .collect();
    Ok(SweepResult { rows, approximate })
}

fn run_cell(cfg: &SweepConfig, n: usize, rep: usize) -> Result<(f64, f64, bool)> {
    let train = generate(
        &cfg.scenario.with_n(n),
        RandomStream::job(cfg.seed, &[0, n as u64, rep as u64]),
    );
    let test = generate(
        &cfg.scenario.with_n(cfg.test_size),
        RandomStream::job(cfg.seed, &[1, n as u64, rep as u64]),
    );
    let model = match &cfg.prune {
        Some(p) => robust_nonpar_train(&train, &cfg.classifier, p.r, p.metric)?,
        None => cfg.classifier.train(&train)?,
    };
    let attacker = Attacker::new(&model, cfg.method)?;
    let rep = empirical_astuteness(&attacker, &test, &cfg.budget)?;
    Ok((rep.accuracy, rep.astuteness, rep.approximate))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SweepConfig {
        let mut cfg = SweepConfig::new(
            ScenarioSpec::half_moons(0, 0.08),
            ClassifierConfig::nn1(),
            AttackBudget::new(0.09).unwrap(),
        );
        cfg.sizes = vec![20, 60, 150];
        cfg.repeats = 3;
        cfg.test_size = 100;
        cfg.seed = 17;
        cfg.prune = Some(PruneSpec { r: 0.1, metric: Metric::Linf });
        cfg
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let cfg = small();
        let a = convergence_sweep(&cfg).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| convergence_sweep(&cfg).unwrap());
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.rows.len(), 3);
        for r in &a.rows {
            assert!(r.astuteness_mean <= r.accuracy_mean);
            assert!((0.0..=1.0).contains(&r.astuteness_mean));
        }
    }

    #[test]
    fn csv_round_trip() {
        let res = convergence_sweep(&small()).unwrap();
        let back = SweepResult::parse_csv(&res.to_csv()).unwrap();
        assert_eq!(back.rows, res.rows);
        assert!(SweepResult::parse_csv("n,a\n").is_err());
        let err = SweepResult::parse_csv(&format!("{SWEEP_CSV_HEADER}\n1,2,3\n")).unwrap_err();
        assert_eq!(err.0, 2);
    }

    #[test]
    fn validation() {
        let mut cfg = small();
        cfg.sizes = vec![50, 20];
        assert!(convergence_sweep(&cfg).is_err());
        let mut cfg = small();
        cfg.repeats = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn std_uses_sample_denominator() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-15);
        assert_eq!(mean_std(&[0.4]), (0.4, 0.0));
    }
}
