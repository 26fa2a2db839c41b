//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::time::{Duration, Instant};

use astute_np::attacks::{
    grid_attack, histogram_attack, AttackBudget, AttackMethod, Attacker, Nn1Attacker, Outcome,
};
use astute_np::classifiers::{
    ClassifierConfig, CountRule, HistogramModel, KernelKind, KnnModel, RootRule, TrainedModel, WeightFunction,
};
use astute_np::data::{generate, Dataset, Label, Metric, RandomStream, ScenarioKind, ScenarioSpec};
use astute_np::evaluation::{
    attack_all, bayes_gap_demo, convergence_sweep, empirical_astuteness, probe_theorem1, scenario_domain,
    scenario_root, OuterLaw, ProbeConfig, PruneSpec, SweepConfig, SweepResult,
};
use astute_np::pruning::{adv_prune, robust_accuracy_upper_bound};
use astute_np::cli::{render_chart, ChartSpec};
use proptest::prelude::*;
use proptest::test_runner::{Config as PtConfig, TestRunner};
use rand::Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn within_time(v: Verdict, elapsed: Duration, limit: Option<u64>) -> Verdict {
    match limit {
        Some(s) => Verdict {
            pass: v.pass && elapsed.as_secs_f64() <= s as f64,
            detail: format!("{} [{:.1} s, limit {s} s]", v.detail, elapsed.as_secs_f64()),
        },
        None => Verdict {
            pass: v.pass,
            detail: format!("{} [{:.1} s]", v.detail, elapsed.as_secs_f64()),
        },
    }
}

fn moons_sweep(sigma: f64, classifier: ClassifierConfig, prune: Option<f64>, r: f64) -> SweepResult {
    let mut cfg = SweepConfig::new(
        ScenarioSpec::half_moons(0, sigma),
        classifier,
        AttackBudget::new(r).unwrap(),
    );
    cfg.sizes = vec![3000];
    cfg.repeats = 5;
    cfg.test_size = 1000;
    cfg.seed = 2024;
    cfg.prune = prune.map(|r| PruneSpec { r, metric: Metric::Linf });
    convergence_sweep(&cfg).unwrap()
}

fn c1() -> Verdict {
    let row = moons_sweep(0.0, ClassifierConfig::nn1(), None, 0.1).rows[0];
    verdict(
        row.astuteness_mean >= 0.95,
        format!("noiseless 1-NN: astuteness {:.4} (need >= 0.95)", row.astuteness_mean),
    )
}

fn c2() -> Verdict {
    let row = moons_sweep(0.0, ClassifierConfig::histogram(), None, 0.1).rows[0];
    verdict(
        (0.40..=0.60).contains(&row.astuteness_mean) && row.accuracy_mean >= 0.90,
        format!(
            "noiseless histogram: astuteness {:.4} (need [0.40, 0.60]), accuracy {:.4} (need >= 0.90)",
            row.astuteness_mean, row.accuracy_mean
        ),
    )
}

fn c3() -> Verdict {
    let row = moons_sweep(0.08, ClassifierConfig::nn1(), Some(0.1), 0.09).rows[0];
    verdict(
        (0.72..=0.88).contains(&row.astuteness_mean),
        format!("noisy pruned 1-NN: astuteness {:.4} (need [0.72, 0.88])", row.astuteness_mean),
    )
}

fn c4() -> Verdict {
    let row = moons_sweep(0.08, ClassifierConfig::histogram(), Some(0.1), 0.09).rows[0];
    verdict(
        (0.60..=0.80).contains(&row.astuteness_mean),
        format!("noisy pruned histogram: astuteness {:.4} (need [0.60, 0.80])", row.astuteness_mean),
    )
}

fn c5() -> Verdict {
    let kind = ScenarioKind::Example2;
    let budget = AttackBudget::new(0.1).unwrap().with_domain(scenario_domain(kind));
    let mut worst = 0.0f64;
    let mut stray = 0;
    let mut values = Vec::new();
    for seed in 0..5 {
        let train = generate(&ScenarioSpec::example2(5000), RandomStream::new(seed, 0));
        let test = generate(&ScenarioSpec::example2(10000), RandomStream::new(seed, 1));
        let model = ClassifierConfig::Histogram {
            k: CountRule::Sqrt,
            root: scenario_root(kind),
        }
        .train(&train)
        .unwrap();
        let attacker = Attacker::new(&model, AttackMethod::Exact).unwrap();
        let results = attack_all(&attacker, &test, &budget).unwrap();
        let mut astute = 0;
        for ((x, y), res) in test.iter().zip(&results) {
            if !res.is_found() {
                astute += 1;
            } else if !(y == Label::Pos && x[0] > 0.15 - 1e-9 && x[0] < 0.25 + 1e-9) {
                stray += 1;
            }
        }
        let a = astute as f64 / test.len() as f64;
        worst = worst.max((a - 0.8).abs());
        values.push(format!("{a:.4}"));
    }
    verdict(
        worst <= 0.03 && stray == 0,
        format!(
            "example 2 histogram astuteness per seed [{}] (need 0.8 +/- 0.03); non-astute points outside (0.15, 0.25): {stray}",
            values.join(", ")
        ),
    )
}

fn c6() -> Verdict {
    let kind = ScenarioKind::Example3;
    let budget = AttackBudget::new(0.3).unwrap().with_domain(scenario_domain(kind));
    let cfg = ClassifierConfig::kernel(KernelKind::PlateauExample3);
    let mut max_ast = 0.0f64;
    let mut attacked = 0;
    for seed in 0..20 {
        let train = generate(&ScenarioSpec::example3(1000), RandomStream::new(seed, 0));
        let test = generate(&ScenarioSpec::example3(10000), RandomStream::new(seed, 1));
        let model = cfg.train(&train).unwrap();
        let attacker = Attacker::new(&model, AttackMethod::Grid { resolution: 0.003 }).unwrap();
        let rep = empirical_astuteness(&attacker, &test, &budget).unwrap();
        max_ast = max_ast.max(rep.astuteness);
        if attacker.attack(&[-1.0], Label::Neg, &budget).unwrap().is_found() {
            attacked += 1;
        }
    }
    verdict(
        max_ast <= 0.92 && attacked >= 19,
        format!("example 3 plateau kernel: max astuteness over 20 seeds {max_ast:.4} (need <= 0.92); x = -1 attacked in {attacked}/20 seeds (need >= 19)"),
    )
}

fn c7() -> Verdict {
    let rep = bayes_gap_demo(0.1, 20000, 7).unwrap();
    verdict(
        rep.bayes_astuteness <= 0.02 && (rep.constant_astuteness - 0.5).abs() <= 0.03,
        format!(
            "example 1: bayes astuteness {:.4} (need <= 0.02), constant +1 astuteness {:.4} (need 0.5 +/- 0.03)",
            rep.bayes_astuteness, rep.constant_astuteness
        ),
    )
}

/// Largest subset with no opposite-label pair within `2r`, by enumeration.
fn brute_force_separated(ds: &Dataset, r: f64, metric: Metric) -> usize {
    let n = ds.len();
    let conflicts: Vec<u32> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| ds.label(i) != ds.label(j) && metric.eval(ds.point(i), ds.point(j)) <= 2.0 * r)
                .fold(0u32, |m, j| m | (1 << j))
        })
        .collect();
    let mut best = 0;
    for s in 0u32..(1 << n) {
        let size = s.count_ones() as usize;
        if size <= best {
            continue;
        }
        if (0..n).all(|i| s & (1 << i) == 0 || conflicts[i] & s == 0) {
            best = size;
        }
    }
    best
}

fn c8() -> Verdict {
    let mut rng = RandomStream::new(8, 0).rng();
    let mut mismatches = 0;
    let mut below_half = 0;
    for t in 0..100 {
        let n: usize = rng.random_range(2..=18);
        let mut ds = Dataset::new(2).unwrap();
        for _ in 0..n {
            let l = if rng.random_bool(0.5) { Label::Pos } else { Label::Neg };
            ds.push(&[rng.random::<f64>(), rng.random::<f64>()], l).unwrap();
        }
        let r = rng.random_range(0.05..0.4);
        let metric = if t % 2 == 0 { Metric::Linf } else { Metric::L2 };
        let kept = adv_prune(&ds, r, metric).unwrap().kept.len();
        if kept != brute_force_separated(&ds, r, metric) {
            mismatches += 1;
        }
        if kept < n.div_ceil(2) {
            below_half += 1;
        }
    }
    verdict(
        mismatches == 0 && below_half == 0,
        format!("pruning vs exhaustive search on 100 instances: {mismatches} size mismatches, {below_half} below ceil(n/2)"),
    )
}

#[derive(Default)]
struct Agreement {
    paired: usize,
    refined: usize,
    violations: Vec<String>,
}

impl Agreement {
    /// Radii are compared on the lattice: the grid radius must be the exact
    /// radius rounded up to the step, or one shell beyond it. The second case
    /// is re-checked with a grid ten times finer, which must land within one
    /// coarse step of the exact radius.
    fn check(
        &mut self,
        exact: Option<f64>,
        grid: Option<f64>,
        outcome: Outcome,
        r: f64,
        step: f64,
        refine: impl FnOnce() -> Option<f64>,
    ) {
        self.paired += 1;
        let tol = 1e-9;
        match (exact, grid) {
            (Some(e), Some(g)) => {
                let ke = (e / step - 1e-6).ceil();
                let kg = (g / step).round();
                if e > g + tol || kg > ke + 1.0 {
                    self.violations.push(format!("exact {e} grid {g}"));
                } else if kg > ke {
                    self.refined += 1;
                    match refine() {
                        Some(f) if f + tol >= e && f <= e + step + tol => {}
                        f => self.violations.push(format!("exact {e} grid {g} refined {f:?}")),
                    }
                }
            }
            (None, Some(g)) => {
                if outcome == Outcome::CertifiedAstute {
                    self.violations.push(format!("certified but grid found {g}"));
                }
            }
            (Some(e), None) => {
                if e < r - step {
                    self.violations.push(format!("exact {e} but grid found nothing"));
                }
            }
            (None, None) => {}
        }
    }
}

fn c9() -> Verdict {
    let step = 1e-3;
    let r = 0.1;
    let budget = AttackBudget::new(r).unwrap();
    let mut rng = RandomStream::new(9, 0).rng();
    let mut nn = Agreement::default();
    for _ in 0..100 {
        let mut ds = Dataset::new(2).unwrap();
        for _ in 0..20 {
            let l = if rng.random_bool(0.5) { Label::Pos } else { Label::Neg };
            ds.push(&[rng.random::<f64>(), rng.random::<f64>()], l).unwrap();
        }
        let model = KnnModel::train(&ds, CountRule::Fixed(1), Metric::L2).unwrap();
        let attacker = Nn1Attacker::new(&model).unwrap();
        for _ in 0..5 {
            let x = [rng.random::<f64>(), rng.random::<f64>()];
            let y = astute_np::classifiers::Classifier::predict(&model, &x).unwrap();
            let e = attacker.attack(&x, y, &budget).unwrap();
            let g = grid_attack(&model, &x, y, &budget, step).unwrap();
            nn.check(e.radius, g.radius, e.outcome, r, step, || {
                grid_attack(&model, &x, y, &budget, step / 10.0).unwrap().radius
            });
        }
    }
    let mut hist = Agreement::default();
    for _ in 0..50 {
        let mut ds = Dataset::new(2).unwrap();
        let m = rng.random_range(20..200);
        for _ in 0..m {
            let p = [rng.random::<f64>(), rng.random::<f64>()];
            let l = if p[0] + 0.4 * rng.random::<f64>() > 0.7 { Label::Pos } else { Label::Neg };
            ds.push(&p, l).unwrap();
        }
        let model = HistogramModel::train(&ds, CountRule::Sqrt, RootRule::DataBounds).unwrap();
        for _ in 0..20 {
            let x = [rng.random::<f64>() * 1.2 - 0.1, rng.random::<f64>() * 1.2 - 0.1];
            let y = astute_np::classifiers::Classifier::predict(&model, &x).unwrap();
            let e = histogram_attack(&model, &x, y, &budget).unwrap();
            let g = grid_attack(&model, &x, y, &budget, step).unwrap();
            hist.check(e.radius, g.radius, e.outcome, r, step, || {
                grid_attack(&model, &x, y, &budget, step / 10.0).unwrap().radius
            });
        }
    }
    let pass = nn.violations.is_empty() && hist.violations.is_empty();
    let mut detail = format!(
        "attack vs grid oracle (step 1e-3): 1-NN {} pairs, {} disagreements ({} confirmed on a 1e-4 grid); histogram {} pairs, {} disagreements ({} confirmed on a 1e-4 grid)",
        nn.paired,
        nn.violations.len(),
        nn.refined,
        hist.paired,
        hist.violations.len(),
        hist.refined
    );
    for v in nn.violations.iter().chain(&hist.violations) {
        detail.push_str(&format!("; {v}"));
    }
    verdict(pass, detail)
}

fn c10() -> Verdict {
    let mut nn = ProbeConfig::new(ClassifierConfig::nn1(), ScenarioSpec::half_moons(0, 0.0), 0.05, 0.2);
    nn.sizes = vec![100, 1000];
    nn.outer = 4000;
    nn.seed = 10;
    let rows = probe_theorem1(&nn).unwrap().rows;
    let (lo, hi) = (rows[1], rows[0]);
    let se = (lo.std_err.powi(2) + hi.std_err.powi(2)).sqrt();
    let decrease_ok = hi.estimate - lo.estimate >= 3.0 * se && se > 0.0;

    let mut plateau = ProbeConfig::new(
        ClassifierConfig::kernel(KernelKind::PlateauExample3),
        ScenarioSpec::example3(0),
        0.25,
        0.5,
    );
    plateau.law = OuterLaw::Anchor(vec![-0.7]);
    plateau.sizes = vec![100, 300, 1000, 3000];
    plateau.outer = 50;
    plateau.seed = 10;
    let prow = probe_theorem1(&plateau).unwrap().rows;
    let min_plateau = prow.iter().map(|r| r.estimate).fold(f64::INFINITY, f64::min);
    verdict(
        decrease_ok && min_plateau >= 0.5,
        format!(
            "1-NN probe n=100 {:.5} +/- {:.5}, n=1000 {:.5} +/- {:.5} (need drop >= 3 SE = {:.5}); plateau kernel min over n {:.4} (need >= 0.5)",
            hi.estimate,
            hi.std_err,
            lo.estimate,
            lo.std_err,
            3.0 * se,
            min_plateau
        ),
    )
}

fn arb_dataset(dim: usize) -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<bool>)> {
    (2usize..40).prop_flat_map(move |n| {
        (
            prop::collection::vec(prop::collection::vec(-1.0f64..1.0, dim), n),
            prop::collection::vec(any::<bool>(), n),
        )
    })
}

fn build(points: &[Vec<f64>], labels: &[bool]) -> Dataset {
    let mut ds = Dataset::new(points[0].len()).unwrap();
    for (p, &l) in points.iter().zip(labels) {
        ds.push(p, if l { Label::Pos } else { Label::Neg }).unwrap();
    }
    ds
}

fn configs() -> Vec<ClassifierConfig> {
    vec![
        ClassifierConfig::nn1(),
        ClassifierConfig::Knn {
            k: CountRule::Fixed(3),
            metric: Metric::Linf,
        },
        ClassifierConfig::Knn {
            k: CountRule::Sqrt,
            metric: Metric::L2,
        },
        ClassifierConfig::kernel(KernelKind::Gaussian),
        ClassifierConfig::kernel(KernelKind::PlateauExample3),
        ClassifierConfig::kernel(KernelKind::InversePoly(2.0)),
        ClassifierConfig::histogram(),
    ]
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(PtConfig {
        cases,
        failure_persistence: None,
        ..PtConfig::default()
    })
}

fn c11() -> Verdict {
    let cases = [std::cell::Cell::new(0usize), std::cell::Cell::new(0usize), std::cell::Cell::new(0usize)];
    let mut failures: Vec<String> = Vec::new();

    let weights = runner(64).run(
        &(arb_dataset(2), prop::collection::vec(-1.5f64..1.5, 2), 0usize..7),
        |((pts, labels), q, c)| {
            let ds = build(&pts, &labels);
            let cfg = &configs()[c];
            let model = cfg.train(&ds).unwrap();
            let w = model.weights(&q).unwrap();
            let s: f64 = w.iter().sum();
            prop_assert!(w.iter().all(|&v| v >= 0.0));
            let empty_cell = matches!(model, TrainedModel::Histogram(_)) && s == 0.0;
            prop_assert!(empty_cell || (s - 1.0).abs() < 1e-9, "weights sum to {}", s);
            // label independence
            let flipped: Vec<bool> = labels.iter().map(|l| !l).collect();
            let other = cfg.train(&build(&pts, &flipped)).unwrap();
            prop_assert_eq!(w, other.weights(&q).unwrap());
            cases[0].set(cases[0].get() + 1);
            Ok(())
        },
    );
    if let Err(e) = weights {
        failures.push(format!("weights: {e}"));
    }

    let astute = runner(64).run(&(arb_dataset(2), arb_dataset(2), 0.01f64..0.3, any::<bool>()), |(tr, te, r, hist)| {
        let train = build(&tr.0, &tr.1);
        let test = build(&te.0, &te.1);
        let cfg = if hist { ClassifierConfig::histogram() } else { ClassifierConfig::nn1() };
        let model = cfg.train(&train).unwrap();
        let budget = AttackBudget::new(r).unwrap();
        let rep = empirical_astuteness(&Attacker::new(&model, AttackMethod::Exact).unwrap(), &test, &budget).unwrap();
        prop_assert!(rep.astuteness <= rep.accuracy);
        // on the training sample itself no classifier beats |S_r| / n
        let own = empirical_astuteness(&Attacker::new(&model, AttackMethod::Exact).unwrap(), &train, &budget).unwrap();
        let bound = robust_accuracy_upper_bound(&train, r, Metric::Linf).unwrap();
        prop_assert!(own.astuteness <= bound + 1e-12, "{} > {}", own.astuteness, bound);
        cases[1].set(cases[1].get() + 1);
        Ok(())
    });
    if let Err(e) = astute {
        failures.push(format!("astuteness bounds: {e}"));
    }

    let determinism = runner(8).run(&(any::<u64>(), 0.0f64..0.15), |(seed, sigma)| {
        let mut cfg = SweepConfig::new(
            ScenarioSpec::half_moons(0, sigma),
            ClassifierConfig::histogram(),
            AttackBudget::new(0.1).unwrap(),
        );
        cfg.sizes = vec![30, 90];
        cfg.repeats = 2;
        cfg.test_size = 60;
        cfg.seed = seed;
        let a = convergence_sweep(&cfg).unwrap();
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = single.install(|| convergence_sweep(&cfg).unwrap());
        prop_assert_eq!(a.to_csv(), b.to_csv());
        let chart = ChartSpec::from_sweep(&a, "determinism");
        prop_assert_eq!(render_chart(&chart).unwrap(), render_chart(&chart).unwrap());
        cases[2].set(cases[2].get() + 1);
        Ok(())
    });
    if let Err(e) = determinism {
        failures.push(format!("determinism: {e}"));
    }

    let counts: Vec<usize> = cases.iter().map(|c| c.get()).collect();
    if counts != [64, 64, 8] {
        failures.push(format!("properties ran {counts:?} cases, expected [64, 64, 8]"));
    }
    verdict(
        failures.is_empty(),
        if failures.is_empty() {
            format!("weight normalization, label independence, astuteness <= accuracy, astuteness <= |S_r|/n, sweep/chart determinism: all properties hold over {counts:?} cases")
        } else {
            failures.join("; ")
        },
    )
}

fn main() {
    let criteria: [(u32, fn() -> Verdict, Option<u64>); 11] = [
        (1, c1, Some(120)),
        (2, c2, Some(120)),
        (3, c3, Some(180)),
        (4, c4, None),
        (5, c5, None),
        (6, c6, None),
        (7, c7, None),
        (8, c8, Some(60)),
        (9, c9, None),
        (10, c10, None),
        (11, c11, None),
    ];
    let mut failed = Vec::new();
    for (id, run, limit) in criteria {
        let start = Instant::now();
        let v = within_time(run(), start.elapsed(), limit);
        println!("criterion {id:>2}: {}  {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        if !v.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 11 criteria pass");
    } else {
        println!("acceptance: {} of 11 criteria fail: {failed:?}", failed.len());
        std::process::exit(1);
    }
}
