//! Command-line front end.
//!
//! Every subcommand takes its parameters as `--key value` flags, from a flat
//! config file given with `--config`, or both (flags win). Exit codes: 0 on
//! success, 2 for a configuration error (the message names the key), 1 for
//! any other failure.

mod chart;
mod config;
mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Arg, ArgMatches, Command};

pub use chart::{emit_chart, render as render_chart, ChartSpec, Series, ACCURACY_COLOR, ASTUTENESS_COLOR};
pub use config::{canonical, ConfigError, ConfigResult, RunConfig};
pub use report::{attack_report, format_report, parse_report, ReportRow};

use crate::attacks::{AttackBudget, AttackMethod, Attacker, DEFAULT_GRID_CAP};
use crate::classifiers::{BandwidthRule, ClassifierConfig, CountRule, KernelKind, RootRule, TrainedModel, WeightFunction};
use crate::data::{fmt_real, generate, read_csv, write_csv, Dataset, Metric, RandomStream, ScenarioKind, ScenarioSpec};
use crate::error::Error;
use crate::evaluation::{
    bayes_gap_demo, convergence_sweep, empirical_astuteness, probe_theorem1, probe_theorem4, scenario_domain,
    scenario_root, BallCandidates, OuterLaw, ProbeConfig, PruneSpec, SweepConfig,
};
use crate::pruning::adv_prune;

pub const THREADS_ENV: &str = "ASTUTE_NP_THREADS";

const SCENARIO: &[&str] = &["scenario", "sigma", "scenario_r", "seed"];
const MODEL: &[&str] = &["classifier", "k", "metric", "kernel", "kernel_p", "bandwidth", "root"];
const ATTACK: &[&str] = &["r", "method", "resolution", "tolerance", "grid_cap", "domain"];
const PRUNE: &[&str] = &["prune_r", "prune_metric"];

struct Subcommand {
    name: &'static str,
    about: &'static str,
    groups: &'static [&'static [&'static str]],
}

const SUBCOMMANDS: &[Subcommand] = &[
    Subcommand {
        name: "gen",
        about: "Generate a labeled dataset as CSV",
        groups: &[SCENARIO, &["n", "out"]],
    },
    Subcommand {
        name: "train-eval",
        about: "Train a classifier and report accuracy and empirical astuteness",
        groups: &[SCENARIO, MODEL, ATTACK, PRUNE, &["n", "train", "test", "test_size", "out"]],
    },
    Subcommand {
        name: "prune",
        about: "Adversarial pruning: emit the indices of the kept points",
        groups: &[SCENARIO, &["n", "data", "r", "metric", "out", "pruned_out"]],
    },
    Subcommand {
        name: "attack",
        about: "Attack every test point and write a per-point report",
        groups: &[SCENARIO, MODEL, ATTACK, PRUNE, &["n", "train", "test", "test_size", "out"]],
    },
    Subcommand {
        name: "sweep",
        about: "Accuracy/astuteness against training size, as CSV and SVG",
        groups: &[SCENARIO, MODEL, ATTACK, PRUNE, &["sizes", "repeats", "test_size", "out", "chart", "title"]],
    },
    Subcommand {
        name: "probe",
        about: "Monte-Carlo estimate of the consistency condition for a weight function",
        groups: &[
            SCENARIO,
            MODEL,
            PRUNE,
            &[
                "theorem",
                "a",
                "b",
                "sizes",
                "outer",
                "inner",
                "boundary",
                "interior",
                "probe_metric",
                "law",
                "anchor",
                "gamma",
                "out",
            ],
        ],
    },
    Subcommand {
        name: "demo-example1",
        about: "Bayes-optimal versus constant classifier on the oscillating posterior",
        groups: &[&["r", "n", "seed", "out"]],
    },
];

impl Subcommand {
    fn keys(&self) -> Vec<&'static str> {
        self.groups.iter().flat_map(|g| g.iter().copied()).collect()
    }
}

/// Why a run failed.
#[derive(Debug)]
pub enum Failure {
    Config(ConfigError),
    Runtime(Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => 2,
            Failure::Runtime(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(e) => write!(f, "configuration error: {e}"),
            Failure::Runtime(e) => write!(f, "{e}"),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { name, msg } => Failure::Config(ConfigError::new(name, msg)),
            Error::Unsupported(msg) => Failure::Config(ConfigError::new("method", msg)),
            e @ Error::CostGuard { .. } => Failure::Config(ConfigError::new("resolution", e.to_string())),
            e => Failure::Runtime(e),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn command() -> Command {
    let mut cmd = Command::new("astute-np")
        .about("Robust non-parametric classifiers: training, pruning, attacks and sweeps")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for sub in SUBCOMMANDS {
        let mut c = Command::new(sub.name).about(sub.about).arg(
            Arg::new("config")
                .long("config")
                .value_name("PATH")
                .help("flat `key = value` file; flags override it"),
        );
        for key in sub.keys() {
            let mut arg = Arg::new(key)
                .long(key.replace('_', "-"))
                .value_name("VALUE")
                .allow_hyphen_values(true);
            if key.contains('_') {
                arg = arg.alias(key);
            }
            c = c.arg(arg);
        }
        cmd = cmd.subcommand(c);
    }
    cmd
}

/// Run the CLI on `args` (including the program name) and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    match execute(&matches) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {f}");
            f.exit_code()
        }
    }
}

fn execute(matches: &ArgMatches) -> Outcome<()> {
    let (name, sub_m) = matches.subcommand().expect("subcommand is required");
    let sub = SUBCOMMANDS.iter().find(|s| s.name == name).expect("known subcommand");
    let keys = sub.keys();
    let mut cfg = match sub_m.get_one::<String>("config") {
        Some(p) => RunConfig::load(Path::new(p))?,
        None => RunConfig::default(),
    };
    cfg.check_keys(&keys)?;
    for key in &keys {
        if let Some(v) = sub_m.get_one::<String>(key) {
            cfg.set(key, v.clone());
        }
    }
    let threads = thread_count()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::Runtime(Error::Internal(format!("thread pool: {e}"))))?;
    pool.install(|| match name {
        "gen" => cmd_gen(&cfg),
        "train-eval" => cmd_train_eval(&cfg),
        "prune" => cmd_prune(&cfg),
        "attack" => cmd_attack(&cfg),
        "sweep" => cmd_sweep(&cfg),
        "probe" => cmd_probe(&cfg),
        "demo-example1" => cmd_demo(&cfg),
        _ => unreachable!("subcommand table and dispatch agree"),
    })
}

fn thread_count() -> ConfigResult<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map_err(|_| ConfigError::new(THREADS_ENV, format!("expected a thread count, got `{v}`"))),
        _ => Ok(0),
    }
}

fn write_text(path: &Path, text: &str) -> Outcome<()> {
    std::fs::write(path, text).map_err(|e| Failure::Runtime(Error::io(path, e)))
}

fn out_path(cfg: &RunConfig, key: &str) -> ConfigResult<PathBuf> {
    cfg.str(key).map(PathBuf::from).ok_or_else(|| ConfigError::new(key, "required"))
}

// ---- parameter decoding ----

fn scenario_kind(cfg: &RunConfig) -> ConfigResult<ScenarioKind> {
    cfg.get_or("scenario", ScenarioKind::HalfMoons)
}

fn scenario(cfg: &RunConfig, n: usize) -> ConfigResult<ScenarioSpec> {
    let kind = scenario_kind(cfg)?;
    let sigma: f64 = cfg.get_or("sigma", 0.0)?;
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(ConfigError::new("sigma", format!("must be a finite non-negative number, got {sigma}")));
    }
    if sigma > 0.0 && kind != ScenarioKind::HalfMoons {
        return Err(ConfigError::new("sigma", "noise only applies to half_moons"));
    }
    let r = cfg.positive("scenario_r", Some(0.1))?;
    Ok(ScenarioSpec { kind, n, sigma, r })
}

fn positive_count(cfg: &RunConfig, key: &str, default: usize) -> ConfigResult<usize> {
    let v: usize = cfg.get_or(key, default)?;
    if v == 0 {
        return Err(ConfigError::new(key, "must be at least 1"));
    }
    Ok(v)
}

fn count_rule(cfg: &RunConfig, default: CountRule) -> ConfigResult<CountRule> {
    match cfg.str("k") {
        None => Ok(default),
        Some("sqrt") => Ok(CountRule::Sqrt),
        Some(v) => match v.parse::<i64>() {
            Ok(k) if k >= 1 => Ok(CountRule::Fixed(k as usize)),
            Ok(k) => Err(ConfigError::new("k", format!("must be at least 1, got {k}"))),
            Err(_) => Err(ConfigError::new("k", format!("expected a count or `sqrt`, got `{v}`"))),
        },
    }
}

fn reject(cfg: &RunConfig, keys: &[&str], family: &str) -> ConfigResult<()> {
    match keys.iter().find(|k| cfg.contains(k)) {
        Some(k) => Err(ConfigError::new(*k, format!("does not apply to classifier = {family}"))),
        None => Ok(()),
    }
}

fn classifier(cfg: &RunConfig, kind: Option<ScenarioKind>) -> ConfigResult<ClassifierConfig> {
    let family = cfg.str("classifier").unwrap_or("knn");
    match family {
        "knn" => {
            reject(cfg, &["kernel", "kernel_p", "bandwidth", "root"], family)?;
            Ok(ClassifierConfig::Knn {
                k: count_rule(cfg, CountRule::Fixed(1))?,
                metric: cfg.get_or("metric", Metric::L2)?,
            })
        }
        "kernel" => {
            reject(cfg, &["k", "root"], family)?;
            let mut kernel: KernelKind = cfg.get_or("kernel", KernelKind::Gaussian)?;
            if let Some(p) = cfg.get::<f64>("kernel_p")? {
                if !matches!(kernel, KernelKind::InversePoly(_)) {
                    return Err(ConfigError::new("kernel_p", "only applies to kernel = inverse_poly"));
                }
                if !(p > 0.0 && p.is_finite()) {
                    return Err(ConfigError::new("kernel_p", "must be a finite positive number"));
                }
                kernel = KernelKind::InversePoly(p);
            }
            let bandwidth = match cfg.str("bandwidth") {
                None | Some("auto") => BandwidthRule::Power,
                Some(_) => BandwidthRule::Fixed(cfg.positive("bandwidth", None)?),
            };
            Ok(ClassifierConfig::Kernel {
                kind: kernel,
                bandwidth,
                metric: cfg.get_or("metric", Metric::L2)?,
            })
        }
        "histogram" => {
            reject(cfg, &["kernel", "kernel_p", "bandwidth", "metric"], family)?;
            let root = match cfg.str("root").unwrap_or("auto") {
                "auto" => kind.map_or(RootRule::DataBounds, scenario_root),
                "data" => RootRule::DataBounds,
                "domain" => match kind.filter(|k| k.domain().is_some()) {
                    Some(k) => scenario_root(k),
                    None => return Err(ConfigError::new("root", "`domain` needs a scenario with bounded support")),
                },
                other => return Err(ConfigError::new("root", format!("expected auto, data or domain, got `{other}`"))),
            };
            Ok(ClassifierConfig::Histogram {
                k: count_rule(cfg, CountRule::Sqrt)?,
                root,
            })
        }
        other => Err(ConfigError::new(
            "classifier",
            format!("expected knn, kernel or histogram, got `{other}`"),
        )),
    }
}

fn budget(cfg: &RunConfig, kind: Option<ScenarioKind>) -> ConfigResult<AttackBudget> {
    let r = cfg.positive("r", Some(0.1))?;
    let tol = cfg.positive("tolerance", Some(crate::attacks::DEFAULT_TOLERANCE))?;
    if tol >= r {
        return Err(ConfigError::new("tolerance", "must be far below r"));
    }
    let domain = match cfg.str("domain").unwrap_or("auto") {
        "auto" => kind.and_then(scenario_domain),
        "none" => None,
        other => return Err(ConfigError::new("domain", format!("expected auto or none, got `{other}`"))),
    };
    Ok(AttackBudget::new(r)
        .expect("r validated")
        .with_tolerance(tol)
        .with_domain(domain))
}

fn prune_spec(cfg: &RunConfig) -> ConfigResult<Option<PruneSpec>> {
    if !cfg.contains("prune_r") {
        if cfg.contains("prune_metric") {
            return Err(ConfigError::new("prune_metric", "set prune_r to enable pruning"));
        }
        return Ok(None);
    }
    Ok(Some(PruneSpec {
        r: cfg.positive("prune_r", None)?,
        metric: cfg.get_or("prune_metric", Metric::Linf)?,
    }))
}

/// Exact when the family has an exact attack, else the grid oracle.
fn attack_method(cfg: &RunConfig, model: &ClassifierConfig, dim: usize, r: f64) -> ConfigResult<AttackMethod> {
    let resolution = cfg.positive("resolution", Some(r / 100.0))?;
    if resolution > r {
        return Err(ConfigError::new("resolution", "must not exceed r"));
    }
    let exact_ok = match model {
        ClassifierConfig::Histogram { .. } => true,
        ClassifierConfig::Knn { k, metric } => *k == CountRule::Fixed(1) && *metric == Metric::L2 && dim == 2,
        ClassifierConfig::Kernel { .. } => false,
    };
    match cfg.str("method").unwrap_or("auto") {
        "auto" if exact_ok => Ok(AttackMethod::Exact),
        "auto" | "grid" => Ok(AttackMethod::Grid { resolution }),
        "exact" if exact_ok => Ok(AttackMethod::Exact),
        "exact" => Err(ConfigError::new(
            "method",
            format!(
                "no exact attack for {} in {dim} dimension(s); use method = grid",
                model.family()
            ),
        )),
        other => Err(ConfigError::new("method", format!("expected auto, exact or grid, got `{other}`"))),
    }
}

fn grid_cap(cfg: &RunConfig) -> ConfigResult<u128> {
    let cap: u128 = cfg.get_or("grid_cap", DEFAULT_GRID_CAP)?;
    if cap == 0 {
        return Err(ConfigError::new("grid_cap", "must be at least 1"));
    }
    Ok(cap)
}

fn attacker<'a>(model: &'a TrainedModel, method: AttackMethod, cap: u128) -> Outcome<Attacker<'a>> {
    Ok(match method {
        AttackMethod::Grid { resolution } => Attacker::Grid {
            model,
            resolution,
            cap,
        },
        AttackMethod::Exact => Attacker::new(model, method)?,
    })
}

/// Training and test sets, loaded or generated; the scenario kind is known
/// whenever it was given or data was generated.
fn datasets(cfg: &RunConfig) -> Outcome<(Dataset, Dataset, Option<ScenarioKind>)> {
    let seed: u64 = cfg.get_or("seed", 0)?;
    let n = positive_count(cfg, "n", 1000)?;
    let test_size = positive_count(cfg, "test_size", 1000)?;
    let generated = !(cfg.contains("train") && cfg.contains("test"));
    let kind = (generated || cfg.contains("scenario")).then(|| scenario_kind(cfg)).transpose()?;
    let train = match cfg.str("train") {
        Some(p) => read_csv(p)?,
        None => generate(&scenario(cfg, n)?, RandomStream::new(seed, 0)),
    };
    let test = match cfg.str("test") {
        Some(p) => read_csv(p)?,
        None => generate(&scenario(cfg, test_size)?, RandomStream::new(seed, 1)),
    };
    if train.dim() != test.dim() {
        return Err(Error::DimensionMismatch {
            expected: train.dim(),
            got: test.dim(),
        }
        .into());
    }
    Ok((train, test, kind))
}

fn train_model(cfg: &RunConfig, train: &Dataset, model: &ClassifierConfig) -> Outcome<TrainedModel> {
    Ok(match prune_spec(cfg)? {
        Some(p) => crate::pruning::robust_nonpar_train(train, model, p.r, p.metric)?,
        None => model.train(train)?,
    })
}

// ---- subcommands ----

fn cmd_gen(cfg: &RunConfig) -> Outcome<()> {
    let spec = scenario(cfg, positive_count(cfg, "n", 1000)?)?;
    let seed: u64 = cfg.get_or("seed", 0)?;
    let out = out_path(cfg, "out")?;
    let ds = generate(&spec, RandomStream::new(seed, 0));
    write_csv(&ds, &out)?;
    println!("wrote {} {} points to {}", ds.len(), spec.kind, out.display());
    Ok(())
}

fn cmd_train_eval(cfg: &RunConfig) -> Outcome<()> {
    let (train, test, kind) = datasets(cfg)?;
    let model_cfg = classifier(cfg, kind)?;
    let budget = budget(cfg, kind)?;
    let method = attack_method(cfg, &model_cfg, train.dim(), budget.r)?;
    let cap = grid_cap(cfg)?;
    let model = train_model(cfg, &train, &model_cfg)?;
    let rep = empirical_astuteness(&attacker(&model, method, cap)?, &test, &budget)?;
    println!("classifier  {}", model_cfg.family());
    println!("n_train     {}", model.training().len());
    println!("n_test      {}", rep.n_test);
    println!("accuracy    {:.4}", rep.accuracy);
    println!("astuteness  {:.4}  (r = {}, {}{})", rep.astuteness, rep.r, rep.method, if rep.approximate { ", approximate" } else { "" });
    if let Some(out) = cfg.str("out") {
        let text = format!(
            "n_test,accuracy,astuteness,r,method,approximate\n{},{},{},{},{},{}\n",
            rep.n_test,
            fmt_real(rep.accuracy),
            fmt_real(rep.astuteness),
            fmt_real(rep.r),
            rep.method,
            rep.approximate
        );
        write_text(Path::new(out), &text)?;
    }
    Ok(())
}

fn cmd_prune(cfg: &RunConfig) -> Outcome<()> {
    let ds = match cfg.str("data") {
        Some(p) => read_csv(p)?,
        None => generate(
            &scenario(cfg, positive_count(cfg, "n", 1000)?)?,
            RandomStream::new(cfg.get_or("seed", 0)?, 0),
        ),
    };
    let r = cfg.positive("r", Some(0.1))?;
    let metric = cfg.get_or("metric", Metric::Linf)?;
    let out = out_path(cfg, "out")?;
    let pruned = adv_prune(&ds, r, metric)?;
    let mut text = String::from("index\n");
    for i in &pruned.kept {
        text.push_str(&format!("{i}\n"));
    }
    write_text(&out, &text)?;
    if let Some(p) = cfg.str("pruned_out") {
        write_csv(&pruned.apply(&ds), p)?;
    }
    println!(
        "kept {} of {} points (|S_r|/n = {:.4}, {} removed)",
        pruned.kept.len(),
        ds.len(),
        pruned.kept.len() as f64 / ds.len() as f64,
        pruned.matching_size
    );
    Ok(())
}

fn cmd_attack(cfg: &RunConfig) -> Outcome<()> {
    let (train, test, kind) = datasets(cfg)?;
    let model_cfg = classifier(cfg, kind)?;
    let budget = budget(cfg, kind)?;
    let method = attack_method(cfg, &model_cfg, train.dim(), budget.r)?;
    let cap = grid_cap(cfg)?;
    let out = out_path(cfg, "out")?;
    let model = train_model(cfg, &train, &model_cfg)?;
    let atk = attacker(&model, method, cap)?;
    let rows = attack_report(&atk, &test, &budget)?;
    write_text(&out, &format_report(&rows, test.dim()))?;
    let astute = rows.iter().filter(|r| r.astute).count();
    println!(
        "{} of {} test points astute at r = {} ({})",
        astute,
        rows.len(),
        budget.r,
        atk.tag()
    );
    Ok(())
}

fn cmd_sweep(cfg: &RunConfig) -> Outcome<()> {
    let spec = scenario(cfg, 0)?;
    let model_cfg = classifier(cfg, Some(spec.kind))?;
    let budget = budget(cfg, Some(spec.kind))?;
    let method = attack_method(cfg, &model_cfg, spec.kind.dim(), budget.r)?;
    let mut sweep = SweepConfig::new(spec, model_cfg, budget);
    sweep.method = method;
    sweep.prune = prune_spec(cfg)?;
    sweep.seed = cfg.get_or("seed", 0)?;
    sweep.repeats = positive_count(cfg, "repeats", 5)?;
    sweep.test_size = positive_count(cfg, "test_size", 1000)?;
    if let Some(sizes) = cfg.list::<usize>("sizes")? {
        sweep.sizes = sizes;
    }
    if let Err(e) = sweep.validate() {
        return Err(e.into());
    }
    let out = cfg.str("out").map_or_else(|| PathBuf::from("sweep.csv"), PathBuf::from);
    let chart = cfg
        .str("chart")
        .map_or_else(|| out.with_extension("svg"), PathBuf::from);
    let title = cfg.str("title").map_or_else(
        || format!("{} on {}, r = {}", sweep.classifier.family(), spec.kind, sweep.budget.r),
        str::to_string,
    );

    let res = convergence_sweep(&sweep)?;
    res.write(&out)?;
    emit_chart(&ChartSpec::from_sweep(&res, &title), &chart)?;
    for row in &res.rows {
        println!(
            "n = {:>6}  accuracy {:.4} ± {:.4}  astuteness {:.4} ± {:.4}",
            row.n, row.accuracy_mean, row.accuracy_std, row.astuteness_mean, row.astuteness_std
        );
    }
    println!("wrote {} and {}", out.display(), chart.display());
    Ok(())
}

fn cmd_probe(cfg: &RunConfig) -> Outcome<()> {
    let spec = scenario(cfg, 0)?;
    let model_cfg = classifier(cfg, Some(spec.kind))?;
    let a = cfg.positive("a", None)?;
    let b = cfg.positive("b", None)?;
    if a >= b {
        return Err(ConfigError::new("a", format!("must be below b (a = {a}, b = {b})")).into());
    }
    let mut probe = ProbeConfig::new(model_cfg, spec, a, b);
    if let Some(sizes) = cfg.list::<usize>("sizes")? {
        probe.sizes = sizes;
    }
    probe.outer = positive_count(cfg, "outer", probe.outer)?;
    probe.inner = positive_count(cfg, "inner", probe.inner)?;
    probe.candidates = BallCandidates {
        boundary: cfg.get_or("boundary", 64)?,
        interior: cfg.get_or("interior", 16)?,
    };
    probe.metric = cfg.get_or("probe_metric", Metric::L2)?;
    probe.gamma = cfg.get_or("gamma", 0.0)?;
    probe.seed = cfg.get_or("seed", 0)?;
    let anchor = cfg.list::<f64>("anchor")?;
    probe.law = match (cfg.str("law"), anchor) {
        (None | Some("anchor"), Some(x)) => OuterLaw::Anchor(x),
        (Some("anchor"), None) => return Err(ConfigError::new("anchor", "required by law = anchor").into()),
        (None | Some("distribution"), None) => OuterLaw::Distribution,
        (Some("empirical"), None) => OuterLaw::Empirical,
        (Some(_), Some(_)) => return Err(ConfigError::new("anchor", "only applies to law = anchor").into()),
        (Some(other), None) => {
            return Err(ConfigError::new("law", format!("expected distribution, empirical or anchor, got `{other}`")).into())
        }
    };
    let res = match cfg.get_or::<u8>("theorem", 1)? {
        1 => {
            if cfg.contains("prune_r") {
                return Err(ConfigError::new("prune_r", "pruning applies to theorem = 4").into());
            }
            probe_theorem1(&probe)?
        }
        4 => {
            let prune = prune_spec(cfg)?.unwrap_or(PruneSpec {
                r: 0.1,
                metric: Metric::Linf,
            });
            probe_theorem4(&probe, prune)?
        }
        t => return Err(ConfigError::new("theorem", format!("expected 1 or 4, got {t}")).into()),
    };
    for row in &res.rows {
        println!("n = {:>6}  estimate {:.4} ± {:.4}", row.n, row.estimate, row.std_err);
    }
    if let Some(out) = cfg.str("out") {
        write_text(Path::new(out), &res.to_csv())?;
    }
    Ok(())
}

fn cmd_demo(cfg: &RunConfig) -> Outcome<()> {
    let r = cfg.positive("r", Some(0.1))?;
    let n = positive_count(cfg, "n", 10000)?;
    let rep = bayes_gap_demo(r, n, cfg.get_or("seed", 0)?)?;
    let rows = [
        ("bayes_accuracy", rep.bayes_accuracy),
        ("bayes_astuteness", rep.bayes_astuteness),
        ("constant_accuracy", rep.constant_accuracy),
        ("constant_astuteness", rep.constant_astuteness),
        ("constant_robustness", rep.constant_robustness),
    ];
    for (k, v) in rows {
        println!("{k:<20} {v:.4}");
    }
    if let Some(out) = cfg.str("out") {
        let mut text = String::from("quantity,value\n");
        for (k, v) in rows {
            text.push_str(&format!("{k},{}\n", fmt_real(v)));
        }
        write_text(Path::new(out), &text)?;
    }
    Ok(())
}
