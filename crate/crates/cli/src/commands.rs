use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use colpack::exact::{integrality_gap, solve_exact_with, ExactMode};
use colpack::generators::{
    gen_gap_2k_minus_1, gen_gap_general_b, gen_l1_bad_example, gen_random, gen_random_with_slack,
    gen_strawman_counterexample, RandomConfig, SizeProfile, WeightProfile,
};
use colpack::rounding::PreparedAlteration;
use colpack::submodular::{
    estimate_altered_value, exact_submodular_optimum, maximize_submodular, sorted_scale, GradientMode,
    GreedyOptions, TABLE_MAX_N,
};
use colpack::verify::{run_suites, VerifyOptions, MIN_CONDITIONAL_SAMPLES};
use colpack::{
    Algorithm, AlterationRule, Error, FractionalSolution, LpError, PipInstance, Relaxation, SubmodularOracle,
    TrialSeed,
};
use serde::{Deserialize, Serialize};

use crate::output::{self, num, opt, Table};
use crate::{AlgoArg, GapFamily, GenFamily, ModeArg, RelaxationArg, RoundArgs, SubmodArgs, VerifyArgs};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Solver(String),
    Precondition(String),
    /// The command ran but reported failures; carries the rendered output.
    Failed(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Input(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Precondition(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Solver(m) | CliError::Precondition(m) => f.write_str(m),
            CliError::Failed(_) => f.write_str("one or more checks failed"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Instance(_) | Error::InvalidParameter(_) => CliError::Input(e.to_string()),
            Error::Lp(lp) => lp.into(),
            Error::Precondition(_) | Error::TooLarge(_) => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<LpError> for CliError {
    fn from(e: LpError) -> Self {
        match e {
            LpError::Malformed(_) => CliError::Precondition(e.to_string()),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

impl From<colpack::InstanceError> for CliError {
    fn from(e: colpack::InstanceError) -> Self {
        CliError::Input(e.to_string())
    }
}

type CliResult = Result<String, CliError>;

pub struct Context {
    pub json: bool,
    pub seed: Option<u64>,
    pub deterministic: bool,
}

impl Context {
    /// The explicit seed, or a time-derived one outside CI mode.
    fn seed(&self) -> Result<Seed, CliError> {
        match self.seed {
            Some(value) => Ok(Seed { value, derived: false }),
            None if self.deterministic => Err(CliError::Input(
                "CI_DETERMINISTIC=1 requires an explicit --seed".into(),
            )),
            None => {
                let nanos = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_nanos());
                Ok(Seed {
                    value: nanos as u64,
                    derived: true,
                })
            }
        }
    }

    fn emit<T: Serialize>(&self, command: &str, seed: Option<Seed>, result: &T, text: impl FnOnce() -> String) -> String {
        if self.json {
            let mut s = output::json(command, seed.map(|s| s.value), result);
            s.push('\n');
            return s;
        }
        let mut out = String::new();
        if let Some(seed) = seed {
            let note = if seed.derived { " (time-derived)" } else { "" };
            out.push_str(&format!("seed: {}{note}\n", seed.value));
        }
        out.push_str(&text());
        out
    }
}

#[derive(Clone, Copy)]
struct Seed {
    value: u64,
    derived: bool,
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<PipInstance, CliError> {
    PipInstance::from_json_str(&read_text(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn relaxation(arg: RelaxationArg) -> Relaxation {
    match arg {
        RelaxationArg::Natural => Relaxation::Natural,
        RelaxationArg::Strengthened => Relaxation::Strengthened,
    }
}

pub fn gen(ctx: &Context, family: GenFamily, output: Option<PathBuf>) -> CliResult {
    let inst = match family {
        GenFamily::Gap2k { k, eps } => gen_gap_2k_minus_1(k, eps)?,
        GenFamily::L1bad { n } => gen_l1_bad_example(n)?,
        GenFamily::GapB { n, b } => gen_gap_general_b(n, b)?,
        GenFamily::Strawman { m } => gen_strawman_counterexample(m)?.0,
        GenFamily::Random(a) => {
            let sizes = match a.big_fraction {
                Some(big_fraction) => SizeProfile::Mixed { big_fraction },
                None => SizeProfile::Uniform,
            };
            let weights = match a.weights.as_deref() {
                Some(&[lo, hi]) => WeightProfile::Uniform { lo, hi },
                _ => WeightProfile::Unit,
            };
            let cfg = RandomConfig {
                sizes,
                weights,
                density: a.density,
                ..RandomConfig::new(a.n, a.m, a.k, ctx.seed()?.value)
            };
            match a.slack {
                Some(b) => gen_random_with_slack(&cfg, b)?,
                None => gen_random(&cfg)?,
            }
        }
    };
    let mut text = inst.to_json_string();
    text.push('\n');
    match output {
        Some(path) => {
            fs::write(&path, &text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

#[derive(Serialize)]
struct LpOutput {
    relaxation: Relaxation,
    objective: f64,
    x: Vec<f64>,
}

pub fn solve_lp(ctx: &Context, path: &Path, arg: RelaxationArg) -> CliResult {
    let inst = load_instance(path)?;
    let relaxation = relaxation(arg);
    let sol = colpack::lp::solve_lp(&relaxation.build(&inst)?)?;
    let out = LpOutput {
        relaxation,
        objective: sol.objective,
        x: sol.x,
    };
    Ok(ctx.emit("solve-lp", None, &out, || {
        let mut t = Table::new(["item", "x"]);
        for (i, v) in out.x.iter().enumerate() {
            t.row([i.to_string(), num(*v)]);
        }
        format!("relaxation: {:?}\nobjective: {}\n\n{}", out.relaxation, num(out.objective), t.render())
    }))
}

pub fn solve_exact(ctx: &Context, path: &Path, mode: ModeArg) -> CliResult {
    let inst = load_instance(path)?;
    let mode = match mode {
        ModeArg::Auto => ExactMode::Auto,
        ModeArg::Exhaustive => ExactMode::Exhaustive,
        ModeArg::BranchAndBound => ExactMode::BranchAndBound,
    };
    let res = solve_exact_with(&inst, mode)?;
    Ok(ctx.emit("solve-exact", None, &res, || {
        format!(
            "mode: {:?}\nvalue: {}\nset: {}\nnodes: {}\nproven optimal: {}\n",
            res.mode,
            num(res.value),
            res.set,
            res.nodes,
            res.proven_optimal
        )
    }))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PointFile {
    Plain(Vec<f64>),
    Solution { x: Vec<f64> },
}

#[derive(Serialize)]
struct RoundOutput {
    algo: &'static str,
    alpha: f64,
    scale: f64,
    trials: u64,
    retention_bound: f64,
    /// Items fixed to zero by capacity normalization.
    dropped: Vec<usize>,
    x: Vec<f64>,
    estimate: colpack::RetentionEstimate,
    /// Smallest retention over items with enough conditional samples.
    min_retention: Option<f64>,
    status: &'static str,
}

pub fn round(ctx: &Context, args: &RoundArgs) -> CliResult {
    let seed = ctx.seed()?;
    let raw = load_instance(&args.instance)?;
    let algo = match (args.algo, args.alpha) {
        (AlgoArg::Simple, alpha) => Algorithm::Simple {
            alpha: alpha.unwrap_or(Algorithm::SIMPLE_DEFAULT_ALPHA),
        },
        (AlgoArg::Strong, alpha) => Algorithm::Strong {
            alpha: alpha.unwrap_or(Algorithm::STRONG_DEFAULT_ALPHA),
        },
        (_, Some(_)) => return Err(CliError::Input("--alpha applies to simple and strong only".into())),
        (AlgoArg::LargeB, None) => Algorithm::LargeB,
        (AlgoArg::Strawman, None) => Algorithm::Strawman,
    };
    let (inst, dropped) = match algo {
        Algorithm::Simple { .. } | Algorithm::Strong { .. } => {
            let norm = raw.normalize_unit_capacities();
            (norm.instance, norm.dropped)
        }
        Algorithm::LargeB => (raw.normalize_unit_max_size(), Vec::new()),
        Algorithm::Strawman => (raw, Vec::new()),
    };
    let x = match &args.x {
        Some(path) => {
            let point: PointFile = serde_json::from_str(&read_text(path)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            let x = match point {
                PointFile::Plain(x) | PointFile::Solution { x } => x,
            };
            if let Some(&i) = dropped.iter().find(|&&i| x.get(i).is_some_and(|&v| v > 0.0)) {
                return Err(CliError::Precondition(format!(
                    "item {i} exceeds a capacity and cannot be selected, but x[{i}] > 0"
                )));
            }
            FractionalSolution::with_weights(x, inst.weights())
        }
        None => {
            let relaxation = match algo {
                Algorithm::Strong { .. } => Relaxation::Strengthened,
                _ => Relaxation::Natural,
            };
            colpack::lp::solve_lp(&relaxation.build(&inst)?)?
        }
    };
    let estimate = algo.estimate(&inst, &x, args.trials, seed.value)?;
    let bound = algo.retention_bound(&inst)?;
    let checked = || estimate.items.iter().filter(|it| it.sampled >= MIN_CONDITIONAL_SAMPLES);
    let min_retention = checked().filter_map(|it| it.retention).min_by(f64::total_cmp);
    let pass = checked().all(|it| it.consistent_with_lower_bound(bound, 3.0));
    let out = RoundOutput {
        algo: algo.name(),
        alpha: algo.alpha(&inst)?,
        scale: algo.scale(&inst)?,
        trials: args.trials,
        retention_bound: bound,
        dropped,
        x: x.x,
        min_retention,
        status: if pass { "PASS" } else { "FAIL" },
        estimate,
    };
    Ok(ctx.emit("round", Some(seed), &out, || {
        let mut t = Table::new(["item", "x", "sampled", "retained", "retention", "se"]);
        for (i, it) in out.estimate.items.iter().enumerate() {
            t.row([
                i.to_string(),
                num(out.x[i]),
                it.sampled.to_string(),
                it.retained.to_string(),
                opt(it.retention),
                opt(it.retention_se),
            ]);
        }
        let e = &out.estimate;
        format!(
            "algorithm: {}\nalpha: {}\nscale: {}\ntrials: {}\nmean value: {} (se {})\n\
             feasibility violations: {}\nretention bound: {}\nmin retention: {}\n\
             retention check (bound - 3 se, items sampled >= {MIN_CONDITIONAL_SAMPLES}): {}\n\n{}",
            out.algo,
            num(out.alpha),
            num(out.scale),
            out.trials,
            num(e.mean_value),
            num(e.value_se),
            e.feasibility_violations,
            num(out.retention_bound),
            opt(out.min_retention),
            out.status,
            t.render()
        )
    }))
}

#[derive(Serialize)]
struct SubmodOutput {
    alpha: f64,
    scale: f64,
    steps: usize,
    gradient: GradientMode,
    relaxation: Relaxation,
    trials: u64,
    x: Vec<f64>,
    /// Multilinear extension at `x`.
    f_x: f64,
    mean_sampled: f64,
    mean_altered: f64,
    altered_se: f64,
    min_retention: f64,
    optimum: Option<f64>,
    ratio: Option<f64>,
}

pub fn submod(ctx: &Context, args: &SubmodArgs) -> CliResult {
    let seed = ctx.seed()?;
    let raw = load_instance(&args.instance)?;
    let f = SubmodularOracle::from_json_str(&read_text(&args.oracle)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.oracle.display())))?;
    if raw.n() != colpack::ValueOracle::n(&f) {
        return Err(CliError::Input(format!(
            "oracle has {} items, instance has {}",
            colpack::ValueOracle::n(&f),
            raw.n()
        )));
    }
    let norm = raw.normalize_unit_capacities();
    if let Some(i) = norm.dropped.first() {
        return Err(CliError::Precondition(format!("item {i} exceeds a capacity")));
    }
    let inst = norm.instance;
    let mut opts = GreedyOptions::for_size(inst.n(), seed.value);
    if let Some(steps) = args.steps {
        opts.steps = steps;
    }
    if let Some(samples) = args.samples {
        opts.gradient = GradientMode::Sampled { samples };
    }
    let relaxation = relaxation(args.relaxation);
    let run = maximize_submodular(&f, &inst, args.alpha, relaxation, &opts, TrialSeed::new(seed.value, 0))?;
    let scale = sorted_scale(&inst, args.alpha)?;
    let prepared = PreparedAlteration::new(&inst, AlterationRule::Sorted)?;
    let est = estimate_altered_value(
        &f,
        &run.greedy.x.x,
        scale,
        &|s| prepared.survivors_of_mask(s),
        args.trials,
        seed.value.wrapping_add(1),
    )?;
    let optimum = if inst.n() <= TABLE_MAX_N {
        Some(exact_submodular_optimum(&f, &inst)?.1)
    } else {
        None
    };
    let out = SubmodOutput {
        alpha: args.alpha,
        scale,
        steps: opts.steps,
        gradient: opts.gradient,
        relaxation,
        trials: args.trials,
        f_x: run.greedy.x.objective,
        x: run.greedy.x.x,
        mean_sampled: est.sampled.mean,
        mean_altered: est.altered.mean,
        altered_se: est.altered.se,
        min_retention: est.beta_hat,
        ratio: optimum.filter(|&o| o > 0.0).map(|o| est.altered.mean / o),
        optimum,
    };
    Ok(ctx.emit("submod", Some(seed), &out, || {
        let mut t = Table::new(["item", "x"]);
        for (i, v) in out.x.iter().enumerate() {
            t.row([i.to_string(), num(*v)]);
        }
        format!(
            "oracle: {}\nrelaxation: {:?}\nsteps: {}\nscale: {}\ntrials: {}\nF(x): {}\nmean f(S): {}\n\
             mean f(S'): {} (se {})\nmin retention: {}\nexact optimum: {}\nmean f(S') / optimum: {}\n\n{}",
            f.family(),
            out.relaxation,
            out.steps,
            num(out.scale),
            out.trials,
            num(out.f_x),
            num(out.mean_sampled),
            num(out.mean_altered),
            num(out.altered_se),
            num(out.min_retention),
            opt(out.optimum),
            opt(out.ratio),
            t.render()
        )
    }))
}

#[derive(Serialize)]
struct GapRow {
    param: String,
    lp_natural: f64,
    lp_strengthened: f64,
    exact: f64,
    gap_natural: Option<f64>,
    gap_strengthened: Option<f64>,
}

pub fn gap(ctx: &Context, family: GapFamily) -> CliResult {
    let points: Vec<(String, PipInstance)> = match family {
        GapFamily::Gap2k { k, eps } => k
            .into_iter()
            .map(|k| Ok((format!("k={k}"), gen_gap_2k_minus_1(k, eps)?)))
            .collect::<Result<_, Error>>()?,
        GapFamily::L1bad { n } => n
            .into_iter()
            .map(|n| Ok((format!("n={n}"), gen_l1_bad_example(n)?)))
            .collect::<Result<_, Error>>()?,
        GapFamily::GapB { n, b } => n
            .into_iter()
            .map(|n| Ok((format!("n={n} B={b}"), gen_gap_general_b(n, b)?)))
            .collect::<Result<_, Error>>()?,
        GapFamily::Strawman { m } => m
            .into_iter()
            .map(|m| Ok((format!("M={m}"), gen_strawman_counterexample(m)?.0)))
            .collect::<Result<_, Error>>()?,
    };
    let rows = points
        .into_iter()
        .map(|(param, inst)| {
            let natural = integrality_gap(&inst, Relaxation::Natural)?;
            let strong = integrality_gap(&inst, Relaxation::Strengthened)?;
            Ok(GapRow {
                param,
                lp_natural: natural.lp_value,
                lp_strengthened: strong.lp_value,
                exact: natural.exact_value,
                gap_natural: natural.ratio,
                gap_strengthened: strong.ratio,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(ctx.emit("gap", None, &rows, || {
        let mut t = Table::new(["param", "lp natural", "lp strengthened", "exact", "gap natural", "gap strengthened"]);
        for r in &rows {
            t.row([
                r.param.clone(),
                num(r.lp_natural),
                num(r.lp_strengthened),
                num(r.exact),
                opt(r.gap_natural),
                opt(r.gap_strengthened),
            ]);
        }
        t.render()
    }))
}

pub fn verify(ctx: &Context, args: &VerifyArgs) -> CliResult {
    let seed = ctx.seed()?;
    let opts = VerifyOptions {
        seed: seed.value,
        trials: args.trials,
        instances: args.instances,
        systems: args.systems,
    };
    let outcomes = run_suites(&args.suites, &opts)?;
    let passed = outcomes.iter().all(|o| o.passed());
    let text = ctx.emit("verify", Some(seed), &outcomes, || {
        let mut t = Table::new(["suite", "checks", "failures", "seconds", "status"]);
        for o in &outcomes {
            t.row([
                o.name.clone(),
                o.checks.to_string(),
                o.failure_count.to_string(),
                format!("{:.2}", o.seconds),
                if o.passed() { "PASS" } else { "FAIL" }.to_string(),
            ]);
        }
        let mut s = t.render();
        for o in &outcomes {
            for msg in &o.failures {
                s.push_str(&format!("{}: {msg}\n", o.name));
            }
        }
        s
    });
    if passed {
        Ok(text)
    } else {
        Err(CliError::Failed(text))
    }
}
