//! Invariant suites runnable outside the test harness, sized by
//! [`VerifyOptions`]. Every suite is deterministic given the seed.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exact::{integrality_gap, solve_exact};
use crate::generators::{
    gen_gap_2k_minus_1, gen_gap_general_b, gen_l1_bad_example, gen_random, gen_random_with_slack,
    gen_strawman_counterexample, RandomConfig, SizeProfile, WeightProfile,
};
use crate::instance::PipInstance;
use crate::lp::{solve_lp, Relaxation};
use crate::rng::trial_rng;
use crate::rounding::{check_survival_monotone, Algorithm, AlterationRule, MonotonicityCheck, PreparedAlteration};
use crate::submodular::{
    check_monotone_submodular, check_subadditivity, AlterationFamily, OracleCheck, SubmodularOracle,
};

/// Conditional samples needed before a retention estimate is compared.
pub const MIN_CONDITIONAL_SAMPLES: u64 = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Rounding trials per (algorithm, instance).
    pub trials: u64,
    /// Random instances per corpus.
    pub instances: usize,
    /// Random systems for the subadditivity enumeration.
    pub systems: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 1,
            trials: 20_000,
            instances: 10,
            systems: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub checks: u64,
    /// First few failure descriptions; empty when the suite passed.
    pub failures: Vec<String>,
    pub failure_count: u64,
    pub seconds: f64,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

struct Tally {
    checks: u64,
    failures: Vec<String>,
    failure_count: u64,
}

impl Tally {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < 5 {
                self.failures.push(describe());
            }
        }
    }
}

pub const SUITES: [&str; 8] = [
    "feasibility",
    "retention",
    "gaps",
    "strawman",
    "monotonicity",
    "subadditivity",
    "oracles",
    "dominance",
];

/// Runs the named suites (all when `names` is empty).
pub fn run_suites(names: &[String], opts: &VerifyOptions) -> Result<Vec<SuiteOutcome>> {
    let selected: Vec<&str> = if names.is_empty() {
        SUITES.to_vec()
    } else {
        names.iter().map(String::as_str).collect()
    };
    selected
        .into_iter()
        .map(|name| {
            let start = Instant::now();
            let mut t = Tally {
                checks: 0,
                failures: Vec::new(),
                failure_count: 0,
            };
            match name {
                "feasibility" | "retention" => rounding_suite(&mut t, opts, name == "retention")?,
                "gaps" => gaps_suite(&mut t)?,
                "strawman" => strawman_suite(&mut t, opts)?,
                "monotonicity" => monotonicity_suite(&mut t, opts)?,
                "subadditivity" => subadditivity_suite(&mut t, opts)?,
                "oracles" => oracles_suite(&mut t, opts)?,
                "dominance" => dominance_suite(&mut t, opts)?,
                other => {
                    return Err(crate::error::invalid(format!(
                        "unknown suite {other:?}; expected one of {}",
                        SUITES.join(", ")
                    )))
                }
            }
            Ok(SuiteOutcome {
                name: name.to_string(),
                checks: t.checks,
                failures: t.failures,
                failure_count: t.failure_count,
                seconds: start.elapsed().as_secs_f64(),
            })
        })
        .collect()
}

/// Random unit-capacity corpus: `n ∈ [10, 30]`, `k ∈ {2, 3, 5}`, mixed
/// big/small sizes, uniform weights.
pub fn random_corpus(count: usize, seed: u64) -> Result<Vec<PipInstance>> {
    let mut rng = trial_rng(seed, u64::MAX);
    (0..count)
        .map(|c| {
            let k = [2, 3, 5][c % 3];
            let n = rng.gen_range(10..=30);
            let m = rng.gen_range(k.max(n / 3)..=n);
            gen_random(&RandomConfig {
                sizes: SizeProfile::Mixed { big_fraction: 0.3 },
                weights: WeightProfile::Uniform { lo: 0.5, hi: 2.0 },
                ..RandomConfig::new(n, m, k, rng.gen())
            })
        })
        .collect()
}

fn rounding_suite(t: &mut Tally, opts: &VerifyOptions, retention: bool) -> Result<()> {
    let corpus = random_corpus(opts.instances, opts.seed)?;
    for (c, inst) in corpus.iter().enumerate() {
        let natural = solve_lp(&Relaxation::Natural.build(inst)?)?;
        let strong = solve_lp(&Relaxation::Strengthened.build(inst)?)?;
        let b = 1 + c % 3;
        let cfg = RandomConfig::new(inst.n(), inst.m(), inst.column_sparsity().max(1), opts.seed ^ c as u64);
        let wide = gen_random_with_slack(&cfg, b as f64)?;
        let wide_x = solve_lp(&Relaxation::Natural.build(&wide)?)?;
        let runs = [
            (Algorithm::simple(), inst, &natural),
            (Algorithm::strong(), inst, &strong),
            (Algorithm::LargeB, &wide, &wide_x),
            (Algorithm::Strawman, inst, &natural),
        ];
        for (algo, inst, x) in runs {
            let est = algo.estimate(inst, x, opts.trials, opts.seed.wrapping_add(c as u64))?;
            if !retention {
                t.check(est.feasibility_violations == 0, || {
                    format!("{} on instance {c}: {} infeasible trials", algo.name(), est.feasibility_violations)
                });
                continue;
            }
            if algo == Algorithm::Strawman {
                continue;
            }
            let bound = algo.retention_bound(inst)?;
            for (i, item) in est.items.iter().enumerate() {
                if item.sampled < MIN_CONDITIONAL_SAMPLES {
                    continue;
                }
                t.check(item.consistent_with_lower_bound(bound, 3.0), || {
                    format!(
                        "{} on instance {c}, item {i}: retention {:.4} below bound {bound:.4}",
                        algo.name(),
                        item.retention.unwrap_or(f64::NAN)
                    )
                });
            }
        }
    }
    Ok(())
}

fn gaps_suite(t: &mut Tally) -> Result<()> {
    let eps = 1e-4;
    for k in 2..=6 {
        let inst = gen_gap_2k_minus_1(k, Some(eps))?;
        let gap = integrality_gap(&inst, Relaxation::Strengthened)?;
        let target = (1.0 - k as f64 * eps) * (2 * k - 1) as f64;
        t.check((gap.exact_value - 1.0).abs() < 1e-6, || format!("2k-1 family k={k}: exact {}", gap.exact_value));
        t.check(gap.lp_value >= target - 1e-6, || format!("2k-1 family k={k}: LP {} < {target}", gap.lp_value));
    }
    let l1 = integrality_gap(&gen_l1_bad_example(10)?, Relaxation::Natural)?;
    t.check(l1.ratio.unwrap_or(0.0) >= 5.0 - 1e-6, || format!("l1 example: gap {:?}", l1.ratio));
    let gb = integrality_gap(&gen_gap_general_b(8, 2.0)?, Relaxation::Natural)?;
    t.check((gb.exact_value - 2.0).abs() < 1e-6, || format!("general B: exact {}", gb.exact_value));
    t.check(gb.lp_value >= 4.0 - 1e-6, || format!("general B: LP {}", gb.lp_value));
    Ok(())
}

fn strawman_suite(t: &mut Tally, opts: &VerifyOptions) -> Result<()> {
    let (inst, x) = gen_strawman_counterexample(100)?;
    let straw = Algorithm::Strawman.estimate(&inst, &x, opts.trials, opts.seed)?;
    let r = straw.items[0].retention.unwrap_or(0.0);
    t.check(r < 0.1, || format!("strawman keeps item 0 with probability {r:.4}"));
    let norm = inst.normalize_unit_capacities().instance;
    let simple = Algorithm::simple().estimate(&norm, &x, opts.trials, opts.seed)?;
    t.check(simple.items[0].consistent_with_lower_bound(0.5, 3.0), || {
        format!("simple keeps item 0 with probability {:?}", simple.items[0].retention)
    });
    Ok(())
}

fn monotonicity_suite(t: &mut Tally, opts: &VerifyOptions) -> Result<()> {
    let mut rng = trial_rng(opts.seed, 1);
    for c in 0..opts.instances {
        let n = rng.gen_range(4..=10);
        let m = rng.gen_range(2..=5);
        let k = rng.gen_range(1..=m.min(3));
        let cfg = RandomConfig {
            sizes: SizeProfile::Mixed { big_fraction: 0.4 },
            ..RandomConfig::new(n, m, k, rng.gen())
        };
        let unit = gen_random(&cfg)?;
        let wide = gen_random_with_slack(&cfg, rng.gen_range(1..=3) as f64)?;
        for (rule, inst) in [(AlterationRule::Sorted, &unit), (AlterationRule::PowersOfTwo, &wide)] {
            let prepared = PreparedAlteration::new(inst, rule)?;
            let outcome = check_survival_monotone(|s| prepared.survivors_of_mask(s), n)?;
            t.check(outcome == MonotonicityCheck::Holds, || format!("{rule:?} on instance {c}: {outcome:?}"));
        }
    }
    Ok(())
}

fn subadditivity_suite(t: &mut Tally, opts: &VerifyOptions) -> Result<()> {
    let mut rng = trial_rng(opts.seed, 2);
    for s in 0..opts.systems {
        let n = rng.gen_range(1..=4);
        let f = SubmodularOracle::random_coverage(n, rng.gen_range(1..=6), rng.gen_range(0.2..0.8), rng.gen())?;
        let fam = AlterationFamily::random_monotone(n, &mut rng)?;
        let x: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
        let c = check_subadditivity(&f, &x, &fam)?;
        t.check(c.holds, || format!("system {s}: lhs {} < beta {} * rhs {}", c.lhs, c.beta, c.rhs));
    }
    Ok(())
}

fn oracles_suite(t: &mut Tally, opts: &VerifyOptions) -> Result<()> {
    for s in 0..opts.instances as u64 {
        let f = SubmodularOracle::random_coverage(10, 12, 0.3, opts.seed ^ s)?;
        let outcome = check_monotone_submodular(&f, 1e-12)?;
        t.check(outcome == OracleCheck::Holds, || format!("coverage oracle {s}: {outcome:?}"));
    }
    Ok(())
}

fn dominance_suite(t: &mut Tally, opts: &VerifyOptions) -> Result<()> {
    let mut rng = trial_rng(opts.seed, 3);
    for c in 0..opts.instances {
        let k = rng.gen_range(1..=3);
        let inst = gen_random(&RandomConfig {
            sizes: SizeProfile::Mixed { big_fraction: 0.3 },
            weights: WeightProfile::Uniform { lo: 0.5, hi: 2.0 },
            ..RandomConfig::new(rng.gen_range(4..=16), rng.gen_range(3..=8), k, rng.gen())
        })?;
        let exact = solve_exact(&inst)?.value;
        for relaxation in [Relaxation::Natural, Relaxation::Strengthened] {
            let lp = solve_lp(&relaxation.build(&inst)?)?.objective;
            t.check(lp >= exact - 1e-7, || format!("{relaxation:?} LP {lp} < exact {exact} on instance {c}"));
        }
    }
    Ok(())
}
