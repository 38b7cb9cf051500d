//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Derived quantities (loads, retention
//! rates, multilinear values, optima, bounds) are recomputed here rather
//! than taken from the library.

use std::f64::consts::E;
use std::time::{Duration, Instant};

use colpack::exact::solve_exact;
use colpack::generators::{
    gen_gap_2k_minus_1, gen_gap_general_b, gen_l1_bad_example, gen_random, gen_random_with_slack,
    gen_strawman_counterexample, RandomConfig, SizeProfile, WeightProfile,
};
use colpack::lp::solve_lp;
use colpack::rng::trial_rng;
use colpack::rounding::PreparedAlteration;
use colpack::submodular::{
    check_good_s, check_subadditivity, continuous_greedy, estimate_altered_value, AlterationFamily,
    GradientMode, GreedyOptions, ValueOracle,
};
use colpack::{
    Algorithm, AlterationRule, FractionalSolution, ItemSet, PipInstance, Relaxation, RetentionEstimate,
    SubmodularOracle, TrialSeed,
};
use rand::Rng;

const SEED: u64 = 20_240_601;
const CORPUS: usize = 50;
const TRIALS: u64 = 100_000;
const MIN_SAMPLES: u64 = 500;
const FEAS_TOL: f64 = 1e-9;

type Check = Result<(bool, String), String>;

struct Report {
    failed: usize,
    total: usize,
}

impl Report {
    fn record(&mut self, id: u32, name: &str, limit: Duration, elapsed: Duration, outcome: Check) {
        self.total += 1;
        let (ok, detail) = match outcome {
            Ok((ok, detail)) => (ok, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = elapsed <= limit;
        let pass = ok && in_time;
        if !pass {
            self.failed += 1;
        }
        let timing = if in_time { "" } else { " OVER TIME LIMIT" };
        println!(
            "criterion {id:>2} {name}: {} | {detail} | {:.1}s of {}s{timing}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn feasible(inst: &PipInstance, set: &ItemSet) -> bool {
    let mut load = vec![0.0; inst.m()];
    for i in set.indices() {
        for &(j, s) in inst.column(i) {
            load[j] += s * f64::from(set.count(i));
        }
    }
    load.iter().zip(inst.capacities()).all(|(&l, &c)| l <= c + FEAS_TOL * c.max(1.0))
}

fn mask_set(n: usize, mask: u64) -> ItemSet {
    ItemSet::from_indices(n, (0..n).filter(|&i| mask >> i & 1 == 1))
}

fn members(n: usize, mask: u64) -> Vec<bool> {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}

fn product_prob(x: &[f64], mask: u64) -> f64 {
    x.iter()
        .enumerate()
        .map(|(i, &xi)| if mask >> i & 1 == 1 { xi } else { 1.0 - xi })
        .product()
}

fn multilinear(f: &impl ValueOracle, x: &[f64]) -> f64 {
    let n = x.len();
    (0..1u64 << n).map(|m| product_prob(x, m) * f.value(&members(n, m))).sum()
}

fn best_feasible_value(f: &impl ValueOracle, inst: &PipInstance) -> f64 {
    let n = inst.n();
    (0..1u64 << n)
        .filter(|&m| feasible(inst, &mask_set(n, m)))
        .map(|m| f.value(&members(n, m)))
        .fold(0.0, f64::max)
}

fn sorted_bound(alpha: f64, k: usize) -> f64 {
    let ak = alpha * k as f64;
    let base = 1.0 - (1.0 / ak) * (1.0 + (2.0 / ak).cbrt());
    base.max(0.0).powi(k as i32)
}

fn large_b_bound(k: usize, b_floor: u32) -> f64 {
    (1.0 - 1.0 / (k as f64 * f64::from(b_floor))).max(0.0).powi(k as i32)
}

/// Retention checks against `bound` on items with enough conditional
/// samples: the number checked and a description of each failure.
fn retention_failures(est: &RetentionEstimate, bound: f64) -> (usize, Vec<String>) {
    let mut checked = 0;
    let mut failures = Vec::new();
    for (i, item) in est.items.iter().enumerate() {
        if item.sampled < MIN_SAMPLES {
            continue;
        }
        checked += 1;
        let r = item.retained as f64 / item.sampled as f64;
        let se = (r * (1.0 - r) / item.sampled as f64).sqrt();
        if r < bound - 3.0 * se {
            failures.push(format!("item {i}: {r:.4} < {bound:.4} - 3*{se:.4}"));
        }
    }
    (checked, failures)
}

struct CorpusEntry {
    config: RandomConfig,
    unit: PipInstance,
    natural: FractionalSolution,
    strengthened: FractionalSolution,
    slack: PipInstance,
    b: f64,
    slack_x: FractionalSolution,
}

fn corpus() -> Result<Vec<CorpusEntry>, String> {
    let mut rng = trial_rng(SEED, 0);
    (0..CORPUS)
        .map(|c| {
            let k = [2, 3, 5][c % 3];
            let n = rng.gen_range(10..=30);
            let m = rng.gen_range(k.max(n / 3)..=n);
            let config = RandomConfig {
                sizes: SizeProfile::Mixed { big_fraction: 0.3 },
                weights: WeightProfile::Uniform { lo: 0.5, hi: 2.0 },
                ..RandomConfig::new(n, m, k, rng.gen())
            };
            let unit = gen_random(&config).map_err(err)?;
            let b = (1 + (c / 3) % 3) as f64;
            let slack = gen_random_with_slack(&config, b).map_err(err)?;
            let natural = solve_lp(&Relaxation::Natural.build(&unit).map_err(err)?).map_err(err)?;
            let strengthened = solve_lp(&Relaxation::Strengthened.build(&unit).map_err(err)?).map_err(err)?;
            let slack_x = solve_lp(&Relaxation::Natural.build(&slack).map_err(err)?).map_err(err)?;
            Ok(CorpusEntry {
                config,
                unit,
                natural,
                strengthened,
                slack,
                b,
                slack_x,
            })
        })
        .collect()
}

struct AlgoRuns {
    estimates: Vec<RetentionEstimate>,
    elapsed: Duration,
    recheck_violations: usize,
}

/// `TRIALS` trials per instance, plus an independent load check of 200
/// single rounds per instance.
fn run_algorithm(
    corpus: &[CorpusEntry],
    algo: Algorithm,
    pick: impl Fn(&CorpusEntry) -> (&PipInstance, &FractionalSolution),
) -> Result<AlgoRuns, String> {
    let start = Instant::now();
    let mut estimates = Vec::with_capacity(corpus.len());
    let mut recheck_violations = 0;
    for (c, entry) in corpus.iter().enumerate() {
        let (inst, x) = pick(entry);
        let seed = SEED ^ (c as u64) << 8;
        estimates.push(algo.estimate(inst, x, TRIALS, seed).map_err(err)?);
        for t in 0..200 {
            let report = algo.round(inst, x, TrialSeed::new(seed, t)).map_err(err)?;
            if !report.survivors.is_subset_of(&report.sampled) || !feasible(inst, &report.survivors) {
                recheck_violations += 1;
            }
        }
    }
    Ok(AlgoRuns {
        estimates,
        elapsed: start.elapsed(),
        recheck_violations,
    })
}

fn retention_criterion(corpus: &[CorpusEntry], runs: &AlgoRuns, bound: impl Fn(&CorpusEntry) -> f64) -> (bool, String) {
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut min_bound = f64::INFINITY;
    for (entry, est) in corpus.iter().zip(&runs.estimates) {
        let b = bound(entry);
        min_bound = min_bound.min(b);
        let (n, f) = retention_failures(est, b);
        checked += n;
        failures.extend(f);
    }
    let detail = if failures.is_empty() {
        format!("{checked} items checked, all at or above bound - 3 se (smallest bound {min_bound:.4})")
    } else {
        format!("{} of {checked} items below bound - 3 se; first: {}", failures.len(), failures[0])
    };
    (failures.is_empty() && checked > 0, detail)
}

fn gaps() -> Check {
    let eps = 1e-4;
    let tol = 1e-6;
    let mut notes = Vec::new();
    let mut ok = true;
    for k in 2..=6 {
        let inst = gen_gap_2k_minus_1(k, Some(eps)).map_err(err)?;
        let exact = solve_exact(&inst).map_err(err)?.value;
        let lp = solve_lp(&Relaxation::Strengthened.build(&inst).map_err(err)?).map_err(err)?.objective;
        let target = (1.0 - k as f64 * eps) * (2 * k - 1) as f64;
        ok &= (exact - 1.0).abs() <= tol && lp >= target - tol;
        notes.push(format!("k={k}: exact {exact}, lp {lp:.6} >= {target:.6}"));
    }
    let l1 = gen_l1_bad_example(10).map_err(err)?;
    let l1_exact = solve_exact(&l1).map_err(err)?.value;
    let l1_lp = solve_lp(&Relaxation::Natural.build(&l1).map_err(err)?).map_err(err)?.objective;
    ok &= l1_exact > 0.0 && l1_lp / l1_exact >= 5.0 - tol;
    notes.push(format!("l1 n=10: gap {:.4}", l1_lp / l1_exact));
    let gb = gen_gap_general_b(8, 2.0).map_err(err)?;
    let gb_exact = solve_exact(&gb).map_err(err)?.value;
    let gb_lp = solve_lp(&Relaxation::Natural.build(&gb).map_err(err)?).map_err(err)?.objective;
    ok &= (gb_exact - 2.0).abs() <= tol && gb_lp >= 4.0 - tol;
    notes.push(format!("n=8 B=2: exact {gb_exact}, lp {gb_lp:.4}"));
    Ok((ok, notes.join("; ")))
}

fn strawman() -> Check {
    let (inst, x) = gen_strawman_counterexample(100).map_err(err)?;
    let straw = Algorithm::Strawman.estimate(&inst, &x, TRIALS, SEED).map_err(err)?;
    let item = &straw.items[0];
    let straw_r = item.retained as f64 / item.sampled.max(1) as f64;
    // the simple rule needs unit capacities: the same instance, rescaled
    let norm = inst.normalize_unit_capacities();
    if !norm.dropped.is_empty() {
        return Err("normalization dropped items".into());
    }
    let simple = Algorithm::Simple { alpha: 4.0 }.estimate(&norm.instance, &x, TRIALS, SEED + 1).map_err(err)?;
    let item = &simple.items[0];
    let r = item.retained as f64 / item.sampled as f64;
    let se = (r * (1.0 - r) / item.sampled as f64).sqrt();
    let ok = straw_r < 0.1 && item.sampled >= MIN_SAMPLES && r >= 0.5 - 3.0 * se;
    Ok((
        ok,
        format!("strawman keeps item 1 w.p. {straw_r:.4}; simple keeps it w.p. {r:.4} (se {se:.4})"),
    ))
}

fn good_s() -> Check {
    let mut rng = trial_rng(SEED, 7);
    let mut worst = f64::INFINITY;
    let mut failures = Vec::new();
    let mut checks = 0;
    for s in 0..20u64 {
        let n = 4 + (s as usize % 9);
        let f = SubmodularOracle::random_coverage(n, 2 * n, 0.3, rng.gen()).map_err(err)?;
        let x: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
        let fx = multilinear(&f, &x);
        for p in [0.25, 0.5, 1.0] {
            checks += 1;
            let c = check_good_s(&f, &x, p, TRIALS, SEED ^ s << 4 ^ (p * 4.0) as u64).map_err(err)?;
            let target = p * fx;
            let z = (c.mean.mean - target) / c.mean.se.max(1e-300);
            worst = worst.min(z);
            if c.mean.mean < target - 3.0 * c.mean.se {
                failures.push(format!("oracle {s} p={p}: {:.4} < {target:.4} - 3*{:.4}", c.mean.mean, c.mean.se));
            }
        }
    }
    let detail = match failures.first() {
        None => format!("{checks} checks, smallest (mean - pF)/se = {worst:.2}"),
        Some(first) => format!("{} of {checks} failed; first: {first}", failures.len()),
    };
    Ok((failures.is_empty(), detail))
}

fn random_oracle(n: usize, rng: &mut impl Rng) -> Result<SubmodularOracle, String> {
    if rng.gen_bool(0.5) {
        SubmodularOracle::random_coverage(n, rng.gen_range(1..=6), rng.gen_range(0.2..0.8), rng.gen()).map_err(err)
    } else {
        let mut g = vec![0.0];
        let mut step: f64 = rng.gen_range(0.5..2.0);
        for _ in 0..n {
            g.push(g.last().unwrap() + step);
            step *= rng.gen_range(0.0..=1.0);
        }
        SubmodularOracle::concave_cardinality(g).map_err(err)
    }
}

fn subadditivity() -> Check {
    let mut rng = trial_rng(SEED, 8);
    let mut worst = f64::INFINITY;
    for s in 0..1000 {
        let n = rng.gen_range(1..=4);
        let f = random_oracle(n, &mut rng)?;
        let fam = AlterationFamily::random_monotone(n, &mut rng).map_err(err)?;
        let x: Vec<f64> = (0..n)
            .map(|_| match rng.gen_range(0..10) {
                0 => 0.0,
                1 => 1.0,
                _ => rng.gen(),
            })
            .collect();
        // monotone family: retention of i can only drop as B grows
        let retention = |b: u64, i: usize| -> f64 {
            fam.distribution(b).iter().filter(|(a, _)| a >> i & 1 == 1).map(|(_, q)| q).sum()
        };
        for big in 0..1u64 << n {
            let mut small = big;
            loop {
                for i in (0..n).filter(|&i| small >> i & 1 == 1) {
                    if retention(small, i) < retention(big, i) - 1e-12 {
                        return Ok((false, format!("system {s}: family not monotone")));
                    }
                }
                if small == 0 {
                    break;
                }
                small = (small - 1) & big;
            }
        }
        let (mut lhs, mut rhs) = (0.0, 0.0);
        let mut kept = vec![0.0; n];
        for b in 0..1u64 << n {
            let p = product_prob(&x, b);
            rhs += p * f.value(&members(n, b));
            for &(a, q) in fam.distribution(b) {
                lhs += p * q * f.value(&members(n, a));
                for (i, k) in kept.iter_mut().enumerate() {
                    if a >> i & 1 == 1 {
                        *k += p * q;
                    }
                }
            }
        }
        let beta = (0..n).filter(|&i| x[i] > 0.0).map(|i| kept[i] / x[i]).fold(1.0, f64::min);
        let slack = lhs - beta * rhs;
        worst = worst.min(slack);
        let lib = check_subadditivity(&f, &x, &fam).map_err(err)?;
        if slack < -1e-12 || !lib.holds || (lib.lhs - lhs).abs() > 1e-9 || (lib.beta - beta).abs() > 1e-9 {
            return Ok((false, format!("system {s}: slack {slack:e}, library holds = {}", lib.holds)));
        }
    }
    Ok((true, format!("1000 systems, smallest slack {worst:.3e}")))
}

fn monotonicity() -> Check {
    let mut rng = trial_rng(SEED, 9);
    let mut pairs = 0u64;
    for c in 0..20 {
        let n = rng.gen_range(4..=10);
        let m = rng.gen_range(2..=6);
        let k = rng.gen_range(1..=m.min(4));
        let cfg = RandomConfig {
            sizes: SizeProfile::Mixed { big_fraction: 0.4 },
            ..RandomConfig::new(n, m, k, rng.gen())
        };
        let unit = gen_random(&cfg).map_err(err)?;
        let wide = gen_random_with_slack(&cfg, rng.gen_range(1.0..3.5)).map_err(err)?;
        for (rule, inst) in [(AlterationRule::Sorted, &unit), (AlterationRule::PowersOfTwo, &wide)] {
            let prepared = PreparedAlteration::new(inst, rule).map_err(err)?;
            let table: Vec<u64> = (0..1u64 << n).map(|s| prepared.survivors_of_mask(s)).collect();
            for t2 in 0..1u64 << n {
                let mut t1 = t2;
                loop {
                    pairs += 1;
                    if table[t2 as usize] & t1 & !table[t1 as usize] != 0 {
                        return Ok((false, format!("{rule:?} on instance {c}: {t1:#b} within {t2:#b}")));
                    }
                    if t1 == 0 {
                        break;
                    }
                    t1 = (t1 - 1) & t2;
                }
            }
        }
    }
    Ok((true, format!("{pairs} subset pairs over 20 instances and both rules")))
}

fn greedy_quality() -> Check {
    let mut rng = trial_rng(SEED, 10);
    let factor = 1.0 - 1.0 / E - 0.05;
    let mut failures = Vec::new();
    let mut worst_f = f64::INFINITY;
    let mut worst_end = f64::INFINITY;
    for c in 0..10u64 {
        let n = rng.gen_range(6..=10);
        let m = rng.gen_range(4..=6);
        let k = [2, 3, 4][c as usize % 3];
        let inst = gen_random(&RandomConfig {
            sizes: SizeProfile::Mixed { big_fraction: 0.3 },
            ..RandomConfig::new(n, m, k, rng.gen())
        })
        .map_err(err)?;
        let f = SubmodularOracle::random_coverage(n, 2 * n, 0.3, rng.gen()).map_err(err)?;
        let opt = best_feasible_value(&f, &inst);
        let opts = GreedyOptions::for_size(n, SEED + c);
        if opts.gradient != GradientMode::Exact {
            return Err("expected exact gradient mode".into());
        }
        let polytope = Relaxation::Strengthened.build(&inst).map_err(err)?;
        let x = continuous_greedy(&f, &polytope, &opts).map_err(err)?.x.x;
        let fx = multilinear(&f, &x);
        let k_inst = inst.column_sparsity();
        let beta = sorted_bound(1.0, k_inst);
        let prepared = PreparedAlteration::new(&inst, AlterationRule::Sorted).map_err(err)?;
        let est = estimate_altered_value(
            &f,
            &x,
            1.0 / k_inst as f64,
            &|s| prepared.survivors_of_mask(s),
            10_000,
            SEED ^ c << 12,
        )
        .map_err(err)?;
        let end_target = opt * beta * factor / k_inst as f64;
        worst_f = worst_f.min(fx / opt);
        if end_target > 0.0 {
            worst_end = worst_end.min(est.altered.mean / end_target);
        }
        if fx < factor * opt || est.altered.mean < end_target {
            failures.push(format!(
                "instance {c} (k={k_inst}): F(x)/OPT = {:.4}, mean f(S') {:.4} vs {end_target:.4}",
                fx / opt,
                est.altered.mean
            ));
        }
    }
    let detail = match failures.first() {
        None => format!(
            "smallest F(x)/OPT = {worst_f:.4} (need {factor:.4}); smallest mean f(S')/target = {worst_end:.2} over nonzero targets"
        ),
        Some(first) => format!("{} of 10 failed; first: {first}", failures.len()),
    };
    Ok((failures.is_empty(), detail))
}

fn dominance(corpus: &[CorpusEntry]) -> Check {
    let mut rng = trial_rng(SEED, 11);
    let mut instances: Vec<PipInstance> = corpus.iter().filter(|e| e.unit.n() <= 24).map(|e| e.unit.clone()).collect();
    instances.extend(corpus.iter().filter(|e| e.slack.n() <= 24).map(|e| e.slack.clone()));
    for _ in 0..100 {
        let n = rng.gen_range(2..=16);
        let m = rng.gen_range(1..=8);
        let k = rng.gen_range(1..=m.min(4));
        let inst = gen_random(&RandomConfig {
            sizes: SizeProfile::Mixed { big_fraction: 0.4 },
            weights: WeightProfile::Uniform { lo: 0.1, hi: 3.0 },
            density: 0.8,
            ..RandomConfig::new(n, m, k, rng.gen())
        })
        .map_err(err)?;
        let caps: Vec<f64> = (0..m).map(|_| rng.gen_range(0.5..2.5)).collect();
        instances.push(inst.with_capacities(caps).map_err(err)?);
    }
    let mut smallest = f64::INFINITY;
    for (c, inst) in instances.iter().enumerate() {
        let exact = solve_exact(inst).map_err(err)?;
        if !exact.proven_optimal || !feasible(inst, &exact.set) {
            return Ok((false, format!("instance {c}: exact solution not certified")));
        }
        let relaxations: &[Relaxation] = if inst.capacities().iter().all(|&c| c == 1.0) {
            &[Relaxation::Natural, Relaxation::Strengthened]
        } else {
            &[Relaxation::Natural]
        };
        for &r in relaxations {
            let lp = solve_lp(&r.build(inst).map_err(err)?).map_err(err)?.objective;
            smallest = smallest.min(lp - exact.value);
            if lp < exact.value - 1e-7 {
                return Ok((false, format!("instance {c}: {r:?} LP {lp} < exact {}", exact.value)));
            }
        }
    }
    Ok((
        true,
        format!("{} instances, smallest LP - OPT = {smallest:.3e}", instances.len()),
    ))
}

fn main() {
    let mut report = Report { failed: 0, total: 0 };
    let secs = Duration::from_secs;

    let (corpus, corpus_time) = timed(corpus);
    let corpus = match corpus {
        Ok(c) => c,
        Err(e) => {
            println!("corpus construction failed: {e}");
            std::process::exit(1);
        }
    };
    let sizes: Vec<usize> = corpus.iter().map(|e| e.config.n).collect();
    println!(
        "corpus: {} instances, n in [{}, {}], k in {{2, 3, 5}}, built in {:.1}s",
        corpus.len(),
        sizes.iter().min().unwrap(),
        sizes.iter().max().unwrap(),
        corpus_time.as_secs_f64()
    );

    let simple = run_algorithm(&corpus, Algorithm::Simple { alpha: 4.0 }, |e| (&e.unit, &e.natural));
    let strong = run_algorithm(&corpus, Algorithm::Strong { alpha: 1.0 }, |e| (&e.unit, &e.strengthened));
    let large = run_algorithm(&corpus, Algorithm::LargeB, |e| (&e.slack, &e.slack_x));
    let straw = run_algorithm(&corpus, Algorithm::Strawman, |e| (&e.unit, &e.natural));

    {
        let mut elapsed = corpus_time;
        let outcome = (|| {
            let mut parts = Vec::new();
            let mut ok = true;
            for (name, runs) in [("simple", &simple), ("strong", &strong), ("large-b", &large), ("strawman", &straw)] {
                let runs = runs.as_ref().map_err(Clone::clone)?;
                elapsed += runs.elapsed;
                let violations: u64 = runs.estimates.iter().map(|e| e.feasibility_violations).sum();
                ok &= violations == 0 && runs.recheck_violations == 0;
                parts.push(format!("{name} {violations}+{}", runs.recheck_violations));
            }
            Ok((ok, format!("violations over {CORPUS} x {TRIALS} trials (+ independent recheck): {}", parts.join(", "))))
        })();
        report.record(1, "feasibility", secs(120), elapsed, outcome);
    }
    {
        let outcome = simple.as_ref().map_err(Clone::clone).map(|r| retention_criterion(&corpus, r, |_| 0.5));
        let t = simple.as_ref().map_or(Duration::ZERO, |r| r.elapsed);
        report.record(2, "simple retention (alpha = 4)", secs(120), t, outcome);
    }
    {
        let outcome = strong
            .as_ref()
            .map_err(Clone::clone)
            .map(|r| retention_criterion(&corpus, r, |e| sorted_bound(1.0, e.unit.column_sparsity())));
        let t = strong.as_ref().map_or(Duration::ZERO, |r| r.elapsed);
        report.record(3, "sorted retention (alpha = 1)", secs(120), t, outcome);
    }
    {
        let outcome = large.as_ref().map_err(Clone::clone).map(|r| {
            retention_criterion(&corpus, r, |e| large_b_bound(e.slack.column_sparsity(), e.b.floor() as u32))
        });
        let t = large.as_ref().map_or(Duration::ZERO, |r| r.elapsed);
        report.record(4, "large-capacity retention (B in 1..3)", secs(120), t, outcome);
    }
    let (outcome, t) = timed(gaps);
    report.record(5, "integrality gaps", secs(30), t, outcome);
    let (outcome, t) = timed(strawman);
    report.record(6, "strawman counterexample", secs(60), t, outcome);
    let (outcome, t) = timed(good_s);
    report.record(7, "sampled value vs p F(x)", secs(120), t, outcome);
    let (outcome, t) = timed(subadditivity);
    report.record(8, "exhaustive alteration inequality", secs(60), t, outcome);
    let (outcome, t) = timed(monotonicity);
    report.record(9, "alteration monotonicity", secs(60), t, outcome);
    let (outcome, t) = timed(greedy_quality);
    report.record(10, "continuous greedy quality", secs(300), t, outcome);
    let (outcome, t) = timed(|| dominance(&corpus));
    report.record(11, "LP dominates exact optimum", secs(120), t, outcome);

    println!("acceptance: {} of {} criteria passed", report.total - report.failed, report.total);
    if report.failed > 0 {
        std::process::exit(1);
    }
}
