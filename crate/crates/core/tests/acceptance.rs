//! Acceptance run: every criterion at its stated tolerance, one line each.
//! Built with `harness = false` so the lines reach the terminal uncaptured.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use densecsp::csp::{value, Assignment};
use densecsp::dksh::{
    densest_k_subhypergraph, extract_subhypergraph, generators as hyper, hypergraph_density, reduce_to_csp,
    DkshOptions,
};
use densecsp::experiments::{
    birthday_decay, decay_is_monotone, default_edge_tail_configs, edge_tail, funcbound_sweep, corr_sum,
};
use densecsp::games::{clause_variable_game, odd_cycle_game, DEFAULT_GAME_CAP};
use densecsp::info::{
    entropy, joint_entropy, signed_interaction_sum, total_correlation, JointDistribution,
};
use densecsp::oracle::{exact_csp_opt, exact_densest, exact_game_value, DEFAULT_CAP};
use densecsp::rational::{format_rational, int, rat, to_f64, Rational};
use densecsp::rng::SeededRng;
use densecsp::rounding::{approximate_with, guaranteed_bound};
use densecsp::sa::{random_global_solution, solve_sa, solve_sac, SacCache, SolveOptions};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn relaxation_sandwich() -> Outcome {
    let fixtures = common::small_instances(50);
    let opts = SolveOptions::default();
    let (mut solves, mut strict) = (0, 0);
    for (name, inst) in &fixtures {
        let opt = exact_csp_opt(inst).map_err(|e| e.to_string())?.value;
        let mut prev: Option<Rational> = None;
        for r in inst.k..=inst.n {
            let v = solve_sa(inst, r, &opts).map_err(|e| format!("{name}: {e}"))?.value;
            solves += 1;
            strict += usize::from(v > opt);
            check(v >= opt, || format!("{name}: level {r} gives {v} below optimum {opt}"))?;
            if let Some(p) = &prev {
                check(v <= *p, || format!("{name}: level {r} gives {v} above {p}"))?;
            }
            prev = Some(v);
        }
        let top = prev.expect("at least one level");
        check(top == opt, || format!("{name}: top level {top} but optimum {opt}"))?;
    }
    Ok(format!(
        "{} instances, {solves} exact SA solves, {strict} strictly above the optimum",
        fixtures.len()
    ))
}

fn rounding_floor() -> Outcome {
    let fixtures = common::dense_two_csps(30);
    let mut runs = 0;
    let mut worst = f64::INFINITY;
    for (name, inst) in &fixtures {
        let opt = exact_csp_opt(inst).map_err(|e| e.to_string())?.value;
        let delta = (1.0 - to_f64(&opt)).clamp(0.0, 1.0);
        let mut cache = SacCache::new(inst, SolveOptions::default());
        for i in 1..=6 {
            let trace = approximate_with(&mut cache, i).map_err(|e| format!("{name}: {e}"))?;
            let floor = guaranteed_bound(inst.q, i, delta).map_err(|e| e.to_string())?;
            runs += 1;
            worst = worst.min(trace.value_f64 - floor);
            check(trace.value_f64 >= floor, || {
                format!("{name}, i = {i}: value {} below floor {floor}", trace.value_f64)
            })?;
        }
    }
    Ok(format!("{runs} runs on {} fixtures, smallest margin {worst:.4}", fixtures.len()))
}

fn satisfiable_one_minus_eps() -> Outcome {
    let eps: f64 = 0.3;
    let i = (2f64.ln() / (1.0 + eps).ln()).ceil() as usize;
    let fixtures = common::satisfiable_binary(12);
    let mut worst: f64 = 1.0;
    for (name, inst) in &fixtures {
        let mut cache = SacCache::new(inst, SolveOptions::default());
        let trace = approximate_with(&mut cache, i).map_err(|e| format!("{name}: {e}"))?;
        worst = worst.min(trace.value_f64);
        check(trace.value_f64 >= 1.0 - eps, || {
            format!("{name}: value {} below {}", trace.value_f64, 1.0 - eps)
        })?;
    }
    Ok(format!("{} fixtures at i = {i}, smallest value {worst:.4}", fixtures.len()))
}

fn kl_lower_bound() -> Outcome {
    let rows = funcbound_sweep(10_000, 2024).map_err(|e| e.to_string())?;
    let min = rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
    check(min >= -1e-9, || format!("min slack {min}"))?;
    Ok(format!("{} triples, min slack {min:.3e}", rows.len()))
}

fn correlation_sum() -> Outcome {
    let mut checked = 0;
    let mut worst = f64::INFINITY;
    let opts = SolveOptions::default();
    for seed in 0..6u64 {
        for n in [3usize, 4] {
            let insts = [
                densecsp::csp::generators::random_fully_dense(n, 2, 2, 1, 2, seed),
                densecsp::csp::generators::random_weighted(n, 2, 2, 4, seed),
            ];
            for inst in insts {
                let inst = inst.map_err(|e| e.to_string())?;
                let level = n;
                let mut sols = vec![
                    ("random", random_global_solution(n, 2, level, seed).map_err(|e| e.to_string())?),
                    ("sac", solve_sac(&inst, level, &opts).map_err(|e| e.to_string())?.solution),
                ];
                sols.push(("sa", solve_sa(&inst, level, &opts).map_err(|e| e.to_string())?.solution));
                for (kind, mu) in &sols {
                    for l in 0..=(level - 2).min(2) {
                        let row = corr_sum(kind, &inst, mu, l).map_err(|e| e.to_string())?;
                        checked += 1;
                        worst = worst.min(row.slack);
                        check(row.sum <= row.bound + 1e-9, || {
                            format!("n = {n}, seed {seed}, {kind}, l = {l}: sum {} > bound {}", row.sum, row.bound)
                        })?;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} sums, smallest slack {worst:.4}"))
}

fn clause_variable_soundness() -> Outcome {
    let fixtures = common::unsatisfiable_uniform(20);
    let mut worst = f64::INFINITY;
    for (name, inst) in &fixtures {
        let opt = exact_csp_opt(inst).map_err(|e| e.to_string())?.value;
        let eps = Rational::from_integer(1.into()) - &opt;
        let g = clause_variable_game(inst).map_err(|e| e.to_string())?;
        check(g.is_projection(), || format!("{name}: not a projection game"))?;
        let val = exact_game_value(&g).map_err(|e| e.to_string())?.value;
        let limit = to_f64(&(Rational::from_integer(1.into()) - &eps / int(inst.k as i64)));
        worst = worst.min(limit - to_f64(&val));
        check(to_f64(&val) <= limit + 1e-12, || {
            format!("{name}: game value {val} above 1 - eps/k = {limit}")
        })?;
    }
    Ok(format!("{} unsatisfiable fixtures, smallest margin {worst:.4}", fixtures.len()))
}

fn edge_concentration() -> Outcome {
    let configs = default_edge_tail_configs();
    let rows = edge_tail(&configs, 100_000, 99).map_err(|e| e.to_string())?;
    let mut bounded = 0;
    for r in &rows {
        if r.bound < 1.0 {
            bounded += 1;
            check(r.empirical <= r.bound, || {
                format!("{} k={} l={}: tail {} above bound {}", r.graph, r.k, r.l, r.empirical, r.bound)
            })?;
        }
    }
    check(bounded >= 5, || format!("only {bounded} configurations with bound below 1"))?;
    Ok(format!("{bounded} configurations with bound below 1, 100000 trials each"))
}

fn birthday_regression() -> Outcome {
    let stored = [
        (1, 1, rat(8, 9)),
        (1, 2, rat(7, 9)),
        (1, 3, rat(2, 3)),
        (2, 1, rat(7, 9)),
        (2, 2, rat(5, 9)),
        (2, 3, rat(1, 3)),
        (3, 1, rat(2, 3)),
        (3, 2, rat(1, 3)),
        (3, 3, int(0)),
    ];
    let rows = birthday_decay(&odd_cycle_game(), DEFAULT_GAME_CAP, DEFAULT_CAP).map_err(|e| e.to_string())?;
    check(rows.len() == stored.len(), || format!("{} grid cells", rows.len()))?;
    for (row, (k, l, v)) in rows.iter().zip(&stored) {
        check(row.k == *k && row.l == *l && row.value == format_rational(v), || {
            format!("({}, {}) = {}, stored ({k}, {l}) = {v}", row.k, row.l, row.value)
        })?;
    }
    check(decay_is_monotone(&rows), || "values increase somewhere on the grid".into())?;
    Ok("3x3 grid matches stored values and never increases".into())
}

fn dksh_dominance() -> Outcome {
    let mut pairs = 0;
    for seed in 0..8u64 {
        let (n, d, m) = if seed % 2 == 0 { (5, 2, 6) } else { (5, 3, 4) };
        let h = hyper::random_hypergraph(n, d, m, seed).map_err(|e| e.to_string())?;
        let k = 3;
        let (inst, _) = reduce_to_csp(&h, k, seed + 50).map_err(|e| e.to_string())?;
        let mut rng = SeededRng::new(seed);
        let mut assignments: Vec<Assignment> = (0..3)
            .map(|_| Assignment((0..k).map(|_| rng.below(n)).collect()))
            .collect();
        assignments.push(exact_csp_opt(&inst).map_err(|e| e.to_string())?.witness);
        for a in assignments {
            let s = extract_subhypergraph(&h, k, &a).map_err(|e| e.to_string())?;
            let dens = hypergraph_density(&h, &s).map_err(|e| e.to_string())?;
            let v = value(&inst, &a).map_err(|e| e.to_string())?;
            pairs += 1;
            check(dens >= v, || format!("seed {seed}, {:?}: density {dens} < value {v}", a.0))?;
        }
    }
    let mut small = 0;
    for seed in 0..10u64 {
        let h = hyper::planted_clique(7, 2, 3 + (seed % 3) as usize, 3, seed).map_err(|e| e.to_string())?;
        let k = 4 + (seed % 3) as usize;
        let r = densest_k_subhypergraph(&h, k, 1, seed, &DkshOptions::default()).map_err(|e| e.to_string())?;
        let o = exact_densest(&h, k).map_err(|e| e.to_string())?;
        small += 1;
        check(r.density == o.value && r.vertices == o.witness, || {
            format!("seed {seed}: pipeline {} vs oracle {}", r.density, o.value)
        })?;
    }
    Ok(format!("{pairs} (hypergraph, assignment) pairs, {small} small-k pipelines equal the oracle"))
}

fn random_joint(rng: &mut SeededRng) -> JointDistribution {
    let axes = 1 + rng.below(4);
    let dims: Vec<usize> = (0..axes).map(|_| 1 + rng.below(3)).collect();
    let size: usize = dims.iter().product();
    let mut raw: Vec<f64> = (0..size)
        .map(|_| if rng.below(5) == 0 { 0.0 } else { rng.unit_f64() })
        .collect();
    if raw.iter().all(|&p| p == 0.0) {
        raw[0] = 1.0;
    }
    let total: f64 = raw.iter().sum();
    JointDistribution::new(dims, raw.into_iter().map(|p| p / total).collect()).expect("normalised")
}

fn information_identities() -> Outcome {
    let mut rng = SeededRng::new(31);
    let mut worst: f64 = 0.0;
    for trial in 0..1000 {
        let j = random_joint(&mut rng);
        let c = total_correlation(&j).map_err(|e| e.to_string())?;
        let singles: f64 = (0..j.axes()).map(|a| entropy(&j.axis_marginal(a))).sum();
        let gap = (c - (singles - joint_entropy(&j))).abs();
        let signed = (c - signed_interaction_sum(&j)).abs();
        worst = worst.max(gap).max(signed);
        check(gap <= 1e-9 && signed <= 1e-9, || {
            format!("joint {trial} with dims {:?}: errors {gap:.3e}, {signed:.3e}", j.dims())
        })?;
    }
    Ok(format!("1000 joints, largest error {worst:.3e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("relaxation sandwich", relaxation_sandwich),
        ("rounding floor", rounding_floor),
        ("satisfiable instances reach 1 - eps", satisfiable_one_minus_eps),
        ("KL lower bound", kl_lower_bound),
        ("conditioned correlation sum", correlation_sum),
        ("clause/variable soundness", clause_variable_soundness),
        ("edge concentration", edge_concentration),
        ("birthday decay regression", birthday_regression),
        ("subhypergraph extraction", dksh_dominance),
        ("information identities", information_identities),
    ];
    let mut failed = 0;
    let mut total = Duration::ZERO;
    for (idx, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let took = start.elapsed();
        total += took;
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{:.1}s]", idx + 1, took.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{:.1}s]", idx + 1, took.as_secs_f64());
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        total.as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
