//! Fixture families shared by the integration tests.
#![allow(dead_code)]

use densecsp::csp::{generators, random_3xor, Assignment, CspInstance};
use densecsp::oracle::exact_csp_opt;
use densecsp::rational::int;
use densecsp::rng::SeededRng;
use num_traits::One;

/// Instances with `n ≤ 4`, `q ≤ 3`, `k ≤ 3`, mixing weighted, fully
/// dense and 3-XOR families.
pub fn small_instances(count: usize) -> Vec<(String, CspInstance)> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < count {
        let family = seed % 5;
        let (name, inst) = match family {
            0 => {
                let (n, q, k) = (3 + (seed / 5 % 2) as usize, 2, 2);
                (format!("weighted n{n} q{q} k{k}"), generators::random_weighted(n, q, k, 4, seed))
            }
            1 => {
                let (n, q, k) = (3, 3, 2 + (seed / 5 % 2) as usize);
                (format!("weighted n{n} q{q} k{k}"), generators::random_weighted(n, q, k, 3, seed))
            }
            2 => (
                "dense n3 q2 k2".to_string(),
                generators::random_fully_dense(3, 2, 2, 1, 2, seed),
            ),
            3 => (
                "dense n4 q2 k2".to_string(),
                generators::random_fully_dense(4, 2, 2, 2, 3, seed),
            ),
            _ => ("3xor n4".to_string(), random_3xor(4, &int(1), seed)),
        };
        out.push((format!("{name} seed {seed}"), inst.expect("fixture builds")));
        seed += 1;
    }
    out
}

/// Fully dense 2-CSPs with `n ≤ 5` and `q ≤ 3`, random and planted.
pub fn dense_two_csps(count: usize) -> Vec<(String, CspInstance)> {
    let shapes = [(3, 2), (4, 2), (5, 2), (3, 3), (4, 3), (5, 3)];
    (0..count as u64)
        .map(|seed| {
            let (n, q) = shapes[seed as usize % shapes.len()];
            let inst = if seed % 3 == 2 {
                let mut rng = SeededRng::new(seed);
                let a = Assignment((0..n).map(|_| rng.below(q)).collect());
                generators::planted_fully_dense(n, q, 2, &a, seed)
            } else {
                generators::random_fully_dense(n, q, 2, 1 + (seed as usize % 2), 3, seed)
            };
            (format!("dense n{n} q{q} seed {seed}"), inst.expect("fixture builds"))
        })
        .collect()
}

/// Satisfiable fully dense binary instances with `k ∈ {2, 3}`, `n ≤ 5`.
pub fn satisfiable_binary(count: usize) -> Vec<(String, CspInstance)> {
    let shapes = [(3, 2), (4, 2), (5, 2), (3, 3), (4, 3), (5, 3)];
    (0..count as u64)
        .map(|seed| {
            let (n, k) = shapes[seed as usize % shapes.len()];
            let mut rng = SeededRng::new(seed + 1000);
            let a = Assignment((0..n).map(|_| rng.bit()).collect());
            let inst = generators::planted_fully_dense(n, 2, k, &a, seed).expect("fixture builds");
            (format!("planted n{n} k{k} seed {seed}"), inst)
        })
        .collect()
}

/// Unsatisfiable instances that are uniform over their support.
pub fn unsatisfiable_uniform(count: usize) -> Vec<(String, CspInstance)> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < count {
        let (name, inst) = if seed.is_multiple_of(2) {
            ("3xor n5 d2", random_3xor(5, &int(2), seed).expect("fixture builds"))
        } else {
            (
                "dense n3 q2 k2",
                generators::random_fully_dense(3, 2, 2, 1, 2, seed).expect("fixture builds"),
            )
        };
        if inst.is_uniform_over_support() && !exact_csp_opt(&inst).expect("small").value.is_one() {
            out.push((format!("{name} seed {seed}"), inst));
        }
        seed += 1;
    }
    out
}
