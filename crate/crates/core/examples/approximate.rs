//! Runs the conditioning-and-rounding approximation on a random fully-dense
//! instance and compares it with the brute-force optimum.
//!
//! cargo run --release --example approximate -- [n] [q] [i] [seed]

use std::time::Instant;

use densecsp::csp::generators::random_fully_dense;
use densecsp::oracle::exact_csp_opt;
use densecsp::rounding::{approximate, guaranteed_bound};
use densecsp::sa::SolveOptions;

fn main() -> densecsp::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let n = args.first().copied().unwrap_or(4);
    let q = args.get(1).copied().unwrap_or(2);
    let i = args.get(2).copied().unwrap_or(2);
    let seed = args.get(3).copied().unwrap_or(7) as u64;

    let inst = random_fully_dense(n, q, 2, 1, 2, seed)?;
    let start = Instant::now();
    let trace = approximate(&inst, i, &SolveOptions::default())?;
    println!("n={n} q={q} i={i}: level {} lambda {}", trace.level, trace.lambda);
    println!("assignment {:?} value {} ({:.4})", trace.assignment, trace.value, trace.value_f64);
    println!("rounded {} conditioned solutions in {:.2?}", trace.candidates, start.elapsed());
    let opt = exact_csp_opt(&inst)?;
    let trace = trace.with_optimum(q, &opt.value)?;
    println!("optimum {} over {} assignments", opt.value, opt.search_space);
    println!("guaranteed floor {:.4}", trace.floor.unwrap_or(0.0));
    let floor = guaranteed_bound(q, i, 1.0 - trace.lambda_f64())?;
    println!("floor at delta = 1 - lambda: {floor:.4}");
    Ok(())
}
