//! Densest k-subhypergraph through the CSP reduction, next to the exhaustive
//! answer.
//!
//! cargo run --release --example densest_subhypergraph -- [seed]

use densecsp::dksh::{densest_k_subhypergraph, generators::planted_clique, DkshOptions};
use densecsp::oracle::exact_densest;

fn main() -> densecsp::Result<()> {
    let seed = std::env::args().nth(1).map_or(0, |s| s.parse().expect("integer seed"));
    let h = planted_clique(5, 2, 3, 2, seed)?;
    let k = 3;
    let opts = DkshOptions {
        brute_force_below: Some(0),
        trials: Some(4),
        ..DkshOptions::default()
    };
    let r = densest_k_subhypergraph(&h, k, 1, seed, &opts)?;
    for step in &r.log {
        println!(
            "tau {:<6} trial {} limit {:<3} {:?} lambda {:?}",
            step.tau, step.trial, step.level_limit, step.outcome, step.lambda
        );
    }
    let o = exact_densest(&h, k)?;
    println!("{:?}: {:?} density {}; exhaustive {:?} density {}", r.method, r.vertices, r.density, o.witness, o.value);
    Ok(())
}
