//! Monte Carlo edge counts between random vertex subsets against the
//! exponential tail bound.
//!
//! cargo run --release --example edge_tail -- [trials]

use densecsp::experiments::{default_edge_tail_configs, edge_tail};

fn main() -> densecsp::Result<()> {
    let trials = std::env::args().nth(1).map_or(20_000, |s| s.parse().expect("integer"));
    for r in edge_tail(&default_edge_tail_configs(), trials, 1)? {
        println!(
            "{:<18} k={:<4} l={:<4} gamma={:<5} s={:<8.1} tail {:.5} bound {:.4}",
            r.graph, r.k, r.l, r.gamma, r.expected_edges, r.empirical, r.bound
        );
    }
    Ok(())
}
