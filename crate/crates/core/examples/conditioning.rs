//! Conditions an SA solution on partial assignments, checks consistency and
//! prints the conditioned correlation terms.
//!
//! cargo run --release --example conditioning

use densecsp::csp::generators::random_fully_dense;
use densecsp::experiments::corr_sum;
use densecsp::info::solution_total_correlation;
use densecsp::sa::{check_consistency, condition, conditioned_correlation_terms, random_global_solution, sa_value};

fn main() -> densecsp::Result<()> {
    let inst = random_fully_dense(4, 2, 2, 1, 2, 5)?;
    let mu = random_global_solution(4, 2, 4, 11)?;
    println!("SA value {} total correlation {:.4}", sa_value(&mu, &inst)?, solution_total_correlation(&mu, &inst)?);
    for phi in 0..2 {
        let c = condition(&mu, &[1], &[phi])?;
        println!(
            "x1 = {phi}: level {}, consistent {}, value {}, correlation {:.4}",
            c.level(),
            check_consistency(&c, 0.0).is_consistent(),
            sa_value(&c, &inst)?,
            solution_total_correlation(&c, &inst)?
        );
    }
    let terms = conditioned_correlation_terms(&mu, &inst, 2)?;
    println!("terms by |T|: {terms:.4?}");
    let row = corr_sum("random", &inst, &mu, 2)?;
    println!("sum {:.4} against k^2 ln q / density = {:.4}", row.sum, row.bound);
    Ok(())
}
