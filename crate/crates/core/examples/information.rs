//! Entropy, mutual information and total correlation of a small joint law.
//!
//! cargo run --release --example information

use densecsp::info::{
    conditional_mutual_information, entropy, joint_entropy, mutual_information, signed_interaction_sum,
    total_correlation, JointDistribution,
};

fn main() -> densecsp::Result<()> {
    // three bits: x2 = x0 xor x1 with x0, x1 fair and independent
    let probs = (0..8)
        .map(|i| {
            let (a, b, c) = (i >> 2 & 1, i >> 1 & 1, i & 1);
            if a ^ b == c { 0.25 } else { 0.0 }
        })
        .collect();
    let j = JointDistribution::new(vec![2, 2, 2], probs)?;
    let singles: f64 = (0..3).map(|a| entropy(&j.axis_marginal(a))).sum();
    println!("H = {:.4} nats, sum of marginal entropies {:.4}", joint_entropy(&j), singles);
    println!("I(x0; x1; x2) = {:.4}", mutual_information(&j)?);
    println!("I(x0; x1 | x2) = {:.4}", conditional_mutual_information(&j)?);
    println!("C = {:.4}, signed interaction sum {:.4}", total_correlation(&j)?, signed_interaction_sum(&j));
    Ok(())
}
