//! Clause/variable game of random 3-XOR instances against the instance
//! optimum.
//!
//! cargo run --release --example clause_variable -- [n] [seeds]

use densecsp::csp::random_3xor;
use densecsp::games::clause_variable_game;
use densecsp::oracle::{exact_csp_opt, exact_game_value};
use densecsp::rational::{int, Rational};

fn main() -> densecsp::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer")).collect();
    let n = args.first().copied().unwrap_or(5) as usize;
    let seeds = args.get(1).copied().unwrap_or(5);
    for seed in 0..seeds {
        let inst = random_3xor(n, &int(2), seed)?;
        let opt = exact_csp_opt(&inst)?.value;
        let game = clause_variable_game(&inst)?;
        let val = exact_game_value(&game)?.value;
        let limit = Rational::from_integer(1.into()) - (Rational::from_integer(1.into()) - &opt) / int(3);
        println!("seed {seed}: optimum {opt}, game value {val}, 1 - eps/3 = {limit}");
    }
    Ok(())
}
