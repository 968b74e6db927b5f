//! Parallel and birthday repetition of small games with exact values.
//!
//! cargo run --release --example repetition

use densecsp::experiments::birthday_decay;
use densecsp::games::{chsh, odd_cycle_game, parallel_repetition, DEFAULT_GAME_CAP};
use densecsp::oracle::{exact_game_value, DEFAULT_CAP};

fn main() -> densecsp::Result<()> {
    let g = chsh();
    for r in 1..=2 {
        let gr = parallel_repetition(&g, r, DEFAULT_GAME_CAP)?;
        let v = exact_game_value(&gr)?;
        println!("CHSH^{r}: {} questions, value {} ({} strategies searched)", gr.x_count, v.value, v.search_space);
    }
    let g = odd_cycle_game();
    println!("odd cycle game value {}", exact_game_value(&g)?.value);
    for row in birthday_decay(&g, DEFAULT_GAME_CAP, DEFAULT_CAP)? {
        println!("birthday ({}, {}): {}", row.k, row.l, row.value);
    }
    Ok(())
}
