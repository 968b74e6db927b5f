//! Builds the fully dense CSP over subset pairs of a game and solves it.
//!
//! cargo run --release --example birthday_csp

use densecsp::csp::density;
use densecsp::games::{birthday_kcsp, odd_cycle_game, DEFAULT_GAME_CAP};
use densecsp::oracle::exact_csp_opt;

fn main() -> densecsp::Result<()> {
    let g = odd_cycle_game();
    for k in 1..=2 {
        let (inst, layout) = birthday_kcsp(&g, 1, k, DEFAULT_GAME_CAP)?;
        let opt = exact_csp_opt(&inst)?;
        let (s, t) = layout.sets(opt.witness.0[0]);
        println!(
            "k = {k}: {} variables over {} values, density {}, optimum {} (variable 0 is S = {s:?}, T = {t:?})",
            inst.n,
            inst.q,
            density(&inst)?.value(),
            opt.value
        );
    }
    Ok(())
}
