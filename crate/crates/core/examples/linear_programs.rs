//! The exact simplex engine on a small program, with its LP-format export.
//!
//! cargo run --release --example linear_programs

use densecsp::lp::{maximize, maximize_f64, LinearProgram, Relation};
use densecsp::rational::{format_rational, int};

fn main() -> densecsp::Result<()> {
    // max 3x + 2y  s.t.  x + y ≤ 4, x + 3y ≤ 6, x ≤ 3
    let mut lp = LinearProgram::new(2);
    lp.add_row(vec![(0, int(1)), (1, int(1))], Relation::Le, int(4));
    lp.add_row(vec![(0, int(1)), (1, int(3))], Relation::Le, int(6));
    lp.add_row(vec![(0, int(1))], Relation::Le, int(3));
    lp.set_objective(vec![(0, int(3)), (1, int(2))]);
    let exact = maximize(&lp)?;
    let point: Vec<String> = exact.point.iter().map(format_rational).collect();
    let objective = format_rational(&exact.objective);
    println!("exact: {objective} at {point:?} after {} pivots", exact.pivots);
    let float = maximize_f64(&lp)?;
    println!("float: {} at {:?}", float.objective, float.point);
    print!("{}", lp.to_lp_format());
    Ok(())
}
