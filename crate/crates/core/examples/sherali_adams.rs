//! Level-by-level Sherali-Adams and SAC values against the exact optimum,
//! on a triangle of inequalities and on a random weighted instance.
//!
//! cargo run --release --example sherali_adams -- [seed]

use densecsp::csp::{generators::random_weighted, Constraint, CspInstance};
use densecsp::oracle::exact_csp_opt;
use densecsp::rational::{format_rational, int, rat};
use densecsp::sa::{compact_variable_count, solve_sa, solve_sac, SolveOptions};

fn report(name: &str, inst: &CspInstance) -> densecsp::Result<()> {
    let opts = SolveOptions::default();
    let opt = exact_csp_opt(inst)?;
    println!("{name}: optimum {} at {:?}", format_rational(&opt.value), opt.witness.0);
    for r in inst.k..=inst.n {
        let sa = solve_sa(inst, r, &opts)?;
        let sac = solve_sac(inst, r, &opts)?;
        println!(
            "  level {r}: {:>4} LP variables, SA {}, SAC {}",
            compact_variable_count(inst.n, inst.q, r),
            format_rational(&sa.value),
            format_rational(&sac.lambda)
        );
    }
    Ok(())
}

fn main() -> densecsp::Result<()> {
    let seed = std::env::args().nth(1).map_or(3, |s| s.parse().expect("integer seed"));
    let neq = vec![int(0), int(1), int(1), int(0)];
    let triangle = [[0, 1], [1, 2], [2, 0]]
        .iter()
        .map(|s| Constraint {
            scope: s.to_vec(),
            weight: rat(1, 3),
            table: neq.clone(),
        })
        .collect();
    report("triangle", &CspInstance::new(3, 2, 2, triangle)?)?;
    report("random", &random_weighted(4, 3, 2, 6, seed)?)
}
