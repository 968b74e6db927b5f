//! Exhaustive solvers used as ground truth.
//!
//! Every search scales the objective to integers when the common
//! denominator fits, enumerates in parallel, and keeps the first maximum in
//! enumeration order, so witnesses do not depend on the thread count.

use std::ops::Add;

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::csp::{Assignment, CspInstance};
use crate::dksh::{hypergraph_density, Hypergraph};
use crate::error::{Error, Result};
use crate::games::{GameStrategy, TwoProverGame};
use crate::rational::{denominator_lcm, Rational};
use crate::subset::{binomial, checked_pow, colex_unrank, decode, encode};

/// Default limit on the number of enumerated candidates.
pub const DEFAULT_CAP: u128 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult<W> {
    #[serde(with = "crate::rational::serde_rational")]
    pub value: Rational,
    pub witness: W,
    pub search_space: u128,
}

fn guard(what: &str, size: Option<u128>, cap: u128) -> Result<u128> {
    let size = size.unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::cap(what, size, cap));
    }
    Ok(size)
}

/// Integer images of `values` over their common denominator, when the sum
/// of `terms` of them cannot overflow.
fn scale(values: &[Rational], terms: usize) -> Option<Vec<i128>> {
    let l = denominator_lcm(values);
    let limit = i128::MAX / (terms as i128 + 1);
    values
        .iter()
        .map(|v| {
            let s = (v.numer() * (&l / v.denom())).to_i128()?;
            (s.abs() <= limit).then_some(s)
        })
        .collect()
}

/// First index in `0..count` maximizing `score`.
fn argmax<T, F>(count: usize, score: F) -> (T, usize)
where
    T: Clone + Ord + Send,
    F: Fn(usize) -> T + Sync,
{
    (0..count)
        .into_par_iter()
        .map(|i| (score(i), i))
        .reduce_with(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
        .expect("nonempty search")
}

pub fn exact_csp_opt(inst: &CspInstance) -> Result<OracleResult<Assignment>> {
    exact_csp_opt_with_cap(inst, DEFAULT_CAP)
}

/// `max_a val(a)` over all `q^n` assignments, indexed row-major with
/// variable 0 most significant.
pub fn exact_csp_opt_with_cap(inst: &CspInstance, cap: u128) -> Result<OracleResult<Assignment>> {
    let space = guard("CSP assignments", checked_pow(inst.q, inst.n), cap)?;
    let cells: Vec<Rational> = inst
        .constraints
        .iter()
        .flat_map(|c| c.table.iter().map(move |p| &c.weight * p))
        .collect();
    let best = match scale(&cells, inst.constraints.len()) {
        Some(ints) => argmax(space as usize, |cand| csp_score(inst, &ints, cand)).1,
        None => argmax(space as usize, |cand| csp_score(inst, &cells, cand)).1,
    };
    let witness = Assignment(decode(best, inst.n, inst.q));
    let value = crate::csp::value(inst, &witness)?;
    Ok(OracleResult {
        value,
        witness,
        search_space: space,
    })
}

fn csp_score<T>(inst: &CspInstance, cells: &[T], candidate: usize) -> T
where
    T: Clone + Zero + Add<Output = T>,
{
    let a = decode(candidate, inst.n, inst.q);
    let stride = crate::subset::pow(inst.q, inst.k);
    let mut vals = vec![0usize; inst.k];
    let mut total = T::zero();
    for (j, c) in inst.constraints.iter().enumerate() {
        for (slot, &v) in vals.iter_mut().zip(&c.scope) {
            *slot = a[v];
        }
        total = total + cells[j * stride + encode(&vals, inst.q)].clone();
    }
    total
}

pub fn exact_game_value(g: &TwoProverGame) -> Result<OracleResult<GameStrategy>> {
    exact_game_value_with_cap(g, DEFAULT_CAP)
}

/// Enumerates every strategy of the side with fewer strategies and answers
/// on the other side by best response, which is exact because payoffs are
/// additive over that side's questions.
pub fn exact_game_value_with_cap(g: &TwoProverGame, cap: u128) -> Result<OracleResult<GameStrategy>> {
    let xs = checked_pow(g.sigma_x, g.x_count);
    let ys = checked_pow(g.sigma_y, g.y_count);
    let enumerate_x = xs.unwrap_or(u128::MAX) <= ys.unwrap_or(u128::MAX);
    let space = guard(
        "game strategies",
        if enumerate_x { xs } else { ys },
        cap,
    )?;
    let cells: Vec<Rational> = g
        .edges
        .iter()
        .flat_map(|e| e.table.iter().map(move |p| &e.weight * p))
        .collect();
    let best = match scale(&cells, g.edges.len()) {
        Some(ints) => game_search(g, &ints, enumerate_x, space as usize),
        None => game_search(g, &cells, enumerate_x, space as usize),
    };
    let value = crate::games::game_value(g, &best)?;
    Ok(OracleResult {
        value,
        witness: best,
        search_space: space,
    })
}

fn game_search<T>(g: &TwoProverGame, cells: &[T], enumerate_x: bool, space: usize) -> GameStrategy
where
    T: Clone + Ord + Send + Sync + Zero + Add<Output = T>,
{
    let (fixed_count, fixed_sigma, free_count, free_sigma) = if enumerate_x {
        (g.x_count, g.sigma_x, g.y_count, g.sigma_y)
    } else {
        (g.y_count, g.sigma_y, g.x_count, g.sigma_x)
    };
    let table_len = g.sigma_x * g.sigma_y;
    // edges grouped by the question on the free side
    let mut by_free: Vec<Vec<(usize, usize)>> = vec![Vec::new(); free_count];
    for (j, e) in g.edges.iter().enumerate() {
        let (fixed_q, free_q) = if enumerate_x { (e.x, e.y) } else { (e.y, e.x) };
        by_free[free_q].push((j, fixed_q));
    }
    let cell = |j: usize, fixed_a: usize, free_a: usize| -> T {
        let (a, b) = if enumerate_x { (fixed_a, free_a) } else { (free_a, fixed_a) };
        cells[j * table_len + a * g.sigma_y + b].clone()
    };
    let respond = |fixed: &[usize]| -> (T, Vec<usize>) {
        let mut total = T::zero();
        let mut answers = Vec::with_capacity(free_count);
        for edges in &by_free {
            let (score, b) = (0..free_sigma)
                .map(|b| {
                    let s = edges
                        .iter()
                        .fold(T::zero(), |acc, &(j, fq)| acc + cell(j, fixed[fq], b));
                    (s, b)
                })
                .reduce(|a, c| if c.0 > a.0 { c } else { a })
                .expect("nonempty alphabet");
            total = total + score;
            answers.push(b);
        }
        (total, answers)
    };
    let (_, idx) = argmax(space, |i| respond(&decode(i, fixed_count, fixed_sigma)).0);
    let fixed = decode(idx, fixed_count, fixed_sigma);
    let (_, free) = respond(&fixed);
    if enumerate_x {
        GameStrategy {
            x_answers: fixed,
            y_answers: free,
        }
    } else {
        GameStrategy {
            x_answers: free,
            y_answers: fixed,
        }
    }
}

pub fn exact_densest(h: &Hypergraph, k: usize) -> Result<OracleResult<Vec<usize>>> {
    exact_densest_with_cap(h, k, DEFAULT_CAP)
}

/// Densest `k`-vertex subhypergraph over all `C(n, k)` sets in colex order.
pub fn exact_densest_with_cap(h: &Hypergraph, k: usize, cap: u128) -> Result<OracleResult<Vec<usize>>> {
    if k == 0 || k > h.n {
        return Err(Error::invalid(format!("k = {k} must lie in 1..={}", h.n)));
    }
    let space = guard("vertex subsets", Some(binomial(h.n, k)), cap)?;
    let (_, rank) = argmax(space as usize, |r| h.edges_inside(&colex_unrank(r as u128, k)));
    let best = colex_unrank(rank as u128, k);
    let value = hypergraph_density(h, &best)?;
    Ok(OracleResult {
        value,
        witness: best,
        search_space: space,
    })
}
