//! Seeded experiment drivers behind `densecsp experiment`. Each returns one
//! row per parameter point; rows serialize straight to CSV.

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::csp::{density, CspInstance};
use crate::dksh::{densest_k_subhypergraph, generators as hyper, DkshOptions, Method};
use crate::error::{Error, Result};
use crate::games::{birthday_repetition, edge_tail_estimate, BipartiteGraph, TwoProverGame};
use crate::oracle::{exact_densest_with_cap, exact_game_value_with_cap};
use crate::rational::{format_rational, to_f64};
use crate::rng::SeededRng;
use crate::rounding::funcbound_slack;
use crate::sa::{conditioned_correlation_terms, SaSolution};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayRow {
    pub k: usize,
    pub l: usize,
    pub value: String,
    pub value_f64: f64,
}

/// Exact `val(g^{k×l})` over the full grid `1..=|X|` by `1..=|Y|`.
pub fn birthday_decay(g: &TwoProverGame, game_cap: u128, oracle_cap: u128) -> Result<Vec<DecayRow>> {
    let mut rows = Vec::new();
    for k in 1..=g.x_count {
        for l in 1..=g.y_count {
            let b = birthday_repetition(g, k, l, game_cap)?;
            let v = exact_game_value_with_cap(&b, oracle_cap)?.value;
            rows.push(DecayRow {
                k,
                l,
                value_f64: to_f64(&v),
                value: format_rational(&v),
            });
        }
    }
    Ok(rows)
}

/// Whether the recorded values never increase along either axis.
pub fn decay_is_monotone(rows: &[DecayRow]) -> bool {
    rows.iter().all(|a| {
        rows.iter()
            .filter(|b| (b.k == a.k && b.l == a.l + 1) || (b.l == a.l && b.k == a.k + 1))
            .all(|b| {
                let (va, vb) = (
                    crate::rational::parse_rational(&a.value),
                    crate::rational::parse_rational(&b.value),
                );
                matches!((va, vb), (Ok(x), Ok(y)) if y <= x)
            })
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeTailConfig {
    pub name: String,
    pub graph: BipartiteGraph,
    pub k: usize,
    pub l: usize,
    pub gamma: f64,
}

impl EdgeTailConfig {
    /// `complete:A:B` or `circulant:A:D`, then the sample sizes and `γ`.
    pub fn parse_graph(text: &str) -> Result<BipartiteGraph> {
        let parts: Vec<&str> = text.split(':').collect();
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::invalid(format!("bad number {s:?} in graph {text:?}")))
        };
        match parts.as_slice() {
            ["complete", a, b] => Ok(BipartiteGraph::complete(num(a)?, num(b)?)),
            ["circulant", a, d] => {
                let (a, d) = (num(a)?, num(d)?);
                if d > a {
                    return Err(Error::invalid("circulant degree exceeds size"));
                }
                Ok(BipartiteGraph::circulant(a, d))
            }
            _ => Err(Error::invalid(format!(
                "graph {text:?} is neither complete:A:B nor circulant:A:D"
            ))),
        }
    }

    pub fn new(graph: &str, k: usize, l: usize, gamma: f64) -> Result<Self> {
        Ok(EdgeTailConfig {
            name: graph.to_string(),
            graph: Self::parse_graph(graph)?,
            k,
            l,
            gamma,
        })
    }
}

/// Sparse biregular configurations where the tail bound is below 1, plus
/// two small ones where it is not.
pub fn default_edge_tail_configs() -> Vec<EdgeTailConfig> {
    [
        ("complete:4:4", 2, 3, 0.1),
        ("circulant:6:2", 3, 3, 0.4),
        ("circulant:400:5", 390, 390, 0.49),
        ("circulant:500:4", 480, 480, 0.49),
        ("circulant:600:3", 590, 580, 0.45),
        ("circulant:400:8", 395, 392, 0.49),
        ("circulant:1000:6", 990, 990, 0.45),
    ]
    .into_iter()
    .map(|(g, k, l, gamma)| EdgeTailConfig::new(g, k, l, gamma).expect("valid built-in config"))
    .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeTailRow {
    pub graph: String,
    pub k: usize,
    pub l: usize,
    pub gamma: f64,
    pub trials: usize,
    pub outside: usize,
    pub empirical: f64,
    pub expected_edges: f64,
    pub d_max: usize,
    pub bound: f64,
    /// `empirical ≤ bound` wherever `bound < 1`.
    pub within_bound: bool,
}

pub fn edge_tail(configs: &[EdgeTailConfig], trials: usize, seed: u64) -> Result<Vec<EdgeTailRow>> {
    configs
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let t = edge_tail_estimate(&c.graph, c.k, c.l, c.gamma, trials, seed.wrapping_add(j as u64))?;
            Ok(EdgeTailRow {
                graph: c.name.clone(),
                k: c.k,
                l: c.l,
                gamma: c.gamma,
                trials,
                outside: t.outside,
                empirical: t.empirical,
                expected_edges: t.expected_edges,
                d_max: t.d_max,
                within_bound: t.bound >= 1.0 || t.empirical <= t.bound,
                bound: t.bound,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FuncboundRow {
    pub trial: usize,
    pub support: usize,
    pub kl: f64,
    pub delta: f64,
    pub expectation_y: f64,
    pub slack: f64,
}

/// Random `(X, Y, f)` on supports of size 2 to 6: `X` has some zero
/// entries, `Y` is strictly positive, and `f` is uniform in `[0, 1]` with
/// occasional exact 0 and 1.
pub fn random_funcbound_triple(rng: &mut SeededRng) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let m = 2 + rng.below(5);
    let normalize = |v: Vec<f64>| {
        let s: f64 = v.iter().sum();
        v.into_iter().map(|p| p / s).collect::<Vec<f64>>()
    };
    let mut x: Vec<f64> = (0..m)
        .map(|_| if rng.below(4) == 0 { 0.0 } else { rng.unit_f64() })
        .collect();
    if x.iter().all(|&p| p == 0.0) {
        x[0] = 1.0;
    }
    let y: Vec<f64> = (0..m).map(|_| rng.unit_f64() + 1e-3).collect();
    let f = (0..m)
        .map(|_| match rng.below(6) {
            0 => 0.0,
            1 => 1.0,
            _ => rng.unit_f64(),
        })
        .collect();
    (normalize(x), normalize(y), f)
}

pub fn funcbound_sweep(trials: usize, seed: u64) -> Result<Vec<FuncboundRow>> {
    let mut rng = SeededRng::new(seed);
    (0..trials)
        .map(|trial| {
            let (x, y, f) = random_funcbound_triple(&mut rng);
            let slack = funcbound_slack(&x, &y, &f)?
                .ok_or_else(|| Error::Internal("Y has full support".into()))?;
            let kl: f64 = x
                .iter()
                .zip(&y)
                .filter(|(p, _)| **p > 0.0)
                .map(|(p, q)| p * (p / q).ln())
                .sum();
            Ok(FuncboundRow {
                trial,
                support: x.len(),
                kl,
                delta: 1.0 - x.iter().zip(&f).map(|(p, v)| p * v).sum::<f64>(),
                expectation_y: y.iter().zip(&f).map(|(p, v)| p * v).sum(),
                slack,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrSumRow {
    pub fixture: String,
    pub n: usize,
    pub q: usize,
    pub k: usize,
    pub level: usize,
    pub l: usize,
    pub sum: f64,
    pub bound: f64,
    pub slack: f64,
}

/// `Σ_{t ≤ l} E_{T, φ_T}[C(μ | φ_T)]` against `k² ln q / Δ`.
pub fn corr_sum(fixture: &str, inst: &CspInstance, mu: &SaSolution, l: usize) -> Result<CorrSumRow> {
    let terms = conditioned_correlation_terms(mu, inst, l)?;
    let sum: f64 = terms.iter().sum();
    let delta = density(inst)?.to_f64();
    let bound = (inst.k * inst.k) as f64 * (inst.q as f64).ln() / delta;
    Ok(CorrSumRow {
        fixture: fixture.to_string(),
        n: inst.n,
        q: inst.q,
        k: inst.k,
        level: mu.level(),
        l,
        sum,
        bound,
        slack: bound - sum,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DkshRow {
    pub seed: u64,
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub method: String,
    pub density: String,
    pub density_f64: f64,
    pub optimum: String,
    pub ratio: f64,
}

/// Planted `k`-clique plus `extra` random edges for each seed, solved by
/// [`densest_k_subhypergraph`] and by the exhaustive oracle.
#[allow(clippy::too_many_arguments)]
pub fn dksh_bench(
    n: usize,
    d: usize,
    k: usize,
    extra: usize,
    i: usize,
    seeds: std::ops::Range<u64>,
    opts: &DkshOptions,
) -> Result<Vec<DkshRow>> {
    let seeds: Vec<u64> = seeds.collect();
    seeds
        .par_iter()
        .map(|&seed| {
            let h = hyper::planted_clique(n, d, k, extra, seed)?;
            let r = densest_k_subhypergraph(&h, k, i, seed, opts)?;
            let opt = exact_densest_with_cap(&h, k, opts.cap)?.value;
            let ratio = if opt.is_zero() {
                1.0
            } else {
                (&r.density / &opt).to_f64().unwrap_or(f64::NAN)
            };
            Ok(DkshRow {
                seed,
                n,
                d,
                k,
                method: match r.method {
                    Method::BruteForce => "brute-force",
                    Method::TauHalving => "tau-halving",
                    Method::Exhausted => "exhausted",
                }
                .to_string(),
                density_f64: to_f64(&r.density),
                density: format_rational(&r.density),
                optimum: format_rational(&opt),
                ratio,
            })
        })
        .collect()
}

/// Rows as CSV with a header line.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Internal(format!("csv: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Internal(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(format!("csv: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::odd_cycle_game;

    #[test]
    fn decay_grid_is_monotone() {
        let rows = birthday_decay(&odd_cycle_game(), 1 << 20, 1 << 20).unwrap();
        assert_eq!(rows.len(), 9);
        assert!(decay_is_monotone(&rows));
        assert_eq!(rows[8].value, "0");
    }

    #[test]
    fn complete_graph_has_no_tail() {
        let c = vec![EdgeTailConfig::new("complete:4:4", 2, 3, 0.1).unwrap()];
        let rows = edge_tail(&c, 1000, 3).unwrap();
        assert_eq!(rows[0].outside, 0);
        assert!(to_csv(&rows).unwrap().starts_with("graph,k,l,gamma,trials,outside"));
        assert!(EdgeTailConfig::parse_graph("wheel:3").is_err());
    }

    #[test]
    fn sweep_has_no_negative_slack() {
        let rows = funcbound_sweep(500, 1).unwrap();
        let min = rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
        assert!(min >= -1e-9, "{min}");
    }
}
