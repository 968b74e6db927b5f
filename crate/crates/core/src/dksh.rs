//! Densest k-subhypergraph through its reduction to fully-dense Max d-CSP.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::csp::{Assignment, CspInstance};
use crate::error::{Error, Result};
use crate::oracle::{exact_densest_with_cap, DEFAULT_CAP};
use crate::rational::{format_rational, Rational};
use crate::rng::SeededRng;
use crate::rounding::approximate_bounded;
use crate::sa::{SacCache, SolveOptions};

/// `d`-uniform hypergraph on vertices `0..n`; edges are sorted, and kept in
/// lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypergraph {
    pub n: usize,
    pub d: usize,
    pub edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(n: usize, d: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if d < 2 {
            return Err(Error::invalid(format!("uniformity must be at least 2, got {d}")));
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for mut e in edges {
            e.sort_unstable();
            if e.len() != d || e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!("edge {e:?} is not a {d}-set")));
            }
            if e.iter().any(|&v| v >= n) {
                return Err(Error::invalid(format!("edge {e:?} has a vertex out of range")));
            }
            if !seen.insert(e.clone()) {
                return Err(Error::invalid(format!("duplicate edge {e:?}")));
            }
            out.push(e);
        }
        out.sort();
        Ok(Hypergraph { n, d, edges: out })
    }

    /// Number of edges with every vertex in `s` (any order, repeats allowed).
    pub fn edges_inside(&self, s: &[usize]) -> usize {
        let mut member = vec![false; self.n];
        for &v in s {
            member[v] = true;
        }
        self.edges
            .iter()
            .filter(|e| e.iter().all(|&v| member[v]))
            .count()
    }

    pub fn contains_edge(&self, vertices: &[usize]) -> bool {
        let mut e = vertices.to_vec();
        e.sort_unstable();
        self.edges.binary_search(&e).is_ok()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Hypergraph = serde_json::from_str(text)?;
        Hypergraph::new(raw.n, raw.d, raw.edges)
    }
}

pub mod generators {
    use super::*;
    use crate::subset::subsets_of_size;

    /// `m` distinct uniformly random `d`-sets.
    pub fn random_hypergraph(n: usize, d: usize, m: usize, seed: u64) -> Result<Hypergraph> {
        let total = crate::subset::binomial(n, d);
        if (m as u128) > total {
            return Err(Error::invalid(format!("only {total} distinct {d}-sets on {n} vertices")));
        }
        let mut rng = SeededRng::new(seed);
        let mut edges = BTreeSet::new();
        while edges.len() < m {
            let mut e = rng.choose(n, d);
            e.sort_unstable();
            edges.insert(e);
        }
        Hypergraph::new(n, d, edges.into_iter().collect())
    }

    /// Complete `d`-uniform hypergraph on vertices `0..clique`, plus `extra`
    /// random edges among all `n` vertices.
    pub fn planted_clique(n: usize, d: usize, clique: usize, extra: usize, seed: u64) -> Result<Hypergraph> {
        if clique > n {
            return Err(Error::invalid("clique larger than the vertex set"));
        }
        let mut edges: BTreeSet<Vec<usize>> = subsets_of_size(clique, d).into_iter().collect();
        let target = edges.len() + extra;
        if (target as u128) > crate::subset::binomial(n, d) {
            return Err(Error::invalid("too many extra edges"));
        }
        let mut rng = SeededRng::new(seed);
        while edges.len() < target {
            let mut e = rng.choose(n, d);
            e.sort_unstable();
            edges.insert(e);
        }
        Hypergraph::new(n, d, edges.into_iter().collect())
    }
}

/// `d! |E(s)| / |s|^d`, with `s` read as a set.
pub fn hypergraph_density(h: &Hypergraph, s: &[usize]) -> Result<Rational> {
    let set: BTreeSet<usize> = s.iter().copied().collect();
    if set.is_empty() {
        return Err(Error::invalid("density of the empty vertex set"));
    }
    if set.iter().any(|&v| v >= h.n) {
        return Err(Error::invalid("vertex out of range"));
    }
    let verts: Vec<usize> = set.into_iter().collect();
    let fact: u128 = (1..=h.d as u128).product();
    let num = fact * h.edges_inside(&verts) as u128;
    let den = (verts.len() as u128).pow(h.d as u32);
    Ok(Rational::new(num.into(), den.into()))
}

/// Part index of every vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub parts: usize,
    pub part_of: Vec<usize>,
}

impl Partition {
    pub fn random(n: usize, parts: usize, seed: u64) -> Self {
        let mut rng = SeededRng::new(seed);
        Partition {
            parts,
            part_of: (0..n).map(|_| rng.below(parts)).collect(),
        }
    }

    pub fn members(&self, part: usize) -> Vec<usize> {
        (0..self.part_of.len()).filter(|&v| self.part_of[v] == part).collect()
    }
}

/// Fully-dense `d`-CSP on `k` variables with the vertices as alphabet.
/// `P_{(i_1..i_d)}(v_1..v_d) = 1` iff `{v_1..v_d}` is an edge and each
/// `v_j` lies in part `i_j` of a seeded uniform partition.
pub fn reduce_to_csp(h: &Hypergraph, k: usize, seed: u64) -> Result<(CspInstance, Partition)> {
    if k == 0 || k > h.n {
        return Err(Error::invalid(format!("k = {k} must lie in 1..={}", h.n)));
    }
    let partition = Partition::random(h.n, k, seed);
    let inst = reduce_with_partition(h, &partition)?;
    Ok((inst, partition))
}

pub fn reduce_with_partition(h: &Hypergraph, partition: &Partition) -> Result<CspInstance> {
    if partition.part_of.len() != h.n {
        return Err(Error::DimensionMismatch {
            expected: h.n,
            actual: partition.part_of.len(),
        });
    }
    CspInstance::fully_dense(partition.parts, h.n, h.d, |scope, values| {
        let placed = scope
            .iter()
            .zip(values)
            .all(|(&i, &v)| partition.part_of[v] == i);
        if placed && h.contains_edge(values) {
            Rational::one()
        } else {
            Rational::zero()
        }
    })
}

/// Distinct values of `a`, padded with the smallest unused vertices to `k`.
pub fn extract_subhypergraph(h: &Hypergraph, k: usize, a: &Assignment) -> Result<Vec<usize>> {
    if k > h.n {
        return Err(Error::invalid(format!("k = {k} exceeds n = {}", h.n)));
    }
    if a.0.iter().any(|&v| v >= h.n) {
        return Err(Error::invalid("assignment value is not a vertex"));
    }
    let mut set: BTreeSet<usize> = a.0.iter().copied().collect();
    if set.len() > k {
        return Err(Error::invalid("assignment uses more than k vertices"));
    }
    for v in 0..h.n {
        if set.len() == k {
            break;
        }
        set.insert(v);
    }
    Ok(set.into_iter().collect())
}

#[derive(Clone, Debug)]
pub struct DkshOptions {
    /// Sizes `k` below this use exhaustive search; `None` means `8 d²`.
    pub brute_force_below: Option<usize>,
    /// Reductions tried per `τ`; `None` means `min(n, 32)`.
    pub trials: Option<usize>,
    pub solve: SolveOptions,
    pub cap: u128,
}

impl Default for DkshOptions {
    fn default() -> Self {
        DkshOptions {
            brute_force_below: None,
            trials: None,
            solve: SolveOptions::default(),
            cap: DEFAULT_CAP,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    LevelExceeded,
    LambdaBelowTau,
    Extracted,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DkshStep {
    pub tau: String,
    pub trial: usize,
    pub seed: u64,
    pub level_limit: usize,
    pub outcome: Outcome,
    pub level: Option<usize>,
    pub lambda: Option<String>,
    pub value: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    BruteForce,
    TauHalving,
    /// `τ` fell below `1/n^d` without an accepted run; the densest
    /// extraction among rejected runs is returned, or `0..k` if none rounded.
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DkshResult {
    pub vertices: Vec<usize>,
    #[serde(serialize_with = "ser_rational")]
    pub density: Rational,
    pub method: Method,
    pub log: Vec<DkshStep>,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

impl DkshResult {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Exhaustive search for small `k`; otherwise halve `τ` from 1, trying
/// several seeded reductions per `τ` and aborting a run that would solve a
/// level above `d² i / τ + d` or certifies `λ < τ`. The first accepted
/// extraction is returned.
pub fn densest_k_subhypergraph(
    h: &Hypergraph,
    k: usize,
    i: usize,
    seed: u64,
    opts: &DkshOptions,
) -> Result<DkshResult> {
    if i == 0 {
        return Err(Error::invalid("i must be at least 1"));
    }
    if k == 0 || k > h.n {
        return Err(Error::invalid(format!("k = {k} must lie in 1..={}", h.n)));
    }
    let d = h.d;
    if k < opts.brute_force_below.unwrap_or(8 * d * d) {
        let r = exact_densest_with_cap(h, k, opts.cap)?;
        return Ok(DkshResult {
            vertices: r.witness,
            density: r.value,
            method: Method::BruteForce,
            log: Vec::new(),
        });
    }
    let trials = opts.trials.unwrap_or(h.n.min(32)).max(1);
    let floor = Rational::new(1.into(), num_bigint::BigInt::from(h.n).pow(d as u32));
    let mut tau = Rational::one();
    let mut log = Vec::new();
    let mut step = 0u64;
    let mut best: Option<(Vec<usize>, Rational)> = None;
    while tau >= floor {
        let limit_r = Rational::from_integer(((d * d * i) as i64).into()) / &tau
            + Rational::from_integer((d as i64).into());
        let level_limit = limit_r.floor().to_integer().try_into().unwrap_or(usize::MAX);
        for trial in 0..trials {
            let run_seed = SeededRng::substream(seed, step * trials as u64 + trial as u64).next_u64();
            let (inst, _) = reduce_to_csp(h, k, run_seed)?;
            let mut cache = SacCache::new(&inst, opts.solve.clone());
            let trace = approximate_bounded(&mut cache, i, level_limit)?;
            let mut entry = DkshStep {
                tau: format_rational(&tau),
                trial,
                seed: run_seed,
                level_limit,
                outcome: Outcome::LevelExceeded,
                level: None,
                lambda: None,
                value: None,
            };
            let Some(trace) = trace else {
                log.push(entry);
                continue;
            };
            entry.level = Some(trace.level);
            entry.lambda = Some(format_rational(&trace.lambda));
            entry.value = Some(format_rational(&trace.value));
            let vertices = extract_subhypergraph(h, k, &trace.assignment())?;
            let density = hypergraph_density(h, &vertices)?;
            if trace.lambda < tau {
                entry.outcome = Outcome::LambdaBelowTau;
                log.push(entry);
                if best.as_ref().is_none_or(|(_, b)| density > *b) {
                    best = Some((vertices, density));
                }
                continue;
            }
            entry.outcome = Outcome::Extracted;
            log.push(entry);
            return Ok(DkshResult {
                vertices,
                density,
                method: Method::TauHalving,
                log,
            });
        }
        tau /= Rational::from_integer(2.into());
        step += 1;
    }
    let (vertices, density) = match best {
        Some(b) => b,
        None => {
            let vertices: Vec<usize> = (0..k).collect();
            let density = hypergraph_density(h, &vertices)?;
            (vertices, density)
        }
    };
    Ok(DkshResult {
        vertices,
        density,
        method: Method::Exhausted,
        log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::{density, value};
    use crate::oracle::{exact_csp_opt, exact_densest};
    use crate::rational::{int, rat};

    #[test]
    fn density_examples() {
        let h = Hypergraph::new(4, 2, vec![vec![0, 1]]).unwrap();
        assert_eq!(hypergraph_density(&h, &[0, 1]).unwrap(), rat(1, 2));
        assert_eq!(hypergraph_density(&h, &[2, 3]).unwrap(), int(0));
        assert!(hypergraph_density(&h, &[]).is_err());
        let k5 = generators::planted_clique(5, 2, 5, 0, 0).unwrap();
        assert_eq!(hypergraph_density(&k5, &[0, 1, 2, 3, 4]).unwrap(), rat(4, 5));
    }

    #[test]
    fn rejects_bad_hypergraphs() {
        assert!(Hypergraph::new(3, 1, vec![]).is_err());
        assert!(Hypergraph::new(3, 2, vec![vec![0, 0]]).is_err());
        assert!(Hypergraph::new(3, 2, vec![vec![0, 1], vec![1, 0]]).is_err());
        assert!(Hypergraph::new(3, 2, vec![vec![0, 3]]).is_err());
    }

    #[test]
    fn reduction_shape_and_determinism() {
        let h = generators::random_hypergraph(5, 2, 6, 1).unwrap();
        let (a, pa) = reduce_to_csp(&h, 3, 9).unwrap();
        let (b, pb) = reduce_to_csp(&h, 3, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(pa, pb);
        assert_eq!((a.n, a.q, a.k), (3, 5, 2));
        assert!(density(&a).unwrap().is_fully_dense());
        let empty = Hypergraph::new(4, 2, vec![]).unwrap();
        let (z, _) = reduce_to_csp(&empty, 2, 0).unwrap();
        assert_eq!(exact_csp_opt(&z).unwrap().value, int(0));
        assert!(reduce_to_csp(&h, 6, 0).is_err());
    }

    #[test]
    fn single_edge_split_across_parts() {
        let h = Hypergraph::new(3, 2, vec![vec![0, 2]]).unwrap();
        let partition = Partition {
            parts: 2,
            part_of: vec![0, 1, 1],
        };
        let inst = reduce_with_partition(&h, &partition).unwrap();
        // (0, 2) and (2, 0) are satisfiable; one of four ordered scopes each
        let r = exact_csp_opt(&inst).unwrap();
        assert_eq!(r.value, rat(1, 2));
        assert_eq!(r.witness, Assignment(vec![0, 2]));
    }

    #[test]
    fn extraction_examples() {
        let h = generators::random_hypergraph(6, 2, 7, 3).unwrap();
        assert_eq!(extract_subhypergraph(&h, 3, &Assignment(vec![5, 1, 3])).unwrap(), vec![1, 3, 5]);
        assert_eq!(extract_subhypergraph(&h, 3, &Assignment(vec![4, 4, 4])).unwrap(), vec![0, 1, 4]);
        assert!(extract_subhypergraph(&h, 7, &Assignment(vec![0])).is_err());
    }

    #[test]
    fn extraction_dominates_assignment_value() {
        for seed in 0..10 {
            let h = generators::random_hypergraph(5, 2, 5, seed).unwrap();
            let (inst, _) = reduce_to_csp(&h, 3, seed + 100).unwrap();
            for m in 0..125 {
                let a = Assignment(crate::subset::decode(m, 3, 5));
                let s = extract_subhypergraph(&h, 3, &a).unwrap();
                assert!(hypergraph_density(&h, &s).unwrap() >= value(&inst, &a).unwrap());
            }
        }
    }

    #[test]
    fn small_k_uses_brute_force() {
        let h = generators::planted_clique(7, 2, 3, 2, 4).unwrap();
        let r = densest_k_subhypergraph(&h, 3, 1, 0, &DkshOptions::default()).unwrap();
        assert_eq!(r.method, Method::BruteForce);
        let o = exact_densest(&h, 3).unwrap();
        assert_eq!(r.density, o.value);
        assert_eq!(r.vertices, o.witness);
    }

    #[test]
    fn tau_halving_on_planted_clique() {
        let h = generators::planted_clique(4, 2, 3, 0, 0).unwrap();
        let opts = DkshOptions {
            brute_force_below: Some(0),
            trials: Some(4),
            ..DkshOptions::default()
        };
        let r = densest_k_subhypergraph(&h, 3, 1, 5, &opts).unwrap();
        assert_eq!(r.method, Method::TauHalving);
        let last = r.log.last().unwrap();
        assert_eq!(last.outcome, Outcome::Extracted);
        let value = crate::rational::parse_rational(last.value.as_deref().unwrap()).unwrap();
        assert!(r.density >= value);
        assert!(r.density > int(0));
    }

    #[test]
    fn zero_edges_exhaust_tau() {
        let h = Hypergraph::new(3, 2, vec![]).unwrap();
        let opts = DkshOptions {
            brute_force_below: Some(0),
            trials: Some(1),
            ..DkshOptions::default()
        };
        let r = densest_k_subhypergraph(&h, 2, 1, 0, &opts).unwrap();
        assert_eq!(r.method, Method::Exhausted);
        assert_eq!(r.density, int(0));
        // τ = 1, 1/2, 1/4, 1/8 are all at least 1/9
        let taus: BTreeSet<&str> = r.log.iter().map(|s| s.tau.as_str()).collect();
        assert_eq!(taus.len(), 4);
        assert!(taus.contains("1/8"));
    }

    #[test]
    fn json_roundtrip() {
        let h = generators::random_hypergraph(6, 3, 4, 2).unwrap();
        assert_eq!(Hypergraph::from_json(&h.to_json().unwrap()).unwrap(), h);
    }
}
