//! Two-prover games and the game/CSP constructions built on them.
//!
//! An edge table is row-major over answer pairs: entry `a · sigma_y + b`
//! holds the payoff when the provers answer `a` to `x` and `b` to `y`.
//! Repeated questions answer with tuples, stored row-major in the order of
//! the coordinates (or of the sorted subset, for birthday questions).

use std::collections::HashMap;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::csp::{Constraint, CspInstance};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::rng::SeededRng;
use crate::subset::{
    binomial, checked_pow, colex_rank, colex_unrank, decode, pow, subsets_of_size,
    underlying_set,
};

/// Default limit on construction size (questions plus table entries).
pub const DEFAULT_GAME_CAP: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameEdge {
    pub x: usize,
    pub y: usize,
    #[serde(with = "rational::serde_rational")]
    pub weight: Rational,
    #[serde(with = "crate::csp::table_serde")]
    pub table: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoProverGame {
    pub x_count: usize,
    pub y_count: usize,
    pub sigma_x: usize,
    pub sigma_y: usize,
    pub edges: Vec<GameEdge>,
    #[serde(default)]
    pub projection: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameStrategy {
    pub x_answers: Vec<usize>,
    pub y_answers: Vec<usize>,
}

impl TwoProverGame {
    /// Checks shapes: question indices, table sizes, one edge per pair.
    pub fn new(
        x_count: usize,
        y_count: usize,
        sigma_x: usize,
        sigma_y: usize,
        edges: Vec<GameEdge>,
        projection: bool,
    ) -> Result<Self> {
        let g = TwoProverGame {
            x_count,
            y_count,
            sigma_x,
            sigma_y,
            edges,
            projection,
        };
        g.check_shape()?;
        Ok(g)
    }

    fn check_shape(&self) -> Result<()> {
        if self.sigma_x == 0 || self.sigma_y == 0 {
            return Err(Error::invalid("answer alphabets must be nonempty"));
        }
        let len = self.sigma_x * self.sigma_y;
        let mut seen = std::collections::HashSet::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.x >= self.x_count || e.y >= self.y_count {
                return Err(Error::invalid(format!("edge {i} has a question out of range")));
            }
            if e.table.len() != len {
                return Err(Error::DimensionMismatch {
                    expected: len,
                    actual: e.table.len(),
                });
            }
            if !seen.insert((e.x, e.y)) {
                return Err(Error::invalid(format!(
                    "duplicate edge ({}, {})",
                    e.x, e.y
                )));
            }
        }
        Ok(())
    }

    /// Distribution and payoff invariants, plus the projection property when
    /// the flag is set.
    pub fn validate(&self) -> Result<()> {
        self.check_shape()?;
        if self.edges.iter().any(|e| e.weight.is_negative()) {
            return Err(Error::invalid("negative edge weight"));
        }
        let total: Rational = self.edges.iter().map(|e| &e.weight).sum();
        if !total.is_one() {
            return Err(Error::invalid(format!(
                "edge weights sum to {total}, not 1"
            )));
        }
        if self
            .edges
            .iter()
            .any(|e| e.table.iter().any(|p| !rational::in_unit_interval(p)))
        {
            return Err(Error::invalid("payoff out of range [0, 1]"));
        }
        if self.projection && !self.is_projection() {
            return Err(Error::invalid("projection flag set but some table is not a projection"));
        }
        Ok(())
    }

    /// Every table accepts at most one `y`-answer per `x`-answer, with
    /// 0/1 payoffs (the graph of a possibly partial map `Σ_X → Σ_Y`).
    pub fn is_projection(&self) -> bool {
        self.edges.iter().all(|e| {
            e.table.chunks(self.sigma_y).all(|row| {
                row.iter().all(|p| p.is_zero() || p.is_one())
                    && row.iter().filter(|p| p.is_one()).count() <= 1
            })
        })
    }

    pub fn payoff<'e>(&self, edge: &'e GameEdge, a: usize, b: usize) -> &'e Rational {
        &edge.table[a * self.sigma_y + b]
    }

    /// Largest number of positive-weight edges at one question.
    pub fn d_max(&self) -> usize {
        let mut deg_x = vec![0usize; self.x_count];
        let mut deg_y = vec![0usize; self.y_count];
        for e in self.edges.iter().filter(|e| e.weight.is_positive()) {
            deg_x[e.x] += 1;
            deg_y[e.y] += 1;
        }
        deg_x.into_iter().chain(deg_y).max().unwrap_or(0)
    }

    /// Same questions and tables with `Q` conditioned on the listed edges.
    pub fn condition_on(&self, keep: &[usize]) -> Result<TwoProverGame> {
        let mass: Rational = keep.iter().map(|&i| &self.edges[i].weight).sum();
        if !mass.is_positive() {
            return Err(Error::ZeroProbability);
        }
        let edges = keep
            .iter()
            .map(|&i| {
                let e = &self.edges[i];
                GameEdge {
                    weight: &e.weight / &mass,
                    ..e.clone()
                }
            })
            .collect();
        TwoProverGame::new(
            self.x_count,
            self.y_count,
            self.sigma_x,
            self.sigma_y,
            edges,
            self.projection,
        )
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let g: TwoProverGame = serde_json::from_str(text)?;
        g.check_shape()?;
        Ok(g)
    }
}

/// `E_{(x,y) ∼ Q}[P(x, y, φ(x), φ(y))]`.
pub fn game_value(g: &TwoProverGame, s: &GameStrategy) -> Result<Rational> {
    if s.x_answers.len() != g.x_count {
        return Err(Error::DimensionMismatch {
            expected: g.x_count,
            actual: s.x_answers.len(),
        });
    }
    if s.y_answers.len() != g.y_count {
        return Err(Error::DimensionMismatch {
            expected: g.y_count,
            actual: s.y_answers.len(),
        });
    }
    if s.x_answers.iter().any(|&a| a >= g.sigma_x) || s.y_answers.iter().any(|&b| b >= g.sigma_y) {
        return Err(Error::invalid("strategy answer outside alphabet"));
    }
    Ok(g.edges
        .iter()
        .map(|e| &e.weight * g.payoff(e, s.x_answers[e.x], s.y_answers[e.y]))
        .sum())
}

fn guard(what: &str, size: Option<u128>, cap: u128) -> Result<u128> {
    let size = size.unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::cap(what, size, cap));
    }
    Ok(size)
}

fn add(a: Option<u128>, b: Option<u128>) -> Option<u128> {
    a?.checked_add(b?)
}

fn mul(a: Option<u128>, b: Option<u128>) -> Option<u128> {
    a?.checked_mul(b?)
}

/// `g^{⊗r}`: questions `X^r`, `Y^r`, product distribution, product payoff.
pub fn parallel_repetition(g: &TwoProverGame, r: usize, cap: u128) -> Result<TwoProverGame> {
    if r == 0 {
        return Err(Error::invalid("repetition count must be at least 1"));
    }
    let xs = checked_pow(g.x_count, r);
    let ys = checked_pow(g.y_count, r);
    let edges = checked_pow(g.edges.len(), r);
    let table = checked_pow(g.sigma_x * g.sigma_y, r);
    guard(
        "parallel repetition",
        add(add(xs, ys), mul(edges, table)),
        cap,
    )?;
    let (sx, sy) = (pow(g.sigma_x, r), pow(g.sigma_y, r));
    let m = g.edges.len();
    let out: Vec<GameEdge> = (0..pow(m, r))
        .map(|idx| {
            let coords: Vec<&GameEdge> = decode(idx, r, m).into_iter().map(|i| &g.edges[i]).collect();
            let x = coords.iter().fold(0, |acc, e| acc * g.x_count + e.x);
            let y = coords.iter().fold(0, |acc, e| acc * g.y_count + e.y);
            let weight = coords.iter().map(|e| e.weight.clone()).product();
            let table = (0..sx * sy)
                .map(|t| {
                    let a = decode(t / sy, r, g.sigma_x);
                    let b = decode(t % sy, r, g.sigma_y);
                    coords
                        .iter()
                        .enumerate()
                        .map(|(j, e)| g.payoff(e, a[j], b[j]).clone())
                        .product()
                })
                .collect();
            GameEdge {
                x,
                y,
                weight,
                table,
            }
        })
        .collect();
    TwoProverGame::new(pow(g.x_count, r), pow(g.y_count, r), sx, sy, out, g.projection)
}

/// `g^{k×l}`: questions are a uniform `k`-subset of `X` and an independent
/// uniform `l`-subset of `Y` (colex ranks); answers assign the sorted
/// members. The payoff multiplies the payoffs of every support edge inside
/// `S × T`, and is 1 when there is none.
pub fn birthday_repetition(g: &TwoProverGame, k: usize, l: usize, cap: u128) -> Result<TwoProverGame> {
    if k == 0 || l == 0 || k > g.x_count || l > g.y_count {
        return Err(Error::invalid(format!(
            "birthday sizes ({k}, {l}) must lie in 1..={} and 1..={}",
            g.x_count, g.y_count
        )));
    }
    let nx = binomial(g.x_count, k);
    let ny = binomial(g.y_count, l);
    let table = mul(checked_pow(g.sigma_x, k), checked_pow(g.sigma_y, l));
    guard(
        "birthday repetition",
        add(Some(nx.saturating_add(ny)), mul(Some(nx.saturating_mul(ny)), table)),
        cap,
    )?;
    let (sx, sy) = (pow(g.sigma_x, k), pow(g.sigma_y, l));
    let support: Vec<&GameEdge> = g.edges.iter().filter(|e| e.weight.is_positive()).collect();
    let weight = Rational::new(1.into(), (nx * ny).into());
    let xsets = subsets_of_size(g.x_count, k);
    let ysets = subsets_of_size(g.y_count, l);
    let mut edges = Vec::with_capacity((nx * ny) as usize);
    for (i, s) in xsets.iter().enumerate() {
        for (j, t) in ysets.iter().enumerate() {
            let inside: Vec<(usize, usize, &GameEdge)> = support
                .iter()
                .filter_map(|e| {
                    let a = s.binary_search(&e.x).ok()?;
                    let b = t.binary_search(&e.y).ok()?;
                    Some((a, b, *e))
                })
                .collect();
            let table = (0..sx * sy)
                .map(|idx| {
                    let a = decode(idx / sy, k, g.sigma_x);
                    let b = decode(idx % sy, l, g.sigma_y);
                    inside
                        .iter()
                        .map(|&(pa, pb, e)| g.payoff(e, a[pa], b[pb]).clone())
                        .product()
                })
                .collect();
            edges.push(GameEdge {
                x: i,
                y: j,
                weight: weight.clone(),
                table,
            });
        }
    }
    TwoProverGame::new(nx as usize, ny as usize, sx, sy, edges, g.projection)
}

/// Clause/variable game of an instance with uniform weight over its
/// support. `X'` lists the positive-weight constraints, `Y'` the variables,
/// and each constraint is joined to every distinct variable of its scope.
/// A constraint answer is a full scope assignment; the edge to `x` accepts
/// when `P_S(φ_S) = 1` and `φ_S` gives `x` the variable prover's answer.
pub fn clause_variable_game(inst: &CspInstance) -> Result<TwoProverGame> {
    if !inst.is_uniform_over_support() {
        return Err(Error::invalid(
            "clause/variable game needs uniform weight over the constraint support",
        ));
    }
    let q = inst.q;
    let k = inst.k;
    let sx = pow(q, k);
    let clauses: Vec<&Constraint> = inst.constraints.iter().filter(|c| c.weight.is_positive()).collect();
    let share = Rational::new(1.into(), clauses.len().into());
    let mut edges = Vec::new();
    for (ci, c) in clauses.iter().enumerate() {
        let vars = underlying_set(&c.scope);
        let w = &share / Rational::from_integer(vars.len().into());
        for &x in &vars {
            let pos = c.scope.iter().position(|&v| v == x).expect("variable in scope");
            let table = (0..sx * q)
                .map(|idx| {
                    let phi = decode(idx / q, k, q);
                    if phi[pos] == idx % q && c.table[idx / q].is_one() {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            edges.push(GameEdge {
                x: ci,
                y: x,
                weight: w.clone(),
                table,
            });
        }
    }
    TwoProverGame::new(clauses.len(), inst.n, sx, q, edges, true)
}

/// Indexing of the `(S, T)` variables and their answers in [`birthday_kcsp`].
#[derive(Clone, Debug)]
pub struct BirthdayLayout {
    pub l: usize,
    pub x_sets: usize,
    pub y_sets: usize,
    pub sigma_x: usize,
    pub sigma_y: usize,
}

impl BirthdayLayout {
    pub fn variable(&self, s: &[usize], t: &[usize]) -> usize {
        colex_rank(s) as usize * self.y_sets + colex_rank(t) as usize
    }

    pub fn sets(&self, v: usize) -> (Vec<usize>, Vec<usize>) {
        (
            colex_unrank((v / self.y_sets) as u128, self.l),
            colex_unrank((v % self.y_sets) as u128, self.l),
        )
    }

    pub fn answer_count(&self) -> usize {
        pow(self.sigma_x, self.l) * pow(self.sigma_y, self.l)
    }

    pub fn split_answer(&self, a: usize) -> (Vec<usize>, Vec<usize>) {
        let sy = pow(self.sigma_y, self.l);
        (
            decode(a / sy, self.l, self.sigma_x),
            decode(a % sy, self.l, self.sigma_y),
        )
    }
}

/// Fully-dense `k`-CSP `G^l_k`: variables are pairs `(S, T)` of `l`-subsets
/// (index `rank(S) · C(|Y|, l) + rank(T)`), values are answer pairs
/// (`α · σ_Y^l + β`), and a tuple pays 1 when its local answers agree on
/// every shared question and every support edge between the unions is
/// satisfied (payoffs multiply).
pub fn birthday_kcsp(g: &TwoProverGame, l: usize, k: usize, cap: u128) -> Result<(CspInstance, BirthdayLayout)> {
    if l == 0 || k == 0 || l > g.x_count || l > g.y_count {
        return Err(Error::invalid(format!(
            "birthday CSP needs 1 ≤ l ≤ min(|X|, |Y|) and k ≥ 1, got l = {l}, k = {k}"
        )));
    }
    let layout = BirthdayLayout {
        l,
        x_sets: binomial(g.x_count, l) as usize,
        y_sets: binomial(g.y_count, l) as usize,
        sigma_x: g.sigma_x,
        sigma_y: g.sigma_y,
    };
    let nv = (layout.x_sets as u128).checked_mul(layout.y_sets as u128);
    let q = checked_pow(g.sigma_x, l).and_then(|a| Some(a * checked_pow(g.sigma_y, l)?));
    let tuples = nv.and_then(|v| v.checked_pow(k as u32));
    let table = q.and_then(|v| v.checked_pow(k as u32));
    guard("birthday CSP", add(nv, mul(tuples, table)), cap)?;
    let n = nv.unwrap() as usize;
    let qa = layout.answer_count();

    let sets: Vec<(Vec<usize>, Vec<usize>)> = (0..n).map(|v| layout.sets(v)).collect();
    let answers: Vec<(Vec<usize>, Vec<usize>)> = (0..qa).map(|a| layout.split_answer(a)).collect();
    let mut adjacency: HashMap<(usize, usize), &GameEdge> = HashMap::new();
    for e in g.edges.iter().filter(|e| e.weight.is_positive()) {
        adjacency.insert((e.x, e.y), e);
    }

    let payoff = |scope: &[usize], values: &[usize]| -> Rational {
        let mut xa: HashMap<usize, usize> = HashMap::new();
        let mut ya: HashMap<usize, usize> = HashMap::new();
        for (&v, &a) in scope.iter().zip(values) {
            let (s, t) = &sets[v];
            let (alpha, beta) = &answers[a];
            for (&x, &ans) in s.iter().zip(alpha) {
                if *xa.entry(x).or_insert(ans) != ans {
                    return Rational::zero();
                }
            }
            for (&y, &ans) in t.iter().zip(beta) {
                if *ya.entry(y).or_insert(ans) != ans {
                    return Rational::zero();
                }
            }
        }
        let mut acc = Rational::one();
        for (&x, &a) in &xa {
            for (&y, &b) in &ya {
                if let Some(e) = adjacency.get(&(x, y)) {
                    acc *= g.payoff(e, a, b);
                    if acc.is_zero() {
                        return acc;
                    }
                }
            }
        }
        acc
    };
    let inst = CspInstance::fully_dense(n, qa, k, payoff)?;
    Ok((inst, layout))
}

/// Bipartite graph given by its edge list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteGraph {
    pub x_count: usize,
    pub y_count: usize,
    pub edges: Vec<(usize, usize)>,
}

impl BipartiteGraph {
    pub fn complete(a: usize, b: usize) -> Self {
        BipartiteGraph {
            x_count: a,
            y_count: b,
            edges: (0..a).flat_map(|x| (0..b).map(move |y| (x, y))).collect(),
        }
    }

    /// `x_i ~ y_{(i + j) mod a}` for `j < degree`: `degree`-biregular.
    pub fn circulant(a: usize, degree: usize) -> Self {
        BipartiteGraph {
            x_count: a,
            y_count: a,
            edges: (0..a)
                .flat_map(|x| (0..degree).map(move |j| (x, (x + j) % a)))
                .collect(),
        }
    }

    pub fn d_max(&self) -> usize {
        let mut dx = vec![0usize; self.x_count];
        let mut dy = vec![0usize; self.y_count];
        for &(x, y) in &self.edges {
            dx[x] += 1;
            dy[y] += 1;
        }
        dx.into_iter().chain(dy).max().unwrap_or(0)
    }

    pub fn of_game(g: &TwoProverGame) -> Self {
        BipartiteGraph {
            x_count: g.x_count,
            y_count: g.y_count,
            edges: g
                .edges
                .iter()
                .filter(|e| e.weight.is_positive())
                .map(|e| (e.x, e.y))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeTail {
    pub trials: usize,
    pub outside: usize,
    pub empirical: f64,
    pub expected_edges: f64,
    pub d_max: usize,
    pub bound: f64,
}

/// Number of independent random streams `edge_tail_estimate` splits its
/// trials over; fixed so results do not depend on the thread count.
pub const EDGE_TAIL_STREAMS: usize = 64;

/// Fraction of uniform `(S, T)`, `|S| = k`, `|T| = l`, whose edge count
/// leaves `[(1-γ)s, (1+γ)s]` for `s = kl|E| / (|X||Y|)`, together with
/// `4 exp(-γ² s / (54 d_max))`. Trial `j` belongs to stream
/// `j mod EDGE_TAIL_STREAMS`, each stream seeded by `SeededRng::substream`.
pub fn edge_tail_estimate(
    graph: &BipartiteGraph,
    k: usize,
    l: usize,
    gamma: f64,
    trials: usize,
    seed: u64,
) -> Result<EdgeTail> {
    if !(0.0..0.5).contains(&gamma) {
        return Err(Error::invalid(format!("gamma must lie in [0, 1/2), got {gamma}")));
    }
    if k > graph.x_count || l > graph.y_count {
        return Err(Error::invalid("sample sizes exceed the vertex sets"));
    }
    if graph
        .edges
        .iter()
        .any(|&(x, y)| x >= graph.x_count || y >= graph.y_count)
    {
        return Err(Error::invalid("edge endpoint out of range"));
    }
    let s = (k * l * graph.edges.len()) as f64 / (graph.x_count * graph.y_count) as f64;
    let d_max = graph.d_max();
    let bound = if d_max == 0 {
        4.0
    } else {
        4.0 * (-gamma * gamma * s / (54.0 * d_max as f64)).exp()
    };
    let (lo, hi) = ((1.0 - gamma) * s, (1.0 + gamma) * s);
    let mut adj = vec![Vec::new(); graph.x_count];
    for &(x, y) in &graph.edges {
        adj[x].push(y);
    }
    let outside: usize = (0..EDGE_TAIL_STREAMS)
        .into_par_iter()
        .map(|stream| {
            let count = trials / EDGE_TAIL_STREAMS + usize::from(stream < trials % EDGE_TAIL_STREAMS);
            let mut rng = SeededRng::substream(seed, stream as u64);
            let mut in_t = vec![false; graph.y_count];
            let mut out = 0usize;
            for _ in 0..count {
                let s_set = rng.choose(graph.x_count, k);
                let t_set = rng.choose(graph.y_count, l);
                for &y in &t_set {
                    in_t[y] = true;
                }
                let edges: usize = s_set
                    .iter()
                    .map(|&x| adj[x].iter().filter(|&&y| in_t[y]).count())
                    .sum();
                for &y in &t_set {
                    in_t[y] = false;
                }
                let e = edges as f64;
                if e < lo || e > hi {
                    out += 1;
                }
            }
            out
        })
        .sum();
    Ok(EdgeTail {
        trials,
        outside,
        empirical: if trials == 0 { 0.0 } else { outside as f64 / trials as f64 },
        expected_edges: s,
        d_max,
        bound,
    })
}

/// Exact tail probability of [`edge_tail_estimate`] by enumerating every
/// `(S, T)`; for small graphs.
pub fn edge_tail_exact(graph: &BipartiteGraph, k: usize, l: usize, gamma: f64, cap: u128) -> Result<Rational> {
    let total = binomial(graph.x_count, k).saturating_mul(binomial(graph.y_count, l));
    guard("edge tail enumeration", Some(total), cap)?;
    let s = Rational::new(
        ((k * l * graph.edges.len()) as i64).into(),
        ((graph.x_count * graph.y_count) as i64).into(),
    );
    let g = Rational::from_float(gamma).ok_or_else(|| Error::invalid("gamma must be finite"))?;
    let lo = (Rational::one() - &g) * &s;
    let hi = (Rational::one() + &g) * &s;
    let mut outside = 0u128;
    for sx in subsets_of_size(graph.x_count, k) {
        for ty in subsets_of_size(graph.y_count, l) {
            let e = graph
                .edges
                .iter()
                .filter(|(x, y)| sx.binary_search(x).is_ok() && ty.binary_search(y).is_ok())
                .count();
            let e = Rational::from_integer((e as i64).into());
            if e < lo || e > hi {
                outside += 1;
            }
        }
    }
    Ok(Rational::new(
        (outside.to_i128().unwrap_or(i128::MAX)).into(),
        (total as i128).into(),
    ))
}

/// The CHSH XOR game: bits in, bits out, accept iff `a ⊕ b = x ∧ y`.
pub fn chsh() -> TwoProverGame {
    let quarter = Rational::new(1.into(), 4.into());
    let edges = (0..4)
        .map(|i| {
            let (x, y) = (i / 2, i % 2);
            let table = (0..4)
                .map(|t| {
                    let (a, b) = (t / 2, t % 2);
                    if (a ^ b) == (x & y) {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            GameEdge {
                x,
                y,
                weight: quarter.clone(),
                table,
            }
        })
        .collect();
    TwoProverGame::new(2, 2, 2, 2, edges, false).expect("well-formed")
}

/// Game on `X = Y = {0, 1, 2}` with bit answers over the 6-cycle
/// `x_i ~ y_i, x_i ~ y_{i+1}`: every edge demands equal answers except
/// `(x_2, y_0)`, which demands different ones. No strategy wins all six.
pub fn odd_cycle_game() -> TwoProverGame {
    let sixth = Rational::new(1.into(), 6.into());
    let eq = vec![Rational::one(), Rational::zero(), Rational::zero(), Rational::one()];
    let neq = vec![Rational::zero(), Rational::one(), Rational::one(), Rational::zero()];
    let edges = (0..3)
        .flat_map(|i| [(i, i), (i, (i + 1) % 3)])
        .map(|(x, y)| GameEdge {
            x,
            y,
            weight: sixth.clone(),
            table: if (x, y) == (2, 0) { neq.clone() } else { eq.clone() },
        })
        .collect();
    TwoProverGame::new(3, 3, 2, 2, edges, true).expect("well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::{generators, random_3xor};
    use crate::oracle::{exact_csp_opt, exact_game_value};
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn equality_2x2() -> TwoProverGame {
        let eq = vec![int(1), int(0), int(0), int(1)];
        let edges = (0..4)
            .map(|i| GameEdge {
                x: i / 2,
                y: i % 2,
                weight: rat(1, 4),
                table: eq.clone(),
            })
            .collect();
        TwoProverGame::new(2, 2, 2, 2, edges, true).unwrap()
    }

    #[test]
    fn game_value_examples() {
        let g = equality_2x2();
        g.validate().unwrap();
        let s = GameStrategy {
            x_answers: vec![1, 1],
            y_answers: vec![1, 1],
        };
        assert_eq!(game_value(&g, &s).unwrap(), int(1));
        let mut zero = g.clone();
        for e in &mut zero.edges {
            e.table = vec![int(0); 4];
        }
        assert_eq!(game_value(&zero, &s).unwrap(), int(0));
        assert!(game_value(&g, &GameStrategy { x_answers: vec![0], y_answers: vec![0, 0] }).is_err());
        // all 16 strategies; constant answers win everything
        let best = (0..16)
            .map(|m| {
                let s = GameStrategy {
                    x_answers: vec![m & 1, (m >> 1) & 1],
                    y_answers: vec![(m >> 2) & 1, (m >> 3) & 1],
                };
                game_value(&g, &s).unwrap()
            })
            .max()
            .unwrap();
        assert_eq!(best, int(1));
    }

    #[test]
    fn chsh_values() {
        let g = chsh();
        assert_eq!(exact_game_value(&g).unwrap().value, rat(3, 4));
        let g1 = parallel_repetition(&g, 1, DEFAULT_GAME_CAP).unwrap();
        assert_eq!(g1, g);
        let g2 = parallel_repetition(&g, 2, DEFAULT_GAME_CAP).unwrap();
        g2.validate().unwrap();
        assert_eq!(exact_game_value(&g2).unwrap().value, rat(5, 8));
        assert!(parallel_repetition(&g, 6, DEFAULT_GAME_CAP).unwrap_err().is_guard());
    }

    #[test]
    fn satisfiable_games_stay_satisfiable() {
        let g = equality_2x2();
        let g3 = parallel_repetition(&g, 3, DEFAULT_GAME_CAP).unwrap();
        let s = GameStrategy {
            x_answers: vec![0; g3.x_count],
            y_answers: vec![0; g3.y_count],
        };
        assert_eq!(game_value(&g3, &s).unwrap(), int(1));
        let b = birthday_repetition(&g, 2, 2, DEFAULT_GAME_CAP).unwrap();
        assert_eq!(exact_game_value(&b).unwrap().value, int(1));
    }

    #[test]
    fn full_birthday_is_satisfiability_indicator() {
        let g = odd_cycle_game();
        g.validate().unwrap();
        let full = birthday_repetition(&g, 3, 3, DEFAULT_GAME_CAP).unwrap();
        assert_eq!(full.x_count, 1);
        assert_eq!(exact_game_value(&full).unwrap().value, int(0));
        assert_eq!(exact_game_value(&g).unwrap().value, rat(5, 6));
    }

    #[test]
    fn birthday_grid_of_odd_cycle() {
        let g = odd_cycle_game();
        let expected = [
            [rat(8, 9), rat(7, 9), rat(2, 3)],
            [rat(7, 9), rat(5, 9), rat(1, 3)],
            [rat(2, 3), rat(1, 3), int(0)],
        ];
        for k in 1..=3 {
            for l in 1..=3 {
                let b = birthday_repetition(&g, k, l, DEFAULT_GAME_CAP).unwrap();
                assert_eq!(exact_game_value(&b).unwrap().value, expected[k - 1][l - 1], "({k}, {l})");
            }
        }
    }

    #[test]
    fn birthday_one_one_counts_non_edges_as_wins() {
        // 9 question pairs, 6 of them edges: the best strategy loses one edge
        let g = odd_cycle_game();
        let b = birthday_repetition(&g, 1, 1, DEFAULT_GAME_CAP).unwrap();
        assert_eq!(exact_game_value(&b).unwrap().value, rat(8, 9));
    }

    #[test]
    fn clause_variable_game_shape() {
        let inst = CspInstance::new(
            2,
            2,
            2,
            vec![Constraint {
                scope: vec![0, 1],
                weight: int(1),
                table: vec![int(1), int(0), int(0), int(1)],
            }],
        )
        .unwrap();
        let g = clause_variable_game(&inst).unwrap();
        assert_eq!((g.x_count, g.y_count), (1, 2));
        assert!(g.projection && g.is_projection());
        g.validate().unwrap();
        assert_eq!(exact_game_value(&g).unwrap().value, int(1));
        let weighted = generators::random_weighted(3, 2, 2, 3, 1).unwrap();
        if !weighted.is_uniform_over_support() {
            assert!(clause_variable_game(&weighted).is_err());
        }
    }

    #[test]
    fn clause_variable_soundness_on_3xor() {
        for seed in 0..6 {
            let inst = random_3xor(5, &int(1), seed).unwrap();
            if !inst.is_uniform_over_support() {
                continue;
            }
            let opt = exact_csp_opt(&inst).unwrap().value;
            let g = clause_variable_game(&inst).unwrap();
            let val = exact_game_value(&g).unwrap().value;
            let eps = Rational::one() - &opt;
            assert!(val <= Rational::one() - eps / int(3));
        }
    }

    #[test]
    fn birthday_kcsp_of_tiny_game() {
        let g = odd_cycle_game();
        let (inst, layout) = birthday_kcsp(&g, 1, 2, DEFAULT_GAME_CAP).unwrap();
        assert_eq!(inst.n, 9);
        assert_eq!(inst.q, 4);
        assert_eq!(layout.variable(&[2], &[1]), 7);
        assert_eq!(exact_csp_opt(&inst).unwrap().value, rat(65, 81));
        let eq = equality_2x2();
        let (sat, _) = birthday_kcsp(&eq, 1, 2, DEFAULT_GAME_CAP).unwrap();
        assert_eq!(exact_csp_opt(&sat).unwrap().value, int(1));
        // k = 1: a single (S, T) checks only its own edges
        let (one, _) = birthday_kcsp(&g, 1, 1, DEFAULT_GAME_CAP).unwrap();
        assert_eq!(exact_csp_opt(&one).unwrap().value, int(1));
    }

    #[test]
    fn edge_tail_on_complete_graph_is_zero() {
        let g = BipartiteGraph::complete(4, 4);
        let t = edge_tail_estimate(&g, 2, 3, 0.1, 2000, 5).unwrap();
        assert_eq!(t.outside, 0);
        assert_eq!(t.expected_edges, 6.0);
        assert!(edge_tail_estimate(&g, 2, 2, 0.5, 10, 1).is_err());
    }

    #[test]
    fn edge_tail_is_reproducible() {
        let g = BipartiteGraph::circulant(6, 2);
        let a = edge_tail_estimate(&g, 3, 3, 0.4, 5000, 11).unwrap();
        let b = edge_tail_estimate(&g, 3, 3, 0.4, 5000, 11).unwrap();
        assert_eq!(a, b);
        let exact = rational::to_f64(&edge_tail_exact(&g, 3, 3, 0.4, 1 << 20).unwrap());
        let sigma = (exact * (1.0 - exact) / 5000.0).sqrt();
        assert!((a.empirical - exact).abs() <= 4.0 * sigma + 1e-12);
    }

    #[test]
    fn edge_tail_regression() {
        let g = BipartiteGraph::circulant(6, 2);
        let t = edge_tail_estimate(&g, 3, 3, 0.4, 100_000, 7).unwrap();
        // exact tail is 24/400
        assert_eq!(t.outside, 6048);
        assert_eq!(t.empirical, 0.06048);
    }

    #[test]
    fn json_roundtrip() {
        let g = odd_cycle_game();
        let back = TwoProverGame::from_json(&g.to_json().unwrap()).unwrap();
        assert_eq!(back, g);
    }

    fn tiny_game() -> impl Strategy<Value = TwoProverGame> {
        (1usize..=3, 1usize..=3, 1usize..=2, 1usize..=2).prop_flat_map(|(nx, ny, sx, sy)| {
            let pairs = nx * ny;
            (
                proptest::collection::vec(proptest::bool::weighted(0.7), pairs),
                proptest::collection::vec(0u8..3, pairs * sx * sy),
            )
                .prop_map(move |(present, payoffs)| {
                    let mut chosen: Vec<usize> = (0..pairs).filter(|&i| present[i]).collect();
                    if chosen.is_empty() {
                        chosen.push(0);
                    }
                    let w = rat(1, chosen.len() as i64);
                    let edges = chosen
                        .iter()
                        .map(|&i| GameEdge {
                            x: i / ny,
                            y: i % ny,
                            weight: w.clone(),
                            table: (0..sx * sy)
                                .map(|t| rat(payoffs[i * sx * sy + t] as i64, 2))
                                .collect(),
                        })
                        .collect();
                    TwoProverGame::new(nx, ny, sx, sy, edges, false).unwrap()
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn repetition_value_is_at_least_power(g in tiny_game()) {
            let v = exact_game_value(&g).unwrap().value;
            let g2 = parallel_repetition(&g, 2, DEFAULT_GAME_CAP).unwrap();
            if let Ok(v2) = exact_game_value(&g2) {
                prop_assert!(v2.value >= &v * &v);
            }
        }

        #[test]
        fn restricting_support_costs_at_most_the_ratio(g in tiny_game(), drop in 0usize..9) {
            let m = g.edges.len();
            prop_assume!(m >= 2);
            let keep: Vec<usize> = (0..m).filter(|&i| i != drop % m).collect();
            let sub = g.condition_on(&keep).unwrap();
            let ratio = rat(m as i64, keep.len() as i64);
            let lhs = exact_game_value(&sub).unwrap().value;
            prop_assert!(lhs <= ratio * exact_game_value(&g).unwrap().value);
        }

        #[test]
        fn conditioning_moves_value_by_mass(g in tiny_game(), mask in 0u32..512) {
            let m = g.edges.len();
            let keep: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
            prop_assume!(!keep.is_empty());
            let p: Rational = Rational::one()
                - keep.iter().map(|&i| &g.edges[i].weight).sum::<Rational>();
            let v = exact_game_value(&g).unwrap().value;
            let vc = exact_game_value(&g.condition_on(&keep).unwrap()).unwrap().value;
            prop_assert!(&v - &p <= vc);
            prop_assert!(vc <= &v + int(2) * &p);
        }
    }
}
