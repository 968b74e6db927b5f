//! Independent rounding and the conditioning-based approximation driver.
//!
//! [`approximate`] solves the SAC relaxation at a level picked from the
//! instance density, conditions the witness on every positive-mass partial
//! assignment `φ_T` with `|T| ≤ r - k`, rounds each conditioned solution
//! and keeps the best assignment.

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::csp::{density, value, Assignment, CspInstance};
use crate::error::{Error, Result};
use crate::rational::{format_rational, to_f64, Rational};
use crate::sa::{SacCache, SaSolution, SolveOptions};
use crate::subset::{decode, encode, positions, pow, subsets_up_to, underlying_set};

/// `(δ^δ e^{-κ})^{1/(1-δ)} (1-δ)`, with `0^0 = 1` and value 0 at `δ = 1`.
pub fn funcbound_lower(kappa: f64, delta: f64) -> Result<f64> {
    if kappa.is_nan() || kappa < 0.0 {
        return Err(Error::invalid(format!("kappa must be ≥ 0, got {kappa}")));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::invalid(format!("delta must lie in [0, 1], got {delta}")));
    }
    if delta == 1.0 || kappa.is_infinite() {
        return Ok(0.0);
    }
    let log_dd = if delta == 0.0 { 0.0 } else { delta * delta.ln() };
    Ok(((log_dd - kappa) / (1.0 - delta)).exp() * (1.0 - delta))
}

/// Guaranteed floor `(1-δ) δ^{δ/(1-δ)} / q^{1/i}` for alphabet size `q`.
pub fn guaranteed_bound(q: usize, i: usize, delta: f64) -> Result<f64> {
    if i == 0 {
        return Err(Error::invalid("i must be at least 1"));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::invalid(format!("delta must lie in [0, 1], got {delta}")));
    }
    if delta == 1.0 {
        return Ok(0.0);
    }
    let core = if delta == 0.0 {
        1.0
    } else {
        (1.0 - delta) * (delta * delta.ln() / (1.0 - delta)).exp()
    };
    Ok(core / (q as f64).powf(1.0 / i as f64))
}

/// `E_Y[f] - funcbound_lower(KL(X‖Y), 1 - E_X[f])` for `f` valued in
/// `[0, 1]`. `None` when the divergence is infinite.
pub fn funcbound_slack(x: &[f64], y: &[f64], f: &[f64]) -> Result<Option<f64>> {
    use crate::info::{kl_divergence, FiniteDistribution};
    if x.len() != y.len() || x.len() != f.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: y.len().max(f.len()),
        });
    }
    let kappa = kl_divergence(
        &FiniteDistribution::new(x.to_vec())?,
        &FiniteDistribution::new(y.to_vec())?,
    )?;
    if kappa.is_infinite() {
        return Ok(None);
    }
    let ex: f64 = x.iter().zip(f).map(|(p, v)| p * v).sum();
    let ey: f64 = y.iter().zip(f).map(|(p, v)| p * v).sum();
    let delta = (1.0 - ex).clamp(0.0, 1.0);
    Ok(Some(ey - funcbound_lower(kappa, delta)?))
}

/// Exact expected value when variable `x` is drawn from `marginals[x]`
/// independently.
pub fn product_expectation(inst: &CspInstance, marginals: &[Vec<Rational>]) -> Result<Rational> {
    check_marginals(inst, marginals)?;
    Ok(inst
        .constraints
        .iter()
        .map(|c| &c.weight * constraint_expectation(inst.q, &c.scope, &c.table, marginals))
        .sum())
}

fn check_marginals(inst: &CspInstance, marginals: &[Vec<Rational>]) -> Result<()> {
    if marginals.len() != inst.n {
        return Err(Error::DimensionMismatch {
            expected: inst.n,
            actual: marginals.len(),
        });
    }
    if marginals.iter().any(|m| m.len() != inst.q) {
        return Err(Error::invalid("marginal length differs from alphabet size"));
    }
    Ok(())
}

fn constraint_expectation(q: usize, scope: &[usize], table: &[Rational], marginals: &[Vec<Rational>]) -> Rational {
    let set = underlying_set(scope);
    let pos = positions(scope, &set);
    let mut acc = Rational::zero();
    'outer: for i in 0..pow(q, set.len()) {
        let vals = decode(i, set.len(), q);
        let mut p = Rational::one();
        for (&x, &v) in set.iter().zip(&vals) {
            let m = &marginals[x][v];
            if m.is_zero() {
                continue 'outer;
            }
            p *= m;
        }
        let on_scope: Vec<usize> = pos.iter().map(|&j| vals[j]).collect();
        acc += p * &table[encode(&on_scope, q)];
    }
    acc
}

/// Greedy conditional expectations: fix variables in ascending order, each
/// to the value in its marginal's support maximising the exact expected
/// value with the remaining variables still drawn from their marginals
/// (ties go to the smaller value). The result is worth at least the product
/// expectation.
pub fn round_marginals(inst: &CspInstance, marginals: &[Vec<Rational>]) -> Result<Assignment> {
    check_marginals(inst, marginals)?;
    let q = inst.q;
    let mut current: Vec<Vec<Rational>> = marginals.to_vec();
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); inst.n];
    for (ci, c) in inst.constraints.iter().enumerate() {
        for x in underlying_set(&c.scope) {
            touching[x].push(ci);
        }
    }
    let mut out = vec![0; inst.n];
    for x in 0..inst.n {
        let mut best: Option<(usize, Rational)> = None;
        let support: Vec<usize> = (0..q).filter(|&a| marginals[x][a].is_positive()).collect();
        for a in support {
            let mut point = vec![Rational::zero(); q];
            point[a] = Rational::one();
            current[x] = point;
            let e: Rational = touching[x]
                .iter()
                .map(|&ci| {
                    let c = &inst.constraints[ci];
                    &c.weight * constraint_expectation(q, &c.scope, &c.table, &current)
                })
                .sum();
            if best.as_ref().is_none_or(|(_, b)| e > *b) {
                best = Some((a, e));
            }
        }
        let (a, _) = best.ok_or_else(|| Error::invalid(format!("marginal of x{x} has empty support")))?;
        let mut point = vec![Rational::zero(); q];
        point[a] = Rational::one();
        current[x] = point;
        out[x] = a;
    }
    Ok(Assignment(out))
}

/// Derandomised independent rounding of `mu`'s singleton marginals.
pub fn independent_rounding(mu: &SaSolution, inst: &CspInstance) -> Result<Assignment> {
    if mu.level() < inst.k {
        return Err(Error::LevelTooLow {
            level: mu.level(),
            required: inst.k,
        });
    }
    if mu.n() != inst.n || mu.q() != inst.q {
        return Err(Error::invalid("solution and instance disagree on n or q"));
    }
    let marginals = singleton_marginals(mu)?;
    round_marginals(inst, &marginals)
}

pub fn singleton_marginals(mu: &SaSolution) -> Result<Vec<Vec<Rational>>> {
    (0..mu.n())
        .map(|x| mu.singleton_marginal(x).map(|m| m.to_vec()))
        .collect()
}

/// Singleton marginals of `μ | φ_T`, read off the `|T| + 1` tables.
pub fn conditioned_marginals(mu: &SaSolution, t: &[usize], phi_t: &[usize]) -> Result<Vec<Vec<Rational>>> {
    let mass = mu.prob(t, phi_t)?;
    if mass.is_zero() {
        return Err(Error::ZeroProbability);
    }
    let q = mu.q();
    (0..mu.n())
        .map(|x| {
            if let Ok(p) = t.binary_search(&x) {
                let mut m = vec![Rational::zero(); q];
                m[phi_t[p]] = Rational::one();
                return Ok(m);
            }
            let mut set = t.to_vec();
            let at = set.binary_search(&x).unwrap_err();
            set.insert(at, x);
            (0..q)
                .map(|a| {
                    let mut vals = phi_t.to_vec();
                    vals.insert(at, a);
                    Ok(mu.prob(&set, &vals)? / &mass)
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelStep {
    pub level: usize,
    #[serde(serialize_with = "ser_rational")]
    pub lambda: Rational,
}

/// Audit record of one [`approximate`] run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundingTrace {
    pub i: usize,
    pub level: usize,
    #[serde(serialize_with = "ser_rational")]
    pub lambda: Rational,
    pub schedule: Vec<LevelStep>,
    pub conditioning_set: Vec<usize>,
    pub conditioning_values: Vec<usize>,
    /// Value given to each variable by the greedy pass, in variable order.
    pub assignment: Vec<usize>,
    #[serde(serialize_with = "ser_rational")]
    pub value: Rational,
    pub value_f64: f64,
    pub candidates: usize,
    /// Guaranteed floor for a known optimum; filled by [`RoundingTrace::with_optimum`].
    pub floor: Option<f64>,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

impl RoundingTrace {
    pub fn lambda_f64(&self) -> f64 {
        to_f64(&self.lambda)
    }

    pub fn assignment(&self) -> Assignment {
        Assignment(self.assignment.clone())
    }

    /// Records the guaranteed floor for optimum value `opt`.
    pub fn with_optimum(mut self, q: usize, opt: &Rational) -> Result<Self> {
        let delta = (1.0 - to_f64(opt)).clamp(0.0, 1.0);
        self.floor = Some(guaranteed_bound(q, self.i, delta)?);
        Ok(self)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// First level solved for parameter `i`: `ceil(k² i / Δ + k) + 1`, capped at
/// `n`.
pub fn starting_level(inst: &CspInstance, i: usize) -> Result<usize> {
    let target = level_target(inst, i)?;
    let start = (target + Rational::from_integer(inst.k.into())).ceil().to_integer();
    let start = start.to_usize().unwrap_or(usize::MAX).saturating_add(1);
    Ok(start.min(inst.n).max(inst.k))
}

/// `k² i / Δ`.
fn level_target(inst: &CspInstance, i: usize) -> Result<Rational> {
    let delta = density(inst)?;
    Ok(Rational::from_integer(((inst.k * inst.k * i) as i64).into()) / delta.value())
}

pub fn approximate(inst: &CspInstance, i: usize, opts: &SolveOptions) -> Result<RoundingTrace> {
    let mut cache = SacCache::new(inst, opts.clone());
    approximate_with(&mut cache, i)
}

/// [`approximate`] reusing SAC solves across calls.
pub fn approximate_with(cache: &mut SacCache<'_>, i: usize) -> Result<RoundingTrace> {
    Ok(approximate_bounded(cache, i, usize::MAX)?.expect("unbounded run"))
}

/// [`approximate_with`] that gives up, returning `None`, instead of solving
/// any level above `max_level`.
pub fn approximate_bounded(cache: &mut SacCache<'_>, i: usize, max_level: usize) -> Result<Option<RoundingTrace>> {
    if i == 0 {
        return Err(Error::invalid("i must be at least 1"));
    }
    let inst = cache.instance();
    crate::csp::validate(inst).into_result()?;
    let target = level_target(inst, i)?;
    let k = inst.k;
    let mut r = starting_level(inst, i)?;
    let mut schedule = Vec::new();
    loop {
        if r > max_level {
            return Ok(None);
        }
        let res = cache.solve(r)?;
        schedule.push(LevelStep {
            level: r,
            lambda: res.lambda.clone(),
        });
        let progress = Rational::from_integer(((r - k) as i64).into()) * &res.lambda;
        if !(progress < target && r < inst.n) {
            break;
        }
        r += 1;
    }
    let res = cache.solve(r)?;
    let mu = &res.solution;

    let mut events: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for t in subsets_up_to(inst.n, r - k) {
        let table = mu.table(&t)?;
        for (j, p) in table.iter().enumerate() {
            if p.is_positive() {
                events.push((t.clone(), decode(j, t.len(), inst.q)));
            }
        }
    }
    let rounded: Vec<Result<(Assignment, Rational)>> = events
        .par_iter()
        .map(|(t, phi)| {
            let marg = conditioned_marginals(mu, t, phi)?;
            let a = round_marginals(inst, &marg)?;
            let v = value(inst, &a)?;
            Ok((a, v))
        })
        .collect();
    let mut best: Option<(usize, Assignment, Rational)> = None;
    for (idx, item) in rounded.into_iter().enumerate() {
        let (a, v) = item?;
        if best.as_ref().is_none_or(|(_, _, b)| v > *b) {
            best = Some((idx, a, v));
        }
    }
    let (idx, a, v) =
        best.ok_or_else(|| Error::Internal("no positive-mass conditioning event".into()))?;
    Ok(Some(RoundingTrace {
        i,
        level: r,
        lambda: res.lambda.clone(),
        schedule,
        conditioning_set: events[idx].0.clone(),
        conditioning_values: events[idx].1.clone(),
        assignment: a.0,
        value_f64: to_f64(&v),
        value: v,
        candidates: events.len(),
        floor: None,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::{generators, Constraint};
    use crate::rational::{int, rat};
    use crate::rng::SeededRng;
    use approx::assert_abs_diff_eq;

    #[test]
    fn funcbound_examples() {
        assert_eq!(funcbound_lower(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(funcbound_lower(3.0, 1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(funcbound_lower(0.0, 0.5).unwrap(), 0.25, epsilon = 1e-12);
        assert!(funcbound_lower(-1.0, 0.5).is_err());
        assert!(funcbound_lower(0.0, 1.5).is_err());
    }

    #[test]
    fn guaranteed_bound_examples() {
        assert_abs_diff_eq!(guaranteed_bound(2, 1, 0.0).unwrap(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(guaranteed_bound(4, 2, 0.0).unwrap(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(guaranteed_bound(2, 10, 0.5).unwrap(), 0.2333, epsilon = 1e-4);
        assert_eq!(guaranteed_bound(3, 2, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn point_mass_rounds_to_itself() {
        let inst = generators::random_weighted(4, 3, 2, 6, 3).unwrap();
        let a = Assignment(vec![2, 1, 0, 2]);
        let mu = SaSolution::point_mass(3, 2, &a).unwrap();
        assert_eq!(independent_rounding(&mu, &inst).unwrap(), a);
    }

    #[test]
    fn greedy_beats_uniform_product_on_equality() {
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
        let half = vec![vec![rat(1, 2), rat(1, 2)]; 2];
        assert_eq!(product_expectation(&inst, &half).unwrap(), rat(1, 2));
        let mu = SaSolution::product(2, 2, &half).unwrap();
        let a = independent_rounding(&mu, &inst).unwrap();
        // x0: both values tie at 1/2, so 0; then x1 = 0 pays 1
        assert_eq!(a, Assignment(vec![0, 0]));
        assert_eq!(value(&inst, &a).unwrap(), int(1));
    }

    #[test]
    fn rounding_dominates_product_expectation() {
        let mut rng = SeededRng::new(17);
        for seed in 0..20 {
            let inst = generators::random_weighted(4, 3, 3, 5, seed).unwrap();
            let marg: Vec<Vec<Rational>> = (0..4)
                .map(|_| {
                    let raw: Vec<i64> = (0..3).map(|_| rng.below(5) as i64 + 1).collect();
                    let t: i64 = raw.iter().sum();
                    raw.iter().map(|&v| rat(v, t)).collect()
                })
                .collect();
            let a = round_marginals(&inst, &marg).unwrap();
            assert!(value(&inst, &a).unwrap() >= product_expectation(&inst, &marg).unwrap());
        }
    }

    #[test]
    fn rounding_beats_sampling_mean() {
        let inst = generators::random_weighted(5, 2, 3, 8, 4).unwrap();
        let marg = vec![vec![rat(2, 5), rat(3, 5)]; 5];
        let a = round_marginals(&inst, &marg).unwrap();
        let mut rng = SeededRng::new(99);
        let trials = 4000;
        let samples: Vec<f64> = (0..trials)
            .map(|_| {
                let b: Vec<usize> = (0..5).map(|_| (rng.unit_f64() < 0.6) as usize).collect();
                to_f64(&value(&inst, &Assignment(b)).unwrap())
            })
            .collect();
        let mean = samples.iter().sum::<f64>() / trials as f64;
        let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / trials as f64;
        let sigma = (var / trials as f64).sqrt();
        assert!(to_f64(&value(&inst, &a).unwrap()) >= mean - 3.0 * sigma);
    }

    #[test]
    fn conditioned_marginals_match_full_conditioning() {
        let mu = crate::sa::random_global_solution(4, 2, 4, 21).unwrap();
        let (t, phi) = (vec![1, 3], vec![1, 0]);
        if mu.prob(&t, &phi).unwrap().is_positive() {
            let direct = singleton_marginals(&crate::sa::condition(&mu, &t, &phi).unwrap()).unwrap();
            assert_eq!(conditioned_marginals(&mu, &t, &phi).unwrap(), direct);
        }
    }

    #[test]
    fn satisfiable_instance_meets_floor() {
        let planted = Assignment(vec![1, 0, 1]);
        let inst = generators::planted_fully_dense(3, 2, 2, &planted, 8).unwrap();
        for i in 1..=3 {
            let trace = approximate(&inst, i, &SolveOptions::default()).unwrap();
            assert_eq!(trace.level, 3);
            assert_eq!(value(&inst, &trace.assignment()).unwrap(), trace.value);
            let floor = guaranteed_bound(2, i, 0.0).unwrap();
            assert!(trace.value_f64 >= floor - 1e-12);
        }
    }

    #[test]
    fn trace_serialises() {
        let inst = generators::random_fully_dense(3, 2, 2, 1, 2, 2).unwrap();
        let trace = approximate(&inst, 1, &SolveOptions::default())
            .unwrap()
            .with_optimum(2, &rat(3, 4))
            .unwrap();
        let text = trace.to_json().unwrap();
        assert!(text.contains("\"lambda\""));
        assert!(text.contains("\"floor\""));
    }
}
