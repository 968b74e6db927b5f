//! Max k-CSP instances: data model, value and density, convex mixing,
//! generators, validation, and the JSON instance format.
//!
//! An instance is a distribution over ordered k-tuples of variables (the
//! constraint weights) together with one payoff table per tuple. Tables are
//! dense, row-major over the scope: entry `Σ_j value_j · q^(k-1-j)` holds the
//! payoff of giving `scope[j]` the value `value_j`.
//!
//! A scope may repeat a variable. Table entries that give such a variable two
//! different values are unreachable from any assignment and must be zero.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, int, rat, to_f64, Rational};
use crate::rng::SeededRng;
use crate::subset::{decode, encode, pow};

/// One weighted constraint of a [`CspInstance`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub scope: Vec<usize>,
    #[serde(with = "rational::serde_rational")]
    pub weight: Rational,
    #[serde(with = "table_serde")]
    pub table: Vec<Rational>,
}

impl Constraint {
    pub fn payoff(&self, values: &[usize], q: usize) -> &Rational {
        &self.table[encode(values, q)]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CspInstance {
    pub n: usize,
    pub q: usize,
    pub k: usize,
    pub constraints: Vec<Constraint>,
}

/// Assignment `φ : V → Σ`, one alphabet index per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Assignment(pub Vec<usize>);

impl Assignment {
    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn restrict(&self, scope: &[usize]) -> Vec<usize> {
        scope.iter().map(|&v| self.0[v]).collect()
    }
}

/// Largest `Δ` with `Δ · W(S) ≤ 1/n^k` for every tuple `S`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Density(pub Rational);

impl Density {
    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.0)
    }

    pub fn is_fully_dense(&self) -> bool {
        self.0.is_one()
    }
}

impl CspInstance {
    /// Builds an instance, checking only shapes (arity, index range, table
    /// size). Use [`validate`] for the distribution and payoff invariants.
    pub fn new(n: usize, q: usize, k: usize, constraints: Vec<Constraint>) -> Result<Self> {
        let inst = CspInstance {
            n,
            q,
            k,
            constraints,
        };
        inst.check_shape()?;
        Ok(inst)
    }

    fn check_shape(&self) -> Result<()> {
        if self.q == 0 {
            return Err(Error::invalid("alphabet size must be positive"));
        }
        if self.k == 0 {
            return Err(Error::invalid("arity must be positive"));
        }
        let entries = self
            .q
            .checked_pow(self.k as u32)
            .ok_or_else(|| Error::invalid("q^k overflows"))?;
        for (c, con) in self.constraints.iter().enumerate() {
            if con.scope.len() != self.k {
                return Err(Error::invalid(format!(
                    "constraint {c}: scope has {} variables, arity is {}",
                    con.scope.len(),
                    self.k
                )));
            }
            if let Some(&v) = con.scope.iter().find(|&&v| v >= self.n) {
                return Err(Error::invalid(format!(
                    "constraint {c}: variable {v} out of range 0..{}",
                    self.n
                )));
            }
            if con.table.len() != entries {
                return Err(Error::invalid(format!(
                    "constraint {c}: table has {} entries, expected {entries}",
                    con.table.len()
                )));
            }
        }
        Ok(())
    }

    /// Instance that is uniform over all `n^k` ordered tuples, with payoff
    /// `predicate(tuple, values)`. Entries inconsistent on a repeated
    /// variable are forced to zero.
    pub fn fully_dense<F>(n: usize, q: usize, k: usize, mut predicate: F) -> Result<Self>
    where
        F: FnMut(&[usize], &[usize]) -> Rational,
    {
        let tuples = pow(n, k);
        let weight = Rational::new(1.into(), tuples.into());
        let entries = pow(q, k);
        let constraints = (0..tuples)
            .map(|t| {
                let scope = decode(t, k, n);
                let table = (0..entries)
                    .map(|e| {
                        let values = decode(e, k, q);
                        if consistent_on_repeats(&scope, &values) {
                            predicate(&scope, &values)
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect();
                Constraint {
                    scope,
                    weight: weight.clone(),
                    table,
                }
            })
            .collect();
        CspInstance::new(n, q, k, constraints)
    }

    pub fn total_weight(&self) -> Rational {
        self.constraints.iter().map(|c| &c.weight).sum()
    }

    /// Weight of each distinct scope tuple, in first-appearance order.
    pub fn tuple_weights(&self) -> Vec<(Vec<usize>, Rational)> {
        let mut order: Vec<Vec<usize>> = Vec::new();
        let mut acc: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
        for c in &self.constraints {
            let entry = acc.entry(c.scope.clone()).or_insert_with(|| {
                order.push(c.scope.clone());
                Rational::zero()
            });
            *entry += &c.weight;
        }
        order
            .into_iter()
            .map(|s| {
                let w = acc[&s].clone();
                (s, w)
            })
            .collect()
    }

    /// True if every positive-weight constraint carries the same weight.
    pub fn is_uniform_over_support(&self) -> bool {
        let mut support = self.constraints.iter().filter(|c| c.weight.is_positive());
        match support.next() {
            None => false,
            Some(first) => support.all(|c| c.weight == first.weight),
        }
    }

    /// Lowest common multiple of weight and payoff denominators.
    pub fn denominator_bound(&self) -> num_bigint::BigInt {
        let w = rational::denominator_lcm(self.constraints.iter().map(|c| &c.weight));
        let p = rational::denominator_lcm(self.constraints.iter().flat_map(|c| c.table.iter()));
        w * p
    }

    pub fn check_assignment(&self, a: &Assignment) -> Result<()> {
        if a.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: a.len(),
            });
        }
        if let Some(&v) = a.0.iter().find(|&&v| v >= self.q) {
            return Err(Error::invalid(format!(
                "assignment value {v} outside alphabet 0..{}",
                self.q
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let inst: CspInstance = serde_json::from_str(text)?;
        inst.check_shape()?;
        Ok(inst)
    }
}

pub(crate) fn consistent_on_repeats(scope: &[usize], values: &[usize]) -> bool {
    for i in 0..scope.len() {
        for j in i + 1..scope.len() {
            if scope[i] == scope[j] && values[i] != values[j] {
                return false;
            }
        }
    }
    true
}

/// `val_G(φ) = Σ_c w_c · P_c(φ|_scope)`.
pub fn value(inst: &CspInstance, a: &Assignment) -> Result<Rational> {
    inst.check_assignment(a)?;
    Ok(inst
        .constraints
        .iter()
        .map(|c| &c.weight * c.payoff(&a.restrict(&c.scope), inst.q))
        .sum())
}

/// Floating view of [`value`].
pub fn value_f64(inst: &CspInstance, a: &Assignment) -> Result<f64> {
    value(inst, a).map(|v| to_f64(&v))
}

/// `Δ = 1 / (n^k · max_S W(S))`, maximising over ordered tuples.
pub fn density(inst: &CspInstance) -> Result<Density> {
    let max_w = inst
        .tuple_weights()
        .into_iter()
        .map(|(_, w)| w)
        .filter(|w| w.is_positive())
        .max()
        .ok_or_else(|| Error::EmptySupport("instance has no positive-weight constraint".into()))?;
    let tuples = BigRational::from_integer(num_traits::pow(
        num_bigint::BigInt::from(inst.n),
        inst.k,
    ));
    Ok(Density(Rational::one() / (tuples * max_w)))
}

/// Pointwise convex combination `Σ α_i W_i` of instances that share
/// variables, alphabet, arity and the predicate on every shared scope.
pub fn mix(insts: &[CspInstance], weights: &[Rational]) -> Result<CspInstance> {
    if insts.is_empty() {
        return Err(Error::invalid("mix of zero instances"));
    }
    if insts.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            expected: insts.len(),
            actual: weights.len(),
        });
    }
    if weights.iter().any(|a| a.is_negative()) {
        return Err(Error::invalid("mixing weights must be nonnegative"));
    }
    if weights.iter().sum::<Rational>() != Rational::one() {
        return Err(Error::invalid("mixing weights must sum to 1"));
    }
    let (n, q, k) = (insts[0].n, insts[0].q, insts[0].k);
    let mut order: Vec<Vec<usize>> = Vec::new();
    let mut merged: BTreeMap<Vec<usize>, (Rational, Vec<Rational>)> = BTreeMap::new();
    for (i, (inst, alpha)) in insts.iter().zip(weights).enumerate() {
        if (inst.n, inst.q, inst.k) != (n, q, k) {
            return Err(Error::Incompatible(format!(
                "instance {i} has (n, q, k) = ({}, {}, {}), expected ({n}, {q}, {k})",
                inst.n, inst.q, inst.k
            )));
        }
        for c in &inst.constraints {
            match merged.get_mut(&c.scope) {
                Some((w, table)) => {
                    if *table != c.table {
                        return Err(Error::Incompatible(format!(
                            "scope {:?} carries different predicates",
                            c.scope
                        )));
                    }
                    *w += alpha * &c.weight;
                }
                None => {
                    order.push(c.scope.clone());
                    merged.insert(c.scope.clone(), (alpha * &c.weight, c.table.clone()));
                }
            }
        }
    }
    let constraints = order
        .into_iter()
        .filter_map(|scope| {
            let (weight, table) = merged.remove(&scope)?;
            (!weight.is_zero()).then_some(Constraint {
                scope,
                weight,
                table,
            })
        })
        .collect();
    CspInstance::new(n, q, k, constraints)
}

/// Random Max 3-XOR: `d·n` constraints, each on 3 distinct variables drawn
/// without replacement, with a uniform parity bit; payoff 1 iff the XOR of
/// the three values equals the bit. Weights are uniform.
pub fn random_3xor(n: usize, d: &Rational, seed: u64) -> Result<CspInstance> {
    if n < 3 {
        return Err(Error::invalid(format!("random 3-XOR needs n >= 3, got {n}")));
    }
    let m = d * int(n as i64);
    if !m.is_integer() || m.is_negative() || m.is_zero() {
        return Err(Error::invalid(format!(
            "d·n = {m} must be a positive integer"
        )));
    }
    let m: usize = m
        .to_integer()
        .try_into()
        .map_err(|_| Error::invalid("d·n too large"))?;
    let mut rng = SeededRng::new(seed);
    let weight = rat(1, m as i64);
    let constraints = (0..m)
        .map(|_| {
            let scope = rng.choose(n, 3);
            let bit = rng.bit();
            let table = (0..8)
                .map(|e| {
                    let v = decode(e, 3, 2);
                    if v[0] ^ v[1] ^ v[2] == bit {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            Constraint {
                scope,
                weight: weight.clone(),
                table,
            }
        })
        .collect();
    CspInstance::new(n, 2, 3, constraints)
}

/// One violated invariant found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Issue {
    BadShape(String),
    NegativeWeight { constraint: usize },
    NotNormalized { total: Rational },
    PayoffOutOfRange { constraint: usize, entry: usize },
    RepeatedVariableNonzero { constraint: usize, entry: usize },
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::BadShape(m) => write!(f, "malformed instance: {m}"),
            Issue::NegativeWeight { constraint } => {
                write!(f, "negative weight on constraint {constraint}")
            }
            Issue::NotNormalized { total } => {
                write!(f, "distribution not normalized: weights sum to {total}")
            }
            Issue::PayoffOutOfRange { constraint, entry } => {
                write!(f, "payoff out of range at constraint {constraint}, entry {entry}")
            }
            Issue::RepeatedVariableNonzero { constraint, entry } => write!(
                f,
                "nonzero payoff on inconsistent repeated-variable entry {entry} of constraint {constraint}"
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            let text: Vec<String> = self.issues.iter().map(|i| i.to_string()).collect();
            Err(Error::invalid(text.join("; ")))
        }
    }
}

pub fn validate(inst: &CspInstance) -> ValidationReport {
    let mut issues = Vec::new();
    if let Err(e) = inst.check_shape() {
        issues.push(Issue::BadShape(e.to_string()));
        return ValidationReport { issues };
    }
    for (c, con) in inst.constraints.iter().enumerate() {
        if con.weight.is_negative() {
            issues.push(Issue::NegativeWeight { constraint: c });
        }
        for (e, p) in con.table.iter().enumerate() {
            if !rational::in_unit_interval(p) {
                issues.push(Issue::PayoffOutOfRange {
                    constraint: c,
                    entry: e,
                });
            } else if !p.is_zero()
                && !consistent_on_repeats(&con.scope, &decode(e, inst.k, inst.q))
            {
                issues.push(Issue::RepeatedVariableNonzero {
                    constraint: c,
                    entry: e,
                });
            }
        }
    }
    let total = inst.total_weight();
    if total != Rational::one() {
        issues.push(Issue::NotNormalized { total });
    }
    ValidationReport { issues }
}

pub(crate) mod table_serde {
    //! Payoffs: integers as JSON numbers, everything else as rational text.
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(table: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(table.len()))?;
        for p in table {
            if p.is_integer() {
                let v: i64 = p.to_integer().try_into().map_err(serde::ser::Error::custom)?;
                seq.serialize_element(&v)?;
            } else {
                seq.serialize_element(&rational::format_rational(p))?;
            }
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        rational::serde_rational::vec::deserialize(d)
    }
}

/// Random instances used by tests, examples and experiments.
pub mod generators {
    use super::*;

    /// Fully-dense instance whose payoffs are independent 0/1 coins with
    /// `P[1] = ones_num / ones_den`.
    pub fn random_fully_dense(
        n: usize,
        q: usize,
        k: usize,
        ones_num: usize,
        ones_den: usize,
        seed: u64,
    ) -> Result<CspInstance> {
        let mut rng = SeededRng::new(seed);
        CspInstance::fully_dense(n, q, k, |_, _| {
            if rng.below(ones_den) < ones_num {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    /// Fully-dense instance satisfied by `planted`: every table entry that
    /// agrees with `planted` pays 1, every other entry is a fair coin.
    pub fn planted_fully_dense(
        n: usize,
        q: usize,
        k: usize,
        planted: &Assignment,
        seed: u64,
    ) -> Result<CspInstance> {
        let mut rng = SeededRng::new(seed);
        CspInstance::fully_dense(n, q, k, |scope, values| {
            let agrees = scope.iter().zip(values).all(|(&v, &x)| planted.0[v] == x);
            if agrees || rng.bit() == 1 {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    /// Instance with `m` random scopes, random positive integer weights
    /// (normalised) and random payoffs from `{0, 1/2, 1}`.
    pub fn random_weighted(n: usize, q: usize, k: usize, m: usize, seed: u64) -> Result<CspInstance> {
        let mut rng = SeededRng::new(seed);
        let raw: Vec<usize> = (0..m).map(|_| 1 + rng.below(4)).collect();
        let total: usize = raw.iter().sum();
        let entries = pow(q, k);
        let constraints = raw
            .iter()
            .map(|&w| {
                let scope: Vec<usize> = (0..k).map(|_| rng.below(n)).collect();
                let table = (0..entries)
                    .map(|e| {
                        if !consistent_on_repeats(&scope, &decode(e, k, q)) {
                            return Rational::zero();
                        }
                        rat(rng.below(3) as i64, 2)
                    })
                    .collect();
                Constraint {
                    scope,
                    weight: rat(w as i64, total as i64),
                    table,
                }
            })
            .collect();
        CspInstance::new(n, q, k, constraints)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq_table() -> Vec<Rational> {
        vec![int(1), int(0), int(0), int(1)]
    }

    fn neq_table() -> Vec<Rational> {
        vec![int(0), int(1), int(1), int(0)]
    }

    fn single_eq() -> CspInstance {
        CspInstance::new(
            2,
            2,
            2,
            vec![Constraint {
                scope: vec![0, 1],
                weight: int(1),
                table: eq_table(),
            }],
        )
        .unwrap()
    }

    fn half_eq_half_neq() -> CspInstance {
        CspInstance::new(
            2,
            2,
            2,
            vec![
                Constraint {
                    scope: vec![0, 1],
                    weight: rat(1, 2),
                    table: eq_table(),
                },
                Constraint {
                    scope: vec![1, 0],
                    weight: rat(1, 2),
                    table: neq_table(),
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn value_of_equality() {
        let inst = single_eq();
        assert_eq!(value(&inst, &Assignment(vec![0, 0])).unwrap(), int(1));
        assert_eq!(value(&inst, &Assignment(vec![0, 1])).unwrap(), int(0));
    }

    #[test]
    fn value_of_eq_neq_pair_is_half_everywhere() {
        let inst = half_eq_half_neq();
        for e in 0..4 {
            let a = Assignment(decode(e, 2, 2));
            assert_eq!(value(&inst, &a).unwrap(), rat(1, 2));
        }
    }

    #[test]
    fn value_rejects_wrong_length() {
        let inst = single_eq();
        assert!(matches!(
            value(&inst, &Assignment(vec![0])),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(value(&inst, &Assignment(vec![0, 2])).is_err());
    }

    #[test]
    fn density_examples() {
        let full = CspInstance::fully_dense(3, 2, 2, |_, _| int(1)).unwrap();
        assert_eq!(density(&full).unwrap().0, int(1));
        assert_eq!(density(&single_eq()).unwrap().0, rat(1, 4));
        let two = CspInstance::new(
            3,
            2,
            2,
            vec![
                Constraint {
                    scope: vec![0, 1],
                    weight: rat(2, 3),
                    table: eq_table(),
                },
                Constraint {
                    scope: vec![1, 2],
                    weight: rat(1, 3),
                    table: eq_table(),
                },
            ],
        )
        .unwrap();
        assert_eq!(density(&two).unwrap().0, rat(1, 6));
        let empty = CspInstance::new(3, 2, 2, vec![]).unwrap();
        assert!(matches!(density(&empty), Err(Error::EmptySupport(_))));
    }

    #[test]
    fn density_aggregates_duplicate_tuples() {
        let inst = CspInstance::new(
            2,
            2,
            2,
            vec![
                Constraint {
                    scope: vec![0, 1],
                    weight: rat(1, 2),
                    table: eq_table(),
                },
                Constraint {
                    scope: vec![0, 1],
                    weight: rat(1, 2),
                    table: neq_table(),
                },
            ],
        )
        .unwrap();
        assert_eq!(density(&inst).unwrap().0, rat(1, 4));
    }

    #[test]
    fn mix_identity_and_disjoint_union() {
        let g = single_eq();
        assert_eq!(mix(std::slice::from_ref(&g), &[int(1)]).unwrap(), g);

        let mut other = single_eq();
        other.constraints[0].scope = vec![1, 0];
        let m = mix(&[g.clone(), other], &[rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(m.constraints.len(), 2);
        assert!(m.constraints.iter().all(|c| c.weight == rat(1, 2)));
    }

    #[test]
    fn mix_rejects_conflicts() {
        let g = single_eq();
        let mut h = single_eq();
        h.constraints[0].table = neq_table();
        assert!(matches!(
            mix(&[g.clone(), h], &[rat(1, 2), rat(1, 2)]),
            Err(Error::Incompatible(_))
        ));
        assert!(mix(std::slice::from_ref(&g), &[rat(1, 2)]).is_err());
        assert!(mix(&[g], &[int(1), int(0)]).is_err());
    }

    #[test]
    fn random_3xor_examples() {
        let inst = random_3xor(3, &rat(1, 3), 17).unwrap();
        assert_eq!(inst.constraints.len(), 1);
        for c in &random_3xor(3, &int(1), 17).unwrap().constraints {
            let mut s = c.scope.clone();
            s.sort_unstable();
            assert_eq!(s, vec![0, 1, 2]);
        }
        assert_eq!(random_3xor(12, &int(5), 7).unwrap(), random_3xor(12, &int(5), 7).unwrap());
        assert_eq!(random_3xor(12, &int(5), 7).unwrap().constraints.len(), 60);
        assert!(random_3xor(2, &int(1), 0).is_err());
        assert!(random_3xor(5, &rat(1, 3), 0).is_err());
        assert!(validate(&random_3xor(10, &rat(3, 2), 3).unwrap()).is_valid());
    }

    #[test]
    fn validate_reports() {
        assert!(validate(&single_eq()).is_valid());

        let mut g = single_eq();
        g.constraints[0].weight = rat(9, 10);
        let r = validate(&g);
        assert_eq!(r.issues.len(), 1);
        assert!(r.issues[0].to_string().contains("distribution not normalized"));

        let mut g = single_eq();
        g.constraints[0].table[1] = rat(3, 2);
        let r = validate(&g);
        assert!(r.issues[0].to_string().contains("payoff out of range"));

        let mut g = single_eq();
        g.constraints[0].scope = vec![0, 0];
        g.constraints[0].table = vec![int(1), int(1), int(0), int(1)];
        let r = validate(&g);
        assert!(matches!(
            r.issues[0],
            Issue::RepeatedVariableNonzero { entry: 1, .. }
        ));
    }

    #[test]
    fn json_roundtrip_and_decimal_weights() {
        let g = half_eq_half_neq();
        let text = g.to_json().unwrap();
        assert!(text.contains("\"1/2\""));
        assert_eq!(CspInstance::from_json(&text).unwrap(), g);

        let decimal = r#"{"n":2,"q":2,"k":2,"constraints":[
            {"scope":[0,1],"weight":"0.5","table":[1,0,0,1]},
            {"scope":[1,0],"weight":0.5,"table":[0,"1/1",1,0]}]}"#;
        assert_eq!(CspInstance::from_json(decimal).unwrap(), g);

        let short = r#"{"n":2,"q":2,"k":2,"constraints":[{"scope":[0,1],"weight":"1","table":[1,0]}]}"#;
        assert!(CspInstance::from_json(short).is_err());
    }

    #[test]
    fn fully_dense_zeroes_inconsistent_entries() {
        let inst = CspInstance::fully_dense(2, 2, 2, |_, _| int(1)).unwrap();
        assert!(validate(&inst).is_valid());
        let diag = inst.constraints.iter().find(|c| c.scope == vec![1, 1]).unwrap();
        assert_eq!(diag.table, vec![int(1), int(0), int(0), int(1)]);
    }

    #[test]
    fn generators_are_valid() {
        for seed in 0..5 {
            assert!(validate(&generators::random_fully_dense(3, 2, 2, 1, 2, seed).unwrap()).is_valid());
            assert!(validate(&generators::random_weighted(4, 3, 2, 5, seed).unwrap()).is_valid());
            let planted = Assignment(vec![1, 0, 1]);
            let inst = generators::planted_fully_dense(3, 2, 2, &planted, seed).unwrap();
            assert_eq!(value(&inst, &planted).unwrap(), int(1));
        }
    }
}
