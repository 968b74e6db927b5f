//! Sherali-Adams and SAC relaxations.
//!
//! An [`SaSolution`] of level `r` stores one distribution `X_S` over `Σ^S`
//! for every variable subset with `|S| ≤ r`, in size-then-colex order. The
//! SAC relaxation additionally asks every conditioning `μ | φ_T` with
//! `|T| ≤ r - k` to keep value at least `λ`.
//!
//! Two LP formulations are available. [`build_sa_lp`] is the textbook one,
//! with a variable for every `X_S(φ_S)` and marginal rows between `S` and
//! `S \ {x}`. The solvers use an equivalent compact program whose variables
//! are only the top tables `|S| = r`; every smaller table is read off as the
//! marginal of a fixed parent and top tables sharing an `(r-1)`-set must
//! agree on it.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::csp::{Assignment, CspInstance};
use crate::error::{Error, Result};
use crate::info::solution_total_correlation;
use crate::lp::{self, LinearProgram, LpStatus, Relation};
use crate::rational::{to_f64, Rational};
use crate::subset::{
    binomial, checked_pow, colex_rank, decode, encode, family_offset, positions, pow,
    subsets_of_size, subsets_up_to, underlying_set, union,
};

/// Default refusal threshold on LP variable counts.
pub const DEFAULT_CAP_LP_VARS: u128 = 200_000;

#[derive(Clone, Debug, PartialEq)]
pub struct SaSolution {
    n: usize,
    q: usize,
    level: usize,
    tables: Vec<Vec<Rational>>,
}

fn family_index(n: usize, s: &[usize]) -> usize {
    (family_offset(n, s.len()) + colex_rank(s)) as usize
}

/// Marginal of `table` (over sorted `sup`) onto sorted `sub ⊆ sup`.
pub fn marginalize(table: &[Rational], sup: &[usize], sub: &[usize], q: usize) -> Vec<Rational> {
    let pos = positions(sub, sup);
    let mut out = vec![Rational::zero(); pow(q, sub.len())];
    for (i, p) in table.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let vals = decode(i, sup.len(), q);
        let idx = pos.iter().fold(0, |acc, &j| acc * q + vals[j]);
        out[idx] += p;
    }
    out
}

fn check_subset(n: usize, s: &[usize]) -> Result<()> {
    if s.windows(2).any(|w| w[0] >= w[1]) || s.iter().any(|&x| x >= n) {
        return Err(Error::invalid(format!(
            "subset {s:?} is not a sorted subset of 0..{n}"
        )));
    }
    Ok(())
}

fn table_count(n: usize, level: usize) -> Result<usize> {
    let total = family_offset(n, level + 1);
    usize::try_from(total).map_err(|_| Error::cap("subset family", total, usize::MAX as u128))
}

impl SaSolution {
    fn check_shape(n: usize, q: usize, level: usize) -> Result<()> {
        if q == 0 {
            return Err(Error::invalid("alphabet must be nonempty"));
        }
        if level > n {
            return Err(Error::invalid(format!("level {level} exceeds n = {n}")));
        }
        Ok(())
    }

    /// Builds every table from a `family(S) -> X_S` callback.
    fn build(
        n: usize,
        q: usize,
        level: usize,
        mut table: impl FnMut(&[usize]) -> Vec<Rational>,
    ) -> Result<Self> {
        Self::check_shape(n, q, level)?;
        table_count(n, level)?;
        let tables = subsets_up_to(n, level).iter().map(|s| table(s)).collect();
        Ok(SaSolution {
            n,
            q,
            level,
            tables,
        })
    }

    /// Tables listed explicitly; every subset of size `≤ level` must appear.
    pub fn from_tables(
        n: usize,
        q: usize,
        level: usize,
        tables: Vec<(Vec<usize>, Vec<Rational>)>,
    ) -> Result<Self> {
        Self::check_shape(n, q, level)?;
        let count = table_count(n, level)?;
        let mut slots: Vec<Option<Vec<Rational>>> = vec![None; count];
        for (s, t) in tables {
            check_subset(n, &s)?;
            if s.len() > level {
                return Err(Error::invalid(format!("subset {s:?} above level {level}")));
            }
            if t.len() != pow(q, s.len()) {
                return Err(Error::DimensionMismatch {
                    expected: pow(q, s.len()),
                    actual: t.len(),
                });
            }
            slots[family_index(n, &s)] = Some(t);
        }
        let tables = slots
            .into_iter()
            .enumerate()
            .map(|(i, t)| {
                t.ok_or_else(|| {
                    let s = &subsets_up_to(n, level)[i];
                    Error::invalid(format!("missing table for subset {s:?}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SaSolution {
            n,
            q,
            level,
            tables,
        })
    }

    /// Local views of a global distribution over `Σ^n` (row-major over
    /// `0..n`).
    pub fn from_global(n: usize, q: usize, level: usize, dist: &[Rational]) -> Result<Self> {
        let expected = checked_pow(q, n).unwrap_or(u128::MAX);
        if dist.len() as u128 != expected {
            return Err(Error::DimensionMismatch {
                expected: expected.min(usize::MAX as u128) as usize,
                actual: dist.len(),
            });
        }
        let all: Vec<usize> = (0..n).collect();
        Self::build(n, q, level, |s| marginalize(dist, &all, s, q))
    }

    pub fn point_mass(q: usize, level: usize, a: &Assignment) -> Result<Self> {
        let n = a.len();
        if a.0.iter().any(|&v| v >= q) {
            return Err(Error::invalid("assignment value outside alphabet"));
        }
        Self::build(n, q, level, |s| {
            let mut t = vec![Rational::zero(); pow(q, s.len())];
            t[encode(&a.restrict(s), q)] = Rational::one();
            t
        })
    }

    /// Independent variables with the given singleton marginals.
    pub fn product(q: usize, level: usize, marginals: &[Vec<Rational>]) -> Result<Self> {
        if marginals.iter().any(|m| m.len() != q) {
            return Err(Error::invalid("marginal length differs from alphabet size"));
        }
        Self::build(marginals.len(), q, level, |s| {
            (0..pow(q, s.len()))
                .map(|i| {
                    decode(i, s.len(), q)
                        .iter()
                        .zip(s)
                        .map(|(&v, &x)| marginals[x][v].clone())
                        .product()
                })
                .collect()
        })
    }

    /// Level-`m` solution from top tables only (all `m`-subsets, colex
    /// order); smaller tables are marginals of their canonical parent.
    fn from_tops(n: usize, q: usize, m: usize, tops: Vec<Vec<Rational>>) -> Result<Self> {
        Self::build(n, q, m, |s| {
            if s.len() == m {
                tops[colex_rank(s) as usize].clone()
            } else {
                let p = canonical_parent(n, m, s);
                marginalize(&tops[colex_rank(&p) as usize], &p, s, q)
            }
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn table(&self, s: &[usize]) -> Result<&[Rational]> {
        check_subset(self.n, s)?;
        if s.len() > self.level {
            return Err(Error::LevelTooLow {
                level: self.level,
                required: s.len(),
            });
        }
        Ok(&self.tables[family_index(self.n, s)])
    }

    pub fn table_f64(&self, s: &[usize]) -> Result<Vec<f64>> {
        Ok(self.table(s)?.iter().map(to_f64).collect())
    }

    /// `X_S(φ_S)`.
    pub fn prob(&self, s: &[usize], values: &[usize]) -> Result<Rational> {
        if values.len() != s.len() || values.iter().any(|&v| v >= self.q) {
            return Err(Error::invalid("partial assignment does not match subset"));
        }
        Ok(self.table(s)?[encode(values, self.q)].clone())
    }

    pub fn singleton_marginal(&self, x: usize) -> Result<&[Rational]> {
        self.table(&[x])
    }

    /// `(S, X_S)` pairs in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, &[Rational])> {
        subsets_up_to(self.n, self.level)
            .into_iter()
            .zip(self.tables.iter().map(|t| t.as_slice()))
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = SolutionJson {
            level: self.level,
            n: self.n,
            q: self.q,
            tables: self
                .iter()
                .map(|(subset, probs)| TableJson {
                    subset,
                    probs: probs.to_vec(),
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SolutionJson = serde_json::from_str(text)?;
        Self::from_tables(
            doc.n,
            doc.q,
            doc.level,
            doc.tables.into_iter().map(|t| (t.subset, t.probs)).collect(),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct SolutionJson {
    level: usize,
    n: usize,
    q: usize,
    tables: Vec<TableJson>,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    subset: Vec<usize>,
    #[serde(with = "crate::csp::table_serde")]
    probs: Vec<Rational>,
}

/// `s` extended by the smallest indices outside it up to size `m`.
fn canonical_parent(n: usize, m: usize, s: &[usize]) -> Vec<usize> {
    let extra: Vec<usize> = (0..n)
        .filter(|x| s.binary_search(x).is_err())
        .take(m - s.len())
        .collect();
    union(s, &extra)
}

/// `μ | φ_T`: each remaining table is `X_{S∪T}(φ_S ∘ φ_T) / X_T(φ_T)`,
/// zero where `φ_S` disagrees with `φ_T`.
pub fn condition(mu: &SaSolution, t: &[usize], phi_t: &[usize]) -> Result<SaSolution> {
    check_subset(mu.n, t)?;
    if t.len() > mu.level {
        return Err(Error::invalid(format!(
            "cannot condition a level-{} solution on {} variables",
            mu.level,
            t.len()
        )));
    }
    let mass = mu.prob(t, phi_t)?;
    if mass.is_zero() {
        return Err(Error::ZeroProbability);
    }
    let q = mu.q;
    let level = mu.level - t.len();
    SaSolution::build(mu.n, q, level, |s| {
        let u = union(s, t);
        let table_u = &mu.tables[family_index(mu.n, &u)];
        let pos_s = positions(s, &u);
        let pos_t = positions(t, &u);
        (0..pow(q, s.len()))
            .map(|i| {
                let vals = decode(i, s.len(), q);
                let mut psi = vec![usize::MAX; u.len()];
                for (&p, &v) in pos_t.iter().zip(phi_t) {
                    psi[p] = v;
                }
                for (&p, &v) in pos_s.iter().zip(&vals) {
                    if psi[p] != usize::MAX && psi[p] != v {
                        return Rational::zero();
                    }
                    psi[p] = v;
                }
                &table_u[encode(&psi, q)] / &mass
            })
            .collect()
    })
}

/// `val_SA(μ) = Σ_S W(S) E_{φ ∼ X_S}[P_S(φ)]`.
pub fn sa_value(mu: &SaSolution, inst: &CspInstance) -> Result<Rational> {
    check_compatible(mu, inst)?;
    let mut acc = Rational::zero();
    for c in &inst.constraints {
        if c.weight.is_zero() {
            continue;
        }
        let set = underlying_set(&c.scope);
        let pos = positions(&c.scope, &set);
        let table = mu.table(&set)?;
        let mut e = Rational::zero();
        for (i, p) in table.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let vals = decode(i, set.len(), inst.q);
            let on_scope: Vec<usize> = pos.iter().map(|&j| vals[j]).collect();
            e += p * c.payoff(&on_scope, inst.q);
        }
        acc += &c.weight * e;
    }
    Ok(acc)
}

fn check_compatible(mu: &SaSolution, inst: &CspInstance) -> Result<()> {
    if mu.n != inst.n || mu.q != inst.q {
        return Err(Error::invalid(format!(
            "solution over n={}, q={} used with instance n={}, q={}",
            mu.n, mu.q, inst.n, inst.q
        )));
    }
    if mu.level < inst.k {
        return Err(Error::LevelTooLow {
            level: mu.level,
            required: inst.k,
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    Negative {
        subset: Vec<usize>,
        index: usize,
        value: f64,
    },
    Normalization {
        subset: Vec<usize>,
        total: f64,
    },
    Marginal {
        superset: Vec<usize>,
        subset: Vec<usize>,
        magnitude: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Negative {
                subset,
                index,
                value,
            } => write!(f, "X_{subset:?}[{index}] = {value} is negative"),
            Violation::Normalization { subset, total } => {
                write!(f, "X_{subset:?} sums to {total}")
            }
            Violation::Marginal {
                superset,
                subset,
                magnitude,
            } => write!(
                f,
                "marginal of X_{superset:?} onto {subset:?} is off by {magnitude}"
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConsistencyReport {
    pub violations: Vec<Violation>,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Nonnegativity, normalisation and `S ⊃ S \ {x}` marginal agreement.
/// `tol = 0` demands exact equality.
pub fn check_consistency(mu: &SaSolution, tol: f64) -> ConsistencyReport {
    let mut violations = Vec::new();
    let over = |d: &Rational| {
        let m = to_f64(&d.abs());
        if tol == 0.0 {
            (!d.is_zero()).then_some(m)
        } else {
            (m > tol).then_some(m)
        }
    };
    for (s, table) in mu.iter() {
        for (index, p) in table.iter().enumerate() {
            if p.is_negative() && over(p).is_some() {
                violations.push(Violation::Negative {
                    subset: s.clone(),
                    index,
                    value: to_f64(p),
                });
            }
        }
        let total: Rational = table.iter().sum();
        if over(&(&total - Rational::one())).is_some() {
            violations.push(Violation::Normalization {
                subset: s.clone(),
                total: to_f64(&total),
            });
        }
        for drop in 0..s.len() {
            let mut sub = s.clone();
            sub.remove(drop);
            let projected = marginalize(table, &s, &sub, mu.q);
            let stored = &mu.tables[family_index(mu.n, &sub)];
            let worst = projected
                .iter()
                .zip(stored)
                .filter_map(|(a, b)| over(&(a - b)))
                .fold(0.0f64, f64::max);
            if worst > 0.0 || projected.iter().zip(stored).any(|(a, b)| tol == 0.0 && a != b) {
                violations.push(Violation::Marginal {
                    superset: s.clone(),
                    subset: sub,
                    magnitude: worst,
                });
            }
        }
    }
    ConsistencyReport { violations }
}

/// Number of `X_S(φ_S)` variables in the full level-`r` program.
pub fn sa_variable_count(n: usize, q: usize, r: usize) -> u128 {
    (0..=r.min(n))
        .map(|t| binomial(n, t).saturating_mul(checked_pow(q, t).unwrap_or(u128::MAX)))
        .fold(0u128, |a, b| a.saturating_add(b))
}

/// Number of variables in the compact (top tables only) program.
pub fn compact_variable_count(n: usize, q: usize, r: usize) -> u128 {
    binomial(n, r).saturating_mul(checked_pow(q, r).unwrap_or(u128::MAX))
}

fn check_level(inst: &CspInstance, r: usize) -> Result<()> {
    if r < inst.k {
        return Err(Error::LevelTooLow {
            level: r,
            required: inst.k,
        });
    }
    if r > inst.n {
        return Err(Error::invalid(format!("level {r} exceeds n = {}", inst.n)));
    }
    Ok(())
}

/// Full level-`r` program: a variable for every `X_S(φ_S)` with `|S| ≤ r`
/// (including `X_∅`), `X_∅ = 1`, and marginal rows
/// `Σ_a X_S(φ, x = a) = X_{S \ {x}}(φ)` for every `S`, `x ∈ S`, `φ`.
/// The objective is the SA value.
pub fn build_sa_lp(inst: &CspInstance, r: usize) -> Result<LinearProgram> {
    check_level(inst, r)?;
    let (n, q) = (inst.n, inst.q);
    let family = subsets_up_to(n, r);
    let mut offsets = Vec::with_capacity(family.len());
    let mut total = 0usize;
    for s in &family {
        offsets.push(total);
        total += pow(q, s.len());
    }
    let mut lp = LinearProgram::new(total);
    lp.add_row(vec![(0, Rational::one())], Relation::Eq, Rational::one());
    for s in family.iter().skip(1) {
        let base = offsets[family_index(n, s)];
        for drop in 0..s.len() {
            let mut sub = s.clone();
            sub.remove(drop);
            let sub_base = offsets[family_index(n, &sub)];
            for j in 0..pow(q, sub.len()) {
                let phi = decode(j, sub.len(), q);
                let mut coeffs: Vec<(usize, Rational)> = (0..q)
                    .map(|a| {
                        let mut full = phi.clone();
                        full.insert(drop, a);
                        (base + encode(&full, q), Rational::one())
                    })
                    .collect();
                coeffs.push((sub_base + j, -Rational::one()));
                lp.add_row(coeffs, Relation::Eq, Rational::zero());
            }
        }
    }
    let mut objective: BTreeMap<usize, Rational> = BTreeMap::new();
    for c in &inst.constraints {
        if c.weight.is_zero() {
            continue;
        }
        let set = underlying_set(&c.scope);
        let pos = positions(&c.scope, &set);
        let base = offsets[family_index(n, &set)];
        for i in 0..pow(q, set.len()) {
            let vals = decode(i, set.len(), q);
            let on_scope: Vec<usize> = pos.iter().map(|&j| vals[j]).collect();
            let p = c.payoff(&on_scope, q);
            if !p.is_zero() {
                *objective.entry(base + i).or_insert_with(Rational::zero) += &c.weight * p;
            }
        }
    }
    lp.set_objective(objective.into_iter().collect());
    Ok(lp)
}

/// Reads a point of [`build_sa_lp`] back as a solution.
pub fn solution_from_full_point(n: usize, q: usize, r: usize, point: &[Rational]) -> Result<SaSolution> {
    let expected = sa_variable_count(n, q, r);
    if point.len() as u128 != expected {
        return Err(Error::DimensionMismatch {
            expected: expected as usize,
            actual: point.len(),
        });
    }
    let mut at = 0;
    SaSolution::build(n, q, r, |s| {
        let len = pow(q, s.len());
        let t = point[at..at + len].to_vec();
        at += len;
        t
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    Exact,
    Float,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub arithmetic: Arithmetic,
    /// Float-mode stopping width for the λ search.
    pub tol: f64,
    pub cap_lp_vars: u128,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            arithmetic: Arithmetic::Exact,
            tol: 1e-9,
            cap_lp_vars: DEFAULT_CAP_LP_VARS,
        }
    }
}

/// Top-table program shared by the SA and SAC solvers.
struct Compact {
    n: usize,
    q: usize,
    m: usize,
    block: usize,
    tops: Vec<Vec<usize>>,
}

impl Compact {
    fn new(inst: &CspInstance, r: usize, opts: &SolveOptions) -> Result<Self> {
        check_level(inst, r)?;
        let count = compact_variable_count(inst.n, inst.q, r);
        if count > opts.cap_lp_vars {
            return Err(Error::cap(format!("level-{r} SA program variables"), count, opts.cap_lp_vars));
        }
        Ok(Compact {
            n: inst.n,
            q: inst.q,
            m: r,
            block: pow(inst.q, r),
            tops: subsets_of_size(inst.n, r),
        })
    }

    fn num_vars(&self) -> usize {
        self.tops.len() * self.block
    }

    /// Variables of top `top` whose entries agree with `values` on `s ⊆ top`.
    fn agreeing(&self, top: usize, s: &[usize], values: &[usize]) -> Vec<usize> {
        let set = &self.tops[top];
        let pos = positions(s, set);
        let free: Vec<usize> = (0..self.m).filter(|p| !pos.contains(p)).collect();
        let mut entry = vec![0; self.m];
        for (&p, &v) in pos.iter().zip(values) {
            entry[p] = v;
        }
        let base = top * self.block;
        (0..pow(self.q, free.len()))
            .map(|i| {
                let fv = decode(i, free.len(), self.q);
                for (&p, &v) in free.iter().zip(&fv) {
                    entry[p] = v;
                }
                base + encode(&entry, self.q)
            })
            .collect()
    }

    fn parent_index(&self, s: &[usize]) -> usize {
        colex_rank(&canonical_parent(self.n, self.m, s)) as usize
    }

    fn base_program(&self) -> LinearProgram {
        let mut lp = LinearProgram::new(self.num_vars());
        let one = Rational::one();
        lp.add_row(
            (0..self.block).map(|j| (j, one.clone())).collect(),
            Relation::Eq,
            one.clone(),
        );
        if self.m == 0 {
            return lp;
        }
        for u in subsets_of_size(self.n, self.m - 1) {
            let mut above = (0..self.n)
                .filter(|x| u.binary_search(x).is_err())
                .map(|y| colex_rank(&union(&u, &[y])) as usize);
            let Some(reference) = above.next() else {
                continue;
            };
            for other in above {
                for j in 0..pow(self.q, u.len()) {
                    let phi = decode(j, u.len(), self.q);
                    let mut coeffs: Vec<(usize, Rational)> = self
                        .agreeing(reference, &u, &phi)
                        .into_iter()
                        .map(|v| (v, one.clone()))
                        .collect();
                    coeffs.extend(
                        self.agreeing(other, &u, &phi)
                            .into_iter()
                            .map(|v| (v, -one.clone())),
                    );
                    lp.add_row(coeffs, Relation::Eq, Rational::zero());
                }
            }
        }
        lp
    }

    /// `Σ_S W(S) Σ_{ψ ⊇ φ_T} X_{S∪T}(ψ) P_S(ψ|S)` as sparse coefficients.
    fn conditioned_value_row(&self, inst: &CspInstance, t: &[usize], phi_t: &[usize]) -> Vec<(usize, Rational)> {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for c in &inst.constraints {
            if c.weight.is_zero() {
                continue;
            }
            let set = underlying_set(&union(&underlying_set(&c.scope), t));
            let top = self.parent_index(&set);
            let top_set = &self.tops[top];
            let scope_pos = positions(&c.scope, top_set);
            for v in self.agreeing(top, t, phi_t) {
                let vals = decode(v - top * self.block, self.m, self.q);
                let on_scope: Vec<usize> = scope_pos.iter().map(|&j| vals[j]).collect();
                let p = c.payoff(&on_scope, self.q);
                if !p.is_zero() {
                    *acc.entry(v).or_insert_with(Rational::zero) += &c.weight * p;
                }
            }
        }
        acc.into_iter().collect()
    }

    fn mass_row(&self, t: &[usize], phi_t: &[usize]) -> Vec<usize> {
        self.agreeing(self.parent_index(t), t, phi_t)
    }

    fn solution(&self, point: &[Rational]) -> Result<SaSolution> {
        let tops = (0..self.tops.len())
            .map(|i| point[i * self.block..(i + 1) * self.block].to_vec())
            .collect();
        SaSolution::from_tops(self.n, self.q, self.m, tops)
    }
}

fn rationalize(point: &[f64]) -> Vec<Rational> {
    point
        .iter()
        .map(|&v| Rational::from_float(v.max(0.0)).unwrap_or_else(Rational::zero))
        .collect()
}

fn run_lp(lp: &LinearProgram, arithmetic: Arithmetic, optimize: bool) -> Result<(LpStatus, Vec<Rational>)> {
    match arithmetic {
        Arithmetic::Exact => {
            let out = if optimize {
                lp::maximize(lp)?
            } else {
                lp::solve_feasibility(lp)?
            };
            Ok((out.status, out.point))
        }
        Arithmetic::Float => {
            let out = if optimize {
                lp::maximize_f64(lp)?
            } else {
                lp::solve_feasibility_f64(lp)?
            };
            Ok((out.status, rationalize(&out.point)))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SaOptimum {
    pub value: Rational,
    pub solution: SaSolution,
}

/// `opt_SA^r`: the best level-`r` SA value and a solution attaining it.
pub fn solve_sa(inst: &CspInstance, r: usize, opts: &SolveOptions) -> Result<SaOptimum> {
    let compact = Compact::new(inst, r, opts)?;
    let mut lp = compact.base_program();
    lp.set_objective(compact.conditioned_value_row(inst, &[], &[]));
    let (status, point) = run_lp(&lp, opts.arithmetic, true)?;
    if status != LpStatus::Optimal {
        return Err(Error::Internal(format!("SA program reported {status:?}")));
    }
    let solution = compact.solution(&point)?;
    let value = sa_value(&solution, inst)?;
    Ok(SaOptimum { value, solution })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SacResult {
    /// Minimum conditioned value of `solution`, over all `(T, φ_T)` with
    /// `|T| ≤ level - k` and positive mass.
    pub lambda: Rational,
    pub solution: SaSolution,
    pub level: usize,
    /// Feasibility solves used by the search.
    pub solves: usize,
}

struct SacRow {
    value: Vec<(usize, Rational)>,
    mass: Vec<usize>,
}

fn eval(coeffs: &[(usize, Rational)], point: &[Rational]) -> Rational {
    coeffs.iter().map(|(j, a)| a * &point[*j]).sum()
}

/// Smallest conditioned-value ratio over positive-mass rows.
fn certified_ratio(rows: &[SacRow], point: &[Rational]) -> Rational {
    let mut best: Option<Rational> = None;
    for row in rows {
        let mass: Rational = row.mass.iter().map(|&j| &point[j]).sum();
        if !mass.is_positive() {
            continue;
        }
        let ratio = eval(&row.value, point) / mass;
        if best.as_ref().is_none_or(|b| ratio < *b) {
            best = Some(ratio);
        }
    }
    best.unwrap_or_else(Rational::zero)
}

/// Largest `λ` for which the level-`r` SAC program is feasible, with a
/// witness.
///
/// Exact mode searches the grid `m / D`, `D` the product of the weight and
/// payoff denominator lcms (every assignment value lies on it). After each
/// feasible solve the lower end jumps to the witness's own minimum ratio.
/// The returned `λ` is that ratio for the final witness, so it is at least
/// the largest feasible grid point.
pub fn solve_sac(inst: &CspInstance, r: usize, opts: &SolveOptions) -> Result<SacResult> {
    let compact = Compact::new(inst, r, opts)?;
    let base = compact.base_program();
    let mut rows = Vec::new();
    for t in subsets_up_to(inst.n, r - inst.k) {
        for j in 0..pow(inst.q, t.len()) {
            let phi = decode(j, t.len(), inst.q);
            rows.push(SacRow {
                value: compact.conditioned_value_row(inst, &t, &phi),
                mass: compact.mass_row(&t, &phi),
            });
        }
    }
    let mut solves = 0usize;
    let mut attempt = |lambda: &Rational| -> Result<Option<Vec<Rational>>> {
        let mut lp = base.clone();
        for row in &rows {
            let mut coeffs = row.value.clone();
            if !lambda.is_zero() {
                coeffs.extend(row.mass.iter().map(|&j| (j, -lambda.clone())));
            }
            lp.add_row(coeffs, Relation::Ge, Rational::zero());
        }
        solves += 1;
        let (status, point) = run_lp(&lp, opts.arithmetic, false)?;
        Ok((status == LpStatus::Optimal).then_some(point))
    };

    let finish = |point: Vec<Rational>, solves: usize| -> Result<SacResult> {
        let lambda = certified_ratio(&rows, &point);
        Ok(SacResult {
            lambda,
            solution: compact.solution(&point)?,
            level: r,
            solves,
        })
    };

    if let Some(point) = attempt(&Rational::one())? {
        return finish(point, solves);
    }
    let mut witness = attempt(&Rational::zero())?
        .ok_or_else(|| Error::Internal("SAC program infeasible at λ = 0".into()))?;
    let mut ratio = certified_ratio(&rows, &witness);

    match opts.arithmetic {
        Arithmetic::Exact => {
            let grid = Rational::from_integer(inst.denominator_bound());
            let to_index = |x: &Rational| (x * &grid).floor().to_integer();
            let mut lo: BigInt = to_index(&ratio);
            let mut hi: BigInt = grid.to_integer();
            while &hi - &lo > BigInt::one() {
                let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
                let lambda = Rational::new(mid.clone(), grid.to_integer());
                match attempt(&lambda)? {
                    Some(point) => {
                        let rho = certified_ratio(&rows, &point);
                        lo = to_index(&rho).max(mid);
                        if rho > ratio {
                            ratio = rho;
                            witness = point;
                        }
                    }
                    None => hi = mid,
                }
            }
        }
        Arithmetic::Float => {
            let mut lo = to_f64(&ratio);
            let mut hi = 1.0f64;
            while hi - lo > opts.tol {
                let mid = 0.5 * (lo + hi);
                let lambda = Rational::from_float(mid).expect("finite midpoint");
                match attempt(&lambda)? {
                    Some(point) => {
                        let rho = certified_ratio(&rows, &point);
                        lo = to_f64(&rho).max(mid);
                        if rho > ratio {
                            ratio = rho;
                            witness = point;
                        }
                    }
                    None => hi = mid,
                }
            }
        }
    }
    finish(witness, solves)
}

/// Memoised SAC solves for one instance, keyed by level.
pub struct SacCache<'a> {
    inst: &'a CspInstance,
    opts: SolveOptions,
    results: HashMap<usize, SacResult>,
}

impl<'a> SacCache<'a> {
    pub fn new(inst: &'a CspInstance, opts: SolveOptions) -> Self {
        SacCache {
            inst,
            opts,
            results: HashMap::new(),
        }
    }

    pub fn instance(&self) -> &'a CspInstance {
        self.inst
    }

    pub fn options(&self) -> &SolveOptions {
        &self.opts
    }

    pub fn solve(&mut self, r: usize) -> Result<&SacResult> {
        if !self.results.contains_key(&r) {
            let res = solve_sac(self.inst, r, &self.opts)?;
            self.results.insert(r, res);
        }
        Ok(&self.results[&r])
    }
}

/// `E_{T ∼ V^t, φ_T ∼ X_T}[C(μ | φ_T)]` for `t = 0..=l`, with `T` a uniform
/// tuple of variables (conditioning on its underlying set).
pub fn conditioned_correlation_terms(mu: &SaSolution, inst: &CspInstance, l: usize) -> Result<Vec<f64>> {
    check_compatible(mu, inst)?;
    if mu.level < inst.k + l {
        return Err(Error::LevelTooLow {
            level: mu.level,
            required: inst.k + l,
        });
    }
    let n = inst.n;
    let mut memo: HashMap<Vec<usize>, f64> = HashMap::new();
    let mut terms = Vec::with_capacity(l + 1);
    for t in 0..=l {
        let tuples = pow(n, t);
        let mut counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for idx in 0..tuples {
            *counts.entry(underlying_set(&decode(idx, t, n))).or_insert(0) += 1;
        }
        let mut term = 0.0;
        for (set, count) in counts {
            let e = match memo.get(&set) {
                Some(&e) => e,
                None => {
                    let mut e = 0.0;
                    let table = mu.table(&set)?;
                    for (j, p) in table.iter().enumerate() {
                        if !p.is_positive() {
                            continue;
                        }
                        let phi = decode(j, set.len(), inst.q);
                        let cond = condition(mu, &set, &phi)?;
                        e += to_f64(p) * solution_total_correlation(&cond, inst)?;
                    }
                    memo.insert(set, e);
                    e
                }
            };
            term += count as f64 / tuples as f64 * e;
        }
        terms.push(term);
    }
    Ok(terms)
}

/// SA value of `μ | φ_T` for every `|T| ≤ level - k` and positive-mass `φ_T`,
/// in enumeration order.
pub fn conditioned_values(mu: &SaSolution, inst: &CspInstance) -> Result<Vec<(Vec<usize>, Vec<usize>, Rational)>> {
    check_compatible(mu, inst)?;
    let mut out = Vec::new();
    for t in subsets_up_to(inst.n, mu.level - inst.k) {
        let table = mu.table(&t)?;
        for (j, p) in table.iter().enumerate() {
            if !p.is_positive() {
                continue;
            }
            let phi = decode(j, t.len(), inst.q);
            let v = sa_value(&condition(mu, &t, &phi)?, inst)?;
            out.push((t.clone(), phi, v));
        }
    }
    Ok(out)
}

/// Level-`level` solution of a random global distribution; for tests.
pub fn random_global_solution(n: usize, q: usize, level: usize, seed: u64) -> Result<SaSolution> {
    let mut rng = crate::rng::SeededRng::new(seed);
    let size = pow(q, n);
    let raw: Vec<u64> = (0..size)
        .map(|_| if rng.below(4) == 0 { 0 } else { 1 + rng.below(9) as u64 })
        .collect();
    let total: u64 = raw.iter().sum::<u64>().max(1);
    let dist: Vec<Rational> = if raw.iter().all(|&x| x == 0) {
        let mut d = vec![Rational::zero(); size];
        d[0] = Rational::one();
        d
    } else {
        raw.iter()
            .map(|&x| Rational::new(BigInt::from(x), BigInt::from(total)))
            .collect()
    };
    SaSolution::from_global(n, q, level, &dist)
}

/// `lambda` as a float, clipped into `[0, 1]`.
pub fn lambda_f64(res: &SacResult) -> f64 {
    res.lambda.to_f64().unwrap_or(0.0).clamp(0.0, 1.0)
}
