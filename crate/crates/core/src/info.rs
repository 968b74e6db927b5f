//! Entropy, KL divergence, mutual information and total correlation of
//! finite distributions, in nats.
//!
//! All quantities are floating point. `0 · log 0 = 0`, and conditional
//! quantities average over the support of the conditioning variable, weighted
//! by its marginal.

use crate::csp::CspInstance;
use crate::error::{Error, Result};
use crate::sa::SaSolution;
use crate::subset::{decode, encode, positions, subsets_of_size, underlying_set};

/// Tolerance for normalisation checks on floating inputs.
pub const NORMALIZATION_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteDistribution {
    probs: Vec<f64>,
}

impl FiniteDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        check_probs(&probs)?;
        Ok(FiniteDistribution { probs })
    }

    pub fn uniform(m: usize) -> Self {
        FiniteDistribution {
            probs: vec![1.0 / m as f64; m],
        }
    }

    pub fn point_mass(m: usize, at: usize) -> Self {
        let mut probs = vec![0.0; m];
        probs[at] = 1.0;
        FiniteDistribution { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.probs.len()).filter(|&i| self.probs[i] > 0.0).collect()
    }

    pub fn expect(&self, f: impl Fn(usize) -> f64) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(i, &p)| p * f(i))
            .sum()
    }
}

fn check_probs(probs: &[f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::invalid("empty outcome space"));
    }
    if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::invalid("probabilities must be finite and nonnegative"));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized(total));
    }
    Ok(())
}

/// Joint distribution over axes of sizes `dims`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution {
    dims: Vec<usize>,
    probs: Vec<f64>,
}

impl JointDistribution {
    pub fn new(dims: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        let size: usize = dims.iter().product();
        if dims.contains(&0) || size != probs.len() {
            return Err(Error::DimensionMismatch {
                expected: size,
                actual: probs.len(),
            });
        }
        check_probs(&probs)?;
        Ok(JointDistribution { dims, probs })
    }

    /// Product of independent marginals.
    pub fn product(marginals: &[FiniteDistribution]) -> Self {
        let dims: Vec<usize> = marginals.iter().map(|m| m.len()).collect();
        let size: usize = dims.iter().product();
        let probs = (0..size)
            .map(|i| {
                let idx = unravel(i, &dims);
                idx.iter()
                    .zip(marginals)
                    .map(|(&v, m)| m.probs[v])
                    .product()
            })
            .collect();
        JointDistribution { dims, probs }
    }

    pub fn axes(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn flatten(&self) -> FiniteDistribution {
        FiniteDistribution {
            probs: self.probs.clone(),
        }
    }

    /// Marginal onto `keep` (sorted axis indices), axes in the given order.
    pub fn marginal(&self, keep: &[usize]) -> JointDistribution {
        let dims: Vec<usize> = keep.iter().map(|&a| self.dims[a]).collect();
        let size: usize = dims.iter().product();
        let mut probs = vec![0.0; size.max(1)];
        for (i, &p) in self.probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let idx = unravel(i, &self.dims);
            let sub: Vec<usize> = keep.iter().map(|&a| idx[a]).collect();
            probs[ravel(&sub, &dims)] += p;
        }
        JointDistribution { dims, probs }
    }

    pub fn axis_marginal(&self, axis: usize) -> FiniteDistribution {
        FiniteDistribution {
            probs: self.marginal(&[axis]).probs,
        }
    }

    /// Distribution of the remaining axes given `axis = value`, together with
    /// the probability of that event. `None` if the event has zero mass.
    pub fn condition(&self, axis: usize, value: usize) -> Option<(f64, JointDistribution)> {
        let rest: Vec<usize> = (0..self.axes()).filter(|&a| a != axis).collect();
        let dims: Vec<usize> = rest.iter().map(|&a| self.dims[a]).collect();
        let size: usize = dims.iter().product();
        let mut probs = vec![0.0; size.max(1)];
        let mut mass = 0.0;
        for (i, &p) in self.probs.iter().enumerate() {
            let idx = unravel(i, &self.dims);
            if idx[axis] != value {
                continue;
            }
            let sub: Vec<usize> = rest.iter().map(|&a| idx[a]).collect();
            probs[ravel(&sub, &dims)] += p;
            mass += p;
        }
        if mass <= 0.0 {
            return None;
        }
        for p in &mut probs {
            *p /= mass;
        }
        Some((mass, JointDistribution { dims, probs }))
    }
}

fn unravel(mut i: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = i % d;
        i /= d;
    }
    out
}

fn ravel(idx: &[usize], dims: &[usize]) -> usize {
    idx.iter().zip(dims).fold(0, |acc, (&v, &d)| acc * d + v)
}

fn plogp_sum(probs: &[f64]) -> f64 {
    -probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum::<f64>()
}

pub fn entropy(d: &FiniteDistribution) -> f64 {
    plogp_sum(&d.probs)
}

pub fn joint_entropy(j: &JointDistribution) -> f64 {
    plogp_sum(&j.probs)
}

/// `Σ_{supp p} p log(p/q)`; `+∞` when `q` misses part of `supp(p)`.
pub fn kl_divergence(p: &FiniteDistribution, q: &FiniteDistribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            actual: q.len(),
        });
    }
    let mut acc = 0.0;
    for (&pi, &qi) in p.probs.iter().zip(&q.probs) {
        if pi > 0.0 {
            if qi <= 0.0 {
                return Ok(f64::INFINITY);
            }
            acc += pi * (pi / qi).ln();
        }
    }
    // rounding can leave tiny negatives on identical inputs
    Ok(acc.max(0.0))
}

/// Multivariate mutual information by inclusion-exclusion over the
/// nonempty axis subsets.
pub fn mutual_information(j: &JointDistribution) -> Result<f64> {
    if j.axes() < 2 {
        return Err(Error::invalid("mutual information needs at least 2 axes"));
    }
    Ok(inclusion_exclusion(j))
}

fn inclusion_exclusion(j: &JointDistribution) -> f64 {
    let n = j.axes();
    let mut acc = 0.0;
    for m in 1..=n {
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
        for axes in subsets_of_size(n, m) {
            acc += sign * joint_entropy(&j.marginal(&axes));
        }
    }
    acc
}

/// `I(x_1; ...; x_{n-1} | x_n)` with the last axis as the condition.
pub fn conditional_mutual_information(j: &JointDistribution) -> Result<f64> {
    if j.axes() < 3 {
        return Err(Error::invalid(
            "conditional mutual information needs at least 3 axes",
        ));
    }
    Ok(condition_average(j, inclusion_exclusion))
}

fn condition_average(j: &JointDistribution, f: impl Fn(&JointDistribution) -> f64) -> f64 {
    let last = j.axes() - 1;
    (0..j.dims[last])
        .filter_map(|v| j.condition(last, v))
        .map(|(mass, c)| mass * f(&c))
        .sum()
}

/// `C(x_1; ...; x_n) = D_KL(X ‖ X_1 × ... × X_n)`.
pub fn total_correlation(j: &JointDistribution) -> Result<f64> {
    if j.axes() == 0 {
        return Err(Error::invalid("total correlation needs at least 1 axis"));
    }
    let marginals: Vec<FiniteDistribution> = (0..j.axes()).map(|a| j.axis_marginal(a)).collect();
    let product = JointDistribution::product(&marginals);
    kl_divergence(&j.flatten(), &product.flatten())
}

/// `Σ_{|S| ≥ 2} (-1)^{|S|} I(x_S)`, which equals the total correlation.
pub fn signed_interaction_sum(j: &JointDistribution) -> f64 {
    let n = j.axes();
    let mut acc = 0.0;
    for m in 2..=n {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        for axes in subsets_of_size(n, m) {
            acc += sign * inclusion_exclusion(&j.marginal(&axes));
        }
    }
    acc
}

/// `C(x_1; ...; x_{n-1} | x_n)` with the last axis as the condition.
pub fn conditional_total_correlation(j: &JointDistribution) -> Result<f64> {
    if j.axes() < 2 {
        return Err(Error::invalid(
            "conditional total correlation needs at least 2 axes",
        ));
    }
    Ok(condition_average(j, |c| {
        total_correlation(c).expect("conditioned joint has an axis")
    }))
}

/// Joint law of the tuple `(x_{t_0}, ..., x_{t_{m-1}})` when the variables of
/// `set` are distributed by `table` (row-major over the sorted `set`).
/// Repeated tuple entries become perfectly correlated axes.
pub fn tuple_joint(table: &[f64], set: &[usize], tuple: &[usize], q: usize) -> JointDistribution {
    let pos = positions(tuple, set);
    let dims = vec![q; tuple.len()];
    let mut probs = vec![0.0; q.pow(tuple.len() as u32)];
    for (i, &p) in table.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let values = decode(i, set.len(), q);
        let sub: Vec<usize> = pos.iter().map(|&j| values[j]).collect();
        probs[encode(&sub, q)] += p;
    }
    JointDistribution { dims, probs }
}

/// `C(μ) = E_{S∼W}[C_μ(x_S)]`.
pub fn solution_total_correlation(mu: &SaSolution, inst: &CspInstance) -> Result<f64> {
    if mu.level() < inst.k {
        return Err(Error::LevelTooLow {
            level: mu.level(),
            required: inst.k,
        });
    }
    let mut acc = 0.0;
    for c in &inst.constraints {
        let w = crate::rational::to_f64(&c.weight);
        if w == 0.0 {
            continue;
        }
        acc += w * scope_total_correlation(mu, &c.scope)?;
    }
    Ok(acc)
}

/// `C_μ(x_S)` for one scope tuple.
pub fn scope_total_correlation(mu: &SaSolution, scope: &[usize]) -> Result<f64> {
    let set = underlying_set(scope);
    let table = mu.table_f64(&set)?;
    total_correlation(&tuple_joint(&table, &set, scope, mu.q()))
}
