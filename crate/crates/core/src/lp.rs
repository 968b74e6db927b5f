//! Two-phase dense-tableau simplex over exact rationals or `f64`.
//!
//! Programs are stated with nonnegative variables, sparse rows
//! `Σ a_j x_j {≤,=,≥} b`, optional upper bounds, and a linear objective to be
//! maximised. Phase 1 minimises the sum of artificial variables; phase 2
//! optimises the objective from the phase-1 basis. Pivot selection follows
//! Bland's rule (lowest-index entering column with positive reduced cost,
//! lowest-index basic variable among ratio-test ties), so no basis repeats.

use std::fmt::Write as _;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{to_f64, Rational};

/// Feasibility tolerance in floating mode.
pub const FLOAT_FEASIBILITY_TOL: f64 = 1e-9;
/// Entries smaller than this are treated as zero by the floating pivots.
const FLOAT_PIVOT_EPS: f64 = 1e-11;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub rows: Vec<Row>,
    /// Maximised; empty for pure feasibility problems.
    pub objective: Vec<(usize, Rational)>,
    pub upper_bounds: Vec<Option<Rational>>,
    pub var_names: Option<Vec<String>>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            upper_bounds: vec![None; num_vars],
            ..Default::default()
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) {
        self.rows.push(Row {
            coeffs,
            relation,
            rhs,
        });
    }

    /// Row from floating coefficients; rejects NaN and infinities.
    pub fn add_row_f64(&mut self, coeffs: &[(usize, f64)], relation: Relation, rhs: f64) -> Result<()> {
        let conv = |v: f64| {
            Rational::from_float(v).ok_or_else(|| Error::invalid(format!("non-finite coefficient {v}")))
        };
        let coeffs = coeffs
            .iter()
            .map(|&(j, v)| Ok((j, conv(v)?)))
            .collect::<Result<Vec<_>>>()?;
        self.add_row(coeffs, relation, conv(rhs)?);
        Ok(())
    }

    pub fn set_objective(&mut self, objective: Vec<(usize, Rational)>) {
        self.objective = objective;
    }

    pub fn set_upper_bound(&mut self, var: usize, bound: Rational) {
        if self.upper_bounds.len() < self.num_vars {
            self.upper_bounds.resize(self.num_vars, None);
        }
        self.upper_bounds[var] = Some(bound);
    }

    pub fn nonzeros(&self) -> usize {
        self.rows.iter().map(|r| r.coeffs.len()).sum()
    }

    pub fn check(&self) -> Result<()> {
        if self.upper_bounds.len() > self.num_vars {
            return Err(Error::invalid("more upper bounds than variables"));
        }
        let in_range = |j: usize| {
            if j < self.num_vars {
                Ok(())
            } else {
                Err(Error::invalid(format!(
                    "variable {j} out of range 0..{}",
                    self.num_vars
                )))
            }
        };
        for row in &self.rows {
            for (j, _) in &row.coeffs {
                in_range(*j)?;
            }
        }
        for (j, _) in &self.objective {
            in_range(*j)?;
        }
        for b in self.upper_bounds.iter().flatten() {
            if Signed::is_negative(b) {
                return Err(Error::invalid("negative upper bound"));
            }
        }
        Ok(())
    }

    /// Residual check: does `point` satisfy every row and bound?
    pub fn satisfied_by(&self, point: &[Rational]) -> bool {
        if point.len() != self.num_vars || point.iter().any(Signed::is_negative) {
            return false;
        }
        let bounds_ok = self
            .upper_bounds
            .iter()
            .zip(point)
            .all(|(b, v)| b.as_ref().is_none_or(|b| v <= b));
        bounds_ok
            && self.rows.iter().all(|row| {
                let lhs: Rational = row.coeffs.iter().map(|(j, a)| a * &point[*j]).sum();
                match row.relation {
                    Relation::Le => lhs <= row.rhs,
                    Relation::Eq => lhs == row.rhs,
                    Relation::Ge => lhs >= row.rhs,
                }
            })
    }

    /// Largest row violation of a floating point.
    pub fn max_violation_f64(&self, point: &[f64]) -> f64 {
        let mut worst = point.iter().fold(0.0f64, |w, &v| w.max(-v));
        for (b, v) in self.upper_bounds.iter().zip(point) {
            if let Some(b) = b {
                worst = worst.max(v - to_f64(b));
            }
        }
        for row in &self.rows {
            let lhs: f64 = row.coeffs.iter().map(|(j, a)| to_f64(a) * point[*j]).sum();
            let rhs = to_f64(&row.rhs);
            let v = match row.relation {
                Relation::Le => lhs - rhs,
                Relation::Eq => (lhs - rhs).abs(),
                Relation::Ge => rhs - lhs,
            };
            worst = worst.max(v);
        }
        worst
    }

    pub fn objective_at(&self, point: &[Rational]) -> Rational {
        self.objective.iter().map(|(j, c)| c * &point[*j]).sum()
    }

    /// CPLEX LP text, for cross-checking with external solvers.
    pub fn to_lp_format(&self) -> String {
        let name = |j: usize| match &self.var_names {
            Some(names) => names[j].clone(),
            None => format!("x{j}"),
        };
        let term_list = |coeffs: &[(usize, Rational)]| {
            let mut s = String::new();
            for (i, (j, a)) in coeffs.iter().enumerate() {
                let v = to_f64(a);
                if i == 0 {
                    let _ = write!(s, "{v} {}", name(*j));
                } else if v < 0.0 {
                    let _ = write!(s, " - {} {}", -v, name(*j));
                } else {
                    let _ = write!(s, " + {v} {}", name(*j));
                }
            }
            if s.is_empty() {
                s.push_str("0 x0");
            }
            s
        };
        let mut out = String::from("\\ densecsp export\nMaximize\n obj: ");
        out.push_str(&term_list(&self.objective));
        out.push_str("\nSubject To\n");
        for (i, row) in self.rows.iter().enumerate() {
            let rel = match row.relation {
                Relation::Le => "<=",
                Relation::Eq => "=",
                Relation::Ge => ">=",
            };
            let _ = writeln!(out, " r{i}: {} {rel} {}", term_list(&row.coeffs), to_f64(&row.rhs));
        }
        out.push_str("Bounds\n");
        for j in 0..self.num_vars {
            match self.upper_bounds.get(j).and_then(|b| b.as_ref()) {
                Some(b) => {
                    let _ = writeln!(out, " 0 <= {} <= {}", name(j), to_f64(b));
                }
                None => {
                    let _ = writeln!(out, " {} >= 0", name(j));
                }
            }
        }
        out.push_str("End\n");
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpOutcome<S> {
    pub status: LpStatus,
    /// Primal point (feasible whenever status is `Optimal`; for `Unbounded`
    /// the last feasible vertex visited).
    pub point: Vec<S>,
    pub objective: S,
    pub pivots: usize,
}

impl<S> LpOutcome<S> {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// Field operations the tableau needs.
pub trait Scalar: Clone + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn neg(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    /// `self -= a · b`
    fn sub_mul(&mut self, a: &Self, b: &Self);
    /// Strict comparison for the ratio test; the floating version treats
    /// nearly equal ratios as ties.
    /// Ratio-test comparison; the floating version treats nearly equal
    /// ratios as ties so the lowest-index rule still applies.
    fn less_than(&self, other: &Self) -> bool;
    /// Phase-1 optimum counts as zero (feasible).
    fn feasible_residual(&self) -> bool;
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn sub_mul(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }
    fn less_than(&self, other: &Self) -> bool {
        self < other
    }
    fn feasible_residual(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rational(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
    fn is_zero(&self) -> bool {
        self.abs() <= FLOAT_PIVOT_EPS
    }
    fn is_positive(&self) -> bool {
        *self > FLOAT_PIVOT_EPS
    }
    fn is_negative(&self) -> bool {
        *self < -FLOAT_PIVOT_EPS
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn sub_mul(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }
    fn less_than(&self, other: &Self) -> bool {
        *self < *other - FLOAT_PIVOT_EPS * other.abs().max(1.0)
    }
    fn feasible_residual(&self) -> bool {
        self.abs() <= FLOAT_FEASIBILITY_TOL
    }
}

struct Tableau<S> {
    /// `rows[i]` has `cols` coefficients followed by the rhs.
    rows: Vec<Vec<S>>,
    /// Reduced costs `c_j - c_B B^-1 a_j` followed by `-(objective value)`.
    cost: Vec<S>,
    basis: Vec<usize>,
    cols: usize,
    structural: usize,
    first_artificial: usize,
    pivots: usize,
}

impl<S: Scalar> Tableau<S> {
    fn build(lp: &LinearProgram) -> Self {
        // bound rows become ordinary ≤ rows
        let mut rows: Vec<(Vec<(usize, S)>, Relation, S)> = Vec::new();
        for row in &lp.rows {
            let mut dense: Vec<(usize, S)> = Vec::with_capacity(row.coeffs.len());
            let mut sorted = row.coeffs.clone();
            sorted.sort_by_key(|(j, _)| *j);
            for (j, a) in sorted {
                match dense.last_mut() {
                    Some((last, v)) if *last == j => *v = v.add(&S::from_rational(&a)),
                    _ => dense.push((j, S::from_rational(&a))),
                }
            }
            rows.push((dense, row.relation, S::from_rational(&row.rhs)));
        }
        for (j, b) in lp.upper_bounds.iter().enumerate() {
            if let Some(b) = b {
                rows.push((vec![(j, S::one())], Relation::Le, S::from_rational(b)));
            }
        }
        for (coeffs, rel, rhs) in &mut rows {
            // a ≥ row with zero rhs becomes a ≤ row with a basic slack
            if rhs.is_negative() || (rhs.is_zero() && *rel == Relation::Ge) {
                for (_, a) in coeffs.iter_mut() {
                    *a = a.neg();
                }
                *rhs = rhs.neg();
                *rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
        }

        let n = lp.num_vars;
        let slack_count = rows
            .iter()
            .filter(|(_, r, _)| *r != Relation::Eq)
            .count();
        let art_count = rows
            .iter()
            .filter(|(_, r, _)| *r != Relation::Le)
            .count();
        let first_artificial = n + slack_count;
        let cols = first_artificial + art_count;

        let mut tab_rows = Vec::with_capacity(rows.len());
        let mut basis = Vec::with_capacity(rows.len());
        let mut next_slack = n;
        let mut next_art = first_artificial;
        for (coeffs, rel, rhs) in rows {
            let mut dense = vec![S::zero(); cols + 1];
            for (j, a) in coeffs {
                dense[j] = a;
            }
            dense[cols] = rhs;
            match rel {
                Relation::Le => {
                    dense[next_slack] = S::one();
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    dense[next_slack] = S::one().neg();
                    next_slack += 1;
                    dense[next_art] = S::one();
                    basis.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    dense[next_art] = S::one();
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            tab_rows.push(dense);
        }

        Tableau {
            rows: tab_rows,
            cost: vec![S::zero(); cols + 1],
            basis,
            cols,
            structural: n,
            first_artificial,
            pivots: 0,
        }
    }

    /// Installs the reduced-cost row for objective `c` (indexed by column).
    fn price(&mut self, c: &[S]) {
        let mut cost: Vec<S> = c.to_vec();
        cost.resize(self.cols, S::zero());
        cost.push(S::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &c[b];
            if cb.is_zero() {
                continue;
            }
            for (j, a) in self.rows[i].iter().enumerate() {
                if !a.is_zero() {
                    cost[j].sub_mul(cb, a);
                }
            }
        }
        self.cost = cost;
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let inv = S::one().div(&self.rows[r][e]);
        for a in self.rows[r].iter_mut() {
            if !a.is_zero() {
                *a = a.mul(&inv);
            }
        }
        self.rows[r][e] = S::one();
        let support: Vec<usize> = (0..=self.cols)
            .filter(|&j| !self.rows[r][j].is_zero())
            .collect();
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[e].is_zero() {
                continue;
            }
            let f = row[e].clone();
            for &j in &support {
                row[j].sub_mul(&f, &pivot_row[j]);
            }
            row[e] = S::zero();
        }
        if !self.cost[e].is_zero() {
            let f = self.cost[e].clone();
            for &j in &support {
                self.cost[j].sub_mul(&f, &pivot_row[j]);
            }
            self.cost[e] = S::zero();
        }
        self.basis[r] = e;
        self.pivots += 1;
    }

    /// Runs Bland-rule pivots over columns `< col_limit`. Returns false if
    /// an improving column has no ratio-test bound.
    fn optimize(&mut self, col_limit: usize) -> bool {
        loop {
            let Some(e) = (0..col_limit).find(|&j| self.cost[j].is_positive()) else {
                return true;
            };
            let mut leave: Option<(usize, S)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = &row[e];
                if !a.is_positive() {
                    continue;
                }
                let ratio = row[self.cols].div(a);
                let better = match &leave {
                    None => true,
                    Some((li, best)) => {
                        ratio.less_than(best)
                            || (!best.less_than(&ratio) && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, e),
                None => return false,
            }
        }
    }

    fn point(&self) -> Vec<S> {
        let mut x = vec![S::zero(); self.structural];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.structural {
                x[b] = self.rows[i][self.cols].clone();
            }
        }
        x
    }

    /// Phase 1. Returns false when infeasible. On success no artificial
    /// column remains basic (redundant rows are dropped).
    fn phase_one(&mut self) -> bool {
        if self.first_artificial == self.cols {
            return true;
        }
        let mut c = vec![S::zero(); self.cols];
        for slot in c.iter_mut().skip(self.first_artificial) {
            *slot = S::one().neg();
        }
        self.price(&c);
        self.optimize(self.cols);
        // cost[cols] holds -(objective); objective = -Σ artificials
        let residual = self.cost[self.cols].clone();
        if !residual.feasible_residual() {
            return false;
        }
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.first_artificial {
                match (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(j) => {
                        self.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        self.rows.remove(i);
                        self.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        true
    }
}

fn run<S: Scalar>(lp: &LinearProgram, optimize: bool) -> Result<LpOutcome<S>> {
    lp.check()?;
    let mut tab = Tableau::<S>::build(lp);
    if !tab.phase_one() {
        return Ok(LpOutcome {
            status: LpStatus::Infeasible,
            point: Vec::new(),
            objective: S::zero(),
            pivots: tab.pivots,
        });
    }
    let mut c = vec![S::zero(); tab.cols];
    for (j, v) in &lp.objective {
        c[*j] = c[*j].add(&S::from_rational(v));
    }
    tab.price(&c);
    let bounded = !optimize || tab.optimize(tab.first_artificial);
    let point = tab.point();
    let objective = lp
        .objective
        .iter()
        .fold(S::zero(), |acc, (j, v)| acc.add(&S::from_rational(v).mul(&point[*j])));
    Ok(LpOutcome {
        status: if bounded {
            LpStatus::Optimal
        } else {
            LpStatus::Unbounded
        },
        point,
        objective,
        pivots: tab.pivots,
    })
}

/// Finds a feasible point (exact).
pub fn solve_feasibility(lp: &LinearProgram) -> Result<LpOutcome<Rational>> {
    run(lp, false)
}

/// Maximises the objective (exact).
pub fn maximize(lp: &LinearProgram) -> Result<LpOutcome<Rational>> {
    run(lp, true)
}

pub fn solve_feasibility_f64(lp: &LinearProgram) -> Result<LpOutcome<f64>> {
    run(lp, false)
}

pub fn maximize_f64(lp: &LinearProgram) -> Result<LpOutcome<f64>> {
    run(lp, true)
}
