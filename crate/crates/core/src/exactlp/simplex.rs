//! Dense two-phase primal simplex over exact rationals.
//!
//! Variables are free. Internally each variable `x_k` is split into
//! `x_k⁺ - x_k⁻`, inequality rows get a slack, and rows without a usable
//! slack get an artificial variable. Pivoting follows Bland's rule over the
//! fixed column order `x_0⁺, x_0⁻, x_1⁺, …, slacks, artificials`, so the
//! result is a deterministic function of the input.
//!
//! Every non-optimal outcome carries a certificate that [`LpResult::verify`]
//! re-checks by substitution:
//! - infeasible: multipliers `y` with `Σ yᵢ aᵢ = 0`, `Σ yᵢ bᵢ < 0`,
//!   `yᵢ ≥ 0` on `≤` rows and `yᵢ ≤ 0` on `≥` rows;
//! - unbounded: a feasible point and an improving recession ray.

use std::mem;

use serde::Serialize;

use super::rational::{is_negative, is_positive, is_zero, one, zero, QVector, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct LinearConstraint {
    pub coeffs: QVector,
    pub relation: Relation,
    pub rhs: Rational,
}

impl LinearConstraint {
    pub fn new(coeffs: QVector, relation: Relation, rhs: Rational) -> Self {
        LinearConstraint { coeffs, relation, rhs }
    }

    pub fn is_satisfied(&self, x: &QVector) -> bool {
        let lhs = self.coeffs.dot(x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Debug)]
pub struct LpProblem {
    num_vars: usize,
    sense: Sense,
    objective: QVector,
    constraints: Vec<LinearConstraint>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpResult {
    pub status: LpStatus,
    /// Optimal objective value (only when `Optimal`).
    pub value: Option<Rational>,
    /// Optimal point, or a feasible point when `Unbounded`; empty when
    /// `Infeasible`.
    pub primal: QVector,
    /// Farkas multipliers (one per constraint) when `Infeasible`; the
    /// improving ray when `Unbounded`; empty when `Optimal`.
    pub certificate: QVector,
}

impl LpProblem {
    pub fn feasibility(num_vars: usize) -> Self {
        LpProblem {
            num_vars,
            sense: Sense::Maximize,
            objective: QVector::zeros(num_vars),
            constraints: Vec::new(),
        }
    }

    pub fn maximize(objective: QVector) -> Self {
        LpProblem {
            num_vars: objective.dim(),
            sense: Sense::Maximize,
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn minimize(objective: QVector) -> Self {
        LpProblem {
            num_vars: objective.dim(),
            sense: Sense::Minimize,
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn push(&mut self, c: LinearConstraint) -> &mut Self {
        self.constraints.push(c);
        self
    }

    pub fn le(&mut self, coeffs: QVector, rhs: Rational) -> &mut Self {
        self.push(LinearConstraint::new(coeffs, Relation::Le, rhs))
    }

    pub fn ge(&mut self, coeffs: QVector, rhs: Rational) -> &mut Self {
        self.push(LinearConstraint::new(coeffs, Relation::Ge, rhs))
    }

    pub fn eq(&mut self, coeffs: QVector, rhs: Rational) -> &mut Self {
        self.push(LinearConstraint::new(coeffs, Relation::Eq, rhs))
    }

    pub fn objective_value(&self, x: &QVector) -> Rational {
        self.objective.dot(x)
    }

    pub fn is_feasible_point(&self, x: &QVector) -> bool {
        x.dim() == self.num_vars && self.constraints.iter().all(|c| c.is_satisfied(x))
    }

    pub fn solve(&self) -> Result<LpResult> {
        if self.objective.dim() != self.num_vars {
            return Err(Error::Dimension(format!(
                "objective has {} entries for {} variables",
                self.objective.dim(),
                self.num_vars
            )));
        }
        if let Some(c) = self.constraints.iter().find(|c| c.coeffs.dim() != self.num_vars) {
            return Err(Error::Dimension(format!(
                "constraint has {} coefficients for {} variables",
                c.coeffs.dim(),
                self.num_vars
            )));
        }
        Ok(Solver::build(self).run(self))
    }
}

impl LpResult {
    /// Exact re-check of the claimed status by substitution.
    pub fn verify(&self, lp: &LpProblem) -> bool {
        match self.status {
            LpStatus::Optimal => {
                lp.is_feasible_point(&self.primal) && self.value.as_ref() == Some(&lp.objective_value(&self.primal))
            }
            LpStatus::Infeasible => verify_farkas(lp, &self.certificate),
            LpStatus::Unbounded => {
                let ray = &self.certificate;
                let improving = match lp.sense {
                    Sense::Maximize => is_positive(&lp.objective.dot(ray)),
                    Sense::Minimize => is_negative(&lp.objective.dot(ray)),
                };
                lp.is_feasible_point(&self.primal)
                    && ray.dim() == lp.num_vars
                    && improving
                    && lp.constraints.iter().all(|c| {
                        let d = c.coeffs.dot(ray);
                        match c.relation {
                            Relation::Le => !is_positive(&d),
                            Relation::Ge => !is_negative(&d),
                            Relation::Eq => is_zero(&d),
                        }
                    })
            }
        }
    }
}

/// Checks a Farkas certificate of infeasibility against `lp`'s constraints.
pub fn verify_farkas(lp: &LpProblem, y: &QVector) -> bool {
    if y.dim() != lp.constraints.len() {
        return false;
    }
    let mut combo = QVector::zeros(lp.num_vars);
    let mut rhs = zero();
    for (c, yi) in lp.constraints.iter().zip(y.iter()) {
        let sign_ok = match c.relation {
            Relation::Le => !is_negative(yi),
            Relation::Ge => !is_positive(yi),
            Relation::Eq => true,
        };
        if !sign_ok {
            return false;
        }
        combo.axpy(yi, &c.coeffs);
        rhs += yi * &c.rhs;
    }
    combo.is_zero() && is_negative(&rhs)
}

enum Phase {
    Optimal,
    Unbounded(usize),
}

struct Solver {
    n: usize,
    /// Constraint rows; the last entry of each row is the right-hand side.
    rows: Vec<Vec<Rational>>,
    /// Reduced costs; the last entry is minus the current objective.
    obj: Vec<Rational>,
    basis: Vec<usize>,
    ncols: usize,
    first_artificial: usize,
    /// Column that formed the initial identity for each row.
    init_col: Vec<usize>,
    /// ±1 sign applied to make each right-hand side nonnegative.
    flip: Vec<bool>,
}

impl Solver {
    fn build(lp: &LpProblem) -> Solver {
        let n = lp.num_vars;
        let m = lp.constraints.len();
        let num_slack = lp.constraints.iter().filter(|c| c.relation != Relation::Eq).count();
        let slack_base = 2 * n;
        let art_base = slack_base + num_slack;

        let mut flip = Vec::with_capacity(m);
        let mut needs_art = Vec::with_capacity(m);
        let mut slack_of = Vec::with_capacity(m);
        let mut next_slack = slack_base;
        for c in &lp.constraints {
            let f = is_negative(&c.rhs);
            flip.push(f);
            let slack = match c.relation {
                Relation::Eq => None,
                Relation::Le | Relation::Ge => {
                    let s = next_slack;
                    next_slack += 1;
                    let coef_pos = (c.relation == Relation::Le) != f;
                    Some((s, coef_pos))
                }
            };
            needs_art.push(!matches!(slack, Some((_, true))));
            slack_of.push(slack);
        }
        let num_art = needs_art.iter().filter(|&&a| a).count();
        let ncols = art_base + num_art;

        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut init_col = Vec::with_capacity(m);
        let mut next_art = art_base;
        for (i, c) in lp.constraints.iter().enumerate() {
            let mut row = vec![zero(); ncols + 1];
            for (k, a) in c.coeffs.iter().enumerate() {
                if is_zero(a) {
                    continue;
                }
                let a = if flip[i] { -a } else { a.clone() };
                row[2 * k + 1] = -a.clone();
                row[2 * k] = a;
            }
            if let Some((s, pos)) = slack_of[i] {
                row[s] = if pos { one() } else { -one() };
            }
            row[ncols] = if flip[i] { -c.rhs.clone() } else { c.rhs.clone() };
            let col = if needs_art[i] {
                let a = next_art;
                next_art += 1;
                row[a] = one();
                a
            } else {
                slack_of[i].unwrap().0
            };
            basis.push(col);
            init_col.push(col);
            rows.push(row);
        }

        let mut obj = vec![zero(); ncols + 1];
        for o in &mut obj[art_base..ncols] {
            *o = one();
        }
        for (i, row) in rows.iter().enumerate() {
            if basis[i] >= art_base {
                for (o, v) in obj.iter_mut().zip(row) {
                    if !is_zero(v) {
                        *o -= v;
                    }
                }
            }
        }

        Solver {
            n,
            rows,
            obj,
            basis,
            ncols,
            first_artificial: art_base,
            init_col,
            flip,
        }
    }

    fn run(mut self, lp: &LpProblem) -> LpResult {
        let Phase::Optimal = self.iterate(self.ncols) else {
            unreachable!("phase one objective is bounded below by zero");
        };
        if is_positive(&-self.obj[self.ncols].clone()) {
            return self.infeasible();
        }
        self.drive_out_artificials();

        let mut cost = vec![zero(); self.ncols];
        for (k, ck) in lp.objective.iter().enumerate() {
            let c = match lp.sense {
                Sense::Minimize => ck.clone(),
                Sense::Maximize => -ck,
            };
            cost[2 * k + 1] = -c.clone();
            cost[2 * k] = c;
        }
        let mut obj = vec![zero(); self.ncols + 1];
        obj[..self.ncols].clone_from_slice(&cost);
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if is_zero(cb) {
                continue;
            }
            for (o, v) in obj.iter_mut().zip(row) {
                if !is_zero(v) {
                    *o -= cb * v;
                }
            }
        }
        self.obj = obj;

        match self.iterate(self.first_artificial) {
            Phase::Optimal => {
                let primal = self.primal();
                LpResult {
                    status: LpStatus::Optimal,
                    value: Some(lp.objective_value(&primal)),
                    primal,
                    certificate: QVector::default(),
                }
            }
            Phase::Unbounded(e) => {
                let mut z = vec![zero(); self.ncols];
                z[e] = one();
                for (i, row) in self.rows.iter().enumerate() {
                    z[self.basis[i]] = -row[e].clone();
                }
                LpResult {
                    status: LpStatus::Unbounded,
                    value: None,
                    primal: self.primal(),
                    certificate: self.to_x(&z),
                }
            }
        }
    }

    /// Bland's-rule simplex on the current objective row, letting only
    /// columns below `allowed` enter.
    fn iterate(&mut self, allowed: usize) -> Phase {
        let rhs = self.ncols;
        loop {
            let Some(e) = (0..allowed).find(|&j| is_negative(&self.obj[j])) else {
                return Phase::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !is_positive(&row[e]) {
                    continue;
                }
                let ratio = &row[rhs] / &row[e];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return Phase::Unbounded(e),
                Some((r, _)) => self.pivot(r, e),
            }
        }
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let mut prow = mem::take(&mut self.rows[r]);
        let inv = one() / &prow[e];
        for v in prow.iter_mut() {
            if !is_zero(v) {
                *v *= &inv;
            }
        }
        let nz: Vec<usize> = (0..prow.len()).filter(|&k| !is_zero(&prow[k])).collect();
        let eliminate = |row: &mut Vec<Rational>| {
            if is_zero(&row[e]) {
                return;
            }
            let f = row[e].clone();
            for &k in &nz {
                row[k] -= &f * &prow[k];
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.rows[r] = prow;
        self.basis[r] = e;
    }

    fn drive_out_artificials(&mut self) {
        for i in 0..self.rows.len() {
            if self.basis[i] < self.first_artificial {
                continue;
            }
            if let Some(j) = (0..self.first_artificial).find(|&j| !is_zero(&self.rows[i][j])) {
                self.pivot(i, j);
            }
            // Otherwise the row is redundant; its artificial stays basic at 0.
        }
    }

    fn infeasible(&self) -> LpResult {
        let y: QVector = (0..self.rows.len())
            .map(|i| {
                let col = self.init_col[i];
                let cost = if col >= self.first_artificial { one() } else { zero() };
                // π_i = c_col - c̄_col; the certificate is -π, unflipped.
                let pi = cost - &self.obj[col];
                if self.flip[i] {
                    pi
                } else {
                    -pi
                }
            })
            .collect();
        LpResult {
            status: LpStatus::Infeasible,
            value: None,
            primal: QVector::default(),
            certificate: y,
        }
    }

    fn primal(&self) -> QVector {
        let mut z = vec![zero(); self.ncols];
        for (i, row) in self.rows.iter().enumerate() {
            z[self.basis[i]] = row[self.ncols].clone();
        }
        self.to_x(&z)
    }

    fn to_x(&self, z: &[Rational]) -> QVector {
        (0..self.n).map(|k| &z[2 * k] - &z[2 * k + 1]).collect()
    }
}
