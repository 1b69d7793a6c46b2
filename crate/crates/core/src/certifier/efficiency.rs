//! Exact efficiency of a candidate for piecewise-affine objectives.
//!
//! `f` agrees with one affine map `F_s(y) = D_s y + e_s` on the closure of
//! each full-dimensional selection region. A feasible `y` in region `s`
//! dominates `x̄` iff `w = f(x̄) − F_s(y)` lies in `K ∖ {0}`, i.e. `Aw ≥ 0` and
//! `1ᵀAw > 0` (pointedness makes `Aw = 0` force `w = 0`). One LP per region
//! maximizes `1ᵀAw`, capped at 1 to stay bounded, or uncapped inside the unit
//! box around `x̄` when refining the witness.

use serde::Serialize;

use crate::error::Result;
use crate::exactlp::rational::{is_positive, one, QMatrix, QVector, Rational};
use crate::exactlp::simplex::{LinearConstraint, LpProblem, LpStatus};
use crate::funcalc::selection::{full_dimensional_cells, AffineTerm};
use crate::funcalc::AffinePiece;

use super::VopInstance;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EfficiencyResult {
    pub efficient: bool,
    /// A feasible point dominating the candidate, when not efficient.
    pub witness: Option<QVector>,
    /// False when the answer came from a finite grid search.
    pub exact: bool,
}

#[derive(Clone, Debug)]
struct Region {
    constraints: Vec<LinearConstraint>,
    pieces: Vec<AffinePiece>,
}

/// Selection regions meeting `Ω`, precomputed once per instance. A linear
/// perturbation `Cy` changes the affine maps but not the regions, so the
/// plan serves every sample of the perturbation oracle.
#[derive(Clone, Debug)]
pub struct EfficiencyPlan {
    n: usize,
    omega: Vec<LinearConstraint>,
    regions: Vec<Region>,
}

impl EfficiencyPlan {
    /// `None` when `f` has quadratic pieces or `Ω` is not polyhedral.
    pub fn new(inst: &VopInstance) -> Result<Option<Self>> {
        let Some(omega) = inst.omega.as_polyhedron() else {
            return Ok(None);
        };
        let terms: Option<Vec<AffineTerm>> = inst
            .f
            .components()
            .iter()
            .map(|c| AffineTerm::exact(one(), c))
            .collect();
        let Some(terms) = terms else {
            return Ok(None);
        };
        let n = inst.n();
        let mut regions = Vec::new();
        for cell in full_dimensional_cells(n, &terms, None)? {
            let mut lp = LpProblem::feasibility(n);
            for c in cell.constraints.iter().chain(&omega) {
                lp.push(c.clone());
            }
            if lp.solve()?.status == LpStatus::Optimal {
                regions.push(Region {
                    constraints: cell.constraints,
                    pieces: cell.pieces,
                });
            }
        }
        Ok(Some(EfficiencyPlan { n, omega, regions }))
    }

    pub fn region_count(&self) -> usize {
        self.regions.len()
    }

    /// Efficiency of `x̄` for `f + C·` (`C = None` means no perturbation).
    pub fn check(&self, inst: &VopInstance, xbar: &QVector, c: Option<&QMatrix>) -> Result<EfficiencyResult> {
        let value_at = |y: &QVector| perturbed_value(inst, c, y);
        let vbar = value_at(xbar);
        let a_rows = inst.k.a_rows();
        let mut plain = None;
        for region in &self.regions {
            if let Some(y) = self.dominating_point(region, &a_rows, &vbar, c, None)? {
                plain = Some(y);
                break;
            }
        }
        let Some(plain) = plain else {
            return Ok(EfficiencyResult {
                efficient: true,
                witness: None,
                exact: true,
            });
        };
        // Prefer the point within unit distance of the candidate that
        // improves most; the box keeps that LP bounded.
        let mut witness = plain;
        for region in &self.regions {
            if let Some(y) = self.dominating_point(region, &a_rows, &vbar, c, Some(xbar))? {
                witness = y;
                break;
            }
        }
        debug_assert!(inst.k.strictly_dominates(&value_at(&witness).sub(&vbar)));
        Ok(EfficiencyResult {
            efficient: false,
            witness: Some(witness),
            exact: true,
        })
    }

    fn dominating_point(
        &self,
        region: &Region,
        a_rows: &[QVector],
        vbar: &QVector,
        c: Option<&QMatrix>,
        center: Option<&QVector>,
    ) -> Result<Option<QVector>> {
        let n = self.n;
        // F(y) = D y + e with D's rows aᵢ + Cᵢ.
        let d_rows: Vec<QVector> = region
            .pieces
            .iter()
            .enumerate()
            .map(|(i, p)| match c {
                Some(c) => p.a.add(c.row(i)),
                None => p.a.clone(),
            })
            .collect();
        let gap: QVector = vbar.iter().zip(&region.pieces).map(|(v, p)| v - &p.b).collect();
        // aᵣᵀw = aᵣᵀ(v̄ − e) − (Dᵀaᵣ)ᵀy.
        let lin = |ar: &QVector| -> (QVector, Rational) {
            let mut coeff = QVector::zeros(n);
            for (ari, di) in ar.iter().zip(&d_rows) {
                coeff.axpy(ari, di);
            }
            (coeff, ar.dot(&gap))
        };
        let mut total = QVector::zeros(vbar.dim());
        for ar in a_rows {
            total = total.add(ar);
        }
        let (obj_coeff, obj_const) = lin(&total);
        let mut lp = LpProblem::maximize(obj_coeff.neg());
        for ar in a_rows {
            let (coeff, cst) = lin(ar);
            lp.le(coeff, cst);
        }
        if center.is_none() {
            lp.le(obj_coeff.neg(), one() - &obj_const);
        }
        for con in region.constraints.iter().chain(&self.omega) {
            lp.push(con.clone());
        }
        if let Some(xb) = center {
            for j in 0..n {
                lp.le(QVector::unit(n, j), &xb[j] + one());
                lp.ge(QVector::unit(n, j), &xb[j] - one());
            }
        }
        let res = lp.solve()?;
        if res.status == LpStatus::Optimal && is_positive(&(res.value.unwrap() + obj_const)) {
            return Ok(Some(res.primal));
        }
        Ok(None)
    }
}

/// `f(y) + Cy`.
pub fn perturbed_value(inst: &VopInstance, c: Option<&QMatrix>, y: &QVector) -> QVector {
    let v = inst.f.eval(y);
    match c {
        Some(c) => v.add(&c.mul_vec(y)),
        None => v,
    }
}

/// Re-checks that `y` is feasible and dominates `x̄` for `f + C·`.
pub fn verify_domination(inst: &VopInstance, xbar: &QVector, c: Option<&QMatrix>, y: &QVector) -> bool {
    y.dim() == inst.n()
        && inst.omega.contains(y)
        && inst
            .k
            .strictly_dominates(&perturbed_value(inst, c, y).sub(&perturbed_value(inst, c, xbar)))
}

/// Efficiency of `x̄`: exact by region LPs for piecewise-affine data,
/// otherwise a grid search around `x̄` that can only confirm domination.
pub fn efficiency_check(inst: &VopInstance, xbar: &QVector) -> Result<EfficiencyResult> {
    efficiency_check_perturbed(inst, xbar, None)
}

pub fn efficiency_check_perturbed(inst: &VopInstance, xbar: &QVector, c: Option<&QMatrix>) -> Result<EfficiencyResult> {
    match EfficiencyPlan::new(inst)? {
        Some(plan) => plan.check(inst, xbar, c),
        None => Ok(grid_search(inst, xbar, c)),
    }
}

fn grid_search(inst: &VopInstance, xbar: &QVector, c: Option<&QMatrix>) -> EfficiencyResult {
    let n = inst.n();
    // Keep the grid near 5000 points: steps per axis shrink with n.
    let half = match n {
        0 | 1 => 64,
        2 => 32,
        3 => 8,
        _ => 3,
    };
    let step = Rational::from_signeds(1, half.max(1) as i64);
    let mut idx = vec![-(half as i64); n];
    loop {
        let y: QVector = xbar
            .iter()
            .zip(&idx)
            .map(|(x, &k)| x + Rational::from(k) * &step)
            .collect();
        if verify_domination(inst, xbar, c, &y) {
            return EfficiencyResult {
                efficient: false,
                witness: Some(y),
                exact: true,
            };
        }
        let mut j = 0;
        while j < n {
            idx[j] += 1;
            if idx[j] <= half as i64 {
                break;
            }
            idx[j] = -(half as i64);
            j += 1;
        }
        if j == n {
            break;
        }
    }
    EfficiencyResult {
        efficient: true,
        witness: None,
        exact: false,
    }
}
