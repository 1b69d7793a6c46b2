//! Robust-efficiency verdicts from cone conditions at the candidate.
//!
//! Every intersection condition `C₁ ∩ C₂ = {0}` is decided twice: directly,
//! by the triviality LPs, and through its polar form
//! `pos(rows(C₁) ∪ rows(C₂)) = ℝⁿ`, by double description. The two answers
//! must agree; a disagreement is reported as an internal inconsistency.

mod efficiency;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlp::cone::{cone_is_trivial, ConeHRep, ConeVRep, Triviality};
use crate::exactlp::dd::dd_halfspaces_from_generators;
use crate::exactlp::rational::{QMatrix, QVector};
use crate::funcalc::{kconvexity_check, ConvexityWitness, KConvexity, ObjectiveVector, SubdiffPolytope};
use crate::geometry::{
    cq1_from_cones, g1_from_subdiffs, g2_cone, tangent_cone, ConicSupport, FeasibleSet, G2Cone, OrderingCone, Truth,
};

pub use efficiency::{
    efficiency_check, efficiency_check_perturbed, perturbed_value, verify_domination, EfficiencyPlan, EfficiencyResult,
};

/// `min f(x)` over `Ω` with respect to the order induced by `K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VopInstance {
    pub f: ObjectiveVector,
    pub omega: FeasibleSet,
    pub k: OrderingCone,
}

impl VopInstance {
    pub fn new(f: ObjectiveVector, omega: FeasibleSet, k: OrderingCone) -> Result<Self> {
        if f.len() < 2 {
            return Err(Error::Dimension(format!(
                "a vector problem needs at least two objectives, got {}",
                f.len()
            )));
        }
        if k.dim() != f.len() {
            return Err(Error::Dimension(format!(
                "ordering cone lives in R^{} but there are {} objectives",
                k.dim(),
                f.len()
            )));
        }
        omega.validate(f.dim())?;
        Ok(VopInstance { f, omega, k })
    }

    pub fn n(&self) -> usize {
        self.f.dim()
    }

    pub fn p(&self) -> usize {
        self.f.len()
    }

    /// Dimension of the constraint space for conic blocks, or the number of
    /// grid members for a discretized family.
    pub fn q(&self) -> Option<usize> {
        match &self.omega {
            FeasibleSet::Polyhedral { .. } => None,
            FeasibleSet::Conic { cone, .. } => Some(cone.dim()),
            FeasibleSet::Discretized { members, .. } => Some(members.len()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ConditionId {
    /// `T ∩ G₁ = {0}`.
    #[serde(rename = "T1i")]
    NecessaryIntersection,
    /// `T ∩ G₂ = {0}`.
    #[serde(rename = "T1ii")]
    SufficientIntersection,
    /// `co(−∂f(x̄)K*) + N = ℝⁿ`.
    #[serde(rename = "T2i")]
    NecessaryDual,
    /// `pos(⋃ ∂(μ∘f)(x̄)) + N = ℝⁿ`.
    #[serde(rename = "T2ii")]
    SufficientDual,
    /// `G₁ ∩ 𝒟 = {0}` for a conic block.
    #[serde(rename = "T3i")]
    ConicNecessary,
    /// `G₂ ∩ 𝒟 = {0}` for a conic block.
    #[serde(rename = "T3ii")]
    ConicSufficient,
    #[serde(rename = "CQ1")]
    Cq1,
    #[serde(rename = "Conic0NotInSubdiffG")]
    ZeroNotInConstraintSubdiff,
    /// The conic sufficient condition on a sampled semi-infinite family.
    #[serde(rename = "Discretized")]
    Discretized,
    #[serde(rename = "Gap")]
    Gap,
}

impl ConditionId {
    pub fn code(self) -> &'static str {
        match self {
            ConditionId::NecessaryIntersection => "T1i",
            ConditionId::SufficientIntersection => "T1ii",
            ConditionId::NecessaryDual => "T2i",
            ConditionId::SufficientDual => "T2ii",
            ConditionId::ConicNecessary => "T3i",
            ConditionId::ConicSufficient => "T3ii",
            ConditionId::Cq1 => "CQ1",
            ConditionId::ZeroNotInConstraintSubdiff => "Conic0NotInSubdiffG",
            ConditionId::Discretized => "Discretized",
            ConditionId::Gap => "Gap",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A nonzero direction in the intersection of two cones.
    Direction { d: QVector },
    /// Points where convexity fails.
    Convexity(ConvexityWitness),
    /// A perturbation and a feasible point dominating the candidate for it.
    Perturbation { c: QMatrix, y: QVector },
    /// A subgradient matrix (columns per objective) and a point of the
    /// linearized efficient set with zero gap value.
    Gap { xi: QMatrix, ybar: QVector },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub id: ConditionId,
    pub holds: Truth,
    pub witness: Option<Witness>,
    /// Whether `holds` was decided on exact cones.
    pub exact: bool,
    /// Whether the hypotheses under which the condition carries a
    /// conclusion were established.
    pub applicable: Truth,
    pub note: Option<String>,
}

impl ConditionReport {
    fn new(id: ConditionId, holds: Truth) -> Self {
        ConditionReport {
            id,
            holds,
            witness: None,
            exact: true,
            applicable: Truth::True,
            note: None,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        let note = note.into();
        self.note = Some(match self.note.take() {
            Some(old) => format!("{old}; {note}"),
            None => note,
        });
        self
    }

    pub fn direction(&self) -> Option<&QVector> {
        match &self.witness {
            Some(Witness::Direction { d }) => Some(d),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    RobustCertified,
    NotRobustCertified,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypotheses {
    pub omega_convex: Truth,
    pub f_k_convex: Truth,
    pub f_convexity_witness: Option<ConvexityWitness>,
    pub cq1: Truth,
    /// `Q`-convexity of the constraint map; absent for polyhedral sets.
    pub g_q_convex: Option<Truth>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub rule: String,
    pub hypotheses: Hypotheses,
    pub conditions: Vec<ConditionReport>,
    pub oracle_referral: bool,
    /// Set when the verdict rests on a finite sample of a semi-infinite
    /// constraint family.
    pub discretization_dependent: bool,
}

impl Verdict {
    pub fn condition(&self, id: ConditionId) -> Option<&ConditionReport> {
        self.conditions.iter().find(|c| c.id == id)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self.status {
            Status::NotRobustCertified => self
                .condition(ConditionId::NecessaryIntersection)
                .and_then(|c| c.witness.as_ref()),
            _ => None,
        }
    }
}

fn truth_of(k: &KConvexity) -> Truth {
    match k {
        KConvexity::Convex => Truth::True,
        KConvexity::NotConvex(_) => Truth::False,
        KConvexity::Unknown => Truth::Unknown,
    }
}

/// `pos(rows(a) ∪ rows(b)) = ℝⁿ`, by double description of the polar of
/// the sum. `None` past the dimension cap.
fn dual_sum_is_whole(a: &ConeHRep, b: &ConeHRep) -> Result<Option<bool>> {
    let gens: Vec<QVector> = a.rows().iter().chain(b.rows()).cloned().collect();
    match dd_halfspaces_from_generators(&ConeVRep::new(a.dim(), gens)?) {
        Ok(h) => Ok(Some(h.rows().is_empty())),
        Err(Error::Capability(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

struct PairCheck {
    trivial: Triviality,
    dual: Option<bool>,
}

fn check_pair(a: &ConeHRep, b: &ConeHRep, what: &str) -> Result<PairCheck> {
    let trivial = cone_is_trivial(&a.intersect(b)?);
    let dual = dual_sum_is_whole(a, b)?;
    if let Some(d) = dual {
        if d != trivial.is_trivial() {
            return Err(Error::Inconsistency(format!(
                "{what}: intersection triviality {} but polar sum spans the space: {d}",
                trivial.is_trivial()
            )));
        }
    }
    Ok(PairCheck { trivial, dual })
}

/// Decides `C₁ ∩ C₂ = {0}` and its polar form from a pair of cones known to
/// contain the true pair (`outer`, able to confirm) and a pair known to lie
/// inside it (`inner`, able to refute).
fn sandwich(
    primal: ConditionId,
    dual: ConditionId,
    outer: Option<(&ConeHRep, &ConeHRep)>,
    inner: Option<(&ConeHRep, &ConeHRep)>,
) -> Result<(ConditionReport, ConditionReport)> {
    let exact = matches!((outer, inner), (Some(o), Some(i)) if o == i);
    let what = primal.code();
    let out = outer.map(|(a, b)| check_pair(a, b, what)).transpose()?;
    let inn = if exact {
        None
    } else {
        inner.map(|(a, b)| check_pair(a, b, what)).transpose()?
    };
    let refuting = if exact { out.as_ref() } else { inn.as_ref() };

    let mut p = ConditionReport::new(primal, Truth::Unknown);
    let mut d = ConditionReport::new(dual, Truth::Unknown);
    p.exact = exact;
    d.exact = exact;
    if out.as_ref().is_some_and(|c| c.trivial.is_trivial()) {
        p.holds = Truth::True;
    } else if let Some(Triviality::Nontrivial(w)) = refuting.map(|c| &c.trivial) {
        p.holds = Truth::False;
        p.witness = Some(Witness::Direction { d: w.clone() });
    }
    if out.as_ref().and_then(|c| c.dual) == Some(true) {
        d.holds = Truth::True;
    } else if refuting.and_then(|c| c.dual) == Some(false) {
        d.holds = Truth::False;
    }
    let capped = out.iter().chain(&inn).any(|c| c.dual.is_none());
    if capped {
        d = d.with_note("double description dimension cap reached; polar form not evaluated");
    }
    if p.holds == Truth::Unknown {
        p = p.with_note(match (outer.is_some(), inner.is_some()) {
            (_, false) => "no cone known to lie inside the tangent cone",
            (false, _) => "no cone known to contain the tangent cone",
            _ => "inner and outer approximations disagree",
        });
    }
    Ok((p, d))
}

/// Everything the condition checks share at one candidate.
struct Analysis {
    g1: ConeHRep,
    g2: G2Cone,
    support: Option<ConicSupport>,
    /// A cone contained in `T_Ω(x̄)`.
    t_inner: Option<ConeHRep>,
    /// A cone containing `T_Ω(x̄)`.
    t_outer: Option<ConeHRep>,
    t_note: Option<String>,
    omega_convex: Truth,
    f_convexity: KConvexity,
    g_convexity: Option<KConvexity>,
}

impl Analysis {
    fn new(inst: &VopInstance, xbar: &QVector) -> Result<Self> {
        let n = inst.n();
        if xbar.dim() != n {
            return Err(Error::Dimension(format!(
                "candidate has {} entries, the problem lives in R^{n}",
                xbar.dim()
            )));
        }
        let t = tangent_cone(&inst.omega, xbar)?;
        let subdiffs: Vec<SubdiffPolytope> = inst.f.component_subdiffs(xbar);
        let g1 = g1_from_subdiffs(n, &subdiffs, &inst.k)?;
        let g2 = g2_cone(&inst.f, &inst.k, xbar)?;
        let support = inst.omega.conic_support(xbar)?;
        let g_convexity = match inst.omega {
            FeasibleSet::Polyhedral { .. } => None,
            _ => Some(inst.omega.constraint_convexity()?),
        };
        let (t_inner, t_outer) = if t.exact {
            (Some(t.cone.clone()), Some(t.cone.clone()))
        } else {
            let s = support
                .as_ref()
                .expect("approximate tangent cones come from a conic block");
            let inner = (!s.zero_in_subdiff_g).then(|| s.d_inner(n)).transpose()?;
            let outer = g_convexity
                .as_ref()
                .is_some_and(KConvexity::is_convex)
                .then(|| s.d_outer(n))
                .transpose()?;
            (inner, outer)
        };
        Ok(Analysis {
            g1,
            g2,
            support,
            t_inner,
            t_outer,
            t_note: t.note,
            omega_convex: inst.omega.is_convex()?,
            f_convexity: kconvexity_check(&inst.f, &inst.k)?,
            g_convexity,
        })
    }

    fn assert_g1_in_g2(&self) -> Result<()> {
        if !self.g2.outer().contains_cone(&self.g1)? {
            return Err(Error::Inconsistency(
                "G1 is not contained in G2 at the candidate".into(),
            ));
        }
        Ok(())
    }

    fn f_convex(&self) -> Truth {
        truth_of(&self.f_convexity)
    }

    fn t1_forms(&self) -> Result<(ConditionReport, ConditionReport)> {
        let (mut p, mut d) = sandwich(
            ConditionId::NecessaryIntersection,
            ConditionId::NecessaryDual,
            self.t_outer.as_ref().map(|t| (t, &self.g1)),
            self.t_inner.as_ref().map(|t| (t, &self.g1)),
        )?;
        if let Some(note) = &self.t_note {
            p = p.with_note(note.clone());
            d = d.with_note(note.clone());
        }
        d.applicable = self.omega_convex;
        Ok((p, d))
    }

    fn t2_forms(&self) -> Result<(ConditionReport, ConditionReport)> {
        let (mut p, mut d) = sandwich(
            ConditionId::SufficientIntersection,
            ConditionId::SufficientDual,
            self.t_outer.as_ref().map(|t| (t, self.g2.outer())),
            self.t_inner.as_ref().map(|t| (t, self.g2.inner())),
        )?;
        let applicable = and(self.omega_convex, self.f_convex());
        p.applicable = applicable;
        d.applicable = applicable;
        if self.g2.exact().is_none() {
            p = p.with_note("scalarized subdifferentials only bounded");
        }
        if let KConvexity::NotConvex(w) = &self.f_convexity {
            p = p.with_note(format!(
                "f is not K-convex: scalarization {} fails between {} and {}",
                w.scalarization, w.x, w.y
            ));
        }
        Ok((p, d))
    }

    fn zero_report(&self, s: &ConicSupport) -> ConditionReport {
        let holds = if !s.zero_in_subdiff_g {
            Truth::True
        } else if s.exact {
            Truth::False
        } else {
            Truth::Unknown
        };
        let mut r = ConditionReport::new(ConditionId::ZeroNotInConstraintSubdiff, holds);
        r.exact = s.exact || holds == Truth::True;
        if s.active.is_empty() {
            r = r.with_note("no active constraint");
        }
        r
    }

    /// `G₁ ∩ 𝒟` and `G₂ ∩ 𝒟`, with `𝒟` bracketed by the inner and outer
    /// gradient sets of the active constraints.
    fn conic_forms(&self, n: usize, s: &ConicSupport) -> Result<(ConditionReport, ConditionReport)> {
        let d_in = s.d_inner(n)?;
        let d_out = s.d_outer(n)?;
        let (mut nec, _) = sandwich(
            ConditionId::ConicNecessary,
            ConditionId::NecessaryDual,
            Some((&d_out, &self.g1)),
            Some((&d_in, &self.g1)),
        )?;
        let (mut suf, _) = sandwich(
            ConditionId::ConicSufficient,
            ConditionId::SufficientDual,
            Some((&d_out, self.g2.outer())),
            Some((&d_in, self.g2.inner())),
        )?;
        nec.applicable = Truth::from(!s.zero_in_subdiff_g);
        if s.zero_in_subdiff_g {
            nec = nec.with_note("0 may lie in the constraint subdifferential; branch not used for refutation");
        }
        let g_convex = self.g_convexity.as_ref().map_or(Truth::True, truth_of);
        suf.applicable = and(self.f_convex(), g_convex);
        Ok((nec, suf))
    }
}

fn and(a: Truth, b: Truth) -> Truth {
    match (a, b) {
        (Truth::True, Truth::True) => Truth::True,
        (Truth::False, _) | (_, Truth::False) => Truth::False,
        _ => Truth::Unknown,
    }
}

/// `T_Ω(x̄) ∩ G₁(x̄) = {0}`. A nonzero witness direction refutes robustness.
pub fn check_t1_necessary(inst: &VopInstance, xbar: &QVector) -> Result<ConditionReport> {
    Ok(Analysis::new(inst, xbar)?.t1_forms()?.0)
}

/// `T_Ω(x̄) ∩ G₂(x̄) = {0}`, with the convexity hypotheses in `applicable`.
pub fn check_t1_sufficient(inst: &VopInstance, xbar: &QVector) -> Result<ConditionReport> {
    Ok(Analysis::new(inst, xbar)?.t2_forms()?.0)
}

/// The polar forms `co(−∂f(x̄)K*) + N = ℝⁿ` and
/// `pos(⋃ ∂(μ∘f)(x̄)) + N = ℝⁿ`.
pub fn check_t2_forms(inst: &VopInstance, xbar: &QVector) -> Result<(ConditionReport, ConditionReport)> {
    let a = Analysis::new(inst, xbar)?;
    Ok((a.t1_forms()?.1, a.t2_forms()?.1))
}

/// Runs every condition and combines them: a violated necessary condition
/// refutes, a sufficient condition with established hypotheses certifies,
/// and anything else is referred to the perturbation oracle.
pub fn certify(inst: &VopInstance, xbar: &QVector) -> Result<Verdict> {
    let a = Analysis::new(inst, xbar)?;
    a.assert_g1_in_g2()?;
    let (t1i, t2i) = a.t1_forms()?;
    let (t1ii, t2ii) = a.t2_forms()?;
    if t1i.holds == Truth::False && t1ii.holds == Truth::True {
        return Err(Error::Inconsistency(
            "T ∩ G1 is nontrivial while T ∩ G2 is trivial".into(),
        ));
    }
    let cq1 = cq1_from_cones(&a.g1, &a.g2)?;
    let mut cq1_report = ConditionReport::new(ConditionId::Cq1, cq1);
    cq1_report.exact = a.g2.exact().is_some();

    let discretized = matches!(inst.omega, FeasibleSet::Discretized { .. });
    let mut conditions = vec![t1i, t1ii, t2i, t2ii];
    if let Some(s) = &a.support {
        let (nec, suf) = a.conic_forms(inst.n(), s)?;
        conditions.push(nec);
        if discretized {
            let (members, tau) = match &inst.omega {
                FeasibleSet::Discretized { members, tau } => (members.len(), tau),
                _ => unreachable!(),
            };
            let mut r = suf;
            r.id = ConditionId::Discretized;
            r = r.with_note(format!(
                "decided on {members} grid members with activity tolerance {tau}; the answer depends on the grid"
            ));
            conditions.push(r);
        } else {
            conditions.push(suf);
        }
        conditions.push(a.zero_report(s));
    }
    conditions.push(cq1_report);
    conditions.sort_by_key(|c| c.id);

    let hypotheses = Hypotheses {
        omega_convex: a.omega_convex,
        f_k_convex: a.f_convex(),
        f_convexity_witness: match &a.f_convexity {
            KConvexity::NotConvex(w) => Some(w.clone()),
            _ => None,
        },
        cq1,
        g_q_convex: a.g_convexity.as_ref().map(truth_of),
    };

    let find = |id: ConditionId| conditions.iter().find(|c| c.id == id);
    let t1i = find(ConditionId::NecessaryIntersection).unwrap();
    let t1ii = find(ConditionId::SufficientIntersection).unwrap();
    let conic_suf = find(ConditionId::ConicSufficient).or_else(|| find(ConditionId::Discretized));

    let (status, rule) = if t1i.holds == Truth::False {
        let via = if a.support.is_some() && !t1i.exact {
            " (through the cone of active constraint gradients, with 0 outside the constraint subdifferential)"
        } else {
            ""
        };
        (
            Status::NotRobustCertified,
            format!("necessary condition violated: nonzero direction in T ∩ G1{via}"),
        )
    } else if t1ii.holds == Truth::True && t1ii.applicable == Truth::True {
        let rule = if cq1 == Truth::True {
            "T ∩ G1 = {0} under CQ1 with Ω convex and f K-convex"
        } else {
            "T ∩ G2 = {0} with Ω convex and f K-convex"
        };
        (Status::RobustCertified, rule.to_string())
    } else if let Some(c) = conic_suf.filter(|c| c.holds == Truth::True && c.applicable == Truth::True) {
        let rule = if c.id == ConditionId::Discretized {
            "G2 ∩ D = {0} on the discretized family with f K-convex and convex members"
        } else {
            "G2 ∩ D = {0} with f K-convex and g Q-convex"
        };
        (Status::RobustCertified, rule.to_string())
    } else {
        (
            Status::Inconclusive,
            "no necessary condition violated and no sufficient condition established".to_string(),
        )
    };

    Ok(Verdict {
        oracle_referral: status == Status::Inconclusive,
        discretization_dependent: discretized && status != Status::Inconclusive,
        status,
        rule,
        hypotheses,
        conditions,
    })
}

/// Re-checks a direction witness of `T ∩ G₁` by substitution into freshly
/// built cones.
pub fn verify_direction(inst: &VopInstance, xbar: &QVector, d: &QVector) -> Result<bool> {
    verify_condition_direction(inst, xbar, ConditionId::NecessaryIntersection, d)
}

/// Re-checks the direction witness of condition `id`: a nonzero `d` in the
/// inner approximations of both cones the condition intersects.
pub fn verify_condition_direction(inst: &VopInstance, xbar: &QVector, id: ConditionId, d: &QVector) -> Result<bool> {
    let n = inst.n();
    if d.dim() != n || d.is_zero() {
        return Ok(false);
    }
    let a = Analysis::new(inst, xbar)?;
    let d_inner = a.support.as_ref().map(|s| s.d_inner(n)).transpose()?;
    let (t, g) = match id {
        ConditionId::NecessaryIntersection => (a.t_inner.as_ref(), &a.g1),
        ConditionId::SufficientIntersection => (a.t_inner.as_ref(), a.g2.inner()),
        ConditionId::ConicNecessary => (d_inner.as_ref(), &a.g1),
        ConditionId::ConicSufficient | ConditionId::Discretized => (d_inner.as_ref(), a.g2.inner()),
        _ => return Ok(false),
    };
    Ok(t.is_some_and(|t| t.contains(d)) && g.contains(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlp::rational::int;
    use crate::funcalc::{Piece, PieceFn};

    fn aff(a: &[i64], b: i64) -> Piece {
        Piece::affine(QVector::from_i64(a), int(b))
    }

    fn kink_pair() -> VopInstance {
        let f = ObjectiveVector::new(
            1,
            vec![
                PieceFn::Max(vec![aff(&[0], 0), aff(&[1], 0)]),
                PieceFn::Min(vec![aff(&[0], 0), aff(&[-1], 0)]),
            ],
        )
        .unwrap();
        let k = OrderingCone::from_hrep(2, vec![QVector::from_i64(&[1, 1]), QVector::from_i64(&[1, 0])]).unwrap();
        VopInstance::new(f, FeasibleSet::whole_space(), k).unwrap()
    }

    #[test]
    fn example_one_is_inconclusive() {
        let v = certify(&kink_pair(), &QVector::from_i64(&[0])).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
        assert!(v.oracle_referral);
        assert_eq!(
            v.condition(ConditionId::NecessaryIntersection).unwrap().holds,
            Truth::True
        );
        assert_eq!(
            v.condition(ConditionId::SufficientIntersection).unwrap().holds,
            Truth::False
        );
        assert_eq!(v.condition(ConditionId::NecessaryDual).unwrap().holds, Truth::True);
        assert_eq!(v.condition(ConditionId::SufficientDual).unwrap().holds, Truth::False);
        assert_eq!(v.hypotheses.cq1, Truth::False);
    }

    #[test]
    fn common_descent_is_refuted() {
        let f = ObjectiveVector::new(
            2,
            vec![
                PieceFn::affine(QVector::from_i64(&[1, 0]), int(0)),
                PieceFn::affine(QVector::from_i64(&[0, 1]), int(0)),
            ],
        )
        .unwrap();
        let inst = VopInstance::new(f, FeasibleSet::whole_space(), OrderingCone::nonneg_orthant(2)).unwrap();
        let x = QVector::from_i64(&[3, -1]);
        let v = certify(&inst, &x).unwrap();
        assert_eq!(v.status, Status::NotRobustCertified);
        let Some(Witness::Direction { d }) = v.witness() else {
            panic!()
        };
        assert!(verify_direction(&inst, &x, d).unwrap());
    }

    #[test]
    fn opposing_objectives_are_certified() {
        let f = ObjectiveVector::new(
            1,
            vec![
                PieceFn::affine(QVector::from_i64(&[1]), int(0)),
                PieceFn::affine(QVector::from_i64(&[-1]), int(0)),
            ],
        )
        .unwrap();
        let inst = VopInstance::new(f, FeasibleSet::whole_space(), OrderingCone::nonneg_orthant(2)).unwrap();
        let v = certify(&inst, &QVector::from_i64(&[5])).unwrap();
        assert_eq!(v.status, Status::RobustCertified);
    }

    #[test]
    fn example_one_is_efficient_unperturbed() {
        let r = efficiency_check(&kink_pair(), &QVector::from_i64(&[0])).unwrap();
        assert!(r.efficient && r.exact);
    }
}
