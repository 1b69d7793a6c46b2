use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlp::cone::{ConeHRep, ConeVRep};
use crate::exactlp::rational::{is_negative, is_positive, qserde, QVector, Rational};
use crate::exactlp::simplex::{LinearConstraint, Relation};
use crate::funcalc::polytope::convex_membership;
use crate::funcalc::{
    clarke_subdiff_component, kconvexity_check, scalar_convexity, scalarized_subdiff, KConvexity, ObjectiveVector,
    PieceFn, DEFAULT_CONVEXITY_SEED,
};

use super::{OrderingCone, Truth};

/// One constraint `g_j(x) ≤ 0` of a sampled semi-infinite family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridMember {
    /// The grid parameter this member was sampled at.
    #[serde(with = "qserde")]
    pub index: Rational,
    #[serde(rename = "fn")]
    pub func: PieceFn,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FeasibleSet {
    /// `{x : Gx ≤ h}`; no rows means `ℝⁿ`.
    Polyhedral { g: Vec<QVector>, h: QVector },
    /// `{x : map(x) ∈ −Q}`.
    Conic { map: ObjectiveVector, cone: OrderingCone },
    /// `{x : g_j(x) ≤ 0 for every grid member}`, with members counted as
    /// active when `g_j(x̄) ≥ −τ`.
    Discretized {
        members: Vec<GridMember>,
        #[serde(with = "qserde")]
        tau: Rational,
    },
}

/// A cone together with whether it is the exact object or a one-sided
/// approximation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApproxCone<C> {
    pub cone: C,
    pub exact: bool,
    pub note: Option<String>,
}

/// Activity data of a conic or discretized constraint block at `x̄`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConicSupport {
    /// Active scalarizations: generators `λ` of `−Q*` with `λᵀg(x̄) = 0`,
    /// or unit vectors `e_j` for active grid members.
    pub active: Vec<QVector>,
    /// Union of subdifferential vertices over the active scalarizations,
    /// from outer bounds (a superset of the true union's hull).
    pub upsilon_outer: Vec<QVector>,
    /// Same from inner bounds (a subset).
    pub upsilon_inner: Vec<QVector>,
    /// Whether every active subdifferential was computed exactly.
    pub exact: bool,
    /// LP decision of `0 ∈ conv(Υ)` over the outer vertices; `false` when
    /// nothing is active.
    pub zero_in_subdiff_g: bool,
}

impl ConicSupport {
    /// `pos(Υ)`.
    pub fn upsilon(&self, n: usize) -> Result<ConeVRep> {
        ConeVRep::new(n, self.upsilon_outer.clone())
    }

    /// `𝒟 = {d : ζᵀd ≤ 0 for ζ ∈ Υ}` built from the outer vertices, so it
    /// is contained in the true `𝒟`.
    pub fn d_inner(&self, n: usize) -> Result<ConeHRep> {
        ConeHRep::new(n, self.upsilon_outer.clone())
    }

    /// `𝒟` built from the inner vertices, so it contains the true `𝒟`.
    pub fn d_outer(&self, n: usize) -> Result<ConeHRep> {
        ConeHRep::new(n, self.upsilon_inner.clone())
    }
}

impl FeasibleSet {
    pub fn whole_space() -> Self {
        FeasibleSet::Polyhedral {
            g: Vec::new(),
            h: QVector::default(),
        }
    }

    pub fn polyhedral(n: usize, g: Vec<QVector>, h: QVector) -> Result<Self> {
        let s = FeasibleSet::Polyhedral { g, h };
        s.validate(n)?;
        Ok(s)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            FeasibleSet::Polyhedral { g, h } => {
                if g.len() != h.dim() {
                    return Err(Error::Dimension(format!(
                        "{} constraint rows but {} right-hand sides",
                        g.len(),
                        h.dim()
                    )));
                }
                for r in g {
                    if r.dim() != n {
                        return Err(Error::Dimension(format!(
                            "constraint row has {} entries, expected {n}",
                            r.dim()
                        )));
                    }
                    if r.is_zero() {
                        return Err(Error::Parse("constraint rows must be nonzero".into()));
                    }
                }
                Ok(())
            }
            FeasibleSet::Conic { map, cone } => {
                if map.dim() != n {
                    return Err(Error::Dimension(format!(
                        "constraint map acts on R^{}, expected R^{n}",
                        map.dim()
                    )));
                }
                if map.len() != cone.dim() {
                    return Err(Error::Dimension(format!(
                        "constraint map has {} components but the cone lives in R^{}",
                        map.len(),
                        cone.dim()
                    )));
                }
                Ok(())
            }
            FeasibleSet::Discretized { members, tau } => {
                if members.is_empty() {
                    return Err(Error::Parse("the constraint grid is empty".into()));
                }
                if is_negative(tau) {
                    return Err(Error::Parse("the activity tolerance must be nonnegative".into()));
                }
                members.iter().try_for_each(|m| m.func.validate(n))
            }
        }
    }

    pub fn contains(&self, x: &QVector) -> bool {
        match self {
            FeasibleSet::Polyhedral { g, h } => g.iter().zip(h.iter()).all(|(r, hj)| r.dot(x) <= *hj),
            FeasibleSet::Conic { map, cone } => cone.contains(&map.eval(x).neg()),
            FeasibleSet::Discretized { members, .. } => members.iter().all(|m| !is_positive(&m.func.eval(x))),
        }
    }

    /// `{x : Gx ≤ h}` describing the set, when every constraint is affine.
    pub fn as_polyhedron(&self) -> Option<Vec<LinearConstraint>> {
        let le = |a: QVector, b: Rational| LinearConstraint::new(a, Relation::Le, b);
        match self {
            FeasibleSet::Polyhedral { g, h } => Some(
                g.iter()
                    .zip(h.iter())
                    .map(|(r, hj)| le(r.clone(), hj.clone()))
                    .collect(),
            ),
            FeasibleSet::Conic { map, cone } => {
                if !map.is_affine() {
                    return None;
                }
                let n = map.dim();
                let pieces: Vec<_> = map
                    .components()
                    .iter()
                    .map(|c| c.pieces()[0].linearize(&QVector::zeros(n)))
                    .collect();
                // map(x) ∈ −Q iff λᵀmap(x) ≤ 0 for every generator λ of −Q*.
                Some(
                    cone.dual_neg_gens()
                        .generators()
                        .iter()
                        .map(|lam| {
                            let mut a = QVector::zeros(n);
                            let mut b = Rational::from(0);
                            for (l, p) in lam.iter().zip(&pieces) {
                                a.axpy(l, &p.a);
                                b += l * &p.b;
                            }
                            le(a, -b)
                        })
                        .filter(|c| !c.coeffs.is_zero() || is_positive(&-c.rhs.clone()))
                        .collect(),
                )
            }
            FeasibleSet::Discretized { members, .. } => {
                if !members
                    .iter()
                    .all(|m| m.func.is_smooth() && m.func.is_piecewise_affine())
                {
                    return None;
                }
                Some(
                    members
                        .iter()
                        .map(|m| {
                            let p = m.func.pieces()[0].linearize(&QVector::zeros(m.func.dim()));
                            le(p.a, -p.b)
                        })
                        .collect(),
                )
            }
        }
    }

    /// Convexity of the set, established through convexity of its
    /// constraint functions. A nonconvex constraint map does not make the
    /// set nonconvex, so the answer is never `False`.
    pub fn is_convex(&self) -> Result<Truth> {
        Ok(match self {
            FeasibleSet::Polyhedral { .. } => Truth::True,
            FeasibleSet::Conic { .. } | FeasibleSet::Discretized { .. } if self.as_polyhedron().is_some() => {
                Truth::True
            }
            FeasibleSet::Conic { map, cone } => match kconvexity_check(map, cone)? {
                KConvexity::Convex => Truth::True,
                _ => Truth::Unknown,
            },
            FeasibleSet::Discretized { members, .. } => {
                for m in members {
                    let single = ObjectiveVector::new(m.func.dim(), vec![m.func.clone()])?;
                    let one = QVector::from_i64(&[1]);
                    if !scalar_convexity(&one, &single, DEFAULT_CONVEXITY_SEED)?.is_convex() {
                        return Ok(Truth::Unknown);
                    }
                }
                Truth::True
            }
        })
    }

    /// `Q`-convexity of the constraint map (convexity of every grid member
    /// for the discretized variant); polyhedral sets count as convex.
    pub fn constraint_convexity(&self) -> Result<KConvexity> {
        match self {
            FeasibleSet::Polyhedral { .. } => Ok(KConvexity::Convex),
            FeasibleSet::Conic { map, cone } => kconvexity_check(map, cone),
            FeasibleSet::Discretized { members, .. } => {
                let mut unknown = false;
                for m in members {
                    let single = ObjectiveVector::new(m.func.dim(), vec![m.func.clone()])?;
                    match scalar_convexity(&QVector::from_i64(&[1]), &single, DEFAULT_CONVEXITY_SEED)? {
                        KConvexity::Convex => {}
                        KConvexity::Unknown => unknown = true,
                        nc @ KConvexity::NotConvex(_) => return Ok(nc),
                    }
                }
                Ok(if unknown {
                    KConvexity::Unknown
                } else {
                    KConvexity::Convex
                })
            }
        }
    }

    pub fn active_rows(&self, xbar: &QVector) -> Vec<usize> {
        match self {
            FeasibleSet::Polyhedral { g, h } => (0..g.len()).filter(|&j| g[j].dot(xbar) == h[j]).collect(),
            _ => Vec::new(),
        }
    }

    /// Active scalarizations, `Υ` and the `0 ∈ ∂G` test for conic and
    /// discretized sets. `None` for polyhedral sets.
    pub fn conic_support(&self, xbar: &QVector) -> Result<Option<ConicSupport>> {
        let n = xbar.dim();
        let (active, parts) = match self {
            FeasibleSet::Polyhedral { .. } => return Ok(None),
            FeasibleSet::Conic { map, cone } => {
                let gx = map.eval(xbar);
                let mut active = Vec::new();
                let mut parts = Vec::new();
                for lam in cone.dual_neg_gens().generators() {
                    if lam.dot(&gx) == 0 {
                        let s = scalarized_subdiff(lam, map, xbar)?;
                        parts.push((s.inner().clone(), s.outer().clone(), s.is_exact()));
                        active.push(lam.clone());
                    }
                }
                (active, parts)
            }
            FeasibleSet::Discretized { members, tau } => {
                let q = members.len();
                let mut active = Vec::new();
                let mut parts = Vec::new();
                for (j, m) in members.iter().enumerate() {
                    if m.func.eval(xbar) >= -tau.clone() {
                        let s = clarke_subdiff_component(&m.func, xbar);
                        parts.push((s.clone(), s, true));
                        active.push(QVector::unit(q, j));
                    }
                }
                (active, parts)
            }
        };
        let mut upsilon_outer = Vec::new();
        let mut upsilon_inner = Vec::new();
        let mut exact = true;
        for (inner, outer, ex) in parts {
            upsilon_inner.extend(inner.vertices().iter().cloned());
            upsilon_outer.extend(outer.vertices().iter().cloned());
            exact &= ex;
        }
        for u in [&mut upsilon_outer, &mut upsilon_inner] {
            u.sort();
            u.dedup();
        }
        let zero_in_subdiff_g = !active.is_empty() && convex_membership(&upsilon_outer, &QVector::zeros(n))?.is_some();
        Ok(Some(ConicSupport {
            active,
            upsilon_outer,
            upsilon_inner,
            exact,
            zero_in_subdiff_g,
        }))
    }

    /// Whether the tangent/normal cones built from `Υ` are exact: no active
    /// constraint, affine data, or convex data with `0 ∉ ∂G(x̄)`.
    fn support_is_exact(&self, s: &ConicSupport, xbar: &QVector) -> Result<bool> {
        if s.active.is_empty() {
            return Ok(true);
        }
        if let FeasibleSet::Discretized { members, .. } = self {
            // Members that are only near-active add rows the true cone lacks.
            let loose = s.active.iter().any(|e| {
                let j = e.iter().position(|c| !crate::exactlp::rational::is_zero(c)).unwrap();
                members[j].func.eval(xbar) != 0
            });
            if loose {
                return Ok(false);
            }
        }
        if self.as_polyhedron().is_some() {
            return Ok(true);
        }
        Ok(s.exact && !s.zero_in_subdiff_g && self.constraint_convexity()?.is_convex())
    }
}

fn require_feasible(omega: &FeasibleSet, xbar: &QVector) -> Result<()> {
    if !omega.contains(xbar) {
        return Err(Error::InfeasibleCandidate(format!("{xbar} violates the constraints")));
    }
    Ok(())
}

/// `T_Ω(x̄)`. Exact for polyhedral data; for a conic block, the cone `𝒟`,
/// which lies inside `T` whenever `0 ∉ ∂G(x̄)`.
pub fn tangent_cone(omega: &FeasibleSet, xbar: &QVector) -> Result<ApproxCone<ConeHRep>> {
    require_feasible(omega, xbar)?;
    let n = xbar.dim();
    if let FeasibleSet::Polyhedral { g, .. } = omega {
        let rows = omega.active_rows(xbar).into_iter().map(|j| g[j].clone()).collect();
        return Ok(ApproxCone {
            cone: ConeHRep::new(n, rows)?,
            exact: true,
            note: None,
        });
    }
    let s = omega.conic_support(xbar)?.expect("non-polyhedral");
    let exact = omega.support_is_exact(&s, xbar)?;
    Ok(ApproxCone {
        cone: s.d_inner(n)?,
        exact,
        note: support_note(&s, exact),
    })
}

/// `N_Ω(x̄)`, the polar of the tangent cone. For a conic block, `pos(Υ)`,
/// which contains `N` whenever `0 ∉ ∂G(x̄)`.
pub fn normal_cone(omega: &FeasibleSet, xbar: &QVector) -> Result<ApproxCone<ConeVRep>> {
    let t = tangent_cone(omega, xbar)?;
    Ok(ApproxCone {
        cone: t.cone.polar(),
        exact: t.exact,
        note: t.note,
    })
}

fn support_note(s: &ConicSupport, exact: bool) -> Option<String> {
    if exact {
        None
    } else if s.zero_in_subdiff_g {
        Some("0 lies in the Clarke gradient of the max-constraint; the cone from active gradients is not known to approximate the tangent cone".into())
    } else {
        Some("approximate: inner tangent cone and outer normal cone from active gradients".into())
    }
}
