use serde::{Deserialize, Serialize};

use crate::error::{ConeError, Error, Result};
use crate::exactlp::cone::{cone_is_trivial, ConeHRep, ConeVRep};
use crate::exactlp::dd::{dd_generators_from_halfspaces, dd_halfspaces_from_generators, DdConfig};
use crate::exactlp::rational::zero;
use crate::exactlp::rational::{null_space, QVector};
use crate::exactlp::simplex::{LinearConstraint, Relation};
use crate::funcalc::selection::interior_point;

/// A cone as supplied by the user, before validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RawCone {
    /// Rows `a` of `K = {y : Ay ≥ 0}`.
    Hrep(Vec<QVector>),
    /// Generators of `K = pos(V)`.
    Vrep(Vec<QVector>),
}

/// A validated ordering cone: polyhedral, nontrivial, pointed, with
/// nonempty interior.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderingCone {
    /// `K = {y : mᵀy ≤ 0}` over the rows `m`.
    hrep: ConeHRep,
    vrep: ConeVRep,
    /// Generators of `−K* = {μ : μᵀy ≥ 0 for all y ∈ K}`.
    dual_neg_gens: ConeVRep,
    /// A point of `−K*°`: strictly positive on `K ∖ {0}`.
    strict_polar_sample: QVector,
}

impl OrderingCone {
    /// `K = {y : Ay ≥ 0}`.
    pub fn from_hrep(p: usize, a_rows: Vec<QVector>) -> Result<Self> {
        validate_ordering_cone(p, RawCone::Hrep(a_rows))
    }

    pub fn from_vrep(p: usize, generators: Vec<QVector>) -> Result<Self> {
        validate_ordering_cone(p, RawCone::Vrep(generators))
    }

    /// `ℝᵖ₊`.
    pub fn nonneg_orthant(p: usize) -> Self {
        OrderingCone::from_hrep(p, (0..p).map(|k| QVector::unit(p, k)).collect())
            .expect("the orthant is a valid ordering cone")
    }

    pub fn dim(&self) -> usize {
        self.hrep.dim()
    }

    pub fn hrep(&self) -> &ConeHRep {
        &self.hrep
    }

    pub fn vrep(&self) -> &ConeVRep {
        &self.vrep
    }

    pub fn dual_neg_gens(&self) -> &ConeVRep {
        &self.dual_neg_gens
    }

    pub fn strict_polar_sample(&self) -> &QVector {
        &self.strict_polar_sample
    }

    /// Rows `a` with `K = {y : Ay ≥ 0}`; since `K` is pointed, `Ay = 0`
    /// only for `y = 0`.
    pub fn a_rows(&self) -> Vec<QVector> {
        self.hrep.rows().iter().map(QVector::neg).collect()
    }

    pub fn contains(&self, y: &QVector) -> bool {
        self.hrep.contains(y)
    }

    /// `w ∈ −K ∖ {0}`: a point with objective change `w` dominates.
    pub fn strictly_dominates(&self, w: &QVector) -> bool {
        !w.is_zero() && self.contains(&w.neg())
    }
}

/// Builds both representations, checks the ordering-cone axioms in the
/// order trivial, pointed, interior, and derives the generators of `−K*`.
pub fn validate_ordering_cone(p: usize, raw: RawCone) -> Result<OrderingCone> {
    let cfg = DdConfig::default();
    if p > cfg.max_dim {
        return Err(Error::Capability(format!(
            "ordering cones are limited to dimension {} (got {p})",
            cfg.max_dim
        )));
    }
    let hrep = match raw {
        RawCone::Hrep(a) => ConeHRep::new(p, a.iter().map(QVector::neg).collect())?,
        RawCone::Vrep(v) => dd_halfspaces_from_generators(&ConeVRep::new(p, v)?)?,
    };
    if cone_is_trivial(&hrep).is_trivial() {
        return Err(ConeError::Trivial.into());
    }
    let mut both = hrep.rows().to_vec();
    both.extend(hrep.rows().iter().map(QVector::neg));
    if let Some(line) = cone_is_trivial(&ConeHRep::new(p, both)?).witness() {
        return Err(ConeError::NotPointed { line: line.primitive() }.into());
    }
    let vrep = dd_generators_from_halfspaces(&hrep)?;
    let strict: Vec<LinearConstraint> = hrep
        .rows()
        .iter()
        .map(|m| LinearConstraint::new(m.clone(), Relation::Le, zero()))
        .collect();
    if interior_point(p, &strict, Some(&QVector::zeros(p)))?.is_none() {
        let normal = null_space(p, vrep.generators())
            .into_iter()
            .next()
            .expect("a cone without interior spans a proper subspace")
            .primitive();
        return Err(ConeError::EmptyInterior { normal }.into());
    }
    // −K* = pos(−rows); the minimal generators are the H-rep of −K*'s polar.
    let neg_rows: Vec<QVector> = hrep.rows().iter().map(QVector::neg).collect();
    let dual_neg_gens = dd_generators_from_halfspaces(&dd_halfspaces_from_generators(&ConeVRep::new(p, neg_rows)?)?)?;
    let mut strict_polar_sample = QVector::zeros(p);
    for g in dual_neg_gens.generators() {
        strict_polar_sample = strict_polar_sample.add(g);
    }
    Ok(OrderingCone {
        hrep,
        vrep,
        dual_neg_gens,
        strict_polar_sample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlp::rational::is_positive;

    fn v(xs: &[i64]) -> QVector {
        QVector::from_i64(xs)
    }

    #[test]
    fn orthant() {
        let k = OrderingCone::nonneg_orthant(2);
        assert_eq!(k.dual_neg_gens().generators(), &[v(&[0, 1]), v(&[1, 0])]);
        assert_eq!(k.vrep().generators(), &[v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn example_cone() {
        let k = OrderingCone::from_hrep(2, vec![v(&[1, 1]), v(&[1, 0])]).unwrap();
        assert_eq!(k.dual_neg_gens().generators(), &[v(&[1, 0]), v(&[1, 1])]);
        for y in k.vrep().generators() {
            assert!(is_positive(&k.strict_polar_sample().dot(y)));
        }
    }

    #[test]
    fn axiom_failures() {
        let line = OrderingCone::from_vrep(2, vec![v(&[1, -1]), v(&[-1, 1])]);
        match line {
            Err(Error::InvalidCone(ConeError::NotPointed { line })) => {
                assert!(line == v(&[1, -1]) || line == v(&[-1, 1]))
            }
            other => panic!("{other:?}"),
        }
        let halfline = OrderingCone::from_vrep(2, vec![v(&[1, 0])]);
        assert!(matches!(
            halfline,
            Err(Error::InvalidCone(ConeError::EmptyInterior { .. }))
        ));
        let zero = OrderingCone::from_vrep(2, vec![]);
        assert!(matches!(zero, Err(Error::InvalidCone(ConeError::Trivial))));
    }
}
