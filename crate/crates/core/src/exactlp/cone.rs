//! Polyhedral cones in halfspace and generator form, with LP-based
//! triviality, membership and containment tests.

use serde::{Deserialize, Serialize};

use super::rational::{int, is_positive, one, QVector};
use super::simplex::{LpProblem, LpStatus};
use crate::error::{Error, Result};

/// `{d : mₖᵀd ≤ 0 for every row mₖ}`.
///
/// Rows are stored as primitive integer vectors, sorted and deduplicated;
/// zero rows are dropped since they constrain nothing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeHRep {
    dim: usize,
    rows: Vec<QVector>,
}

/// `pos(generators)`, the set of nonnegative combinations.
///
/// Generators are normalized like [`ConeHRep`] rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeVRep {
    dim: usize,
    generators: Vec<QVector>,
}

/// Outcome of [`cone_is_trivial`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Triviality {
    Trivial,
    /// A nonzero member of the cone.
    Nontrivial(QVector),
}

impl Triviality {
    pub fn is_trivial(&self) -> bool {
        matches!(self, Triviality::Trivial)
    }

    pub fn witness(&self) -> Option<&QVector> {
        match self {
            Triviality::Trivial => None,
            Triviality::Nontrivial(d) => Some(d),
        }
    }
}

fn normalize(dim: usize, vs: Vec<QVector>, what: &str) -> Result<Vec<QVector>> {
    if let Some(v) = vs.iter().find(|v| v.dim() != dim) {
        return Err(Error::Dimension(format!(
            "{what} has {} entries in ambient dimension {dim}",
            v.dim()
        )));
    }
    let mut out: Vec<QVector> = vs.into_iter().filter(|v| !v.is_zero()).map(|v| v.primitive()).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

fn signed_units(dim: usize) -> Vec<QVector> {
    (0..dim)
        .flat_map(|k| {
            let e = QVector::unit(dim, k);
            [e.clone(), e.neg()]
        })
        .collect()
}

impl ConeHRep {
    pub fn new(dim: usize, rows: Vec<QVector>) -> Result<Self> {
        Ok(ConeHRep {
            dim,
            rows: normalize(dim, rows, "cone row")?,
        })
    }

    /// The whole space.
    pub fn full(dim: usize) -> Self {
        ConeHRep { dim, rows: Vec::new() }
    }

    /// The cone `{0}`.
    pub fn zero(dim: usize) -> Self {
        ConeHRep::new(dim, signed_units(dim)).expect("unit rows have the right dimension")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[QVector] {
        &self.rows
    }

    pub fn contains(&self, d: &QVector) -> bool {
        d.dim() == self.dim && self.rows.iter().all(|m| !is_positive(&m.dot(d)))
    }

    pub fn intersect(&self, other: &ConeHRep) -> Result<ConeHRep> {
        if other.dim != self.dim {
            return Err(Error::Dimension(format!(
                "intersecting cones in dimensions {} and {}",
                self.dim, other.dim
            )));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        ConeHRep::new(self.dim, rows)
    }

    /// The polar cone, `pos(rows)`.
    pub fn polar(&self) -> ConeVRep {
        ConeVRep {
            dim: self.dim,
            generators: self.rows.clone(),
        }
    }

    pub fn is_trivial(&self) -> Triviality {
        cone_is_trivial(self)
    }

    /// A point of `inner` outside `self`, if there is one.
    pub fn escape_witness(&self, inner: &ConeHRep) -> Result<Option<QVector>> {
        if inner.dim != self.dim {
            return Err(Error::Dimension(format!(
                "comparing cones in dimensions {} and {}",
                inner.dim, self.dim
            )));
        }
        for m in &self.rows {
            let mut lp = LpProblem::maximize(m.clone());
            for r in &inner.rows {
                lp.le(r.clone(), int(0));
            }
            lp.le(m.clone(), one());
            let res = lp.solve()?;
            if res.status == LpStatus::Optimal && is_positive(res.value.as_ref().unwrap()) {
                return Ok(Some(res.primal));
            }
        }
        Ok(None)
    }

    /// `inner ⊆ self`, decided by one LP per row of `self`.
    pub fn contains_cone(&self, inner: &ConeHRep) -> Result<bool> {
        Ok(self.escape_witness(inner)?.is_none())
    }

    /// Set equality by mutual containment.
    pub fn same_set(&self, other: &ConeHRep) -> Result<bool> {
        Ok(self.contains_cone(other)? && other.contains_cone(self)?)
    }
}

impl ConeVRep {
    pub fn new(dim: usize, generators: Vec<QVector>) -> Result<Self> {
        Ok(ConeVRep {
            dim,
            generators: normalize(dim, generators, "cone generator")?,
        })
    }

    /// The whole space, generated by `±eₖ`.
    pub fn full(dim: usize) -> Self {
        ConeVRep::new(dim, signed_units(dim)).expect("unit generators have the right dimension")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[QVector] {
        &self.generators
    }

    /// The polar cone, `{m : gᵀm ≤ 0 for every generator g}`.
    pub fn polar(&self) -> ConeHRep {
        ConeHRep {
            dim: self.dim,
            rows: self.generators.clone(),
        }
    }

    /// Nonnegative multipliers expressing `x` over the generators, if any.
    pub fn membership(&self, x: &QVector) -> Result<Option<QVector>> {
        if x.dim() != self.dim {
            return Err(Error::Dimension(format!(
                "point of dimension {} tested against a cone in dimension {}",
                x.dim(),
                self.dim
            )));
        }
        let k = self.generators.len();
        let mut lp = LpProblem::feasibility(k);
        for j in 0..self.dim {
            let row: QVector = self.generators.iter().map(|g| g[j].clone()).collect();
            lp.eq(row, x[j].clone());
        }
        for i in 0..k {
            lp.ge(QVector::unit(k, i), int(0));
        }
        let res = lp.solve()?;
        Ok((res.status == LpStatus::Optimal).then_some(res.primal))
    }

    pub fn contains(&self, x: &QVector) -> Result<bool> {
        Ok(self.membership(x)?.is_some())
    }

    /// Sum of cones: the union of generator lists.
    pub fn sum(&self, other: &ConeVRep) -> Result<ConeVRep> {
        if other.dim != self.dim {
            return Err(Error::Dimension(format!(
                "adding cones in dimensions {} and {}",
                self.dim, other.dim
            )));
        }
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        ConeVRep::new(self.dim, gens)
    }

    /// `pos(generators) ⊆ h`: every generator satisfies every row.
    pub fn within(&self, h: &ConeHRep) -> bool {
        self.generators.iter().all(|g| h.contains(g))
    }
}

/// Decides whether `{d : Md ≤ 0} = {0}`.
///
/// For each coordinate `k` and sign `s`, tests feasibility of
/// `{Md ≤ 0, s·dₖ = 1, −1 ≤ dⱼ ≤ 1}`. Any nonzero cone member can be
/// rescaled into one of these boxes, so the cone is trivial iff all `2n`
/// systems are infeasible. The first feasible point found is the witness.
pub fn cone_is_trivial(c: &ConeHRep) -> Triviality {
    let n = c.dim;
    if c.rows.is_empty() && n > 0 {
        return Triviality::Nontrivial(QVector::unit(n, 0));
    }
    for k in 0..n {
        for s in [1i64, -1] {
            let mut lp = LpProblem::feasibility(n);
            for m in &c.rows {
                lp.le(m.clone(), int(0));
            }
            lp.eq(QVector::unit(n, k).scale(&int(s)), one());
            for j in 0..n {
                if j != k {
                    lp.le(QVector::unit(n, j), one());
                    lp.ge(QVector::unit(n, j), int(-1));
                }
            }
            let res = lp.solve().expect("triviality LP dimensions are consistent");
            if res.status == LpStatus::Optimal {
                return Triviality::Nontrivial(res.primal);
            }
        }
    }
    Triviality::Trivial
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlp::rational::ratio;

    fn v(xs: &[i64]) -> QVector {
        QVector::from_i64(xs)
    }

    #[test]
    fn opposing_halfspaces_are_trivial() {
        let c = ConeHRep::new(1, vec![v(&[1]), v(&[-1])]).unwrap();
        assert!(cone_is_trivial(&c).is_trivial());
    }

    #[test]
    fn free_coordinate_gives_witness() {
        let c = ConeHRep::new(2, vec![v(&[1, 0])]).unwrap();
        let t = cone_is_trivial(&c);
        let d = t.witness().unwrap();
        assert!(!d.is_zero() && c.contains(d));
    }

    #[test]
    fn no_rows_means_whole_space() {
        assert_eq!(
            cone_is_trivial(&ConeHRep::full(3)),
            Triviality::Nontrivial(v(&[1, 0, 0]))
        );
    }

    #[test]
    fn rows_are_normalized() {
        let c = ConeHRep::new(
            2,
            vec![v(&[2, 4]), v(&[0, 0]), QVector::new(vec![ratio(1, 3), ratio(2, 3)])],
        )
        .unwrap();
        assert_eq!(c.rows(), &[v(&[1, 2])]);
    }

    #[test]
    fn containment_and_equality() {
        let quadrant = ConeHRep::new(2, vec![v(&[-1, 0]), v(&[0, -1])]).unwrap();
        let halfplane = ConeHRep::new(2, vec![v(&[0, -1])]).unwrap();
        assert!(halfplane.contains_cone(&quadrant).unwrap());
        let w = quadrant.escape_witness(&halfplane).unwrap().unwrap();
        assert!(halfplane.contains(&w) && !quadrant.contains(&w));
        let same = ConeHRep::new(2, vec![v(&[-2, 0]), v(&[0, -1]), v(&[-1, -1])]).unwrap();
        assert!(same.same_set(&quadrant).unwrap());
    }

    #[test]
    fn generator_membership() {
        let c = ConeVRep::new(2, vec![v(&[1, 0]), v(&[1, 1])]).unwrap();
        assert!(c.contains(&v(&[3, 1])).unwrap());
        assert!(!c.contains(&v(&[0, 1])).unwrap());
        let lam = c.membership(&v(&[3, 1])).unwrap().unwrap();
        let mut back = QVector::zeros(2);
        for (g, l) in c.generators().iter().zip(lam.iter()) {
            back.axpy(l, g);
        }
        assert_eq!(back, v(&[3, 1]));
    }
}
