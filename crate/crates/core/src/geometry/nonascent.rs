//! Non-ascent cones of the objective at the candidate.
//!
//! `G₁` collects directions `d` with `(Σᵢ μᵢ ξᵢ)ᵀd ≤ 0` for every `μ ∈ −K*`
//! and every choice `ξᵢ ∈ ∂_c fᵢ(x̄)`; `G₂` uses the scalarized
//! subdifferentials `∂_c(μ∘f)(x̄)` instead. Both quantifiers reduce to
//! generators of `−K*` and vertices of the polytopes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlp::cone::ConeHRep;
use crate::exactlp::rational::QVector;
use crate::funcalc::{scalarized_subdiff, ObjectiveVector, SubdiffPolytope};

use super::{OrderingCone, Truth};

/// `G₂`, or a sandwich `inner ⊆ G₂ ⊆ outer` when some scalarized
/// subdifferential is only bounded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum G2Cone {
    Exact(ConeHRep),
    Bounds { inner: ConeHRep, outer: ConeHRep },
}

impl G2Cone {
    pub fn exact(&self) -> Option<&ConeHRep> {
        match self {
            G2Cone::Exact(c) => Some(c),
            G2Cone::Bounds { .. } => None,
        }
    }

    pub fn inner(&self) -> &ConeHRep {
        match self {
            G2Cone::Exact(c) => c,
            G2Cone::Bounds { inner, .. } => inner,
        }
    }

    pub fn outer(&self) -> &ConeHRep {
        match self {
            G2Cone::Exact(c) => c,
            G2Cone::Bounds { outer, .. } => outer,
        }
    }
}

fn check_dims(f: &ObjectiveVector, k: &OrderingCone, xbar: &QVector) -> Result<()> {
    if k.dim() != f.len() || xbar.dim() != f.dim() {
        return Err(Error::Dimension(format!(
            "objective with {} components on R^{}, cone in R^{}, point in R^{}",
            f.len(),
            f.dim(),
            k.dim(),
            xbar.dim()
        )));
    }
    Ok(())
}

/// `G₁` from precomputed component subdifferentials: one row per extreme
/// point of `Σᵢ μᵢ ∂_c fᵢ(x̄)` for each generator `μ` of `−K*`. Those extreme
/// points are among the generator/vertex products, so the polar set is the
/// same.
pub fn g1_from_subdiffs(n: usize, subdiffs: &[SubdiffPolytope], k: &OrderingCone) -> Result<ConeHRep> {
    let mut rows = Vec::new();
    for mu in k.dual_neg_gens().generators() {
        let mut acc = SubdiffPolytope::point(QVector::zeros(n));
        for (m, s) in mu.iter().zip(subdiffs) {
            acc = acc.minkowski_sum(&s.scale(m))?;
        }
        rows.extend(acc.vertices().iter().cloned());
    }
    ConeHRep::new(n, rows)
}

pub fn g1_cone(f: &ObjectiveVector, k: &OrderingCone, xbar: &QVector) -> Result<ConeHRep> {
    check_dims(f, k, xbar)?;
    g1_from_subdiffs(f.dim(), &f.component_subdiffs(xbar), k)
}

/// `G₂`: rows are the vertices of `∂_c(μ∘f)(x̄)` over generators `μ`.
pub fn g2_cone(f: &ObjectiveVector, k: &OrderingCone, xbar: &QVector) -> Result<G2Cone> {
    check_dims(f, k, xbar)?;
    let n = f.dim();
    let mut inner_rows = Vec::new();
    let mut outer_rows = Vec::new();
    let mut exact = true;
    for mu in k.dual_neg_gens().generators() {
        let s = scalarized_subdiff(mu, f, xbar)?;
        exact &= s.is_exact();
        // More subgradients give more rows and a smaller cone.
        inner_rows.extend(s.outer().vertices().iter().cloned());
        outer_rows.extend(s.inner().vertices().iter().cloned());
    }
    Ok(if exact {
        G2Cone::Exact(ConeHRep::new(n, inner_rows)?)
    } else {
        G2Cone::Bounds {
            inner: ConeHRep::new(n, inner_rows)?,
            outer: ConeHRep::new(n, outer_rows)?,
        }
    })
}

/// `G₁ = G₂` by mutual containment; `Unknown` when `G₂` is only bounded.
pub fn cq1_from_cones(g1: &ConeHRep, g2: &G2Cone) -> Result<Truth> {
    match g2.exact() {
        Some(g2) => Ok(Truth::from(g1.same_set(g2)?)),
        None => Ok(Truth::Unknown),
    }
}

pub fn cq1_check(f: &ObjectiveVector, k: &OrderingCone, xbar: &QVector) -> Result<Truth> {
    cq1_from_cones(&g1_cone(f, k, xbar)?, &g2_cone(f, k, xbar)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlp::rational::int;
    use crate::funcalc::{Piece, PieceFn};

    fn v(xs: &[i64]) -> QVector {
        QVector::from_i64(xs)
    }

    #[test]
    fn orthant_with_linear_objectives() {
        let f = ObjectiveVector::new(
            2,
            vec![PieceFn::affine(v(&[1, 0]), int(0)), PieceFn::affine(v(&[1, 1]), int(0))],
        )
        .unwrap();
        let k = OrderingCone::nonneg_orthant(2);
        let g1 = g1_cone(&f, &k, &v(&[0, 0])).unwrap();
        let expected = ConeHRep::new(2, vec![v(&[1, 0]), v(&[1, 1])]).unwrap();
        assert!(g1.same_set(&expected).unwrap());
        assert_eq!(cq1_check(&f, &k, &v(&[0, 0])).unwrap(), Truth::True);
    }

    #[test]
    fn kinked_pair_under_skewed_cone() {
        let f = ObjectiveVector::new(
            1,
            vec![
                PieceFn::Max(vec![Piece::affine(v(&[0]), int(0)), Piece::affine(v(&[1]), int(0))]),
                PieceFn::Min(vec![Piece::affine(v(&[0]), int(0)), Piece::affine(v(&[-1]), int(0))]),
            ],
        )
        .unwrap();
        let k = OrderingCone::from_hrep(2, vec![v(&[1, 1]), v(&[1, 0])]).unwrap();
        let x = v(&[0]);
        assert!(g1_cone(&f, &k, &x).unwrap().is_trivial().is_trivial());
        let g2 = g2_cone(&f, &k, &x).unwrap();
        assert_eq!(g2.exact().unwrap().rows(), &[v(&[1])]);
        assert_eq!(cq1_check(&f, &k, &x).unwrap(), Truth::False);
    }
}
