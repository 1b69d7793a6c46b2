use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlp::rational::{is_negative, is_zero, QVector, Rational};

use super::convexity::piece_is_convex;
use super::selection::{essential_cells, AffineTerm};
use super::{clarke_subdiff_component, Extremum, ObjectiveVector, PieceFn, SubdiffPolytope};

/// `∂_c(μ∘f)(x̄)`, exactly or as an inner/outer pair when the sum rule
/// cannot be shown to hold with equality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ScalarizedSubdiff {
    Exact(SubdiffPolytope),
    Bounds {
        inner: SubdiffPolytope,
        outer: SubdiffPolytope,
    },
}

impl ScalarizedSubdiff {
    pub fn exact(&self) -> Option<&SubdiffPolytope> {
        match self {
            ScalarizedSubdiff::Exact(p) => Some(p),
            ScalarizedSubdiff::Bounds { .. } => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact().is_some()
    }

    pub fn inner(&self) -> &SubdiffPolytope {
        match self {
            ScalarizedSubdiff::Exact(p) => p,
            ScalarizedSubdiff::Bounds { inner, .. } => inner,
        }
    }

    pub fn outer(&self) -> &SubdiffPolytope {
        match self {
            ScalarizedSubdiff::Exact(p) => p,
            ScalarizedSubdiff::Bounds { outer, .. } => outer,
        }
    }
}

/// Whether `μᵢ fᵢ` is convex by construction: a positive multiple of a max
/// of convex pieces, or a negative multiple of a min of concave pieces.
pub(crate) fn scaled_term_is_convex(mu: &Rational, f: &PieceFn) -> bool {
    if is_zero(mu) {
        return true;
    }
    let g = if is_negative(mu) { f.negated() } else { f.clone() };
    (g.is_smooth() || g.extremum() == Extremum::Max) && g.pieces().iter().all(piece_is_convex)
}

/// Clarke subdifferential of `x ↦ Σ μᵢ fᵢ(x)` at `x̄`.
///
/// Terms with a single piece are strictly differentiable and contribute
/// their gradient exactly. The remaining max/min terms are handled as:
/// - none or one: exact, since adding a strictly differentiable function
///   and scaling preserve the Clarke gradient;
/// - all piecewise-affine: exact, as the hull of the combined gradients of
///   the selections essentially active at `x̄`;
/// - all convex after scaling: exact Minkowski sum (sum rule for regular
///   functions);
/// - otherwise: `Bounds`, with the Minkowski sum as the outer bound and the
///   essential gradients of the first-order model as the inner bound.
pub fn scalarized_subdiff(mu: &QVector, f: &ObjectiveVector, xbar: &QVector) -> Result<ScalarizedSubdiff> {
    let n = f.dim();
    if mu.dim() != f.len() || xbar.dim() != n {
        return Err(Error::Dimension(format!(
            "scalarization of length {} at a point of dimension {} for a {}-component map on R^{n}",
            mu.dim(),
            xbar.dim(),
            f.len()
        )));
    }
    let mut smooth = QVector::zeros(n);
    let mut nonsmooth: Vec<(&Rational, &PieceFn)> = Vec::new();
    for (m, c) in mu.iter().zip(f.components()) {
        if is_zero(m) {
            continue;
        }
        if c.is_smooth() {
            smooth.axpy(m, &c.pieces()[0].gradient(xbar));
        } else {
            nonsmooth.push((m, c));
        }
    }

    let minkowski = |terms: &[(&Rational, &PieceFn)]| -> Result<SubdiffPolytope> {
        let mut acc = SubdiffPolytope::point(smooth.clone());
        for (m, c) in terms {
            acc = acc.minkowski_sum(&clarke_subdiff_component(c, xbar).scale(m))?;
        }
        Ok(acc)
    };

    if nonsmooth.len() <= 1 {
        return Ok(ScalarizedSubdiff::Exact(minkowski(&nonsmooth)?));
    }

    let essential = || -> Result<SubdiffPolytope> {
        let terms: Vec<AffineTerm> = nonsmooth
            .iter()
            .map(|(m, c)| AffineTerm::linearized((*m).clone(), c, xbar))
            .collect();
        let gradients = essential_cells(n, &terms, xbar)?
            .iter()
            .map(|cell| cell.combined(&terms, n).a.add(&smooth))
            .collect();
        SubdiffPolytope::new(n, gradients).reduced()
    };

    if nonsmooth.iter().all(|(_, c)| c.is_piecewise_affine()) {
        return Ok(ScalarizedSubdiff::Exact(essential()?));
    }
    if nonsmooth.iter().all(|(m, c)| scaled_term_is_convex(m, c)) {
        return Ok(ScalarizedSubdiff::Exact(minkowski(&nonsmooth)?));
    }
    Ok(ScalarizedSubdiff::Bounds {
        inner: essential()?,
        outer: minkowski(&nonsmooth)?,
    })
}
