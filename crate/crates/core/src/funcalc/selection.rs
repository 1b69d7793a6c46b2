//! Selection regions of sums of piecewise-affine terms.
//!
//! A selection picks one piece per term. Its region is the closed
//! polyhedron where every picked piece attains its term's max or min; on
//! that region the sum agrees with one affine function. The regions with
//! nonempty interior cover the space, so they are the only ones that
//! matter for gradients, convexity and optimization.

use crate::error::Result;
use crate::exactlp::rational::{is_positive, one, zero, QVector, Rational};
use crate::exactlp::simplex::{LinearConstraint, LpProblem, LpStatus, Relation};

use super::{AffinePiece, Extremum, PieceFn};

/// `weight · max/min(pieces)`.
#[derive(Clone, Debug)]
pub struct AffineTerm {
    pub weight: Rational,
    pub extremum: Extremum,
    pub pieces: Vec<AffinePiece>,
}

impl AffineTerm {
    /// The term for a piecewise-affine function; `None` if some piece is
    /// quadratic. Repeated pieces are merged.
    pub fn exact(weight: Rational, f: &PieceFn) -> Option<AffineTerm> {
        if !f.is_piecewise_affine() {
            return None;
        }
        let pieces = f.pieces().iter().map(|p| p.linearize(&QVector::zeros(p.dim())));
        Some(AffineTerm::from_pieces(weight, f.extremum(), pieces))
    }

    /// First-order model at `x̄` built from the pieces active there. Exact
    /// near `x̄` for piecewise-affine `f`.
    pub fn linearized(weight: Rational, f: &PieceFn, xbar: &QVector) -> AffineTerm {
        let pieces = f.active_pieces(xbar).into_iter().map(|i| f.pieces()[i].linearize(xbar));
        AffineTerm::from_pieces(weight, f.extremum(), pieces)
    }

    fn from_pieces(weight: Rational, extremum: Extremum, pieces: impl Iterator<Item = AffinePiece>) -> AffineTerm {
        let mut out: Vec<AffinePiece> = Vec::new();
        for p in pieces {
            if !out.contains(&p) {
                out.push(p);
            }
        }
        AffineTerm {
            weight,
            extremum,
            pieces: out,
        }
    }

    /// Restricts to the pieces attaining the value at `x̄`.
    pub fn active_at(&self, xbar: &QVector) -> AffineTerm {
        let vals: Vec<Rational> = self.pieces.iter().map(|p| p.eval(xbar)).collect();
        let best = match self.extremum {
            Extremum::Max => vals.iter().max(),
            Extremum::Min => vals.iter().min(),
        }
        .expect("nonempty")
        .clone();
        AffineTerm {
            weight: self.weight.clone(),
            extremum: self.extremum,
            pieces: self
                .pieces
                .iter()
                .zip(vals)
                .filter(|(_, v)| *v == best)
                .map(|(p, _)| p.clone())
                .collect(),
        }
    }
}

/// A selection whose region has nonempty interior.
#[derive(Clone, Debug)]
pub struct Cell {
    /// Piece index per term.
    pub choice: Vec<usize>,
    /// The closed region, as `≤` constraints on `x`.
    pub constraints: Vec<LinearConstraint>,
    /// A point strictly inside the region.
    pub interior: QVector,
    /// The picked piece of each term (unweighted).
    pub pieces: Vec<AffinePiece>,
}

impl Cell {
    /// `Σ weightᵢ · pieceᵢ`, the affine function the sum agrees with here.
    pub fn combined(&self, terms: &[AffineTerm], dim: usize) -> AffinePiece {
        let mut a = QVector::zeros(dim);
        let mut b = zero();
        for (t, p) in terms.iter().zip(&self.pieces) {
            a.axpy(&t.weight, &p.a);
            b += &t.weight * &p.b;
        }
        AffinePiece { a, b }
    }

    pub fn contains(&self, x: &QVector) -> bool {
        self.constraints.iter().all(|c| c.is_satisfied(x))
    }
}

/// The region where `choice` attains every term, as `≤` constraints.
pub fn region_constraints(terms: &[AffineTerm], choice: &[usize]) -> Vec<LinearConstraint> {
    let mut out = Vec::new();
    for (t, &s) in terms.iter().zip(choice) {
        let ps = &t.pieces[s];
        for (j, pt) in t.pieces.iter().enumerate() {
            if j == s {
                continue;
            }
            // Max: pt ≤ ps, i.e. (a_t − a_s)ᵀx ≤ b_s − b_t. Min: reversed.
            let (coeffs, rhs) = match t.extremum {
                Extremum::Max => (pt.a.sub(&ps.a), &ps.b - &pt.b),
                Extremum::Min => (ps.a.sub(&pt.a), &pt.b - &ps.b),
            };
            out.push(LinearConstraint::new(coeffs, Relation::Le, rhs));
        }
    }
    out
}

/// A point satisfying every `≤` constraint strictly, found by maximizing a
/// common slack `t ≤ 1`. With `center`, the search is confined to the unit
/// box around it. Equality constraints are not allowed.
pub fn interior_point(
    dim: usize,
    constraints: &[LinearConstraint],
    center: Option<&QVector>,
) -> Result<Option<QVector>> {
    let mut lp = LpProblem::maximize(QVector::unit(dim + 1, dim));
    for c in constraints {
        debug_assert_eq!(c.relation, Relation::Le);
        let mut coeffs = c.coeffs.clone().into_inner();
        coeffs.push(one());
        lp.le(QVector::new(coeffs), c.rhs.clone());
    }
    lp.le(QVector::unit(dim + 1, dim), one());
    if let Some(xb) = center {
        for j in 0..dim {
            let e = QVector::unit(dim + 1, j);
            lp.le(e.clone(), &xb[j] + one());
            lp.ge(e, &xb[j] - one());
        }
    }
    let res = lp.solve()?;
    if res.status != LpStatus::Optimal || !is_positive(res.value.as_ref().unwrap()) {
        return Ok(None);
    }
    let mut x = res.primal.into_inner();
    x.truncate(dim);
    Ok(Some(QVector::new(x)))
}

/// All index tuples with `choice[i] < sizes[i]`, in lexicographic order.
pub fn choices(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &s in sizes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..s).map(move |k| {
                    let mut c = prefix.clone();
                    c.push(k);
                    c
                })
            })
            .collect();
    }
    out
}

/// Every selection with a full-dimensional region, optionally restricted to
/// those meeting the interior of the unit box around `center`.
pub fn full_dimensional_cells(dim: usize, terms: &[AffineTerm], center: Option<&QVector>) -> Result<Vec<Cell>> {
    let sizes: Vec<usize> = terms.iter().map(|t| t.pieces.len()).collect();
    let mut cells = Vec::new();
    for choice in choices(&sizes) {
        let constraints = region_constraints(terms, &choice);
        if let Some(interior) = interior_point(dim, &constraints, center)? {
            let pieces = terms.iter().zip(&choice).map(|(t, &s)| t.pieces[s].clone()).collect();
            cells.push(Cell {
                choice,
                constraints,
                interior,
                pieces,
            });
        }
    }
    Ok(cells)
}

/// Cells of the sum near `x̄`: selections of pieces active at `x̄` whose
/// region has interior arbitrarily close to `x̄`. Their combined gradients
/// generate the Clarke subdifferential of the sum.
pub fn essential_cells(dim: usize, terms: &[AffineTerm], xbar: &QVector) -> Result<Vec<Cell>> {
    let active: Vec<AffineTerm> = terms.iter().map(|t| t.active_at(xbar)).collect();
    full_dimensional_cells(dim, &active, Some(xbar))
}
