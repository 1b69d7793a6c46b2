//! Piecewise-affine and quadratic functions and their Clarke subdifferentials.
//!
//! A component is one piece, or a pointwise max or min of finitely many
//! pieces. For such functions the Clarke generalized gradient at `x̄` is the
//! convex hull of the gradients of the pieces attaining the max or min there.
//! Scalarizations `Σ μᵢ fᵢ` need more care, since the sum rule is only an
//! inclusion in general; see [`scalarized_subdiff`].

mod convexity;
pub mod polytope;
mod scalarize;
pub mod selection;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlp::rational::{qserde, QMatrix, QVector, Rational};

pub use convexity::{
    hessian_psd_witness, kconvexity_check, kconvexity_check_seeded, scalar_convexity, ConvexityWitness, KConvexity,
    DEFAULT_CONVEXITY_SEED, MIDPOINT_SAMPLES,
};
pub use polytope::SubdiffPolytope;
pub use scalarize::{scalarized_subdiff, ScalarizedSubdiff};

/// `aᵀx + b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffinePiece {
    pub a: QVector,
    #[serde(with = "qserde")]
    pub b: Rational,
}

/// `½xᵀHx + aᵀx + b` with `H` symmetric.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadPiece {
    #[serde(rename = "H")]
    pub h: QMatrix,
    pub a: QVector,
    #[serde(with = "qserde")]
    pub b: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Piece {
    Affine(AffinePiece),
    Quad(QuadPiece),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PieceFn {
    Smooth(Piece),
    Max(Vec<Piece>),
    Min(Vec<Piece>),
}

/// Whether a max/min picks the largest or the smallest piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extremum {
    Max,
    Min,
}

impl AffinePiece {
    pub fn new(a: QVector, b: Rational) -> Self {
        AffinePiece { a, b }
    }

    pub fn eval(&self, x: &QVector) -> Rational {
        self.a.dot(x) + &self.b
    }
}

impl Piece {
    pub fn affine(a: QVector, b: Rational) -> Self {
        Piece::Affine(AffinePiece { a, b })
    }

    pub fn quad(h: QMatrix, a: QVector, b: Rational) -> Self {
        Piece::Quad(QuadPiece { h, a, b })
    }

    pub fn dim(&self) -> usize {
        match self {
            Piece::Affine(p) => p.a.dim(),
            Piece::Quad(p) => p.a.dim(),
        }
    }

    pub fn is_affine(&self) -> bool {
        match self {
            Piece::Affine(_) => true,
            Piece::Quad(q) => q.h.rows().iter().all(|r| r.is_zero()),
        }
    }

    pub fn hessian(&self) -> QMatrix {
        match self {
            Piece::Affine(p) => QMatrix::zeros(p.a.dim(), p.a.dim()),
            Piece::Quad(q) => q.h.clone(),
        }
    }

    pub fn eval(&self, x: &QVector) -> Rational {
        match self {
            Piece::Affine(p) => p.eval(x),
            Piece::Quad(q) => q.h.quad_form(x) / Rational::from(2) + q.a.dot(x) + &q.b,
        }
    }

    pub fn gradient(&self, x: &QVector) -> QVector {
        match self {
            Piece::Affine(p) => p.a.clone(),
            Piece::Quad(q) => q.h.mul_vec(x).add(&q.a),
        }
    }

    /// First-order model at `x̄`: exact for affine pieces.
    pub fn linearize(&self, xbar: &QVector) -> AffinePiece {
        let a = self.gradient(xbar);
        let b = self.eval(xbar) - a.dot(xbar);
        AffinePiece { a, b }
    }

    fn validate(&self, n: usize) -> Result<()> {
        match self {
            Piece::Affine(p) => check_len("affine gradient", p.a.dim(), n),
            Piece::Quad(q) => {
                check_len("quadratic linear term", q.a.dim(), n)?;
                if q.h.nrows() != n || q.h.ncols() != n {
                    return Err(Error::Dimension(format!(
                        "Hessian is {}x{}, expected {n}x{n}",
                        q.h.nrows(),
                        q.h.ncols()
                    )));
                }
                if !q.h.is_symmetric() {
                    return Err(Error::Parse("Hessian must be symmetric".into()));
                }
                Ok(())
            }
        }
    }
}

fn check_len(what: &str, got: usize, n: usize) -> Result<()> {
    if got != n {
        return Err(Error::Dimension(format!("{what} has {got} entries, expected {n}")));
    }
    Ok(())
}

impl PieceFn {
    pub fn affine(a: QVector, b: Rational) -> Self {
        PieceFn::Smooth(Piece::affine(a, b))
    }

    pub fn pieces(&self) -> &[Piece] {
        match self {
            PieceFn::Smooth(p) => std::slice::from_ref(p),
            PieceFn::Max(ps) | PieceFn::Min(ps) => ps,
        }
    }

    pub fn extremum(&self) -> Extremum {
        match self {
            PieceFn::Min(_) => Extremum::Min,
            _ => Extremum::Max,
        }
    }

    pub fn dim(&self) -> usize {
        self.pieces().first().map_or(0, Piece::dim)
    }

    /// Checks that the function is well formed on `ℝⁿ`.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.pieces().is_empty() {
            return Err(Error::Parse("max/min needs at least one piece".into()));
        }
        self.pieces().iter().try_for_each(|p| p.validate(n))
    }

    /// A single piece, so differentiable everywhere.
    pub fn is_smooth(&self) -> bool {
        self.pieces().len() == 1
    }

    pub fn is_piecewise_affine(&self) -> bool {
        self.pieces().iter().all(Piece::is_affine)
    }

    pub fn eval(&self, x: &QVector) -> Rational {
        let vals = self.pieces().iter().map(|p| p.eval(x));
        match self {
            PieceFn::Smooth(p) => p.eval(x),
            PieceFn::Max(_) => vals.max().expect("nonempty"),
            PieceFn::Min(_) => vals.min().expect("nonempty"),
        }
    }

    /// Indices of the pieces attaining the value at `x`.
    pub fn active_pieces(&self, x: &QVector) -> Vec<usize> {
        let v = self.eval(x);
        self.pieces()
            .iter()
            .enumerate()
            .filter(|(_, p)| p.eval(x) == v)
            .map(|(i, _)| i)
            .collect()
    }

    /// `−f`, as a function of the same class.
    pub fn negated(&self) -> PieceFn {
        let neg = |p: &Piece| match p {
            Piece::Affine(a) => Piece::affine(a.a.neg(), -a.b.clone()),
            Piece::Quad(q) => Piece::quad(q.h.scale(&Rational::from(-1)), q.a.neg(), -q.b.clone()),
        };
        match self {
            PieceFn::Smooth(p) => PieceFn::Smooth(neg(p)),
            PieceFn::Max(ps) => PieceFn::Min(ps.iter().map(neg).collect()),
            PieceFn::Min(ps) => PieceFn::Max(ps.iter().map(neg).collect()),
        }
    }
}

/// `f = (f₁, …, f_p)`, all components on the same `ℝⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectiveVector {
    components: Vec<PieceFn>,
}

impl ObjectiveVector {
    pub fn new(n: usize, components: Vec<PieceFn>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Parse("a vector function needs at least one component".into()));
        }
        for c in &components {
            c.validate(n)?;
        }
        Ok(ObjectiveVector { components })
    }

    pub fn components(&self) -> &[PieceFn] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.components[0].dim()
    }

    pub fn eval(&self, x: &QVector) -> QVector {
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    pub fn is_piecewise_affine(&self) -> bool {
        self.components.iter().all(PieceFn::is_piecewise_affine)
    }

    pub fn is_smooth(&self) -> bool {
        self.components.iter().all(PieceFn::is_smooth)
    }

    pub fn is_affine(&self) -> bool {
        self.is_smooth() && self.is_piecewise_affine()
    }

    /// `∂_c fᵢ(x̄)` for every component.
    pub fn component_subdiffs(&self, xbar: &QVector) -> Vec<SubdiffPolytope> {
        self.components
            .iter()
            .map(|c| clarke_subdiff_component(c, xbar))
            .collect()
    }

    /// `x ↦ Σ μᵢ fᵢ(x)`.
    pub fn scalarize(&self, mu: &QVector, x: &QVector) -> Rational {
        mu.dot(&self.eval(x))
    }
}

pub fn eval(f: &PieceFn, x: &QVector) -> Rational {
    f.eval(x)
}

/// `conv{∇pⱼ(x̄) : pⱼ active at x̄}`.
pub fn clarke_subdiff_component(f: &PieceFn, xbar: &QVector) -> SubdiffPolytope {
    let gradients = f
        .active_pieces(xbar)
        .into_iter()
        .map(|i| f.pieces()[i].gradient(xbar))
        .collect();
    SubdiffPolytope::new(xbar.dim(), gradients)
}
