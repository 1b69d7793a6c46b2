use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exactlp::rational::{int, one, QVector, Rational};
use crate::exactlp::simplex::{LpProblem, LpStatus};

/// `conv(vertices)`, a nonempty polytope given by a finite point list.
///
/// The list is kept sorted and free of duplicates; it may still contain
/// points that are not extreme until [`SubdiffPolytope::reduced`] is called.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdiffPolytope {
    dim: usize,
    vertices: Vec<QVector>,
}

impl SubdiffPolytope {
    /// Panics if `vertices` is empty or has mixed dimensions.
    pub fn new(dim: usize, mut vertices: Vec<QVector>) -> Self {
        assert!(!vertices.is_empty(), "a subdifferential is never empty");
        assert!(vertices.iter().all(|v| v.dim() == dim), "vertex dimension mismatch");
        vertices.sort();
        vertices.dedup();
        SubdiffPolytope { dim, vertices }
    }

    pub fn point(v: QVector) -> Self {
        SubdiffPolytope::new(v.dim(), vec![v])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }

    pub fn is_singleton(&self) -> bool {
        self.vertices.len() == 1
    }

    /// Convex multipliers expressing `x`, if `x` lies in the polytope.
    pub fn membership(&self, x: &QVector) -> Result<Option<QVector>> {
        convex_membership(&self.vertices, x)
    }

    pub fn contains(&self, x: &QVector) -> Result<bool> {
        Ok(self.membership(x)?.is_some())
    }

    pub fn contains_polytope(&self, other: &SubdiffPolytope) -> Result<bool> {
        for v in &other.vertices {
            if !self.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_set(&self, other: &SubdiffPolytope) -> Result<bool> {
        Ok(self.contains_polytope(other)? && other.contains_polytope(self)?)
    }

    /// The same polytope listed by its extreme points only.
    pub fn reduced(&self) -> Result<SubdiffPolytope> {
        let mut vs = self.vertices.clone();
        let mut i = 0;
        while i < vs.len() && vs.len() > 1 {
            let others: Vec<QVector> = vs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, v)| v.clone())
                .collect();
            if convex_membership(&others, &vs[i])?.is_some() {
                vs.remove(i);
            } else {
                i += 1;
            }
        }
        Ok(SubdiffPolytope::new(self.dim, vs))
    }

    pub fn scale(&self, s: &Rational) -> SubdiffPolytope {
        SubdiffPolytope::new(self.dim, self.vertices.iter().map(|v| v.scale(s)).collect())
    }

    pub fn translate(&self, t: &QVector) -> SubdiffPolytope {
        SubdiffPolytope::new(self.dim, self.vertices.iter().map(|v| v.add(t)).collect())
    }

    /// Minkowski sum, reduced to extreme points.
    pub fn minkowski_sum(&self, other: &SubdiffPolytope) -> Result<SubdiffPolytope> {
        let mut vs = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                vs.push(a.add(b));
            }
        }
        SubdiffPolytope::new(self.dim, vs).reduced()
    }

    /// `max{vᵀd : v in the polytope}`.
    pub fn support(&self, d: &QVector) -> Rational {
        self.vertices.iter().map(|v| v.dot(d)).max().expect("nonempty")
    }
}

impl fmt::Debug for SubdiffPolytope {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "conv{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for SubdiffPolytope {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// LP test of `x ∈ conv(points)`, returning the convex weights.
pub fn convex_membership(points: &[QVector], x: &QVector) -> Result<Option<QVector>> {
    let k = points.len();
    if k == 0 {
        return Ok(None);
    }
    let mut lp = LpProblem::feasibility(k);
    for j in 0..x.dim() {
        let row: QVector = points.iter().map(|p| p[j].clone()).collect();
        lp.eq(row, x[j].clone());
    }
    lp.eq(QVector::new(vec![one(); k]), one());
    for i in 0..k {
        lp.ge(QVector::unit(k, i), int(0));
    }
    let res = lp.solve()?;
    Ok((res.status == LpStatus::Optimal).then_some(res.primal))
}
