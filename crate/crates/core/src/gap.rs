//! The set-valued gap function over polytopes and the necessary condition
//! for robustness built on it.
//!
//! For a matrix `ξ` whose columns are subgradients of the objectives, the
//! gap at `x` collects `ξᵀ(x − ȳ)` over the efficient points `ȳ` of
//! `max_{y∈Ω} ξᵀ(x − y)`. Maximizing `ξᵀ(x − y)` has the same efficient set
//! as minimizing `y ↦ ξᵀy`, which is how the linear problem is solved here.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::certifier::{ConditionId, ConditionReport, EfficiencyPlan, VopInstance, Witness};
use crate::error::{Error, Result};
use crate::exactlp::cone::ConeHRep;
use crate::exactlp::dd::dd_generators_from_halfspaces;
use crate::exactlp::rational::{is_positive, is_zero, one, zero, QMatrix, QVector, Rational};
use crate::exactlp::simplex::{LinearConstraint, LpProblem, LpStatus, Relation};
use crate::funcalc::selection::choices;
use crate::funcalc::{ObjectiveVector, PieceFn, SubdiffPolytope};
use crate::geometry::{FeasibleSet, OrderingCone, Truth};

/// Seeded convex combinations probed to cross-check a negative answer.
pub const GAP_RANDOM_PROBES: usize = 100;
pub const GAP_SEED: u64 = 5;
/// Largest number of vertex-product matrices enumerated.
pub const MAX_VERTEX_PRODUCTS: usize = 4096;

/// A bounded polyhedron with its vertices and the vertex sets of all its
/// nonempty faces.
#[derive(Clone, Debug)]
pub struct Polytope {
    n: usize,
    constraints: Vec<LinearConstraint>,
    vertices: Vec<QVector>,
    faces: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub vertices: Vec<QVector>,
    /// Barycenter of the vertices, a relative-interior point.
    pub barycenter: QVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EfficientFaceList {
    pub faces: Vec<Face>,
    pub faces_examined: usize,
}

impl Polytope {
    pub fn from_feasible(n: usize, omega: &FeasibleSet) -> Result<Self> {
        let constraints = omega
            .as_polyhedron()
            .ok_or_else(|| Error::Capability("the gap function needs a polyhedral feasible set".into()))?;
        Polytope::new(n, constraints)
    }

    pub fn new(n: usize, constraints: Vec<LinearConstraint>) -> Result<Self> {
        for k in 0..n {
            for dir in [one(), -one()] {
                let mut lp = LpProblem::maximize(QVector::unit(n, k).scale(&dir));
                for c in &constraints {
                    lp.push(c.clone());
                }
                match lp.solve()?.status {
                    LpStatus::Unbounded => {
                        return Err(Error::Capability(
                            "the feasible set is unbounded; the gap function needs a polytope".into(),
                        ))
                    }
                    LpStatus::Infeasible => return Err(Error::InfeasibleCandidate("the feasible set is empty".into())),
                    LpStatus::Optimal => {}
                }
            }
        }
        // {(y, t) : t ≥ 0, aᵀy − bt ≤ 0 (and ≥ 0 for equalities)}.
        let mut rows = vec![QVector::unit(n + 1, n).neg()];
        for c in &constraints {
            let row = c.coeffs.concat(&QVector::new(vec![-c.rhs.clone()]));
            match c.relation {
                Relation::Le => rows.push(row),
                Relation::Ge => rows.push(row.neg()),
                Relation::Eq => {
                    rows.push(row.neg());
                    rows.push(row);
                }
            }
        }
        let gens = dd_generators_from_halfspaces(&ConeHRep::new(n + 1, rows)?)?;
        let mut vertices: Vec<QVector> = gens
            .generators()
            .iter()
            .filter(|g| is_positive(&g[n]))
            .map(|g| QVector::new(g.iter().take(n).map(|x| x / &g[n]).collect()))
            .collect();
        vertices.sort();
        vertices.dedup();

        let tight: Vec<BTreeSet<usize>> = constraints
            .iter()
            .map(|c| {
                (0..vertices.len())
                    .filter(|&v| c.coeffs.dot(&vertices[v]) == c.rhs)
                    .collect()
            })
            .collect();
        let mut faces: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        let mut frontier = vec![(0..vertices.len()).collect::<BTreeSet<usize>>()];
        while let Some(face) = frontier.pop() {
            if face.is_empty() || !faces.insert(face.clone()) {
                continue;
            }
            for t in &tight {
                let sub: BTreeSet<usize> = face.intersection(t).copied().collect();
                if sub.len() < face.len() && !faces.contains(&sub) {
                    frontier.push(sub);
                }
            }
        }
        Ok(Polytope {
            n,
            constraints,
            vertices,
            faces: faces.into_iter().map(|f| f.into_iter().collect()).collect(),
        })
    }

    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    fn face(&self, idx: &[usize]) -> Face {
        let mut bary = QVector::zeros(self.n);
        for &v in idx {
            bary = bary.add(&self.vertices[v]);
        }
        let w = Rational::from(idx.len() as u64);
        Face {
            vertices: idx.iter().map(|&v| self.vertices[v].clone()).collect(),
            barycenter: bary.scale(&(one() / w)),
        }
    }
}

/// The linear problem `min ξᵀy` over the polytope, as a problem instance.
struct LinearVop {
    inst: VopInstance,
    plan: EfficiencyPlan,
}

impl LinearVop {
    fn new(xi: &QMatrix, poly: &Polytope, k: &OrderingCone) -> Result<Self> {
        if xi.nrows() != poly.n || xi.ncols() != k.dim() {
            return Err(Error::Dimension(format!(
                "gap matrix is {}×{}, expected {}×{}",
                xi.nrows(),
                xi.ncols(),
                poly.n,
                k.dim()
            )));
        }
        let comps = (0..xi.ncols()).map(|j| PieceFn::affine(xi.column(j), zero())).collect();
        let f = ObjectiveVector::new(poly.n, comps)?;
        let (g, h) = split_le(&poly.constraints);
        let omega = FeasibleSet::polyhedral(poly.n, g, h)?;
        let inst = VopInstance::new(f, omega, k.clone())?;
        let plan = EfficiencyPlan::new(&inst)?.expect("linear data over a polyhedron");
        Ok(LinearVop { inst, plan })
    }

    fn efficient(&self, y: &QVector) -> Result<bool> {
        Ok(self.plan.check(&self.inst, y, None)?.efficient)
    }
}

fn split_le(cons: &[LinearConstraint]) -> (Vec<QVector>, QVector) {
    let mut g = Vec::new();
    let mut h = Vec::new();
    for c in cons {
        if matches!(c.relation, Relation::Le | Relation::Eq) {
            g.push(c.coeffs.clone());
            h.push(c.rhs.clone());
        }
        if matches!(c.relation, Relation::Ge | Relation::Eq) {
            g.push(c.coeffs.neg());
            h.push(-c.rhs.clone());
        }
    }
    (g, QVector::new(h))
}

fn faces_for(vop: &LinearVop, poly: &Polytope) -> Result<Vec<Face>> {
    let mut out = Vec::new();
    for idx in &poly.faces {
        let face = poly.face(idx);
        if vop.efficient(&face.barycenter)? {
            out.push(face);
        }
    }
    Ok(out)
}

/// Faces of `Ω` whose relative interior is efficient for
/// `max_{y∈Ω} ξᵀ(x − y)` with respect to `K`. `ξ` is `n × p`.
pub fn efficient_faces(xi: &QMatrix, omega: &FeasibleSet, k: &OrderingCone) -> Result<EfficientFaceList> {
    let poly = Polytope::from_feasible(xi.nrows(), omega)?;
    let vop = LinearVop::new(xi, &poly, k)?;
    Ok(EfficientFaceList {
        faces: faces_for(&vop, &poly)?,
        faces_examined: poly.face_count(),
    })
}

/// A point `ȳ` of the efficient set with `ξᵀ(x̄ − ȳ) = 0`, if one exists.
fn zero_point(xbar: &QVector, xi: &QMatrix, poly: &Polytope, k: &OrderingCone) -> Result<Option<QVector>> {
    let vop = LinearVop::new(xi, poly, k)?;
    if vop.efficient(xbar)? {
        return Ok(Some(xbar.clone()));
    }
    let target = xi.tr_mul_vec(xbar);
    for face in faces_for(&vop, poly)? {
        // ȳ = Σ λᵥ v with λ in the simplex and ξᵀȳ = ξᵀx̄.
        let m = face.vertices.len();
        let mut lp = LpProblem::feasibility(m);
        lp.eq(QVector::new(vec![one(); m]), one());
        for j in 0..m {
            lp.ge(QVector::unit(m, j), zero());
        }
        for (c, t) in (0..xi.ncols()).zip(target.iter()) {
            let col = xi.column(c);
            lp.eq(
                QVector::new(face.vertices.iter().map(|v| col.dot(v)).collect()),
                t.clone(),
            );
        }
        let res = lp.solve()?;
        if res.status == LpStatus::Optimal {
            let mut y = QVector::zeros(poly.n);
            for (l, v) in res.primal.iter().zip(&face.vertices) {
                y.axpy(l, v);
            }
            return Ok(Some(y));
        }
    }
    Ok(None)
}

/// `0 ∈ Φ_gap(x̄, ξ)`.
pub fn zero_in_gap(xbar: &QVector, xi: &QMatrix, omega: &FeasibleSet, k: &OrderingCone) -> Result<bool> {
    let poly = Polytope::from_feasible(xbar.dim(), omega)?;
    Ok(zero_point(xbar, xi, &poly, k)?.is_some())
}

/// Whether `μ∘f` is regular and `∂(μ∘f)(x̄) = Σ μᵢ ∂fᵢ(x̄)` for every
/// `μ ∈ −K*`, by signs: a component whose coefficient keeps one sign over
/// `−K*` must be regular with that sign (a max for `+`, a min for `−`),
/// and a component with mixed signs must be smooth at `x̄`.
pub fn sum_rule_by_signs(f: &ObjectiveVector, k: &OrderingCone, xbar: &QVector) -> bool {
    let gens = k.dual_neg_gens().generators();
    f.components().iter().enumerate().all(|(i, c)| {
        let smooth_here = c.active_pieces(xbar).len() == 1;
        let pos = gens.iter().any(|g| is_positive(&g[i]));
        let neg = gens.iter().any(|g| crate::exactlp::rational::is_negative(&g[i]));
        let max_like = c.is_smooth() || matches!(c, PieceFn::Max(_));
        let min_like = c.is_smooth() || matches!(c, PieceFn::Min(_));
        smooth_here || (!neg && max_like) || (!pos && min_like)
    })
}

/// Matrices `ξ` (`n × p`) whose columns are vertices of `∂fⱼ(x̄)`.
pub fn vertex_products(subdiffs: &[SubdiffPolytope], n: usize) -> Vec<QMatrix> {
    let mut out = vec![Vec::<QVector>::new()];
    for s in subdiffs {
        let mut next = Vec::new();
        for partial in &out {
            for v in s.vertices() {
                if next.len() >= MAX_VERTEX_PRODUCTS {
                    break;
                }
                let mut cols = partial.clone();
                cols.push(v.clone());
                next.push(cols);
            }
        }
        out = next;
    }
    out.into_iter().map(|cols| QMatrix::from_columns(n, &cols)).collect()
}

fn random_combination(subdiffs: &[SubdiffPolytope], n: usize, rng: &mut ChaCha8Rng) -> QMatrix {
    let cols: Vec<QVector> = subdiffs
        .iter()
        .map(|s| {
            let w: Vec<u32> = s.vertices().iter().map(|_| rng.gen_range(1..=16)).collect();
            let total: u32 = w.iter().sum();
            let mut c = QVector::zeros(n);
            for (wi, v) in w.iter().zip(s.vertices()) {
                c.axpy(&Rational::from_unsigneds(*wi, total), v);
            }
            c
        })
        .collect();
    QMatrix::from_columns(n, &cols)
}

/// Rows `a` of the constraints `aᵀy ≤ b` of the polytope tight at `x̄`;
/// they generate the normal cone there.
fn active_normals(poly: &Polytope, xbar: &QVector) -> Vec<QVector> {
    let (g, h) = split_le(&poly.constraints);
    g.into_iter()
        .zip(h.iter())
        .filter(|(a, b)| a.dot(xbar) == **b)
        .map(|(a, _)| a)
        .collect()
}

/// A subgradient matrix `ξ` for which `x̄` itself is efficient in the
/// linear problem, or `None` if there is none.
///
/// Over a polytope, `x̄` is efficient for `min ξᵀy` exactly when some `μ`
/// strictly positive on `K ∖ {0}` has `−ξμ ∈ N_Ω(x̄)`. Writing
/// `μᵢξᵢ = Σⱼ cᵢⱼvᵢⱼ` over the vertices of `∂fᵢ(x̄)` with all `cᵢⱼ` of the
/// sign of `μᵢ` makes this one LP per sign pattern of the nonsmooth
/// components.
fn supported_subgradient(
    subdiffs: &[SubdiffPolytope],
    k: &OrderingCone,
    normals: &[QVector],
    n: usize,
) -> Result<Option<QMatrix>> {
    let branching: Vec<usize> = (0..subdiffs.len()).filter(|&i| !subdiffs[i].is_singleton()).collect();
    for pattern in choices(&vec![2; branching.len()]) {
        // Per component: pairs (sign, vertex), one LP variable each. A
        // singleton gets both signs, so its `μᵢ` is free.
        let mut blocks: Vec<(usize, Vec<(Rational, &QVector)>)> = Vec::new();
        let mut vars = 0;
        for (i, s) in subdiffs.iter().enumerate() {
            let cols: Vec<(Rational, &QVector)> = match branching.iter().position(|&b| b == i) {
                Some(pos) => {
                    let sign = if pattern[pos] == 1 { -one() } else { one() };
                    s.vertices().iter().map(|v| (sign.clone(), v)).collect()
                }
                None => vec![(one(), &s.vertices()[0]), (-one(), &s.vertices()[0])],
            };
            blocks.push((vars, cols));
            vars += blocks.last().unwrap().1.len();
        }
        let total = vars + normals.len();
        let mut lp = LpProblem::feasibility(total);
        for j in 0..total {
            lp.ge(QVector::unit(total, j), zero());
        }
        // μᵀg ≥ 1 on the generators of K, with μᵢ = Σⱼ sᵢⱼcᵢⱼ.
        for g in k.vrep().generators() {
            let mut row = QVector::zeros(total);
            for (i, (off, cols)) in blocks.iter().enumerate() {
                for (j, (sign, _)) in cols.iter().enumerate() {
                    row[off + j] = sign * &g[i];
                }
            }
            lp.ge(row, one());
        }
        // Σ sᵢⱼcᵢⱼvᵢⱼ + Σ tₐa = 0.
        for r in 0..n {
            let mut row = QVector::zeros(total);
            for (off, cols) in &blocks {
                for (j, (sign, v)) in cols.iter().enumerate() {
                    row[off + j] = sign * &v[r];
                }
            }
            for (t, a) in normals.iter().enumerate() {
                row[vars + t] = a[r].clone();
            }
            lp.eq(row, zero());
        }
        let res = lp.solve()?;
        if res.status != LpStatus::Optimal {
            continue;
        }
        let columns = subdiffs
            .iter()
            .zip(&blocks)
            .map(|(s, (off, cols))| {
                if s.is_singleton() {
                    return s.vertices()[0].clone();
                }
                let weights = &res.primal[*off..off + cols.len()];
                let sum: Rational = weights.iter().sum();
                if is_zero(&sum) {
                    return s.vertices()[0].clone();
                }
                let mut col = QVector::zeros(n);
                for (w, v) in weights.iter().zip(s.vertices()) {
                    col.axpy(&(w / &sum), v);
                }
                col
            })
            .collect::<Vec<_>>();
        return Ok(Some(QMatrix::from_columns(n, &columns)));
    }
    Ok(None)
}

/// Searches `ξ ∈ ∂f(x̄)` with `0 ∈ Φ_gap(x̄, ξ)`: vertex products first,
/// then an exact search for a subgradient matrix supporting `x̄` by a
/// strictly positive scalarization. When that search finds nothing, seeded
/// convex combinations are probed as an independent check.
pub fn gap_necessary_check(inst: &VopInstance, xbar: &QVector) -> Result<ConditionReport> {
    let n = inst.n();
    let poly = Polytope::from_feasible(n, &inst.omega)?;
    if !inst.omega.contains(xbar) {
        return Err(Error::InfeasibleCandidate(format!("{xbar} violates the constraints")));
    }
    // The sign test gives regularity of every scalarization and the sum
    // rule at once.
    let applicable = if sum_rule_by_signs(&inst.f, &inst.k, xbar) {
        Truth::True
    } else {
        Truth::Unknown
    };

    let subdiffs = inst.f.component_subdiffs(xbar);
    let found = |xi: QMatrix, ybar: QVector, note: String| ConditionReport {
        id: ConditionId::Gap,
        holds: Truth::True,
        witness: Some(Witness::Gap { xi, ybar }),
        exact: true,
        applicable,
        note: Some(note),
    };

    let products = vertex_products(&subdiffs, n);
    for (tried, xi) in products.iter().enumerate() {
        if let Some(ybar) = zero_point(xbar, xi, &poly, &inst.k)? {
            return Ok(found(
                xi.clone(),
                ybar,
                format!("vertex product {} of {}", tried + 1, products.len()),
            ));
        }
    }

    let normals = active_normals(&poly, xbar);
    if let Some(xi) = supported_subgradient(&subdiffs, &inst.k, &normals, n)? {
        return match zero_point(xbar, &xi, &poly, &inst.k)? {
            Some(ybar) => Ok(found(
                xi,
                ybar,
                "subgradient matrix from a supporting scalarization".into(),
            )),
            None => Err(Error::Inconsistency(
                "a supporting scalarization exists but the candidate is not efficient for the linear problem".into(),
            )),
        };
    }

    // No supporting scalarization means no ξ at all; sampled interior
    // matrices must agree.
    let mut rng = ChaCha8Rng::seed_from_u64(GAP_SEED);
    let randoms = if subdiffs.iter().all(SubdiffPolytope::is_singleton) {
        0
    } else {
        GAP_RANDOM_PROBES
    };
    for _ in 0..randoms {
        let xi = random_combination(&subdiffs, n, &mut rng);
        if zero_point(xbar, &xi, &poly, &inst.k)?.is_some() {
            return Err(Error::Inconsistency(format!(
                "no supporting scalarization exists, yet ξ = {xi} gives 0 in the gap"
            )));
        }
    }
    Ok(ConditionReport {
        id: ConditionId::Gap,
        holds: Truth::False,
        witness: None,
        exact: true,
        applicable,
        note: Some(format!(
            "no subgradient matrix supports the candidate; {} vertex products and {randoms} convex combinations checked",
            products.len()
        )),
    })
}

/// Re-checks a gap witness: columns in the subdifferentials, `ȳ` feasible
/// and efficient for the linear problem, zero gap value.
pub fn verify_gap_witness(inst: &VopInstance, xbar: &QVector, xi: &QMatrix, ybar: &QVector) -> Result<bool> {
    let n = inst.n();
    if xi.nrows() != n || xi.ncols() != inst.p() || !inst.omega.contains(ybar) {
        return Ok(false);
    }
    let subdiffs = inst.f.component_subdiffs(xbar);
    for (j, s) in subdiffs.iter().enumerate() {
        if !s.contains(&xi.column(j))? {
            return Ok(false);
        }
    }
    if !xi.tr_mul_vec(&xbar.sub(ybar)).iter().all(is_zero) {
        return Ok(false);
    }
    let poly = Polytope::from_feasible(n, &inst.omega)?;
    LinearVop::new(xi, &poly, &inst.k)?.efficient(ybar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlp::rational::int;

    fn segment() -> FeasibleSet {
        FeasibleSet::polyhedral(
            1,
            vec![QVector::from_i64(&[1]), QVector::from_i64(&[-1])],
            QVector::from_i64(&[1, 0]),
        )
        .unwrap()
    }

    fn xi(cols: &[i64]) -> QMatrix {
        QMatrix::from_rows(cols.len(), vec![QVector::from_i64(cols)]).unwrap()
    }

    #[test]
    fn conflicting_objectives_make_every_face_efficient() {
        let l = efficient_faces(&xi(&[1, -1]), &segment(), &OrderingCone::nonneg_orthant(2)).unwrap();
        assert_eq!(l.faces_examined, 3);
        assert_eq!(l.faces.len(), 3);
    }

    #[test]
    fn aligned_objectives_keep_the_lower_end() {
        let k = OrderingCone::nonneg_orthant(2);
        let l = efficient_faces(&xi(&[1, 1]), &segment(), &k).unwrap();
        assert_eq!(l.faces.len(), 1);
        assert_eq!(l.faces[0].vertices, vec![QVector::from_i64(&[0])]);
        assert!(!zero_in_gap(&QVector::from_i64(&[1]), &xi(&[1, 1]), &segment(), &k).unwrap());
        assert!(zero_in_gap(&QVector::from_i64(&[1]), &xi(&[0, 0]), &segment(), &k).unwrap());
    }

    #[test]
    fn triangle_faces_are_counted() {
        let tri = FeasibleSet::polyhedral(
            2,
            vec![
                QVector::from_i64(&[-1, 0]),
                QVector::from_i64(&[0, -1]),
                QVector::from_i64(&[1, 1]),
            ],
            QVector::new(vec![int(0), int(0), int(1)]),
        )
        .unwrap();
        let p = Polytope::from_feasible(2, &tri).unwrap();
        assert_eq!(p.vertices().len(), 3);
        assert_eq!(p.face_count(), 7);
    }
}
