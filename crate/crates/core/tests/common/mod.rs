//! Instance generators and independent reference computations shared by the
//! integration suites.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vopcert::certifier::VopInstance;
use vopcert::exactlp::rational::{int, ratio, Rational};
use vopcert::exactlp::{ConeHRep, ConeVRep, QMatrix, QVector};
use vopcert::funcalc::{ObjectiveVector, Piece, PieceFn};
use vopcert::geometry::{g1_cone, g2_cone, FeasibleSet, OrderingCone};

pub fn aff(a: &[i64], b: i64) -> Piece {
    Piece::affine(QVector::from_i64(a), int(b))
}

pub fn q(v: &[i64]) -> QVector {
    QVector::from_i64(v)
}

/// `f(x) = (max{0, x}, min{0, −x})` on `ℝ`, ordered by
/// `K = {y : y₁ + y₂ ≥ 0, y₁ ≥ 0}`, candidate `x̄ = 0`.
pub fn kink_pair() -> (VopInstance, QVector) {
    let f = ObjectiveVector::new(
        1,
        vec![
            PieceFn::Max(vec![aff(&[0], 0), aff(&[1], 0)]),
            PieceFn::Min(vec![aff(&[0], 0), aff(&[-1], 0)]),
        ],
    )
    .unwrap();
    let k = OrderingCone::from_hrep(2, vec![q(&[1, 1]), q(&[1, 0])]).unwrap();
    (VopInstance::new(f, FeasibleSet::whole_space(), k).unwrap(), q(&[0]))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_vec(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> QVector {
    (0..n).map(|_| int(rng.gen_range(lo..=hi))).collect()
}

fn nonzero_vec(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> QVector {
    loop {
        let v = small_vec(rng, n, lo, hi);
        if !v.is_zero() {
            return v;
        }
    }
}

/// `pos` of the columns of `I + L` with `L` strictly lower triangular: a
/// simplicial cone, so pointed with nonempty interior.
pub fn random_ordering_cone(rng: &mut ChaCha8Rng, p: usize) -> OrderingCone {
    if rng.gen_bool(0.3) {
        return OrderingCone::nonneg_orthant(p);
    }
    let mut m = QMatrix::identity(p);
    for i in 0..p {
        for j in 0..i {
            m.set(i, j, int(rng.gen_range(-1..=1)));
        }
    }
    let gens = (0..p).map(|j| m.column(j)).collect();
    OrderingCone::from_vrep(p, gens).expect("unimodular generators span a proper cone")
}

/// `Gx ≤ h` with a few random rows, some active at `x̄`, inside the box
/// `|x − x̄|∞ ≤ 3` so the set is a polytope.
pub fn random_polytope(rng: &mut ChaCha8Rng, xbar: &QVector) -> FeasibleSet {
    let n = xbar.dim();
    let mut g = Vec::new();
    let mut h = Vec::new();
    for _ in 0..rng.gen_range(0..=3) {
        let row = nonzero_vec(rng, n, -2, 2);
        let slack = if rng.gen_bool(0.65) { 0 } else { 1 };
        h.push(row.dot(xbar) + int(slack));
        g.push(row);
    }
    for i in 0..n {
        g.push(QVector::unit(n, i));
        h.push(xbar[i].clone() + int(3));
        g.push(QVector::unit(n, i).neg());
        h.push(-xbar[i].clone() + int(3));
    }
    FeasibleSet::polyhedral(n, g, h.into()).unwrap()
}

/// The box `lo ≤ xᵢ ≤ hi`.
pub fn box_set(n: usize, lo: i64, hi: i64) -> FeasibleSet {
    let mut g = Vec::new();
    let mut h = Vec::new();
    for i in 0..n {
        g.push(QVector::unit(n, i));
        h.push(int(hi));
        g.push(QVector::unit(n, i).neg());
        h.push(int(-lo));
    }
    FeasibleSet::polyhedral(n, g, h.into()).unwrap()
}

/// A max or min of affine pieces with the first piece active at `x̄`, or
/// a single affine piece.
pub fn random_pa_component(rng: &mut ChaCha8Rng, xbar: &QVector) -> PieceFn {
    let n = xbar.dim();
    let piece = |rng: &mut ChaCha8Rng, offset: i64| {
        let a = small_vec(rng, n, -2, 2);
        let b = -a.dot(xbar) + int(offset);
        Piece::affine(a, b)
    };
    match rng.gen_range(0..3) {
        0 => PieceFn::Smooth(piece(rng, 0)),
        kind => {
            let k = rng.gen_range(2..=3);
            let sign = if kind == 1 { -1 } else { 1 };
            let pieces = (0..k)
                .map(|i| {
                    let off = if i == 0 || rng.gen_bool(0.7) { 0 } else { sign };
                    piece(rng, off)
                })
                .collect();
            if kind == 1 {
                PieceFn::Max(pieces)
            } else {
                PieceFn::Min(pieces)
            }
        }
    }
}

/// Piecewise-affine data with `n ≤ 4`, `p ≤ 3`, a polytope and a random
/// ordering cone.
pub fn random_pa_instance(rng: &mut ChaCha8Rng) -> (VopInstance, QVector) {
    let n = rng.gen_range(1..=4);
    let p = rng.gen_range(2..=3);
    let xbar = small_vec(rng, n, -1, 1);
    let comps = (0..p).map(|_| random_pa_component(rng, &xbar)).collect();
    let f = ObjectiveVector::new(n, comps).unwrap();
    let k = random_ordering_cone(rng, p);
    let omega = random_polytope(rng, &xbar);
    (VopInstance::new(f, omega, k).unwrap(), xbar)
}

/// `½xᵀBᵀBx + aᵀx` per component: smooth and convex.
pub fn random_quadratic_instance(rng: &mut ChaCha8Rng) -> (VopInstance, QVector) {
    let n = rng.gen_range(1..=4);
    let p = rng.gen_range(2..=3);
    let xbar = small_vec(rng, n, -1, 1);
    let comps = (0..p)
        .map(|_| {
            let b = QMatrix::from_rows(n, (0..n).map(|_| small_vec(rng, n, -1, 1)).collect()).unwrap();
            let h = gram(&b);
            PieceFn::Smooth(Piece::quad(h, small_vec(rng, n, -2, 2), int(0)))
        })
        .collect();
    let f = ObjectiveVector::new(n, comps).unwrap();
    let k = random_ordering_cone(rng, p);
    let omega = random_polytope(rng, &xbar);
    (VopInstance::new(f, omega, k).unwrap(), xbar)
}

fn gram(b: &QMatrix) -> QMatrix {
    let bt = b.transpose();
    let n = b.ncols();
    let mut h = QMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            h.set(i, j, bt.row(i).dot(bt.row(j)));
        }
    }
    h
}

/// Gradients of the pieces attaining each component's value at `x̄`,
/// evaluated piece by piece.
pub fn active_gradients(f: &ObjectiveVector, xbar: &QVector) -> Vec<Vec<QVector>> {
    f.components()
        .iter()
        .map(|c| {
            let vals: Vec<Rational> = c.pieces().iter().map(|p| p.eval(xbar)).collect();
            let target = match c {
                PieceFn::Min(_) => vals.iter().min().unwrap().clone(),
                _ => vals.iter().max().unwrap().clone(),
            };
            c.pieces()
                .iter()
                .zip(&vals)
                .filter(|(_, v)| **v == target)
                .map(|(p, _)| p.gradient(xbar))
                .collect()
        })
        .collect()
}

/// `Σᵢ μᵢ vᵢ` over every choice of one active gradient `vᵢ` per
/// component and every generator `μ` of `−K*`.
pub fn g1_generators(inst: &VopInstance, xbar: &QVector) -> Vec<QVector> {
    let grads = active_gradients(&inst.f, xbar);
    let n = inst.n();
    let mut out = Vec::new();
    for mu in inst.k.dual_neg_gens().generators() {
        let mut partial = vec![QVector::zeros(n)];
        for (i, gi) in grads.iter().enumerate() {
            let mut next = Vec::new();
            for s in &partial {
                for v in gi {
                    next.push(s.add(&v.scale(&mu[i])));
                }
            }
            partial = next;
        }
        out.extend(partial);
    }
    out
}

/// Rows of the polyhedral constraints active at `x̄`; they generate the
/// normal cone.
pub fn active_normals(omega: &FeasibleSet, xbar: &QVector) -> Vec<QVector> {
    match omega {
        FeasibleSet::Polyhedral { g, h } => g
            .iter()
            .zip(h.iter())
            .filter(|(r, hj)| r.dot(xbar) == **hj)
            .map(|(r, _)| r.clone())
            .collect(),
        _ => panic!("reference computations only cover polyhedral sets"),
    }
}

/// `pos(gens) = ℝⁿ`, decided by LP membership of `±eᵢ`.
pub fn spans_space(n: usize, gens: Vec<QVector>) -> bool {
    let c = ConeVRep::new(n, gens).unwrap();
    (0..n).all(|i| c.contains(&QVector::unit(n, i)).unwrap() && c.contains(&QVector::unit(n, i).neg()).unwrap())
}

/// `G₁ ⊆ G₂` by exact containment LPs.
pub fn g1_within_g2(inst: &VopInstance, xbar: &QVector) -> bool {
    let g1 = g1_cone(&inst.f, &inst.k, xbar).unwrap();
    let g2 = g2_cone(&inst.f, &inst.k, xbar).unwrap();
    g2.outer().contains_cone(&g1).unwrap()
}

/// Set equality of a generated cone and a halfspace cone, both ways by LP.
pub fn vrep_equals_hrep(v: &ConeVRep, h: &ConeHRep, h_gens: &ConeVRep) -> bool {
    v.generators().iter().all(|g| h.contains(g)) && h_gens.generators().iter().all(|g| v.contains(g).unwrap())
}

/// Every point `k/50`, `−100 ≤ k < 100`, per coordinate.
pub fn grid_points(n: usize) -> Vec<QVector> {
    let axis: Vec<Rational> = (-100..100).map(|k| ratio(k, 50)).collect();
    let mut pts = vec![QVector::zeros(0)];
    for _ in 0..n {
        pts = pts
            .iter()
            .flat_map(|p| axis.iter().map(move |a| p.concat(&QVector::new(vec![a.clone()]))))
            .collect();
    }
    pts
}
