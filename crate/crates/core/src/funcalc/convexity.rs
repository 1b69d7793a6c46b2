//! Convexity of scalarizations and cone-convexity of vector functions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlp::rational::{int, is_negative, is_positive, is_zero, one, ratio, QMatrix, QVector, Rational};
use crate::exactlp::simplex::{LpProblem, LpStatus};
use crate::geometry::OrderingCone;

use super::scalarize::scaled_term_is_convex;
use super::selection::{full_dimensional_cells, AffineTerm};
use super::{ObjectiveVector, Piece};

/// Random pairs tried by the midpoint falsification sweep.
pub const MIDPOINT_SAMPLES: usize = 1000;

/// Seed used when the caller does not supply one.
pub const DEFAULT_CONVEXITY_SEED: u64 = 20_240_601;

/// Points `x`, `y` and weight `λ` at which
/// `f(λx + (1−λ)y) − λf(x) − (1−λ)f(y)` leaves `−K`; the scalarization is
/// the generator of `−K*` that exposes it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvexityWitness {
    pub x: QVector,
    pub y: QVector,
    #[serde(with = "crate::exactlp::qserde")]
    pub lambda: Rational,
    pub scalarization: QVector,
}

impl ConvexityWitness {
    pub fn point(&self) -> QVector {
        let mut p = self.x.scale(&self.lambda);
        p.axpy(&(one() - &self.lambda), &self.y);
        p
    }

    /// `f(λx + (1−λ)y) − λf(x) − (1−λ)f(y)`.
    pub fn defect(&self, f: &ObjectiveVector) -> QVector {
        let mut d = f.eval(&self.point());
        d.axpy(&-self.lambda.clone(), &f.eval(&self.x));
        d.axpy(&(&self.lambda - one()), &f.eval(&self.y));
        d
    }

    /// Re-checks the witness against `f` and `K` by substitution.
    pub fn verify(&self, f: &ObjectiveVector, k: &OrderingCone) -> bool {
        is_positive(&self.lambda)
            && self.lambda < one()
            && is_positive(&self.scalarization.dot(&self.defect(f)))
            && !k.contains(&self.defect(f).neg())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum KConvexity {
    Convex,
    NotConvex(ConvexityWitness),
    Unknown,
}

impl KConvexity {
    pub fn is_convex(&self) -> bool {
        matches!(self, KConvexity::Convex)
    }
}

/// A vector `v` with `vᵀHv < 0`, or `None` when `H` is positive
/// semidefinite. Exact symmetric elimination.
pub fn hessian_psd_witness(h: &QMatrix) -> Option<QVector> {
    let rows: Vec<Vec<Rational>> = h.rows().iter().map(|r| r.to_vec()).collect();
    psd_witness(rows).map(QVector::new)
}

fn psd_witness(h: Vec<Vec<Rational>>) -> Option<Vec<Rational>> {
    let n = h.len();
    if n == 0 {
        return None;
    }
    let h00 = &h[0][0];
    if is_negative(h00) {
        let mut v = vec![int(0); n];
        v[0] = one();
        return Some(v);
    }
    if is_zero(h00) {
        if let Some(j) = (1..n).find(|&j| !is_zero(&h[0][j])) {
            // (t e₀ + eⱼ)ᵀH(t e₀ + eⱼ) = 2t·h₀ⱼ + hⱼⱼ; pick t so this is ≤ −1.
            let hjj = h[j][j].clone();
            let mag = if is_negative(&hjj) { -hjj } else { hjj } + one();
            let t = -mag / (int(2) * &h[0][j]);
            let mut v = vec![int(0); n];
            v[0] = t;
            v[j] = one();
            return Some(v);
        }
        let sub: Vec<Vec<Rational>> = h[1..].iter().map(|r| r[1..].to_vec()).collect();
        return psd_witness(sub).map(|w| std::iter::once(int(0)).chain(w).collect());
    }
    // Schur complement; a witness w for it lifts to (−h₀·w / h₀₀, w).
    let sub: Vec<Vec<Rational>> = (1..n)
        .map(|i| (1..n).map(|j| &h[i][j] - &h[i][0] * &h[0][j] / h00).collect())
        .collect();
    psd_witness(sub).map(|w| {
        let mut lead = int(0);
        for (j, wj) in w.iter().enumerate() {
            lead -= &h[0][j + 1] * wj;
        }
        std::iter::once(lead / h00).chain(w).collect()
    })
}

pub(crate) fn piece_is_convex(p: &Piece) -> bool {
    match p {
        Piece::Affine(_) => true,
        Piece::Quad(q) => hessian_psd_witness(&q.h).is_none(),
    }
}

/// Convexity of `h = Σ μᵢ fᵢ` on `ℝⁿ`.
///
/// Decided exactly when every term is convex by construction, when `h` is
/// piecewise-affine (a continuous piecewise-affine function is convex iff
/// it dominates, on each cell, the affine functions of all other cells),
/// and when `h` is quadratic (Hessian test). Otherwise the midpoint
/// inequality is tried on seeded random pairs.
pub fn scalar_convexity(mu: &QVector, f: &ObjectiveVector, seed: u64) -> Result<KConvexity> {
    if mu.dim() != f.len() {
        return Err(Error::Dimension(format!(
            "scalarization of length {} for a {}-component map",
            mu.dim(),
            f.len()
        )));
    }
    let n = f.dim();
    let terms: Vec<(&Rational, _)> = mu.iter().zip(f.components()).filter(|(m, _)| !is_zero(m)).collect();
    if terms.iter().all(|(m, c)| scaled_term_is_convex(m, c)) {
        return Ok(KConvexity::Convex);
    }
    if terms.iter().all(|(_, c)| c.is_piecewise_affine()) {
        let aff: Vec<AffineTerm> = terms
            .iter()
            .map(|(m, c)| AffineTerm::exact((*m).clone(), c).expect("piecewise-affine"))
            .collect();
        return piecewise_affine_convexity(n, &aff, mu);
    }
    if terms.iter().all(|(_, c)| c.is_smooth()) {
        let mut h = QMatrix::zeros(n, n);
        for (m, c) in &terms {
            h = h.add(&c.pieces()[0].hessian().scale(m));
        }
        return Ok(match hessian_psd_witness(&h) {
            None => KConvexity::Convex,
            Some(v) => KConvexity::NotConvex(ConvexityWitness {
                x: v.neg(),
                y: v,
                lambda: ratio(1, 2),
                scalarization: mu.clone(),
            }),
        });
    }
    Ok(midpoint_sweep(mu, f, seed))
}

fn piecewise_affine_convexity(n: usize, terms: &[AffineTerm], mu: &QVector) -> Result<KConvexity> {
    let cells = full_dimensional_cells(n, terms, None)?;
    let funcs: Vec<_> = cells.iter().map(|c| c.combined(terms, n)).collect();
    for (k, cell_k) in cells.iter().enumerate() {
        for (j, cell_j) in cells.iter().enumerate() {
            if j == k || funcs[j] == funcs[k] {
                continue;
            }
            // min (h_k − h_j)(x) over cell k, floored at −1.
            let diff_a = funcs[k].a.sub(&funcs[j].a);
            let diff_b = &funcs[k].b - &funcs[j].b;
            let mut lp = LpProblem::minimize(diff_a.clone());
            for c in &cell_k.constraints {
                lp.push(c.clone());
            }
            lp.ge(diff_a.clone(), int(-1) - &diff_b);
            let res = lp.solve()?;
            if res.status != LpStatus::Optimal {
                continue;
            }
            if !is_negative(&(res.value.unwrap() + &diff_b)) {
                continue;
            }
            let x = res.primal;
            let z = cell_j.interior.clone();
            let mut lambda = one();
            let w = loop {
                let mut p = z.clone();
                p.axpy(&lambda, &x.sub(&z));
                if cell_j.contains(&p) {
                    break p;
                }
                lambda /= int(2);
            };
            // x cannot lie in cell j, where h_j would equal h_k, so λ < 1.
            debug_assert!(cell_j.contains(&w) && lambda < one());
            return Ok(KConvexity::NotConvex(ConvexityWitness {
                x,
                y: z,
                lambda,
                scalarization: mu.clone(),
            }));
        }
    }
    Ok(KConvexity::Convex)
}

fn midpoint_sweep(mu: &QVector, f: &ObjectiveVector, seed: u64) -> KConvexity {
    let n = f.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> QVector { (0..n).map(|_| ratio(rng.gen_range(-32..=32), 8)).collect() };
    let half = ratio(1, 2);
    for _ in 0..MIDPOINT_SAMPLES {
        let x = draw(&mut rng);
        let y = draw(&mut rng);
        let w = ConvexityWitness {
            x,
            y,
            lambda: half.clone(),
            scalarization: mu.clone(),
        };
        if is_positive(&mu.dot(&w.defect(f))) {
            return KConvexity::NotConvex(w);
        }
    }
    KConvexity::Unknown
}

/// `f` is `K`-convex iff `g∘f` is convex for every generator `g` of `−K*`.
pub fn kconvexity_check(f: &ObjectiveVector, k: &OrderingCone) -> Result<KConvexity> {
    kconvexity_check_seeded(f, k, DEFAULT_CONVEXITY_SEED)
}

pub fn kconvexity_check_seeded(f: &ObjectiveVector, k: &OrderingCone, seed: u64) -> Result<KConvexity> {
    if k.dim() != f.len() {
        return Err(Error::Dimension(format!(
            "cone in R^{} for a {}-component map",
            k.dim(),
            f.len()
        )));
    }
    let mut unknown = false;
    for g in k.dual_neg_gens().generators() {
        match scalar_convexity(g, f, seed)? {
            KConvexity::Convex => {}
            KConvexity::NotConvex(w) => return Ok(KConvexity::NotConvex(w)),
            KConvexity::Unknown => unknown = true,
        }
    }
    Ok(if unknown {
        KConvexity::Unknown
    } else {
        KConvexity::Convex
    })
}
