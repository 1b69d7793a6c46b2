//! Brute-force refutation of robust efficiency.
//!
//! Perturbations `C` with `‖C‖_F < r` are enumerated in a fixed order: the
//! zero matrix, the coordinate patterns `±ρEᵢⱼ` and `ρ(±Eᵢⱼ ± Eₖₗ)` with
//! `ρ = r/10`, then seeded random matrices on a `2⁻²⁰` lattice. Each sample
//! gets an exact efficiency check of `x̄` for `f + C·`. The first sample in
//! that order that exposes a dominating point is reported, whatever the
//! number of worker threads.

use malachite_base::num::arithmetic::traits::{CeilingSqrt, Sign};
use malachite_nz::natural::Natural;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::cmp::Ordering;

use crate::certifier::{efficiency_check_perturbed, verify_domination, EfficiencyPlan, VopInstance};
use crate::error::{Error, Result};
use crate::exactlp::rational::{is_positive, qserde, ratio, zero, QMatrix, QVector, Rational};

pub const DEFAULT_BUDGET: usize = 1000;
pub const DEFAULT_SEED: u64 = 7;
/// Bisection levels used by [`radius_estimate`].
pub const RADIUS_LEVELS: usize = 8;
/// Environment variable holding the worker count for sampling.
pub const WORKERS_ENV: &str = "VOPCERT_WORKERS";

const LATTICE_BITS: u32 = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerturbationMatrix {
    pub c: QMatrix,
    #[serde(with = "qserde")]
    pub frobenius_sq: Rational,
}

impl PerturbationMatrix {
    pub fn new(c: QMatrix) -> Self {
        let frobenius_sq = c.frobenius_sq();
        PerturbationMatrix { c, frobenius_sq }
    }

    /// `‖C‖_F < r`, compared through squares.
    pub fn within(&self, r: &Rational) -> bool {
        self.frobenius_sq < r * r
    }
}

/// Where a sample came from in the enumeration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleSource {
    Zero,
    Pattern(usize),
    Random(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Outcome {
    RefutedWithWitness {
        perturbation: PerturbationMatrix,
        y: QVector,
        source: SampleSource,
    },
    NoCounterexampleFound {
        budget: usize,
        seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub outcome: Outcome,
    #[serde(with = "qserde")]
    pub radius: Rational,
    pub samples_tried: usize,
    pub patterns_tried: usize,
    /// False when per-sample efficiency was decided by grid search, which
    /// makes a clean outcome merely suggestive.
    pub exact: bool,
}

impl OracleReport {
    pub fn is_refuted(&self) -> bool {
        matches!(self.outcome, Outcome::RefutedWithWitness { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub budget: usize,
    pub seed: u64,
    pub patterns: bool,
    /// Worker threads; `None` reads [`WORKERS_ENV`], then uses the global pool.
    pub workers: Option<usize>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            budget: DEFAULT_BUDGET,
            seed: DEFAULT_SEED,
            patterns: true,
            workers: None,
        }
    }
}

/// `±ρEᵢⱼ`, then `ρ(s Eᵢⱼ + t Eₖₗ)` for `(i,j) < (k,l)` and signs `s, t`.
pub fn structured_patterns(p: usize, n: usize, r: &Rational) -> Vec<QMatrix> {
    let rho = r * ratio(1, 10);
    let cells = p * n;
    let mat = |entries: &[(usize, Rational)]| {
        let mut c = QMatrix::zeros(p, n);
        for (idx, v) in entries {
            c.set(idx / n, idx % n, v.clone());
        }
        c
    };
    let signs = [rho.clone(), -rho.clone()];
    let mut out = Vec::new();
    for a in 0..cells {
        for s in &signs {
            out.push(mat(&[(a, s.clone())]));
        }
    }
    for a in 0..cells {
        for b in a + 1..cells {
            for s in &signs {
                for t in &signs {
                    out.push(mat(&[(a, s.clone()), (b, t.clone())]));
                }
            }
        }
    }
    out
}

/// Random sample number `index`: integer entries `Mᵢⱼ ∈ [−2²⁰, 2²⁰]` and
/// `C = r·M / (2²⁰(c+1))` with `c = ⌈√(pn)⌉`, so `‖C‖_F < r`.
pub fn random_matrix(p: usize, n: usize, r: &Rational, seed: u64, index: usize) -> QMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let bound = 1i64 << LATTICE_BITS;
    let c = Natural::from((p * n) as u64).ceiling_sqrt();
    let scale = r / (Rational::from(bound) * Rational::from(c + Natural::from(1u32)));
    let mut m = QMatrix::zeros(p, n);
    for i in 0..p {
        for j in 0..n {
            let v: i64 = rng.gen_range(-bound..=bound);
            m.set(i, j, Rational::from(v) * &scale);
        }
    }
    m
}

fn worker_count(cfg: &OracleConfig) -> Option<usize> {
    cfg.workers.or_else(|| {
        std::env::var(WORKERS_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .filter(|&w: &usize| w > 0)
    })
}

pub fn robust_oracle(
    inst: &VopInstance,
    xbar: &QVector,
    r: &Rational,
    budget: usize,
    seed: u64,
) -> Result<OracleReport> {
    robust_oracle_with(
        inst,
        xbar,
        r,
        &OracleConfig {
            budget,
            seed,
            ..OracleConfig::default()
        },
    )
}

pub fn robust_oracle_with(
    inst: &VopInstance,
    xbar: &QVector,
    r: &Rational,
    cfg: &OracleConfig,
) -> Result<OracleReport> {
    robust_oracle_planned(inst, xbar, r, cfg, EfficiencyPlan::new(inst)?.as_ref())
}

fn robust_oracle_planned(
    inst: &VopInstance,
    xbar: &QVector,
    r: &Rational,
    cfg: &OracleConfig,
    plan: Option<&EfficiencyPlan>,
) -> Result<OracleReport> {
    if !is_positive(r) {
        return Err(Error::Parse(format!("oracle radius must be positive, got {r}")));
    }
    if !inst.omega.contains(xbar) {
        return Err(Error::InfeasibleCandidate(format!("{xbar} violates the constraints")));
    }
    let (p, n) = (inst.p(), inst.n());
    let patterns = if cfg.patterns {
        structured_patterns(p, n, r)
    } else {
        Vec::new()
    };
    let mut sources = vec![SampleSource::Zero];
    sources.extend((0..patterns.len()).map(SampleSource::Pattern));
    sources.extend((0..cfg.budget).map(SampleSource::Random));
    let matrix = |s: SampleSource| match s {
        SampleSource::Zero => QMatrix::zeros(p, n),
        SampleSource::Pattern(i) => patterns[i].clone(),
        SampleSource::Random(i) => random_matrix(p, n, r, cfg.seed, i),
    };
    let probe = |s: &SampleSource| -> Option<Result<(SampleSource, QMatrix, QVector)>> {
        let c = matrix(*s);
        let res = match plan {
            Some(plan) => plan.check(inst, xbar, Some(&c)),
            None => efficiency_check_perturbed(inst, xbar, Some(&c)),
        };
        match res {
            Ok(e) if e.efficient => None,
            Ok(e) => Some(Ok((*s, c, e.witness.expect("dominated points carry a witness")))),
            Err(err) => Some(Err(err)),
        }
    };
    let search = || sources.par_iter().find_map_first(probe);
    let found = match worker_count(cfg) {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::Capability(format!("cannot start {w} workers: {e}")))?
            .install(search),
        None => search(),
    };
    let exact = plan.is_some();
    match found {
        None => Ok(OracleReport {
            outcome: Outcome::NoCounterexampleFound {
                budget: cfg.budget,
                seed: cfg.seed,
            },
            radius: r.clone(),
            samples_tried: cfg.budget,
            patterns_tried: patterns.len(),
            exact,
        }),
        Some(Err(e)) => Err(e),
        Some(Ok((source, c, y))) => {
            let perturbation = PerturbationMatrix::new(c);
            if !perturbation.within(r) || !verify_domination(inst, xbar, Some(&perturbation.c), &y) {
                return Err(Error::Inconsistency(format!(
                    "refutation from {source:?} failed re-verification"
                )));
            }
            let (samples_tried, patterns_tried) = match source {
                SampleSource::Zero => (0, 0),
                SampleSource::Pattern(i) => (0, i + 1),
                SampleSource::Random(i) => (i + 1, patterns.len()),
            };
            Ok(OracleReport {
                outcome: Outcome::RefutedWithWitness {
                    perturbation,
                    y,
                    source,
                },
                radius: r.clone(),
                samples_tried,
                patterns_tried,
                exact,
            })
        }
    }
}

/// Re-checks a refutation by substitution only.
pub fn verify_refutation(inst: &VopInstance, xbar: &QVector, r: &Rational, c: &QMatrix, y: &QVector) -> bool {
    c.nrows() == inst.p()
        && c.ncols() == inst.n()
        && PerturbationMatrix::new(c.clone()).within(r)
        && verify_domination(inst, xbar, Some(c), y)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RadiusProbe {
    #[serde(with = "qserde")]
    pub radius: Rational,
    pub refuted: bool,
}

/// One-sided robustness radius bracket: a clean probe is not a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RadiusEstimate {
    #[serde(with = "crate::exactlp::rational::qserde_opt")]
    pub refuted_at: Option<Rational>,
    #[serde(with = "qserde")]
    pub clean_below: Rational,
    pub trace: Vec<RadiusProbe>,
}

/// Bisection over `[0, r_max]`: probe `r_max`, then halve the bracket
/// [`RADIUS_LEVELS`] times.
pub fn radius_estimate(
    inst: &VopInstance,
    xbar: &QVector,
    r_max: &Rational,
    budget: usize,
    seed: u64,
) -> Result<RadiusEstimate> {
    let cfg = OracleConfig {
        budget,
        seed,
        ..OracleConfig::default()
    };
    let mut est = RadiusEstimate {
        refuted_at: None,
        clean_below: zero(),
        trace: Vec::new(),
    };
    if r_max.sign() != Ordering::Greater {
        return Ok(est);
    }
    let plan = EfficiencyPlan::new(inst)?;
    let probe = |r: Rational, est: &mut RadiusEstimate| -> Result<bool> {
        let refuted = robust_oracle_planned(inst, xbar, &r, &cfg, plan.as_ref())?.is_refuted();
        est.trace.push(RadiusProbe {
            radius: r.clone(),
            refuted,
        });
        if refuted {
            est.refuted_at = Some(r);
        } else {
            est.clean_below = r;
        }
        Ok(refuted)
    };
    if !probe(r_max.clone(), &mut est)? {
        return Ok(est);
    }
    for _ in 0..RADIUS_LEVELS {
        let hi = est.refuted_at.clone().expect("bracket has a refuted end");
        let mid = (&est.clean_below + &hi) * ratio(1, 2);
        probe(mid, &mut est)?;
    }
    Ok(est)
}
