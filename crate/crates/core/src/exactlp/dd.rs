//! Double description: conversion between halfspace and generator forms.
//!
//! The iteration starts from `{±eₖ}`, which generates the whole space, and
//! intersects one halfspace at a time. Generators on the wrong side are
//! replaced by the pairwise combinations that land on the boundary. After
//! each step, generators that lie in the cone of the others are removed by
//! an LP membership test, which keeps the list small without relying on a
//! pointed-cone adjacency argument.

use super::cone::{ConeHRep, ConeVRep};
use super::rational::{is_negative, is_positive, QVector};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DdConfig {
    /// Largest ambient dimension accepted.
    pub max_dim: usize,
}

impl Default for DdConfig {
    fn default() -> Self {
        DdConfig { max_dim: 6 }
    }
}

fn check_dim(dim: usize, cfg: &DdConfig) -> Result<()> {
    if dim > cfg.max_dim {
        return Err(Error::Capability(format!(
            "double description is limited to dimension {} (got {dim}); \
             use the perturbation oracle instead",
            cfg.max_dim
        )));
    }
    Ok(())
}

pub fn dd_generators_from_halfspaces(c: &ConeHRep) -> Result<ConeVRep> {
    dd_generators_with(c, &DdConfig::default())
}

pub fn dd_halfspaces_from_generators(c: &ConeVRep) -> Result<ConeHRep> {
    dd_halfspaces_with(c, &DdConfig::default())
}

pub fn dd_generators_with(c: &ConeHRep, cfg: &DdConfig) -> Result<ConeVRep> {
    let dim = c.dim();
    check_dim(dim, cfg)?;
    let mut gens = ConeVRep::full(dim).generators().to_vec();
    for m in c.rows() {
        let mut pos = Vec::new();
        let mut keep = Vec::new();
        for g in gens {
            let s = m.dot(&g);
            if is_positive(&s) {
                pos.push((g, s));
            } else {
                keep.push((g, s));
            }
        }
        if pos.is_empty() {
            gens = keep.into_iter().map(|(g, _)| g).collect();
            continue;
        }
        let mut next: Vec<QVector> = Vec::with_capacity(keep.len() + pos.len());
        for (neg, sn) in keep.iter().filter(|(_, s)| is_negative(s)) {
            for (p, sp) in &pos {
                let mut r = neg.scale(sp);
                r.axpy(&-sn.clone(), p);
                next.push(r);
            }
        }
        next.extend(keep.into_iter().map(|(g, _)| g));
        gens = prune(dim, next)?;
    }
    ConeVRep::new(dim, gens)
}

pub fn dd_halfspaces_with(c: &ConeVRep, cfg: &DdConfig) -> Result<ConeHRep> {
    // pos(V) = polar of {m : Vm ≤ 0}; the generators of that polar are the
    // halfspace normals.
    let rows = dd_generators_with(&c.polar(), cfg)?;
    ConeHRep::new(c.dim(), rows.generators().to_vec())
}

/// Drops generators lying in the cone spanned by the remaining ones.
fn prune(dim: usize, gens: Vec<QVector>) -> Result<Vec<QVector>> {
    let mut gens = ConeVRep::new(dim, gens)?.generators().to_vec();
    let mut i = 0;
    while i < gens.len() {
        let others: Vec<QVector> = gens
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, g)| g.clone())
            .collect();
        if ConeVRep::new(dim, others)?.contains(&gens[i])? {
            gens.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> QVector {
        QVector::from_i64(xs)
    }

    #[test]
    fn orthant_generators() {
        let h = ConeHRep::new(2, vec![v(&[-1, 0]), v(&[0, -1])]).unwrap();
        let g = dd_generators_from_halfspaces(&h).unwrap();
        assert_eq!(g.generators(), &[v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn empty_generators_give_zero_cone() {
        let g = ConeVRep::new(2, vec![]).unwrap();
        let h = dd_halfspaces_from_generators(&g).unwrap();
        assert_eq!(h, ConeHRep::zero(2));
    }

    #[test]
    fn halfplane_keeps_its_line() {
        let h = ConeHRep::new(2, vec![v(&[0, -1])]).unwrap();
        let g = dd_generators_from_halfspaces(&h).unwrap();
        assert_eq!(g.generators(), &[v(&[-1, 0]), v(&[0, 1]), v(&[1, 0])]);
        let back = dd_halfspaces_from_generators(&g).unwrap();
        assert_eq!(back.rows(), h.rows());
    }

    #[test]
    fn dimension_cap() {
        let h = ConeHRep::full(7);
        assert!(matches!(dd_generators_from_halfspaces(&h), Err(Error::Capability(_))));
        let small = DdConfig { max_dim: 1 };
        assert!(dd_generators_with(&ConeHRep::full(2), &small).is_err());
    }
}
