//! JSON instance files.
//!
//! ```json
//! {
//!   "dims": { "n": 1, "p": 2 },
//!   "objectives": [
//!     { "max": [ { "affine": { "a": [0], "b": 0 } }, { "affine": { "a": [1], "b": 0 } } ] },
//!     { "min": [ { "affine": { "a": [0], "b": 0 } }, { "affine": { "a": [-1], "b": 0 } } ] }
//!   ],
//!   "cone": { "hrep": [[1, 1], [1, 0]] },
//!   "feasible": { "polyhedral": { "g": [], "h": [] } },
//!   "candidate": [0]
//! }
//! ```
//!
//! Numbers are JSON integers or `"num/den"` strings. Unknown fields and
//! decimal numbers are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::certifier::VopInstance;
use crate::error::{Error, Result};
use crate::exactlp::rational::{qserde, QVector, Rational};
use crate::funcalc::{ObjectiveVector, PieceFn};
use crate::geometry::{validate_ordering_cone, FeasibleSet, GridMember, RawCone};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dims {
    pub n: usize,
    pub p: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyhedralSpec {
    pub g: Vec<QVector>,
    pub h: QVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConicSpec {
    pub map: Vec<PieceFn>,
    pub cone: RawCone,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscretizedSpec {
    pub members: Vec<GridMember>,
    #[serde(with = "qserde", default = "zero_tau")]
    pub tau: Rational,
}

fn zero_tau() -> Rational {
    Rational::from(0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum FeasibleSpec {
    Polyhedral(PolyhedralSpec),
    Conic(ConicSpec),
    Discretized(DiscretizedSpec),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub dims: Dims,
    pub objectives: Vec<PieceFn>,
    pub cone: RawCone,
    pub feasible: FeasibleSpec,
    pub candidate: QVector,
}

/// A validated problem together with its candidate point.
#[derive(Clone, Debug)]
pub struct Problem {
    pub instance: VopInstance,
    pub candidate: QVector,
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| classify(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files serialize")
    }

    pub fn validate(&self) -> Result<Problem> {
        let Dims { n, p, q } = self.dims;
        if p < 2 {
            return Err(Error::Dimension(format!("p must be at least 2, got {p}")));
        }
        if self.objectives.len() != p {
            return Err(Error::Dimension(format!(
                "dims say p = {p} but {} objectives are given",
                self.objectives.len()
            )));
        }
        if self.candidate.dim() != n {
            return Err(Error::Dimension(format!(
                "candidate has {} entries, n = {n}",
                self.candidate.dim()
            )));
        }
        let f = ObjectiveVector::new(n, self.objectives.clone())?;
        let k = validate_ordering_cone(p, self.cone.clone())?;
        let omega = match &self.feasible {
            FeasibleSpec::Polyhedral(s) => FeasibleSet::polyhedral(n, s.g.clone(), s.h.clone())?,
            FeasibleSpec::Conic(s) => {
                let qd = s.map.len();
                if q.is_some_and(|q| q != qd) {
                    return Err(Error::Dimension(format!(
                        "dims say q = {} but the constraint map has {qd} components",
                        q.unwrap()
                    )));
                }
                FeasibleSet::Conic {
                    map: ObjectiveVector::new(n, s.map.clone())?,
                    cone: validate_ordering_cone(qd, s.cone.clone())?,
                }
            }
            FeasibleSpec::Discretized(s) => {
                if q.is_some_and(|q| q != s.members.len()) {
                    return Err(Error::Dimension(format!(
                        "dims say q = {} but the family has {} members",
                        q.unwrap(),
                        s.members.len()
                    )));
                }
                FeasibleSet::Discretized {
                    members: s.members.clone(),
                    tau: s.tau.clone(),
                }
            }
        };
        let instance = VopInstance::new(f, omega, k)?;
        Ok(Problem {
            instance,
            candidate: self.candidate.clone(),
        })
    }
}

/// Maps serde's message back onto the error kinds raised inside the
/// rational deserializer.
fn classify(msg: String) -> Error {
    if msg.contains("malformed rational") {
        Error::MalformedRational(msg)
    } else if msg.contains("decimal number not accepted") {
        Error::DecimalNotAccepted(msg)
    } else {
        Error::Parse(msg)
    }
}

pub fn parse_instance_str(text: &str) -> Result<Problem> {
    InstanceFile::from_json(text)?.validate()
}

pub fn parse_instance(path: impl AsRef<Path>) -> Result<Problem> {
    parse_instance_str(&std::fs::read_to_string(path)?)
}
