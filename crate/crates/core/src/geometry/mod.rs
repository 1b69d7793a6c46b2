//! Ordering cones, feasible sets and the cones built from them at a
//! candidate point.

mod feasible;
mod nonascent;
mod ordering_cone;

use serde::Serialize;

pub use feasible::{normal_cone, tangent_cone, ApproxCone, ConicSupport, FeasibleSet, GridMember};
pub use nonascent::{cq1_check, cq1_from_cones, g1_cone, g1_from_subdiffs, g2_cone, G2Cone};
pub use ordering_cone::{validate_ordering_cone, OrderingCone, RawCone};

/// Three-valued outcome of a check whose prerequisites may be unavailable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl From<bool> for Truth {
    fn from(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }
}

impl Truth {
    pub fn is_true(self) -> bool {
        self == Truth::True
    }
}
