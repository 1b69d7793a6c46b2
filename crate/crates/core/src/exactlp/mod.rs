//! Exact rational arithmetic, a dense simplex solver and polyhedral cones.

pub mod cone;
pub mod dd;
pub mod rational;
pub mod simplex;

pub use cone::{cone_is_trivial, ConeHRep, ConeVRep, Triviality};
pub use dd::{
    dd_generators_from_halfspaces, dd_generators_with, dd_halfspaces_from_generators, dd_halfspaces_with, DdConfig,
};
pub use rational::{null_space, parse_rational, parse_rational_or_decimal, qserde, QMatrix, QVector, Rational};
pub use simplex::{verify_farkas, LinearConstraint, LpProblem, LpResult, LpStatus, Relation, Sense};
