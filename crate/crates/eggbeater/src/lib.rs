//! Exact computational model of egg-beater maps on a glued pair of annuli.
//!
//! The library covers, in exact rational arithmetic wherever the objects are
//! rational:
//!
//! * free-group combinatorics on words in two generators `V`, `H`
//!   ([`word`]): reduction, conjugacy, balanced forms and the
//!   conjugation-invariant quantities `tau` and `eta`;
//! * the glued surface `C = C_H ∪ C_V`, its gluing maps, regions and
//!   reference loops ([`geometry`]);
//! * the piecewise-linear shear flow, its universal-cover lift and an exact
//!   piecewise-cubic smoothing profile ([`shear`]);
//! * the fixed-point solver for egg-beater compositions, one solution per
//!   sign vector, with validity checks and large-parameter asymptotics
//!   ([`fixed_points`]);
//! * actions and Conley-Zehnder indices of the solved fixed points, backed by
//!   an independent Robbin-Salamon crossing oracle ([`floer`]);
//! * the resulting boundary-depth / Hofer-norm lower bounds and growth scans
//!   ([`bounds`]).

pub mod bounds;
pub mod error;
pub mod fixed_points;
pub mod floer;
pub mod geometry;
pub mod linalg;
pub mod rational;
pub mod report;
pub mod shear;
pub mod word;

pub use error::{Error, Result};
pub use rational::Rat;
