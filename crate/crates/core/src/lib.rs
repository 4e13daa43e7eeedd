//! `opdyn`: a deterministic laboratory for the linear dynamics of scaled
//! operator sequences `(lambda_n T^n)`.
//!
//! The crate simulates orbits of weighted backward shifts and Hardy-space
//! adjoint multipliers in log-domain arithmetic, measures the density of orbit
//! hitting sets, searches them for arithmetic and polynomial progressions,
//! builds frequently-universal witness vectors, and checks recurrence and
//! hypercyclicity criteria. Every checker returns a certificate that can be
//! re-verified from the raw operations.
//!
//! Module map:
//!
//! - [`logscalar`], [`sequence`]: log-domain scalars, scaling-sequence
//!   families and the good/bad ratio classifier.
//! - [`vector`]: finitely supported coefficient vectors, norms and balls.
//! - [`shift`]: weighted backward shifts and weight-product tables.
//! - [`symbol`]: adjoints of polynomial multipliers on the Hardy space.
//! - [`orbits`]: hitting sets, densities, progressions, recurrence witnesses.
//! - [`criteria`]: certificate-producing shift and series checkers.
//! - [`builder`]: frequently-universal vector construction.
//! - [`experiment`]: config-driven scenarios and reports.

pub mod builder;
pub mod criteria;
mod dyadic;
pub mod error;
pub mod experiment;
pub mod logscalar;
pub mod orbits;
pub mod sequence;
pub mod shift;
pub mod symbol;
mod text;
pub mod vector;

pub use error::{LabError, Result};
pub use logscalar::LogScalar;
pub use sequence::{AngleGen, Limit, RatioVerdict, ScalingSeq, Verdict};
pub use shift::{ProductKind, ProductTable, ShiftOp, WeightSeq};
pub use text::{parse_complex, parse_real};
pub use vector::{Ball, CoefVec, Side};

pub use num_complex::Complex64;
