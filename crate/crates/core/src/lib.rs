//! Weighted Bohr radii and Bohr sums for bounded analytic functions,
//! quasiconformal harmonic mappings and subordination classes.
//!
//! The crate is organised bottom-up:
//!
//! * [`weights`]: weight sequences `{φₙ(r)}` with certified tail sums,
//! * [`series`]: truncated Taylor series, extremal families, samplers,
//!   class predicates, composition and the weighted Bohr sum,
//! * [`radius`]: minimal positive roots of the radius equations,
//! * [`harmonic`]: harmonic pairs `f = h + ḡ` with `g′ = λk h′`,
//! * [`subordination`]: subordinates of univalent and convex models,
//! * [`verify`]: inequality sweeps and sharpness scans with JSON reports.

// `!(x > 0.0)` style checks are meant to reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimate;
pub mod harmonic;
pub mod radius;
pub mod series;
pub mod subordination;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
pub use estimate::Estimate;
pub use num_complex::Complex64;
