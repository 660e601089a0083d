//! Certified subdivision machinery for chains over word-hyperbolic groups.
//!
//! The crate builds, for a finitely presented group with a decidable word
//! problem on a ball, the homogeneous chain complex together with an
//! inductively defined subdivision chain map whose output size is controlled
//! linearly by simplex diameter. Every identity the construction relies on
//! (chain map, contraction, homotopy) is verified algebraically over exact
//! integer and rational arithmetic; nothing is trusted to floating point.
//!
//! Pipeline, bottom up:
//!
//! * [`group`]: presentations, ShortLex normal forms, Cayley balls, the
//!   canonical equivariant geodesic family and geodesic hulls.
//! * [`chain`]: free `ZG`-chains in the homogeneous resolution, boundary,
//!   norms, Rips membership.
//! * [`tree`]: finite metric trees with exact rational edge lengths.
//! * [`approx`]: Gromov-product tree approximation of geodesic hulls and the
//!   measured correspondence between a hull and its tree.
//! * [`contraction`]: norm-bounded chain contraction of a metric tree's Rips
//!   complex with explicit effectivity constants.
//! * [`subdivision`]: the inductive subdivision map, its prism homotopy, the
//!   radius schedule, and per-simplex certificates.
//! * [`homology`]: finite Rips complexes over a ball, Smith normal form,
//!   homology groups, and an explicit nullhomotopy builder used as an
//!   independent oracle.
//! * [`report`]: canonical JSON serialization, presentation fingerprints,
//!   and deterministic certification and benchmark reports.

pub mod approx;
pub mod chain;
pub mod contraction;
pub mod corpus;
pub mod error;
pub mod group;
pub mod homology;
pub mod ratio;
pub mod report;
pub mod subdivision;
pub mod tree;
pub mod words;

pub use error::{Error, Result};
