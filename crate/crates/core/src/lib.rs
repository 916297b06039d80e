//! Exact classical and pruned Hurwitz numbers computed by independent
//! methods: transposition factorizations, tropical monodromy graphs, the
//! pruned cut-and-join recursion, and genus-zero Dyck paths and mobiles.
//!
//! Engines are generic over a [`Scalar`]; the crate root fixes the default
//! instance [`Rational`] and exposes the usual aliases.

pub mod budget;
pub mod dyck;
pub mod error;
pub mod graph;
pub mod mobile;
pub mod oracle;
pub mod partition;
pub mod perm;
pub mod poly;
pub mod pruned_tropical;
pub mod recursion;
pub mod scalar;
pub mod tropical;

pub use error::{HurwitzError, Result};
pub use partition::{HurwitzType, Partition, PrunedSide};
pub use scalar::Scalar;

/// The default exact scalar: arbitrary-precision rationals.
pub type Rational = num_rational::BigRational;
