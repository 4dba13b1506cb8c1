//! Quasi-triangular Hom-bialgebras over approximate complex scalars and
//! truncated power series in `h`.
//!
//! Structures are finite-dimensional and stored densely in a fixed basis.
//! Every axiom is checked numerically and reported as a residual, the
//! maximum coefficient magnitude of `LHS - RHS`.

// `!(r < tol)` is deliberate: a NaN residual must fail.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod error;
pub mod hommodules;
pub mod homstruct;
pub mod io;
pub mod quasitri;
pub mod scalars;
pub mod tensor;
pub mod twisting;

pub use error::{Error, Result};
pub use scalars::{HSeries, RingKind, Scalar, ScalarRing, DEFAULT_ORDER, DEFAULT_TOLERANCE};
pub use tensor::{LegPair, LinearOperator, ResidualNorm, TensorElement};
