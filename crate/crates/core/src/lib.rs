//! Finite exponential sums of zeta type: evaluation, exact identities and
//! growth-exponent estimates.

// exact table constants and NaN-rejecting `!(x > y)` guards are deliberate
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod dd;
pub mod doublesums;
pub mod error;
pub mod estlab;
pub mod kernel;
pub mod phases;

pub use dd::{CDd, Dd};
pub use error::{Error, Result};
pub use kernel::{ComplexScalar, Precision, C64};
pub use phases::{PhaseKind, PrefixTable, SumSpec};
