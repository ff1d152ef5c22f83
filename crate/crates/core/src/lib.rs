//! Explicit meromorphic maps with wandering domains, checked numerically.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: intervals, complex boxes and a region algebra with
//!   conservative box predicates;
//! * [`maps`]: the bundled families as expression trees with rigorous
//!   enclosures and symbolic derivatives;
//! * [`dynamics`]: orbits, fixed points, station tracking and raster
//!   classification;
//! * [`topology`]: connected components of rasters and their hole counts;
//! * [`certify`]: subdivision certificates, winding numbers and root counts;
//! * [`cli`]: scenarios, reports and pixmap rendering.

// Negated comparisons are deliberate: they send NaN down the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Expression builders mirror the node names.
#![allow(clippy::should_implement_trait)]

pub mod certify;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod maps;
pub mod numerics;
pub mod topology;

pub use error::{Error, Result};
pub use numerics::ComplexPoint;
