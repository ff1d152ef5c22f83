//! Complex scalars, rigorous rectangle enclosures and the region algebra.

pub mod cbox;
pub mod interval;
pub mod region;

pub use cbox::ComplexBox;
pub use interval::Interval;
pub use region::{Annulus, Disk, Region, Strip};

use crate::error::{Error, Result};

/// A point of the complex plane.
pub type ComplexPoint = num_complex::Complex64;

/// Upper bound `R` on `|e^z - sum_{k<n} z^k/k!|` valid for all `|z| <= rho`:
/// `R = rho^n / n! * 1 / (1 - rho/(n+1))`.
///
/// The geometric majorant needs `rho < n + 1`.
pub fn exp_tail_bound(rho: f64, n: u32) -> Result<f64> {
    if !(rho >= 0.0) || rho >= f64::from(n + 1) {
        return Err(Error::Domain(format!("exp_tail_bound needs 0 <= rho < n+1, got rho = {rho}, n = {n}")));
    }
    if rho == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let mut term = Interval::point(1.0);
    let rho_i = Interval::point(rho);
    for k in 1..=n {
        term = term.mul(&rho_i).div(&Interval::point(f64::from(k)))?;
    }
    let ratio = Interval::point(1.0).sub(&rho_i.div(&Interval::point(f64::from(n + 1)))?);
    Ok(term.div(&ratio)?.hi)
}
