//! Closed real intervals with outward epsilon inflation.
//!
//! Every endpoint computation is done in round-to-nearest and then pushed
//! outward: the width is scaled by `1 + 2^-40` and each endpoint moves one
//! unit in the last place. Transcendental endpoints get an additional
//! relative widening that covers the libm error budget.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative width inflation applied to every operation result.
const WIDTH_INFLATION: f64 = 1.0 / 1_099_511_627_776.0; // 2^-40
/// Relative slack for endpoints produced by libm transcendentals.
const TRANSCENDENTAL_SLACK: f64 = 1.0 / 281_474_976_710_656.0; // 2^-48

#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl Interval {
    /// Enclosure of the true value of pi.
    pub const PI: Interval = Interval { lo: PI, hi: 3.141_592_653_589_793_6 };

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub const fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Rounds a freshly computed `[lo, hi]` outward.
    pub fn outward(lo: f64, hi: f64) -> Self {
        let slack = if hi > lo { (hi - lo) * WIDTH_INFLATION * 0.5 } else { 0.0 };
        Interval { lo: (lo - slack).next_down(), hi: (hi + slack).next_up() }
    }

    fn transcendental(lo: f64, hi: f64) -> Self {
        Self::outward(lo - lo.abs() * TRANSCENDENTAL_SLACK, hi + hi.abs() * TRANSCENDENTAL_SLACK)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    /// Intersection of two enclosures of the same quantity. When rounding
    /// makes them barely disjoint the hull is returned instead.
    pub fn meet(&self, other: &Interval) -> Interval {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo <= hi {
            Interval { lo, hi }
        } else {
            self.hull(other)
        }
    }

    /// Smallest absolute value in the interval.
    pub fn mig(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Self::outward(self.lo + other.lo, self.hi + other.hi)
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Self::outward(self.lo - other.hi, self.hi - other.lo)
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let products = [self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi];
        let lo = products.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = products.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self::outward(lo, hi)
    }

    pub fn scale(&self, k: f64) -> Interval {
        self.mul(&Interval::point(k))
    }

    /// Exact range of `x^2`, rounded outward.
    pub fn sqr(&self) -> Interval {
        let m = self.mig();
        let big = self.mag();
        Self::outward(m * m, big * big).clamp_below(0.0)
    }

    pub fn recip(&self) -> Result<Interval> {
        if self.contains_zero() {
            return Err(Error::PoleIntersect);
        }
        Ok(Self::outward(1.0 / self.hi, 1.0 / self.lo))
    }

    pub fn div(&self, other: &Interval) -> Result<Interval> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn sqrt(&self) -> Result<Interval> {
        if self.lo < 0.0 {
            return Err(Error::Domain(format!("sqrt of {self:?}")));
        }
        Ok(Self::outward(self.lo.sqrt(), self.hi.sqrt()).clamp_below(0.0))
    }

    pub fn exp(&self) -> Interval {
        Self::transcendental(self.lo.exp(), self.hi.exp()).clamp_below(0.0)
    }

    pub fn sinh(&self) -> Interval {
        Self::transcendental(self.lo.sinh(), self.hi.sinh())
    }

    pub fn cosh(&self) -> Interval {
        let (a, b) = (self.lo.cosh(), self.hi.cosh());
        let lo = if self.contains_zero() { 1.0 } else { a.min(b) };
        Self::transcendental(lo, a.max(b)).clamp_below(1.0)
    }

    pub fn sin(&self) -> Interval {
        // maxima at pi/2 + 2k pi, minima at -pi/2 + 2k pi
        self.periodic_range(f64::sin, FRAC_PI_2, -FRAC_PI_2)
    }

    pub fn cos(&self) -> Interval {
        self.periodic_range(f64::cos, 0.0, PI)
    }

    /// Range of a unit-amplitude 2pi-periodic function whose maxima sit at
    /// `max_at + 2k pi` and minima at `min_at + 2k pi`, found by
    /// enumerating the critical points inside the interval.
    fn periodic_range(&self, f: fn(f64) -> f64, max_at: f64, min_at: f64) -> Interval {
        let two_pi = 2.0 * PI;
        if !(self.width() < two_pi) {
            return Interval { lo: -1.0, hi: 1.0 };
        }
        let hits = |c: f64| {
            // A little slack keeps critical points that rounding would push
            // just outside the interval; over-inclusion only widens.
            let k_lo = ((self.lo - c) / two_pi - 1e-12).ceil();
            let k_hi = ((self.hi - c) / two_pi + 1e-12).floor();
            k_lo <= k_hi
        };
        let (a, b) = (f(self.lo), f(self.hi));
        let hi = if hits(max_at) { 1.0 } else { a.max(b) };
        let lo = if hits(min_at) { -1.0 } else { a.min(b) };
        let r = Self::transcendental(lo, hi);
        Interval { lo: r.lo.max(-1.0), hi: r.hi.min(1.0) }
    }

    /// `x^n` for a non-negative integer exponent.
    pub fn powi(&self, n: u32) -> Interval {
        match n {
            0 => Interval::point(1.0),
            1 => *self,
            _ if n.is_multiple_of(2) => self.powi(n / 2).sqr(),
            _ => self.powi(n - 1).mul(self),
        }
    }

    pub(crate) fn clamp_below(self, floor: f64) -> Interval {
        Interval { lo: self.lo.max(floor), hi: self.hi.max(floor) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_enclosure_brackets_the_constant() {
        // pi = 3.14159265358979323846...
        const { assert!(Interval::PI.lo < Interval::PI.hi) };
        assert_eq!(Interval::PI.hi, PI.next_up());
    }

    #[test]
    fn outward_rounding_strictly_widens() {
        let x = Interval::outward(1.0, 2.0);
        assert!(x.lo < 1.0 && x.hi > 2.0);
    }

    #[test]
    fn sin_catches_interior_maximum() {
        let x = Interval::new(1.0, 2.0).sin();
        assert_eq!(x.hi, 1.0);
        assert!(x.lo <= 1.0f64.sin());
    }

    #[test]
    fn cos_over_full_period_is_unit_range() {
        let x = Interval::new(-4.0, 4.0).cos();
        assert_eq!((x.lo, x.hi), (-1.0, 1.0));
    }

    #[test]
    fn recip_rejects_zero() {
        assert!(matches!(Interval::new(-1.0, 1.0).recip(), Err(Error::PoleIntersect)));
    }

    #[test]
    fn cosh_of_straddling_interval_starts_at_one() {
        let x = Interval::new(-0.5, 2.0).cosh();
        assert_eq!(x.lo, 1.0);
        assert!(x.hi >= 2.0f64.cosh());
    }
}
