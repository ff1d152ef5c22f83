//! Axis-aligned rectangles in the complex plane used as rigorous enclosures.

use serde::{Deserialize, Serialize};

use super::interval::Interval;
use super::ComplexPoint;
use crate::error::{Error, Result};

/// Relative slack for point evaluations of rational expressions (a few ulps).
const RATIONAL_SLACK: f64 = 1.0 / 70_368_744_177_664.0; // 2^-46

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexBox {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexBox {
    pub fn new(re_lo: f64, re_hi: f64, im_lo: f64, im_hi: f64) -> Self {
        ComplexBox { re: Interval::new(re_lo, re_hi), im: Interval::new(im_lo, im_hi) }
    }

    pub fn from_intervals(re: Interval, im: Interval) -> Self {
        ComplexBox { re, im }
    }

    pub fn point(z: ComplexPoint) -> Self {
        ComplexBox { re: Interval::point(z.re), im: Interval::point(z.im) }
    }

    /// Square box of half-side `half` centred at `c`.
    pub fn around(c: ComplexPoint, half: f64) -> Self {
        ComplexBox::new(c.re - half, c.re + half, c.im - half, c.im + half)
    }

    pub fn center(&self) -> ComplexPoint {
        ComplexPoint::new(self.re.mid(), self.im.mid())
    }

    pub fn width(&self) -> f64 {
        self.re.width()
    }

    pub fn height(&self) -> f64 {
        self.im.width()
    }

    pub fn max_side(&self) -> f64 {
        self.width().max(self.height())
    }

    pub fn corners(&self) -> [ComplexPoint; 4] {
        [
            ComplexPoint::new(self.re.lo, self.im.lo),
            ComplexPoint::new(self.re.hi, self.im.lo),
            ComplexPoint::new(self.re.lo, self.im.hi),
            ComplexPoint::new(self.re.hi, self.im.hi),
        ]
    }

    pub fn contains_point(&self, z: ComplexPoint) -> bool {
        self.re.contains(z.re) && self.im.contains(z.im)
    }

    pub fn contains_box(&self, other: &ComplexBox) -> bool {
        self.re.contains_interval(&other.re) && self.im.contains_interval(&other.im)
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn hull(&self, other: &ComplexBox) -> ComplexBox {
        ComplexBox { re: self.re.hull(&other.re), im: self.im.hull(&other.im) }
    }

    pub fn meet(&self, other: &ComplexBox) -> ComplexBox {
        ComplexBox { re: self.re.meet(&other.re), im: self.im.meet(&other.im) }
    }

    /// Quadrisection at the midpoint.
    pub fn split4(&self) -> [ComplexBox; 4] {
        let (xm, ym) = (self.re.mid(), self.im.mid());
        let (x0, x1, y0, y1) = (self.re.lo, self.re.hi, self.im.lo, self.im.hi);
        [
            ComplexBox::new(x0, xm, y0, ym),
            ComplexBox::new(xm, x1, y0, ym),
            ComplexBox::new(x0, xm, ym, y1),
            ComplexBox::new(xm, x1, ym, y1),
        ]
    }

    pub fn neg(&self) -> ComplexBox {
        ComplexBox { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn add(&self, other: &ComplexBox) -> ComplexBox {
        ComplexBox { re: self.re.add(&other.re), im: self.im.add(&other.im) }
    }

    pub fn sub(&self, other: &ComplexBox) -> ComplexBox {
        ComplexBox { re: self.re.sub(&other.re), im: self.im.sub(&other.im) }
    }

    pub fn mul(&self, other: &ComplexBox) -> ComplexBox {
        let (a, b, c, d) = (&self.re, &self.im, &other.re, &other.im);
        ComplexBox { re: a.mul(c).sub(&b.mul(d)), im: a.mul(d).add(&b.mul(c)) }
    }

    pub fn scale(&self, k: f64) -> ComplexBox {
        ComplexBox { re: self.re.scale(k), im: self.im.scale(k) }
    }

    /// `z^2` without the dependency loss of a generic product:
    /// `x^2 - y^2` and `2xy` are exact ranges over independent variables.
    pub fn sqr(&self) -> ComplexBox {
        ComplexBox { re: self.re.sqr().sub(&self.im.sqr()), im: self.re.mul(&self.im).scale(2.0) }
    }

    pub fn powi(&self, n: u32) -> ComplexBox {
        match n {
            0 => ComplexBox::point(ComplexPoint::new(1.0, 0.0)),
            1 => *self,
            _ if n.is_multiple_of(2) => self.powi(n / 2).sqr(),
            _ => self.powi(n - 1).mul(self),
        }
    }

    /// Range of `1/z` over the box.
    ///
    /// Both `Re(1/z)` and `Im(1/z)` are harmonic away from the origin, so
    /// their extrema over the rectangle lie on its boundary. On each edge
    /// they are one-variable rational functions whose critical points are
    /// known in closed form; the candidate set is the four corners plus those
    /// critical points.
    pub fn recip(&self) -> Result<ComplexBox> {
        if self.contains_zero() {
            return Err(Error::PoleIntersect);
        }
        let (x0, x1, y0, y1) = (self.re.lo, self.re.hi, self.im.lo, self.im.hi);
        let mut candidates: Vec<(f64, f64)> = vec![(x0, y0), (x1, y0), (x0, y1), (x1, y1)];
        for y in [y0, y1] {
            for x in [y.abs(), -y.abs(), 0.0] {
                if self.re.contains(x) {
                    candidates.push((x, y));
                }
            }
        }
        for x in [x0, x1] {
            for y in [x.abs(), -x.abs(), 0.0] {
                if self.im.contains(y) {
                    candidates.push((x, y));
                }
            }
        }
        let mut re = (f64::INFINITY, f64::NEG_INFINITY);
        let mut im = (f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in candidates {
            let d = x * x + y * y;
            if d == 0.0 {
                continue;
            }
            let (u, v) = (x / d, -y / d);
            re = (re.0.min(u), re.1.max(u));
            im = (im.0.min(v), im.1.max(v));
        }
        let slack = re.0.abs().max(re.1.abs()).max(im.0.abs()).max(im.1.abs()) * RATIONAL_SLACK;
        Ok(ComplexBox {
            re: Interval::outward(re.0 - slack, re.1 + slack),
            im: Interval::outward(im.0 - slack, im.1 + slack),
        })
    }

    pub fn div(&self, other: &ComplexBox) -> Result<ComplexBox> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn exp(&self) -> ComplexBox {
        let m = self.re.exp();
        ComplexBox { re: m.mul(&self.im.cos()), im: m.mul(&self.im.sin()) }
    }

    /// `sin(x+iy) = sin x cosh y + i cos x sinh y`.
    pub fn sin(&self) -> ComplexBox {
        ComplexBox { re: self.re.sin().mul(&self.im.cosh()), im: self.re.cos().mul(&self.im.sinh()) }
    }

    /// `cos(x+iy) = cos x cosh y - i sin x sinh y`.
    pub fn cos(&self) -> ComplexBox {
        ComplexBox { re: self.re.cos().mul(&self.im.cosh()), im: self.re.sin().mul(&self.im.sinh()).neg() }
    }

    /// Enclosure of `|z|` over the box.
    pub fn abs_range(&self) -> Interval {
        self.re.sqr().add(&self.im.sqr()).clamp_below(0.0).sqrt().expect("sum of squares is non-negative")
    }

    /// Enclosure of `|z - c|^2` over the box.
    pub fn dist2_range(&self, c: ComplexPoint) -> Interval {
        let dx = self.re.sub(&Interval::point(c.re));
        let dy = self.im.sub(&Interval::point(c.im));
        dx.sqr().add(&dy.sqr())
    }
}
