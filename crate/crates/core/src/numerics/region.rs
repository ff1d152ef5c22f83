//! A small closed vocabulary of plane sets (disks, annuli, rectangles,
//! half-strips) combined by union and difference, with conservative box
//! predicates.
//!
//! `box_inside(B)` returning `true` guarantees every point of `B` lies in the
//! set; `box_disjoint(B)` returning `true` guarantees no point does. Both may
//! answer `false` when unsure.

use serde::{Deserialize, Serialize};

use super::cbox::ComplexBox;
use super::interval::Interval;
use super::ComplexPoint;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: ComplexPoint,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: ComplexPoint, radius: f64) -> Self {
        assert!(radius >= 0.0, "negative disk radius {radius}");
        Disk { center, radius }
    }
}

/// `inner <= |z - center| <= outer` when closed, strict inequalities otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Annulus {
    pub center: ComplexPoint,
    pub inner: f64,
    pub outer: f64,
    pub closed: bool,
}

/// Rectangle whose bounds may be infinite. Closed or open.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Strip {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub closed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// Open disk `B(c, r)`.
    Disk(Disk),
    ClosedDisk(Disk),
    Annulus(Annulus),
    /// Closed rectangle.
    Rect(ComplexBox),
    Strip(Strip),
    Union(Vec<Region>),
    Difference(Box<Region>, Box<Region>),
}

fn sq(r: f64) -> Interval {
    Interval::point(r).sqr()
}

impl Region {
    pub fn disk(center: ComplexPoint, radius: f64) -> Self {
        Region::Disk(Disk::new(center, radius))
    }

    pub fn closed_disk(center: ComplexPoint, radius: f64) -> Self {
        Region::ClosedDisk(Disk::new(center, radius))
    }

    pub fn annulus(center: ComplexPoint, inner: f64, outer: f64, closed: bool) -> Self {
        assert!(0.0 <= inner && inner <= outer, "bad annulus radii {inner}, {outer}");
        Region::Annulus(Annulus { center, inner, outer, closed })
    }

    pub fn difference(self, other: Region) -> Self {
        Region::Difference(Box::new(self), Box::new(other))
    }

    pub fn contains(&self, z: ComplexPoint) -> bool {
        match self {
            Region::Disk(d) => (z - d.center).norm() < d.radius,
            Region::ClosedDisk(d) => (z - d.center).norm() <= d.radius,
            Region::Annulus(a) => {
                let r = (z - a.center).norm();
                if a.closed {
                    a.inner <= r && r <= a.outer
                } else {
                    a.inner < r && r < a.outer
                }
            }
            Region::Rect(b) => b.contains_point(z),
            Region::Strip(s) => {
                if s.closed {
                    s.re_min <= z.re && z.re <= s.re_max && s.im_min <= z.im && z.im <= s.im_max
                } else {
                    s.re_min < z.re && z.re < s.re_max && s.im_min < z.im && z.im < s.im_max
                }
            }
            Region::Union(parts) => parts.iter().any(|p| p.contains(z)),
            Region::Difference(a, b) => a.contains(z) && !b.contains(z),
        }
    }

    pub fn box_inside(&self, b: &ComplexBox) -> bool {
        match self {
            Region::Disk(d) => b.dist2_range(d.center).hi < sq(d.radius).lo,
            Region::ClosedDisk(d) => b.dist2_range(d.center).hi <= sq(d.radius).lo,
            Region::Annulus(a) => {
                let d2 = b.dist2_range(a.center);
                if a.closed {
                    d2.lo >= sq(a.inner).hi && d2.hi <= sq(a.outer).lo
                } else {
                    d2.lo > sq(a.inner).hi && d2.hi < sq(a.outer).lo
                }
            }
            Region::Rect(r) => r.contains_box(b),
            Region::Strip(s) => {
                if s.closed {
                    s.re_min <= b.re.lo && b.re.hi <= s.re_max && s.im_min <= b.im.lo && b.im.hi <= s.im_max
                } else {
                    s.re_min < b.re.lo && b.re.hi < s.re_max && s.im_min < b.im.lo && b.im.hi < s.im_max
                }
            }
            Region::Union(parts) => parts.iter().any(|p| p.box_inside(b)),
            Region::Difference(a, c) => a.box_inside(b) && c.box_disjoint(b),
        }
    }

    pub fn box_disjoint(&self, b: &ComplexBox) -> bool {
        match self {
            Region::Disk(d) => b.dist2_range(d.center).lo >= sq(d.radius).hi,
            Region::ClosedDisk(d) => b.dist2_range(d.center).lo > sq(d.radius).hi,
            Region::Annulus(a) => {
                let d2 = b.dist2_range(a.center);
                if a.closed {
                    d2.hi < sq(a.inner).lo || d2.lo > sq(a.outer).hi
                } else {
                    d2.hi <= sq(a.inner).lo || d2.lo >= sq(a.outer).hi
                }
            }
            Region::Rect(r) => b.re.hi < r.re.lo || b.re.lo > r.re.hi || b.im.hi < r.im.lo || b.im.lo > r.im.hi,
            Region::Strip(s) => {
                if s.closed {
                    b.re.hi < s.re_min || b.re.lo > s.re_max || b.im.hi < s.im_min || b.im.lo > s.im_max
                } else {
                    b.re.hi <= s.re_min || b.re.lo >= s.re_max || b.im.hi <= s.im_min || b.im.lo >= s.im_max
                }
            }
            Region::Union(parts) => parts.iter().all(|p| p.box_disjoint(b)),
            Region::Difference(a, c) => a.box_disjoint(b) || c.box_inside(b),
        }
    }

    /// Closed bounding rectangle, or `None` for unbounded sets.
    pub fn bounding_box(&self) -> Option<ComplexBox> {
        match self {
            Region::Disk(d) | Region::ClosedDisk(d) => Some(ComplexBox::around(d.center, d.radius)),
            Region::Annulus(a) => Some(ComplexBox::around(a.center, a.outer)),
            Region::Rect(r) => Some(*r),
            Region::Strip(s) => {
                let bounds = [s.re_min, s.re_max, s.im_min, s.im_max];
                bounds.iter().all(|v| v.is_finite()).then(|| ComplexBox::new(s.re_min, s.re_max, s.im_min, s.im_max))
            }
            Region::Union(parts) => {
                let mut acc: Option<ComplexBox> = None;
                for p in parts {
                    let b = p.bounding_box()?;
                    acc = Some(acc.map_or(b, |a| a.hull(&b)));
                }
                acc
            }
            Region::Difference(a, _) => a.bounding_box(),
        }
    }
}
