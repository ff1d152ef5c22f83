//! Rigorous certificates by adaptive box subdivision, winding numbers by the
//! argument principle, root counts and the Riemann-Hurwitz predicate.
//!
//! A certificate covers a compact region `K` by boxes, discards boxes that
//! are provably disjoint from `K`, and applies a conservative per-box test to
//! the rest. Failing boxes are split into quarters until the budget runs
//! out. `Proved` means every surviving leaf passed.

mod constants;
mod inequality;
mod winding;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::MeromorphicMap;
use crate::numerics::{ComplexBox, Region};

pub use constants::{derive_ex2_constants, Ex2Constants, RadiusTrial};
pub use inequality::{certify_inequality, certify_inequality_chain, close_inner_disk, Comparison, TailClosure};
pub use winding::{
    count_zeros_inside, curve_image_surrounds_pole, locate_preimages, riemann_hurwitz_check, winding_number,
    winding_of_curve, winding_with_samples, Circle, WindingResult,
};

/// Subdivision limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_boxes: u64,
    pub max_depth: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_boxes: 1_000_000, max_depth: 24 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Statement {
    Inclusion { map: String, source: Region, target: Region },
    Inequality { lhs: String, rhs: String, comparison: Comparison, region: Region },
}

/// How many frontier boxes a non-proved verdict keeps for inspection.
pub const FRONTIER_SAMPLE: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertVerdict {
    Proved,
    /// Surviving boxes at the cap; `boxes` is truncated to [`FRONTIER_SAMPLE`].
    Inconclusive {
        surviving: u64,
        boxes: Vec<ComplexBox>,
    },
    /// A surviving box still meets the pole locus at the cap.
    PoleContact {
        surviving: u64,
        boxes: Vec<ComplexBox>,
    },
}

impl CertVerdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, CertVerdict::Proved)
    }

    pub fn name(&self) -> &'static str {
        match self {
            CertVerdict::Proved => "proved",
            CertVerdict::Inconclusive { .. } => "inconclusive",
            CertVerdict::PoleContact { .. } => "pole_contact",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CertStats {
    pub boxes_examined: u64,
    pub max_depth: u32,
    pub elapsed_ms: f64,
}

impl CertStats {
    /// Combines the stats of certificates run one after another.
    pub fn merge(&self, other: &CertStats) -> CertStats {
        CertStats {
            boxes_examined: self.boxes_examined + other.boxes_examined,
            max_depth: self.max_depth.max(other.max_depth),
            elapsed_ms: self.elapsed_ms + other.elapsed_ms,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub statement: Statement,
    pub verdict: CertVerdict,
    pub stats: CertStats,
}

impl Certificate {
    pub fn is_proved(&self) -> bool {
        self.verdict.is_proved()
    }
}

/// Outcome of the per-box test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum BoxTest {
    Pass,
    Fail,
    Pole,
}

impl BoxTest {
    pub(crate) fn from_result(r: Result<bool>) -> BoxTest {
        match r {
            Ok(true) => BoxTest::Pass,
            Ok(false) => BoxTest::Fail,
            Err(Error::PoleIntersect) | Err(Error::PoleHit(_)) => BoxTest::Pole,
            Err(_) => BoxTest::Fail,
        }
    }
}

/// Very thin regions get elongated root tiles instead of unboundedly many.
const MAX_ROOT_TILES_PER_SIDE: f64 = 4096.0;

/// Near-square tiles covering `b`.
fn root_tiles(b: &ComplexBox) -> Vec<ComplexBox> {
    let side = b.width().min(b.height()).max(b.width().max(b.height()) / MAX_ROOT_TILES_PER_SIDE);
    if side <= 0.0 {
        return vec![*b];
    }
    let nx = (b.width() / side).ceil().max(1.0) as usize;
    let ny = (b.height() / side).ceil().max(1.0) as usize;
    let mut tiles = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let re_lo = b.re.lo + b.width() * i as f64 / nx as f64;
            let re_hi = if i + 1 == nx { b.re.hi } else { b.re.lo + b.width() * (i + 1) as f64 / nx as f64 };
            let im_lo = b.im.lo + b.height() * j as f64 / ny as f64;
            let im_hi = if j + 1 == ny { b.im.hi } else { b.im.lo + b.height() * (j + 1) as f64 / ny as f64 };
            tiles.push(ComplexBox::new(re_lo, re_hi, im_lo, im_hi));
        }
    }
    tiles
}

#[cfg(feature = "parallel")]
fn examine<F>(frontier: &[ComplexBox], k: &Region, test: &F) -> Vec<(ComplexBox, BoxTest)>
where
    F: Fn(&ComplexBox) -> BoxTest + Sync,
{
    use rayon::prelude::*;
    frontier
        .par_iter()
        .filter(|b| !k.box_disjoint(b))
        .map(|b| (*b, test(b)))
        .filter(|(_, t)| *t != BoxTest::Pass)
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn examine<F>(frontier: &[ComplexBox], k: &Region, test: &F) -> Vec<(ComplexBox, BoxTest)>
where
    F: Fn(&ComplexBox) -> BoxTest + Sync,
{
    frontier.iter().filter(|b| !k.box_disjoint(b)).map(|b| (*b, test(b))).filter(|(_, t)| *t != BoxTest::Pass).collect()
}

/// Level-by-level subdivision of `k`'s bounding box. The verdict does not
/// depend on the order in which boxes of one level are examined.
pub(crate) fn subdivide<F>(k: &Region, budget: &Budget, test: F) -> Result<(CertVerdict, CertStats)>
where
    F: Fn(&ComplexBox) -> BoxTest + Sync,
{
    let start = Instant::now();
    let bb = k.bounding_box().ok_or_else(|| Error::Domain("certificate region must be bounded".into()))?;
    let mut frontier = root_tiles(&bb);
    let mut stats = CertStats::default();
    let mut depth = 0u32;
    let verdict = loop {
        stats.boxes_examined += frontier.len() as u64;
        stats.max_depth = depth;
        let survivors = examine(&frontier, k, &test);
        if survivors.is_empty() {
            break CertVerdict::Proved;
        }
        let next_count = stats.boxes_examined + 4 * survivors.len() as u64;
        if depth >= budget.max_depth || next_count > budget.max_boxes {
            let surviving = survivors.len() as u64;
            let pole = survivors.iter().any(|(_, t)| *t == BoxTest::Pole);
            let boxes = survivors.iter().take(FRONTIER_SAMPLE).map(|(b, _)| *b).collect();
            break if pole {
                CertVerdict::PoleContact { surviving, boxes }
            } else {
                CertVerdict::Inconclusive { surviving, boxes }
            };
        }
        frontier = survivors.iter().flat_map(|(b, _)| b.split4()).collect();
        depth += 1;
    };
    stats.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok((verdict, stats))
}

/// Certifies `f(K) ⊂ D`. `K` must be bounded; boxes of its cover that meet
/// a pole are subdivided, so a pole inside `K` ends in `PoleContact`.
pub fn certify_inclusion(map: &MeromorphicMap, k: &Region, d: &Region, budget: &Budget) -> Result<Certificate> {
    let (verdict, stats) =
        subdivide(k, budget, |b| BoxTest::from_result(map.eval_box(b).map(|img| d.box_inside(&img))))?;
    Ok(Certificate {
        statement: Statement::Inclusion { map: map.expr.to_string(), source: k.clone(), target: d.clone() },
        verdict,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{build_family, real, var, FamilyId, Params};
    use crate::numerics::ComplexPoint;

    fn c(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im)
    }

    fn identity() -> MeromorphicMap {
        MeromorphicMap::custom(var(), Params::new(), Vec::new())
    }

    #[test]
    fn identity_inclusion_at_depth_zero() {
        let cert = certify_inclusion(
            &identity(),
            &Region::closed_disk(c(0.0, 0.0), 1.0),
            &Region::disk(c(0.0, 0.0), 2.0),
            &Budget::default(),
        )
        .unwrap();
        assert!(cert.is_proved());
        assert_eq!(cert.stats.max_depth, 0);
    }

    #[test]
    fn false_inclusion_is_not_proved() {
        let cert = certify_inclusion(
            &identity(),
            &Region::closed_disk(c(0.0, 0.0), 1.0),
            &Region::disk(c(0.0, 0.0), 0.9),
            &Budget { max_boxes: 10_000, max_depth: 8 },
        )
        .unwrap();
        assert!(matches!(cert.verdict, CertVerdict::Inconclusive { .. }));
    }

    #[test]
    fn pole_in_source_gives_pole_contact() {
        let m = MeromorphicMap::custom(real(1.0).div(var()), Params::new(), vec![c(0.0, 0.0)]);
        let cert = certify_inclusion(
            &m,
            &Region::closed_disk(c(0.0, 0.0), 1.0),
            &Region::disk(c(0.0, 0.0), 1e9),
            &Budget { max_boxes: 100_000, max_depth: 10 },
        )
        .unwrap();
        assert!(matches!(cert.verdict, CertVerdict::PoleContact { .. }));
    }

    #[test]
    fn unbounded_source_is_rejected() {
        let k = Region::Strip(crate::numerics::Strip {
            re_min: f64::NEG_INFINITY,
            re_max: 0.0,
            im_min: -1.0,
            im_max: 1.0,
            closed: true,
        });
        let err = certify_inclusion(&identity(), &k, &k, &Budget::default()).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn ex1_core_inclusion() {
        let a = 2f64.powi(-6);
        let m = build_family(FamilyId::Ex1, &Params::from([("a".into(), a), ("eps".into(), 2f64.powi(-16))])).unwrap();
        let k = Region::closed_disk(c(0.0, 0.0), 2.0 * a).difference(Region::disk(c(a, 0.0), a / 2.0));
        let cert = certify_inclusion(&m, &k, &Region::disk(c(0.0, 0.0), a / 2.0), &Budget::default()).unwrap();
        assert!(cert.is_proved(), "{:?}", cert.verdict.name());
        assert!(cert.stats.boxes_examined <= 1_000_000);
    }

    #[test]
    fn root_tiles_cover_the_box() {
        let b = ComplexBox::new(-20.0, 0.0, -1.6, 1.6);
        let tiles = root_tiles(&b);
        assert_eq!(tiles.len(), 7);
        let hull = tiles.iter().skip(1).fold(tiles[0], |acc, t| acc.hull(t));
        assert_eq!(hull, b);
    }

    #[test]
    fn thin_box_tile_count_is_capped() {
        let b = ComplexBox::new(-1e-9, 1e-9, -3.0, 3.0);
        let tiles = root_tiles(&b);
        assert_eq!(tiles.len(), 4096);
    }
}
