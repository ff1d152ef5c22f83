//! Orbits, fixed points, station tracking and raster classification.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::MeromorphicMap;
use crate::numerics::{ComplexBox, ComplexPoint, Region};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitConfig {
    pub max_iter: usize,
    pub escape_radius: f64,
    pub attract_tol: f64,
    pub cycle_window: usize,
}

impl Default for OrbitConfig {
    fn default() -> Self {
        OrbitConfig { max_iter: 500, escape_radius: 1e6, attract_tol: 1e-9, cycle_window: 8 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Attracted { fixed_point: ComplexPoint, multiplier_modulus: f64 },
    Escaped { index: usize },
    PoleHit { index: usize, pole: ComplexPoint },
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Orbit {
    pub points: Vec<ComplexPoint>,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointReport {
    pub location: ComplexPoint,
    pub residual: f64,
    pub multiplier: ComplexPoint,
}

impl FixedPointReport {
    pub fn is_attracting(&self) -> bool {
        self.multiplier.norm() < 1.0
    }
}

/// Newton's method on `f(z) - target_shift(z)`; `shift_is_identity` selects
/// between fixed points (`f(z) = z`) and preimages (`f(z) = w`).
pub(crate) fn newton(
    map: &MeromorphicMap,
    seed: ComplexPoint,
    target: Option<ComplexPoint>,
    max_steps: usize,
) -> Option<(ComplexPoint, f64)> {
    let residual = |z: ComplexPoint| -> Option<ComplexPoint> {
        let fz = map.eval(z).ok()?;
        Some(match target {
            Some(w) => fz - w,
            None => fz - z,
        })
    };
    let mut z = seed;
    let mut r = residual(z)?;
    for _ in 0..max_steps {
        if r.norm() == 0.0 {
            break;
        }
        let mut d = map.eval_derivative(z).ok()?;
        if target.is_none() {
            d -= 1.0;
        }
        if d.norm() == 0.0 || !d.is_finite() {
            break;
        }
        let step = r / d;
        let next = z - step;
        if !next.is_finite() {
            return None;
        }
        let r_next = residual(next)?;
        z = next;
        r = r_next;
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    Some((z, r.norm()))
}

/// Refines a candidate fixed point and reports whether it is one.
fn confirm_fixed_point(map: &MeromorphicMap, near: ComplexPoint) -> Option<FixedPointReport> {
    let (z, residual) = newton(map, near, None, 100)?;
    if residual > 1e-12 * (1.0 + z.norm()) || (z - near).norm() > 1e-3 * (1.0 + near.norm()) {
        return None;
    }
    let multiplier = map.eval_derivative(z).ok()?;
    Some(FixedPointReport { location: z, residual, multiplier })
}

/// Iterates `z0` until a verdict triggers.
pub fn iterate(map: &MeromorphicMap, z0: ComplexPoint, cfg: &OrbitConfig) -> Orbit {
    let mut points = vec![z0];
    let mut small_steps = 0;
    let mut z = z0;
    for k in 0..cfg.max_iter {
        if z.norm() > cfg.escape_radius {
            return Orbit { points, verdict: Verdict::Escaped { index: k } };
        }
        let next = match map.eval(z) {
            Ok(w) if w.is_finite() => w,
            Ok(_) => {
                // Overflow: recorded as the point at infinity.
                points.push(ComplexPoint::new(f64::INFINITY, f64::INFINITY));
                return Orbit { points, verdict: Verdict::Escaped { index: k + 1 } };
            }
            Err(Error::PoleHit(p)) => {
                let pole = map.nearest_declared_pole(z).unwrap_or(p);
                return Orbit { points, verdict: Verdict::PoleHit { index: k, pole } };
            }
            Err(_) => return Orbit { points, verdict: Verdict::BudgetExhausted },
        };
        points.push(next);
        if (next - z).norm() < cfg.attract_tol {
            small_steps += 1;
        } else {
            small_steps = 0;
        }
        z = next;
        if small_steps >= cfg.cycle_window {
            if let Some(fp) = confirm_fixed_point(map, z) {
                return Orbit {
                    points,
                    verdict: Verdict::Attracted { fixed_point: fp.location, multiplier_modulus: fp.multiplier.norm() },
                };
            }
        }
    }
    if z.norm() > cfg.escape_radius {
        let index = points.len() - 1;
        return Orbit { points, verdict: Verdict::Escaped { index } };
    }
    Orbit { points, verdict: Verdict::BudgetExhausted }
}

/// Evenly spaced points of the region's bounding box that lie in the region.
pub(crate) fn seed_grid(region: &Region, per_side: usize) -> Result<Vec<ComplexPoint>> {
    let bb = region.bounding_box().ok_or_else(|| Error::Domain("seed region must be bounded".into()))?;
    let mut seeds = Vec::with_capacity(per_side * per_side);
    for j in 0..per_side {
        for i in 0..per_side {
            let t = (i as f64 + 0.5) / per_side as f64;
            let s = (j as f64 + 0.5) / per_side as f64;
            let z = ComplexPoint::new(bb.re.lo + t * bb.width(), bb.im.lo + s * bb.height());
            if region.contains(z) {
                seeds.push(z);
            }
        }
    }
    Ok(seeds)
}

/// Newton on `f(z) - z` from a seed grid; returns the converged fixed point
/// in the region with the smallest residual.
pub fn find_fixed_point(map: &MeromorphicMap, seed_region: &Region) -> Result<FixedPointReport> {
    let mut best: Option<FixedPointReport> = None;
    for seed in seed_grid(seed_region, 16)? {
        let Some((z, residual)) = newton(map, seed, None, 200) else { continue };
        if residual > 1e-12 || !seed_region.contains(z) {
            continue;
        }
        let Ok(multiplier) = map.eval_derivative(z) else { continue };
        if best.is_none_or(|b| residual < b.residual) {
            best = Some(FixedPointReport { location: z, residual, multiplier });
        }
    }
    best.ok_or(Error::NotFound)
}

/// Entry `n` is true iff `|f^n(z0) - station_centers[n]| < station_radius`,
/// for `n` in `0..n_max`.
pub fn track_wandering(
    map: &MeromorphicMap,
    z0: ComplexPoint,
    station_centers: &[ComplexPoint],
    station_radius: f64,
    n_max: usize,
) -> Result<Vec<bool>> {
    if n_max > station_centers.len() {
        return Err(Error::Domain(format!(
            "{n_max} steps requested but only {} stations given",
            station_centers.len()
        )));
    }
    let mut out = Vec::with_capacity(n_max);
    let mut z = z0;
    for (n, center) in station_centers.iter().enumerate().take(n_max) {
        if n > 0 {
            z = map.eval(z)?;
        }
        out.push((z - center).norm() < station_radius);
    }
    Ok(out)
}

/// An arithmetic chain of stations `origin + m * step`, `m` any integer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Corridor {
    pub origin: ComplexPoint,
    pub step: ComplexPoint,
    pub radius: f64,
}

impl Corridor {
    /// Index of the station whose disk contains `z`, if any.
    pub fn station_of(&self, z: ComplexPoint) -> Option<i64> {
        let t = (z - self.origin) / self.step;
        let m = t.re.round();
        if !m.is_finite() || m.abs() > 1e15 {
            return None;
        }
        let center = self.origin + self.step * m;
        ((z - center).norm() < self.radius).then_some(m as i64)
    }
}

/// Behaviour of a single pixel centre before neighbour comparison.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PixelVerdict {
    Attracted(ComplexPoint),
    /// Station index minus step count; constant along an orbit that marches
    /// through consecutive stations, so it separates the components `U_n`.
    Drift(i64),
    Pole,
    PoleImage,
    Escaped,
    Budget,
}

/// Classifies a single starting point.
pub fn classify_point(
    map: &MeromorphicMap,
    z0: ComplexPoint,
    cfg: &OrbitConfig,
    corridor: Option<&Corridor>,
) -> PixelVerdict {
    let mut z = z0;
    let mut small_steps = 0;
    // (station index at the start of the run, step at the start, run length)
    let mut run: Option<(i64, usize, usize)> = None;
    for k in 0..=cfg.max_iter {
        if z.norm() > cfg.escape_radius {
            return PixelVerdict::Escaped;
        }
        if let Some(c) = corridor {
            match (c.station_of(z), run) {
                (Some(m), Some((m0, k0, len))) if m == m0 + (k - k0) as i64 => {
                    run = Some((m0, k0, len + 1));
                    if len + 1 >= cfg.cycle_window {
                        return PixelVerdict::Drift(m0 - k0 as i64);
                    }
                }
                (Some(m), _) => run = Some((m, k, 1)),
                (None, _) => run = None,
            }
        }
        if k == cfg.max_iter {
            break;
        }
        let next = match map.eval(z) {
            Ok(w) if w.is_finite() => w,
            Ok(_) => return PixelVerdict::Escaped,
            Err(_) if k == 0 => return PixelVerdict::Pole,
            Err(_) => return PixelVerdict::PoleImage,
        };
        small_steps = if (next - z).norm() < cfg.attract_tol { small_steps + 1 } else { 0 };
        z = next;
        if small_steps >= cfg.cycle_window {
            if let Some(fp) = confirm_fixed_point(map, z) {
                return PixelVerdict::Attracted(fp.location);
            }
        }
    }
    PixelVerdict::Budget
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PixelLabel {
    AttractedTo(u32),
    Drifting(u32),
    PoleAdjacent,
    JuliaSuspect,
    Unresolved,
}

impl PixelLabel {
    pub fn is_fatou_candidate(&self) -> bool {
        matches!(self, PixelLabel::AttractedTo(_) | PixelLabel::Drifting(_))
    }
}

/// Per-pixel behaviour labels over a window.
///
/// Pixel `(i, j)` (column `i`, row `j`) covers
/// `[re_lo + i dx, re_lo + (i+1) dx] x [im_lo + j dy, im_lo + (j+1) dy]`;
/// row 0 is the bottom of the window. Labels are stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RasterGrid {
    pub window: ComplexBox,
    pub width: usize,
    pub height: usize,
    pub labels: Vec<PixelLabel>,
    /// Fixed point of each basin id (index = id).
    pub basins: Vec<ComplexPoint>,
    /// Drift phase of each track id (index = id).
    pub tracks: Vec<i64>,
    /// Declared poles inside the window.
    pub marks: Vec<ComplexPoint>,
}

impl RasterGrid {
    pub fn from_labels(window: ComplexBox, width: usize, height: usize, labels: Vec<PixelLabel>) -> Self {
        assert!(labels.is_empty() || labels.len() == width * height, "label count must equal width * height");
        RasterGrid { window, width, height, labels, basins: Vec::new(), tracks: Vec::new(), marks: Vec::new() }
    }

    pub fn pixel_size(&self) -> (f64, f64) {
        (self.window.width() / self.width as f64, self.window.height() / self.height as f64)
    }

    pub fn pixel_center(&self, i: usize, j: usize) -> ComplexPoint {
        let (dx, dy) = self.pixel_size();
        ComplexPoint::new(self.window.re.lo + (i as f64 + 0.5) * dx, self.window.im.lo + (j as f64 + 0.5) * dy)
    }

    pub fn pixel_cell(&self, i: usize, j: usize) -> ComplexBox {
        let (dx, dy) = self.pixel_size();
        let x0 = self.window.re.lo + i as f64 * dx;
        let y0 = self.window.im.lo + j as f64 * dy;
        ComplexBox::new(x0, x0 + dx, y0, y0 + dy)
    }

    /// The pixel whose cell contains `p` (upper edges belong to the next cell).
    pub fn pixel_of(&self, p: ComplexPoint) -> Result<(usize, usize)> {
        if !self.window.contains_point(p) {
            return Err(Error::OutOfWindow(p));
        }
        let (dx, dy) = self.pixel_size();
        let i = (((p.re - self.window.re.lo) / dx).floor() as usize).min(self.width - 1);
        let j = (((p.im - self.window.im.lo) / dy).floor() as usize).min(self.height - 1);
        Ok((i, j))
    }

    pub fn label(&self, i: usize, j: usize) -> PixelLabel {
        self.labels[j * self.width + i]
    }
}

fn same_fixed_point(a: ComplexPoint, b: ComplexPoint) -> bool {
    (a - b).norm() <= 1e-6 * (1.0 + a.norm())
}

#[cfg(feature = "parallel")]
fn classify_rows(
    map: &MeromorphicMap,
    grid: &RasterGrid,
    cfg: &OrbitConfig,
    corridor: Option<&Corridor>,
) -> Vec<PixelVerdict> {
    use rayon::prelude::*;
    (0..grid.height)
        .into_par_iter()
        .flat_map_iter(|j| (0..grid.width).map(move |i| classify_point(map, grid.pixel_center(i, j), cfg, corridor)))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn classify_rows(
    map: &MeromorphicMap,
    grid: &RasterGrid,
    cfg: &OrbitConfig,
    corridor: Option<&Corridor>,
) -> Vec<PixelVerdict> {
    (0..grid.height)
        .flat_map(|j| (0..grid.width).map(move |i| (i, j)))
        .map(|(i, j)| classify_point(map, grid.pixel_center(i, j), cfg, corridor))
        .collect()
}

/// Iterates every pixel centre and labels the raster.
///
/// A pixel whose cell contains a declared pole, or whose centre is itself a
/// pole, is `PoleAdjacent`. Any other pixel is `JuliaSuspect` when its
/// verdict differs from a 4-neighbour that is not `PoleAdjacent`, when its
/// orbit lands on a pole later, or when the budget runs out. Escaping pixels
/// with uniform neighbourhoods are `Unresolved`.
pub fn classify_grid(
    map: &MeromorphicMap,
    window: ComplexBox,
    width: usize,
    height: usize,
    cfg: &OrbitConfig,
    corridor: Option<&Corridor>,
) -> Result<RasterGrid> {
    if width < 2 || height < 2 {
        return Err(Error::Domain(format!("raster must be at least 2x2, got {width}x{height}")));
    }
    let mut grid = RasterGrid::from_labels(window, width, height, vec![PixelLabel::Unresolved; width * height]);
    grid.marks = map.declared_poles.iter().copied().filter(|p| window.contains_point(*p)).collect();

    let mut verdicts = classify_rows(map, &grid, cfg, corridor);
    for pole in &grid.marks {
        for j in 0..height {
            for i in 0..width {
                if grid.pixel_cell(i, j).contains_point(*pole) {
                    verdicts[j * width + i] = PixelVerdict::Pole;
                }
            }
        }
    }

    // Canonical ids in raster order so the result is independent of the
    // worker schedule.
    let mut basin_of = vec![u32::MAX; width * height];
    let mut track_of = vec![u32::MAX; width * height];
    for (idx, v) in verdicts.iter().enumerate() {
        match *v {
            PixelVerdict::Attracted(fp) => {
                let id = match grid.basins.iter().position(|b| same_fixed_point(*b, fp)) {
                    Some(id) => id,
                    None => {
                        grid.basins.push(fp);
                        grid.basins.len() - 1
                    }
                };
                basin_of[idx] = id as u32;
            }
            PixelVerdict::Drift(phase) => {
                let id = match grid.tracks.iter().position(|t| *t == phase) {
                    Some(id) => id,
                    None => {
                        grid.tracks.push(phase);
                        grid.tracks.len() - 1
                    }
                };
                track_of[idx] = id as u32;
            }
            _ => {}
        }
    }
    let key = |idx: usize| -> (u8, u32) {
        match verdicts[idx] {
            PixelVerdict::Attracted(_) => (0, basin_of[idx]),
            PixelVerdict::Drift(_) => (1, track_of[idx]),
            PixelVerdict::Pole => (2, 0),
            PixelVerdict::PoleImage => (3, 0),
            PixelVerdict::Escaped => (4, 0),
            PixelVerdict::Budget => (5, 0),
        }
    };

    for j in 0..height {
        for i in 0..width {
            let idx = j * width + i;
            let label = match verdicts[idx] {
                PixelVerdict::Pole => PixelLabel::PoleAdjacent,
                PixelVerdict::PoleImage | PixelVerdict::Budget => PixelLabel::JuliaSuspect,
                _ => {
                    let mine = key(idx);
                    let mut neighbours = Vec::with_capacity(4);
                    if i > 0 {
                        neighbours.push(idx - 1);
                    }
                    if i + 1 < width {
                        neighbours.push(idx + 1);
                    }
                    if j > 0 {
                        neighbours.push(idx - width);
                    }
                    if j + 1 < height {
                        neighbours.push(idx + width);
                    }
                    let boundary = neighbours.into_iter().any(|n| verdicts[n] != PixelVerdict::Pole && key(n) != mine);
                    if boundary {
                        PixelLabel::JuliaSuspect
                    } else {
                        match verdicts[idx] {
                            PixelVerdict::Attracted(_) => PixelLabel::AttractedTo(basin_of[idx]),
                            PixelVerdict::Drift(_) => PixelLabel::Drifting(track_of[idx]),
                            _ => PixelLabel::Unresolved,
                        }
                    }
                }
            };
            grid.labels[idx] = label;
        }
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{build_family, parse_expr, FamilyId, Params};

    fn c(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im)
    }

    fn ex1() -> MeromorphicMap {
        let p = Params::from([("a".into(), 2f64.powi(-6)), ("eps".into(), 2f64.powi(-16))]);
        build_family(FamilyId::Ex1, &p).unwrap()
    }

    fn ex2() -> MeromorphicMap {
        build_family(FamilyId::Ex2, &Params::from([("eps".into(), 1e-5), ("r1".into(), 1.0 / 32.0)])).unwrap()
    }

    fn ex5() -> MeromorphicMap {
        build_family(FamilyId::Ex5, &Params::new()).unwrap()
    }

    #[test]
    fn ex1_orbit_from_minus_a_is_attracted() {
        let a = 2f64.powi(-6);
        let orbit = iterate(&ex1(), c(-a, 0.0), &OrbitConfig::default());
        match orbit.verdict {
            Verdict::Attracted { fixed_point, multiplier_modulus } => {
                assert!(fixed_point.norm() < a / 2.0);
                assert!(multiplier_modulus < 1.0);
            }
            v => panic!("unexpected {v:?}"),
        }
    }

    #[test]
    fn ex2_orbit_from_pole() {
        let orbit = iterate(&ex2(), c(0.0, 0.0), &OrbitConfig::default());
        assert!(matches!(orbit.verdict, Verdict::PoleHit { index: 0, .. }));
    }

    #[test]
    fn ex5_positive_ray_escapes() {
        let orbit = iterate(&ex5(), c(1.0, 0.0), &OrbitConfig::default());
        let Verdict::Escaped { index } = orbit.verdict else { panic!("{:?}", orbit.verdict) };
        assert!(orbit.points[index].norm() > 1e6);
        assert!(orbit.points[..index].iter().all(|p| p.norm() <= 1e6));
        assert!(orbit.points.windows(2).all(|w| w[1].re > w[0].re));
    }

    #[test]
    fn orbit_points_follow_the_map() {
        let m = ex2();
        let orbit = iterate(&m, c(0.1, 0.05), &OrbitConfig { max_iter: 20, ..Default::default() });
        for w in orbit.points.windows(2) {
            assert_eq!(m.eval(w[0]).unwrap(), w[1]);
        }
    }

    #[test]
    fn superattracting_square() {
        let m = MeromorphicMap::custom(parse_expr("(pow z 2)").unwrap(), Params::new(), vec![]);
        let fp = find_fixed_point(&m, &Region::disk(c(0.0, 0.0), 0.5)).unwrap();
        assert!(fp.location.norm() < 1e-12);
        assert!(fp.multiplier.norm() < 1e-12);
    }

    #[test]
    fn ex5_parabolic_fixed_point() {
        let fp = find_fixed_point(&ex5(), &Region::disk(c(0.0, 0.0), 0.1)).unwrap();
        assert!(fp.location.norm() < 1e-6);
        assert!((fp.multiplier.norm() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn fixed_point_not_found() {
        let m = MeromorphicMap::custom(parse_expr("(add z 1)").unwrap(), Params::new(), vec![]);
        assert!(matches!(find_fixed_point(&m, &Region::disk(c(0.0, 0.0), 1.0)), Err(Error::NotFound)));
    }

    #[test]
    fn empty_track() {
        assert!(track_wandering(&ex2(), c(1.0, 1.0), &[], 0.1, 0).unwrap().is_empty());
    }

    #[test]
    fn ex1_translation_track() {
        let a = 2f64.powi(-6);
        let stations: Vec<_> = (0..11).map(|n| c(0.0, 2f64.powi(n) * 2.0 * std::f64::consts::PI)).collect();
        let hits = track_wandering(&ex1(), stations[0], &stations, a / 2.0, 11).unwrap();
        assert!(hits.iter().all(|h| *h), "{hits:?}");
    }

    #[test]
    fn corridor_station_lookup() {
        let corr = Corridor { origin: c(0.0, 0.0), step: c(2.0 * std::f64::consts::PI, 0.0), radius: 0.1 };
        assert_eq!(corr.station_of(c(4.0 * std::f64::consts::PI + 0.05, 0.0)), Some(2));
        assert_eq!(corr.station_of(c(3.0, 0.0)), None);
    }

    #[test]
    fn ex2_pixel_at_two_pi_drifts() {
        let corr = Corridor { origin: c(0.0, 0.0), step: c(2.0 * std::f64::consts::PI, 0.0), radius: 1.0 / 32.0 };
        let v = classify_point(&ex2(), c(2.0 * std::f64::consts::PI, 0.0), &OrbitConfig::default(), Some(&corr));
        assert_eq!(v, PixelVerdict::Drift(1));
    }

    #[test]
    fn grid_rejects_tiny_raster() {
        let w = ComplexBox::new(-1.0, 1.0, -1.0, 1.0);
        assert!(classify_grid(&ex5(), w, 1, 5, &OrbitConfig::default(), None).is_err());
    }

    #[test]
    fn pole_pixel_is_pole_adjacent() {
        // 0 is the centre of pixel (2, 2) in a 5x5 grid over [-1,1]^2
        let w = ComplexBox::new(-1.0, 1.0, -1.0, 1.0);
        let grid = classify_grid(&ex2(), w, 5, 5, &OrbitConfig { max_iter: 30, ..Default::default() }, None).unwrap();
        assert_eq!(grid.label(2, 2), PixelLabel::PoleAdjacent);
        assert_eq!(grid.marks, vec![c(0.0, 0.0)]);
    }
}
