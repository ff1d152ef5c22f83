//! Winding numbers of sampled closed curves, zero counts by the argument
//! principle, Newton preimage search and the Riemann-Hurwitz predicate.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::dynamics::{newton, seed_grid};
use crate::error::{Error, Result};
use crate::maps::MeromorphicMap;
use crate::numerics::{ComplexPoint, Region};

pub const INITIAL_SAMPLES: usize = 1 << 10;
pub const MAX_SAMPLES: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: ComplexPoint,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: ComplexPoint, radius: f64) -> Self {
        Circle { center, radius }
    }

    /// The `k`-th of `n` equally spaced points, counter-clockwise from the
    /// positive real direction.
    pub fn point(&self, k: usize, n: usize) -> ComplexPoint {
        let t = 2.0 * PI * k as f64 / n as f64;
        self.center + ComplexPoint::from_polar(self.radius, t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingResult {
    pub winding: i64,
    pub min_distance: f64,
    pub max_arg_step: f64,
    pub samples: usize,
    pub valid: bool,
}

/// Winding of the closed polygon through `values` around `w0`.
fn discrete_winding(values: &[ComplexPoint], w0: ComplexPoint) -> WindingResult {
    let n = values.len();
    let mut total = 0.0;
    let mut max_step: f64 = 0.0;
    let mut min_distance = f64::INFINITY;
    for k in 0..n {
        let u = values[k] - w0;
        let v = values[(k + 1) % n] - w0;
        min_distance = min_distance.min(u.norm());
        let step = (v / u).arg();
        let step = if step.is_nan() { PI } else { step };
        max_step = max_step.max(step.abs());
        total += step;
    }
    let valid = min_distance > 0.0 && max_step < FRAC_PI_2;
    WindingResult {
        winding: (total / (2.0 * PI)).round() as i64,
        min_distance,
        max_arg_step: max_step,
        samples: n,
        valid,
    }
}

/// Samples a closed curve with `sample(n)` for `n = 2^10, 2^11, ...` until
/// every argument increment around `w0` is below `pi/2` or `2^20` samples
/// are reached. The last result is returned either way.
pub fn winding_of_curve<F>(mut sample: F, w0: ComplexPoint) -> Result<WindingResult>
where
    F: FnMut(usize) -> Result<Vec<ComplexPoint>>,
{
    let mut n = INITIAL_SAMPLES;
    loop {
        let r = discrete_winding(&sample(n)?, w0);
        if r.max_arg_step < FRAC_PI_2 || n >= MAX_SAMPLES {
            return Ok(r);
        }
        n *= 2;
    }
}

fn eval_on_curve(map: &MeromorphicMap, z: ComplexPoint) -> Result<ComplexPoint> {
    match map.eval(z) {
        Err(Error::PoleHit(_)) => Err(Error::Degenerate(z)),
        other => other,
    }
}

fn circle_image(map: &MeromorphicMap, circle: &Circle, n: usize) -> Result<Vec<ComplexPoint>> {
    (0..n).map(|k| eval_on_curve(map, circle.point(k, n))).collect()
}

/// Winding of `f(circle)` around `w0`, with adaptive sample doubling.
pub fn winding_number(map: &MeromorphicMap, circle: &Circle, w0: ComplexPoint) -> Result<WindingResult> {
    winding_of_curve(|n| circle_image(map, circle, n), w0)
}

/// Winding of `f(circle)` around `w0` at exactly `samples` points.
pub fn winding_with_samples(
    map: &MeromorphicMap,
    circle: &Circle,
    w0: ComplexPoint,
    samples: usize,
) -> Result<WindingResult> {
    if samples < 3 {
        return Err(Error::Domain(format!("need at least 3 samples, got {samples}")));
    }
    Ok(discrete_winding(&circle_image(map, circle, samples)?, w0))
}

/// Zeros of `f - w0` inside the circle, with multiplicity, given the number
/// of poles inside (also with multiplicity).
pub fn count_zeros_inside(map: &MeromorphicMap, circle: &Circle, w0: ComplexPoint, poles_inside: i64) -> Result<i64> {
    let r = winding_number(map, circle, w0)?;
    if !r.valid {
        return Err(Error::Invalid);
    }
    Ok(r.winding + poles_inside)
}

/// Polar seeds around `center` on geometrically shrinking circles, which
/// reach roots clustered near a pole or a degenerate point.
fn polar_seeds(center: ComplexPoint, outer: f64) -> Vec<ComplexPoint> {
    const RINGS: i32 = 40;
    const SPOKES: usize = 16;
    let mut seeds = Vec::with_capacity(RINGS as usize * SPOKES);
    for ring in 0..RINGS {
        let r = outer * 0.5f64.powi(ring);
        for s in 0..SPOKES {
            let t = 2.0 * PI * (s as f64 + 0.5) / SPOKES as f64;
            seeds.push(center + ComplexPoint::from_polar(r, t));
        }
    }
    seeds
}

/// Distinct solutions of `f(z) = w0` in `search_region`, found by Newton's
/// method from a seed grid. Roots are sorted by argument, then modulus.
pub fn locate_preimages(
    map: &MeromorphicMap,
    w0: ComplexPoint,
    search_region: &Region,
    expected: usize,
) -> Result<Vec<ComplexPoint>> {
    let bb = search_region.bounding_box().ok_or_else(|| Error::Domain("search region must be bounded".into()))?;
    let mut seeds = seed_grid(search_region, 32)?;
    seeds.extend(polar_seeds(bb.center(), 0.5 * bb.max_side()).into_iter().filter(|z| search_region.contains(*z)));
    let mut roots: Vec<ComplexPoint> = Vec::new();
    for seed in seeds {
        let Some((z, residual)) = newton(map, seed, Some(w0), 100) else { continue };
        if !(residual < 1e-10) || !search_region.contains(z) {
            continue;
        }
        if roots.iter().all(|r| (r - z).norm() > 1e-7 * (1.0 + z.norm())) {
            roots.push(z);
        }
    }
    roots.sort_by(|a, b| a.arg().total_cmp(&b.arg()).then(a.norm().total_cmp(&b.norm())));
    if roots.len() != expected {
        return Err(Error::CountMismatch { found: roots.len(), expected });
    }
    Ok(roots)
}

/// `c_U - 2 = k (c_V - 2) + N`.
pub fn riemann_hurwitz_check(c_u: i64, k: i64, n: i64, c_v: i64) -> bool {
    c_u - 2 == k * (c_v - 2) + n
}

/// Whether `f^iterations(circle)` winds a nonzero number of times around
/// `pole`.
pub fn curve_image_surrounds_pole(
    map: &MeromorphicMap,
    iterations: usize,
    circle: &Circle,
    pole: ComplexPoint,
) -> Result<bool> {
    let r = winding_of_curve(
        |n| {
            (0..n)
                .map(|k| {
                    let mut z = circle.point(k, n);
                    for _ in 0..iterations {
                        z = eval_on_curve(map, z)?;
                    }
                    Ok(z)
                })
                .collect()
        },
        pole,
    )?;
    if !r.valid {
        return Err(Error::Invalid);
    }
    Ok(r.winding != 0)
}
