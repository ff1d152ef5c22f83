//! Property checks shared by the property suites and the acceptance target.
//! Each returns a violation count so callers can both assert and report.

#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wandering::certify::{winding_number, winding_with_samples, Circle};
use wandering::maps::{build_family, FamilyId, MeromorphicMap, Params};
use wandering::numerics::{ComplexBox, Interval};
use wandering::topology::{connectivity, hole_count_by_flood, label_components, mask_grid};
use wandering::ComplexPoint;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> ComplexPoint {
    ComplexPoint::new(re, im)
}

pub fn ex1() -> MeromorphicMap {
    let a = 2f64.powi(-6);
    build_family(FamilyId::Ex1, &Params::from([("a".into(), a), ("eps".into(), 2f64.powi(-16))])).unwrap()
}

pub fn ex2() -> MeromorphicMap {
    build_family(FamilyId::Ex2, &Params::from([("eps".into(), 1e-5), ("r1".into(), 1.0 / 32.0)])).unwrap()
}

pub fn ex5() -> MeromorphicMap {
    build_family(FamilyId::Ex5, &Params::new()).unwrap()
}

pub fn ex3_model() -> MeromorphicMap {
    build_family(FamilyId::Ex3Model, &Params::from([("eps".into(), 1e-5)])).unwrap()
}

pub fn ex4_model() -> MeromorphicMap {
    build_family(FamilyId::Ex4Model, &Params::from([("eps".into(), 1e-5)])).unwrap()
}

pub fn families() -> Vec<(&'static str, MeromorphicMap)> {
    vec![("ex1", ex1()), ("ex2", ex2()), ("ex5", ex5()), ("ex3_model", ex3_model()), ("ex4_model", ex4_model())]
}

fn interval(r: &mut ChaCha8Rng, scale: f64) -> Interval {
    let a = r.gen_range(-scale..scale);
    let w = r.gen_range(0.0..scale / 4.0);
    Interval::new(a, a + w)
}

fn inside(r: &mut ChaCha8Rng, x: &Interval) -> f64 {
    if x.width() == 0.0 {
        x.lo
    } else {
        r.gen_range(x.lo..=x.hi)
    }
}

fn cbox(r: &mut ChaCha8Rng, scale: f64) -> ComplexBox {
    ComplexBox::from_intervals(interval(r, scale), interval(r, scale))
}

fn point_in(r: &mut ChaCha8Rng, b: &ComplexBox) -> ComplexPoint {
    c(inside(r, &b.re), inside(r, &b.im))
}

type RealOp = (&'static str, fn(&Interval, &Interval) -> Option<Interval>, fn(f64, f64) -> f64, f64);
type ComplexOp = (
    &'static str,
    fn(&ComplexBox, &ComplexBox) -> Option<ComplexBox>,
    fn(ComplexPoint, ComplexPoint) -> ComplexPoint,
    f64,
);

fn real_ops() -> Vec<RealOp> {
    vec![
        ("add", |x, y| Some(x.add(y)), |a, b| a + b, 10.0),
        ("sub", |x, y| Some(x.sub(y)), |a, b| a - b, 10.0),
        ("mul", |x, y| Some(x.mul(y)), |a, b| a * b, 10.0),
        ("div", |x, y| x.div(y).ok(), |a, b| a / b, 10.0),
        ("sqr", |x, _| Some(x.sqr()), |a, _| a * a, 10.0),
        ("sqrt", |x, _| x.sqrt().ok(), |a, _| a.sqrt(), 10.0),
        ("exp", |x, _| Some(x.exp()), |a, _| a.exp(), 10.0),
        ("sin", |x, _| Some(x.sin()), |a, _| a.sin(), 20.0),
        ("cos", |x, _| Some(x.cos()), |a, _| a.cos(), 20.0),
        ("sinh", |x, _| Some(x.sinh()), |a, _| a.sinh(), 5.0),
        ("cosh", |x, _| Some(x.cosh()), |a, _| a.cosh(), 5.0),
        ("powi3", |x, _| Some(x.powi(3)), |a, _| a.powi(3), 4.0),
    ]
}

fn complex_ops() -> Vec<ComplexOp> {
    vec![
        ("add", |x, y| Some(x.add(y)), |a, b| a + b, 10.0),
        ("sub", |x, y| Some(x.sub(y)), |a, b| a - b, 10.0),
        ("mul", |x, y| Some(x.mul(y)), |a, b| a * b, 10.0),
        ("div", |x, y| x.div(y).ok(), |a, b| a / b, 10.0),
        ("recip", |x, _| x.recip().ok(), |a, _| a.inv(), 10.0),
        ("sqr", |x, _| Some(x.sqr()), |a, _| a * a, 10.0),
        ("powi5", |x, _| Some(x.powi(5)), |a, _| a.powi(5), 2.0),
        ("exp", |x, _| Some(x.exp()), |a, _| a.exp(), 5.0),
        ("sin", |x, _| Some(x.sin()), |a, _| a.sin(), 5.0),
        ("cos", |x, _| Some(x.cos()), |a, _| a.cos(), 5.0),
    ]
}

/// Per-operation violation counts of the box enclosures, with `samples`
/// random box pairs and one random point pair per box pair.
pub fn enclosure_violations(samples: usize, seed: u64) -> Vec<(String, usize)> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    for (name, op, exact, scale) in real_ops() {
        let mut bad = 0;
        for _ in 0..samples {
            let (x, y) = (interval(&mut r, scale), interval(&mut r, scale));
            let Some(enc) = op(&x, &y) else { continue };
            let v = exact(inside(&mut r, &x), inside(&mut r, &y));
            if v.is_finite() && !enc.contains(v) {
                bad += 1;
            }
        }
        out.push((format!("interval.{name}"), bad));
    }
    for (name, op, exact, scale) in complex_ops() {
        let mut bad = 0;
        for _ in 0..samples {
            let (x, y) = (cbox(&mut r, scale), cbox(&mut r, scale));
            let Some(enc) = op(&x, &y) else { continue };
            let v = exact(point_in(&mut r, &x), point_in(&mut r, &y));
            if v.is_finite() && !enc.contains_point(v) {
                bad += 1;
            }
        }
        out.push((format!("box.{name}"), bad));
    }
    let mut bad = 0;
    for _ in 0..samples {
        let x = cbox(&mut r, 10.0);
        if !x.abs_range().contains(point_in(&mut r, &x).norm()) {
            bad += 1;
        }
    }
    out.push(("box.abs_range".into(), bad));
    out
}

/// Sample region per family, away from the declared poles.
pub fn family_window(name: &str) -> ComplexBox {
    match name {
        "ex1" => ComplexBox::new(-2.0, 1.0, -4.0, 4.0),
        "ex2" => ComplexBox::new(-10.0, 10.0, -2.0, 2.0),
        "ex5" => ComplexBox::new(-5.0, 2.0, -3.0, 3.0),
        _ => ComplexBox::new(-4.0, 2.0, -3.0, 3.0),
    }
}

/// Largest relative error between the symbolic derivative and a central
/// difference with step `1e-6 max(1, |z|)`, over `points` sampled points
/// kept at least `0.05` from the declared poles and from 0.
pub fn derivative_max_rel_error(map: &MeromorphicMap, window: &ComplexBox, points: usize, seed: u64) -> f64 {
    let mut r = rng(seed);
    let mut worst: f64 = 0.0;
    let mut taken = 0;
    while taken < points {
        let z = point_in(&mut r, window);
        if z.norm() < 0.05 || map.declared_poles.iter().any(|p| (z - p).norm() < 0.05) {
            continue;
        }
        let h = 1e-6 * z.norm().max(1.0);
        let (Ok(fp), Ok(fm), Ok(d)) = (map.eval(z + h), map.eval(z - h), map.eval_derivative(z)) else {
            continue;
        };
        let fd = (fp - fm) / (2.0 * h);
        worst = worst.max((fd - d).norm() / d.norm().max(1.0));
        taken += 1;
    }
    worst
}

/// Circles, maps and targets used for the sample-doubling stability check.
pub fn winding_cases() -> Vec<(MeromorphicMap, Circle, ComplexPoint)> {
    let ex2 = ex2();
    let eps: f64 = 1e-5;
    vec![
        (ex2.clone(), Circle::new(c(0.0, 0.0), 0.5), c(2.0 * PI, 0.0)),
        (ex2.derivative(), Circle::new(c(0.0, 0.0), 0.5), c(0.0, 0.0)),
        (ex2.clone(), Circle::new(c(0.0, 0.0), 1.5 * eps.sqrt()), c(2.0 * PI, 0.0)),
        (ex2.clone(), Circle::new(c(2.0 * PI, 0.0), 1.0 / 32.0), c(4.0 * PI, 0.0)),
        (ex1(), Circle::new(c(0.0, 0.0), 2.0 * 2f64.powi(-6) * 0.99), c(0.0, 0.0)),
        (ex5(), Circle::new(c(0.0, 0.0), 1.0), c(0.0, 0.0)),
    ]
}

/// Number of cases whose valid winding changes when the sample count is
/// doubled (up to four times).
pub fn winding_doubling_changes() -> usize {
    let mut changes = 0;
    for (map, circle, w0) in winding_cases() {
        let base = winding_number(&map, &circle, w0).unwrap();
        assert!(base.valid, "case around {w0} not valid");
        for k in 1..=4 {
            let r = winding_with_samples(&map, &circle, w0, base.samples << k).unwrap();
            if r.winding != base.winding {
                changes += 1;
            }
        }
    }
    changes
}

pub fn random_mask(r: &mut ChaCha8Rng, w: usize, h: usize) -> Vec<bool> {
    let density = r.gen_range(0.3..0.8);
    (0..w * h).map(|_| r.gen_bool(density)).collect()
}

/// Components over `masks` random masks whose complement-count connectivity
/// disagrees with `1 + hole_count_by_flood`.
pub fn euler_disagreements(masks: usize, seed: u64) -> (usize, usize) {
    let mut r = rng(seed);
    let mut disagreements = 0;
    let mut checked = 0;
    for _ in 0..masks {
        let (w, h) = (r.gen_range(4..24), r.gen_range(4..24));
        let cm = label_components(&mask_grid(&random_mask(&mut r, w, h), w, h));
        for info in &cm.components {
            checked += 1;
            if connectivity(&cm, info.id).unwrap().connectivity != 1 + hole_count_by_flood(&cm, info.id) {
                disagreements += 1;
            }
        }
    }
    (disagreements, checked)
}
