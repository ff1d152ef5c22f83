mod common;

use proptest::prelude::*;
use rand::Rng;

use common::{c, enclosure_violations, rng};
use wandering::numerics::{ComplexBox, Interval, Region, Strip};

#[test]
fn enclosures_contain_sampled_values() {
    for (op, bad) in enclosure_violations(10_000, 1) {
        assert_eq!(bad, 0, "{op}: {bad} violations");
    }
}

fn grow(b: &ComplexBox, slack: f64) -> ComplexBox {
    let s = slack * (1.0 + b.re.mag().max(b.im.mag()));
    ComplexBox::new(b.re.lo - s, b.re.hi + s, b.im.lo - s, b.im.hi + s)
}

fn sub_box(b: &ComplexBox, t: [f64; 4]) -> ComplexBox {
    let (x0, x1) = (b.re.lo + t[0] * b.width(), b.re.lo + t[1] * b.width());
    let (y0, y1) = (b.im.lo + t[2] * b.height(), b.im.lo + t[3] * b.height());
    ComplexBox::new(x0.min(x1), x0.max(x1), y0.min(y1), y0.max(y1))
}

type UnaryOp = (&'static str, fn(&ComplexBox) -> ComplexBox);

fn unary_ops() -> Vec<UnaryOp> {
    vec![
        ("sqr", |b| b.sqr()),
        ("exp", |b| b.exp()),
        ("sin", |b| b.sin()),
        ("cos", |b| b.cos()),
        ("powi4", |b| b.powi(4)),
        ("recip", |b| b.recip().unwrap()),
    ]
}

prop_compose! {
    fn any_box()(x in -3.0..3.0f64, y in -3.0..3.0f64, w in 0.0..1.0f64, h in 0.0..1.0f64) -> ComplexBox {
        ComplexBox::new(x, x + w, y, y + h)
    }
}

proptest! {
    #[test]
    fn inclusion_monotonicity(b in any_box(), t in prop::array::uniform4(0.0..1.0f64)) {
        let small = sub_box(&b, t);
        for (name, op) in unary_ops() {
            if name == "recip" && b.contains_zero() {
                continue;
            }
            prop_assert!(grow(&op(&b), 1e-12).contains_box(&op(&small)), "{name} on {b:?} / {small:?}");
        }
    }

    #[test]
    fn subdivision_hull_stays_inside_parent(b in any_box()) {
        for (name, op) in unary_ops() {
            if name == "recip" && b.contains_zero() {
                continue;
            }
            let parent = op(&b);
            let children = b.split4().map(|k| op(&k));
            let hull = children.iter().skip(1).fold(children[0], |acc, k| acc.hull(k));
            prop_assert!(grow(&parent, 1e-12).contains_box(&hull), "{name} on {b:?}");
        }
    }

    #[test]
    fn interval_mul_is_monotone(a in -5.0..5.0f64, w in 0.0..2.0f64, t in 0.0..1.0f64, s in 0.0..1.0f64) {
        let x = Interval::new(a, a + w);
        let y = Interval::new(-a, -a + 2.0 * w);
        let x2 = Interval::new(a + t * w, a + t * w);
        let y2 = Interval::new(-a + s * w, -a + s * w);
        prop_assert!(x.mul(&y).contains_interval(&x2.mul(&y2)));
    }
}

fn sample_regions() -> Vec<Region> {
    let o = c(0.0, 0.0);
    vec![
        Region::disk(o, 1.0),
        Region::closed_disk(c(0.5, -0.2), 0.7),
        Region::annulus(o, 0.3, 1.2, true),
        Region::annulus(c(0.1, 0.1), 0.5, 0.9, false),
        Region::Strip(Strip { re_min: f64::NEG_INFINITY, re_max: 0.0, im_min: -1.5, im_max: 1.5, closed: false }),
        Region::Strip(Strip { re_min: -1.0, re_max: 1.0, im_min: -0.5, im_max: 0.5, closed: true }),
        Region::Union(vec![Region::disk(c(-1.0, 0.0), 0.6), Region::disk(c(1.0, 0.0), 0.6)]),
        Region::closed_disk(o, 1.5).difference(Region::disk(c(0.3, 0.0), 0.4)),
    ]
}

#[test]
fn region_predicates_are_conservative() {
    let mut r = rng(5);
    let mut inside_seen = 0;
    let mut disjoint_seen = 0;
    for region in sample_regions() {
        for _ in 0..400 {
            let (x, y) = (r.gen_range(-2.5..2.5), r.gen_range(-2.5..2.5));
            let side = r.gen_range(0.0..0.6);
            let b = ComplexBox::new(x, x + side, y, y + side);
            let inside = region.box_inside(&b);
            let disjoint = region.box_disjoint(&b);
            assert!(!(inside && disjoint), "{region:?} {b:?}");
            if !(inside || disjoint) {
                continue;
            }
            inside_seen += usize::from(inside);
            disjoint_seen += usize::from(disjoint);
            for _ in 0..1000 {
                let z = c(b.re.lo + r.gen::<f64>() * side, b.im.lo + r.gen::<f64>() * side);
                assert_eq!(region.contains(z), inside, "{region:?} {b:?} {z}");
            }
        }
    }
    assert!(inside_seen > 100 && disjoint_seen > 100, "{inside_seen} / {disjoint_seen}");
}
