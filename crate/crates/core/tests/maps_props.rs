mod common;

use std::f64::consts::PI;

use rand::Rng;

use common::{c, derivative_max_rel_error, families, family_window, rng};
use wandering::maps::{ex2_entire_part, parse_expr, MeromorphicMap, Params};
use wandering::numerics::ComplexBox;

#[test]
fn symbolic_derivatives_match_central_differences() {
    for (name, map) in families() {
        let err = derivative_max_rel_error(&map, &family_window(name), 100, 3);
        assert!(err < 1e-6, "{name}: {err:e}");
    }
    let joukowski =
        MeromorphicMap::custom(parse_expr("(add z (div 0.001 z))").unwrap(), Params::new(), vec![c(0.0, 0.0)]);
    let err = derivative_max_rel_error(&joukowski, &ComplexBox::new(-2.0, 2.0, -2.0, 2.0), 100, 4);
    assert!(err < 1e-6, "custom: {err:e}");
}

#[test]
fn point_values_lie_in_point_box_enclosures() {
    let mut r = rng(9);
    for (name, map) in families() {
        let w = family_window(name);
        let mut checked = 0;
        while checked < 1000 {
            let z = c(r.gen_range(w.re.lo..w.re.hi), r.gen_range(w.im.lo..w.im.hi));
            let (Ok(v), Ok(b)) = (map.eval(z), map.eval_box(&ComplexBox::point(z))) else { continue };
            assert!(b.contains_point(v), "{name} at {z}: {v} not in {b:?}");
            checked += 1;
        }
    }
}

#[test]
fn box_enclosures_contain_sampled_images() {
    let mut r = rng(10);
    for (name, map) in families() {
        let w = family_window(name);
        for _ in 0..300 {
            let side = r.gen_range(1e-4..0.2);
            let (x, y) = (r.gen_range(w.re.lo..w.re.hi - side), r.gen_range(w.im.lo..w.im.hi - side));
            let b = ComplexBox::new(x, x + side, y, y + side);
            let Ok(enc) = map.eval_box(&b) else { continue };
            for _ in 0..20 {
                let z = c(x + r.gen::<f64>() * side, y + r.gen::<f64>() * side);
                if let Ok(v) = map.eval(z) {
                    assert!(enc.contains_point(v), "{name} at {z}");
                }
            }
        }
    }
}

#[test]
fn entire_part_commutes_with_two_pi_translation() {
    let g = ex2_entire_part();
    let mut r = rng(12);
    for _ in 0..1000 {
        let z = c(r.gen_range(-50.0..50.0), r.gen_range(-2.0..2.0));
        let d = g.eval(z + 2.0 * PI).unwrap() - g.eval(z).unwrap() - 2.0 * PI;
        assert!(d.norm() < 1e-10 * (1.0 + z.norm()), "{z}: {d}");
    }
}

#[test]
fn ex1_excess_over_doubling_is_two_pi_i_periodic() {
    let f = common::ex1();
    let a = f.param("a").unwrap();
    let phi = |z| f.eval(z).unwrap() - 2.0 * z;
    let mut r = rng(13);
    let mut checked = 0;
    while checked < 1000 {
        let z = c(r.gen_range(-3.0..1.0), r.gen_range(-10.0..10.0));
        if (z.re - a).abs() < 0.05 {
            continue;
        }
        let d = phi(z + c(0.0, 2.0 * PI)) - phi(z);
        assert!(d.norm() < 1e-10 * (1.0 + phi(z).norm()), "{z}: {d}");
        checked += 1;
    }
}
