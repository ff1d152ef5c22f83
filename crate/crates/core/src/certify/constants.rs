//! Certified radii and smallness parameter for the `z + eps/z + lambda sin(z + a)` family.
//!
//! * `r1` is the largest radius in `1/8, 1/16, ...` on which
//!   `|g'(z)| <= 1/4` is proved for `|z| <= r1`, with `g = z + lambda sin(z + a)`.
//!   `g'` is `2 pi`-periodic, so the same bound holds around every `2 n pi`.
//! * `eps` is the largest `10^-k` with `6 sqrt(eps) < r1` and `eps < 1/144`.
//! * `r2` is the smallest radius in `r1/2, r1/4, ...` for which
//!   `g(closed B(2 pi, r1))` is proved to lie in `B(4 pi, r2 - eps/(2 pi - r1))`.
//!   Since `g(z + 2 pi) = g(z) + 2 pi` and `|eps/z| <= eps/(2 pi - r1)` on
//!   every station with `n >= 1`, this gives `f(closed B(2 n pi, r1)) ⊂
//!   B((2n + 2) pi, r2)` for all `n >= 1`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{certify_inclusion, certify_inequality, Budget, Certificate, Comparison};
use crate::error::{Error, Result};
use crate::maps::{build_family, ex2_entire_part, real, FamilyId, Params};
use crate::numerics::{ComplexPoint, Interval, Region};

/// Largest `r1` candidate tried.
const R1_START: f64 = 0.125;
/// Candidates below `2^-MAX_HALVINGS * start` are not tried.
const MAX_HALVINGS: i32 = 20;
/// Inflation covering the gap between `2 pi` and its double-precision value.
const CENTER_SLACK: f64 = 4e-15;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusTrial {
    pub radius: f64,
    pub verdict: String,
    pub boxes_examined: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ex2Constants {
    pub a: f64,
    pub lambda: f64,
    pub r1: f64,
    pub eps: f64,
    pub r2: f64,
    /// Upper bound on `eps / (2 pi - r1)`.
    pub pole_term_bound: f64,
    pub r1_trials: Vec<RadiusTrial>,
    pub r2_trials: Vec<RadiusTrial>,
    /// Direct check `f(closed B(2 pi, r1)) ⊂ B(4 pi, r2)` for the full map.
    pub station_certificate: Certificate,
}

fn trial(radius: f64, cert: &Certificate) -> RadiusTrial {
    RadiusTrial { radius, verdict: cert.verdict.name().to_string(), boxes_examined: cert.stats.boxes_examined }
}

/// Largest `10^-k` with `6 sqrt(eps) < r1` and `eps < 1/144`.
pub fn choose_eps(r1: f64) -> Result<f64> {
    for k in 1..=300 {
        let eps: f64 = format!("1e-{k}").parse().expect("decimal literal");
        let six_root = Interval::point(eps).sqrt()?.scale(6.0);
        if six_root.hi < r1 && eps < 1.0 / 144.0 {
            return Ok(eps);
        }
    }
    Err(Error::Domain(format!("no admissible eps for r1 = {r1}")))
}

pub fn derive_ex2_constants(budget: &Budget) -> Result<Ex2Constants> {
    let g = ex2_entire_part();
    let a = g.param("a")?;
    let lambda = g.param("lambda")?;
    let origin = ComplexPoint::new(0.0, 0.0);

    let mut r1_trials = Vec::new();
    let mut r1 = None;
    for j in 0..=MAX_HALVINGS {
        let radius = R1_START * 0.5f64.powi(j);
        let cert = certify_inequality(
            g.derivative_expr(),
            &real(0.25),
            Comparison::Le,
            &Region::closed_disk(origin, radius),
            &g.params,
            budget,
        )?;
        r1_trials.push(trial(radius, &cert));
        if cert.is_proved() {
            r1 = Some(radius);
            break;
        }
    }
    let r1 = r1.ok_or_else(|| Error::Domain("no candidate r1 proved |g'| <= 1/4".into()))?;
    let eps = choose_eps(r1)?;

    let two_pi = Interval::PI.scale(2.0);
    let pole_term_bound = Interval::point(eps).div(&two_pi.sub(&Interval::point(r1)))?.hi;
    let source = Region::closed_disk(ComplexPoint::new(2.0 * PI, 0.0), r1 + CENTER_SLACK);
    let target_center = ComplexPoint::new(4.0 * PI, 0.0);

    let mut r2_trials = Vec::new();
    let mut r2 = None;
    for j in 1..=MAX_HALVINGS {
        let radius = r1 * 0.5f64.powi(j);
        let shrunk = radius - pole_term_bound - CENTER_SLACK;
        if shrunk <= 0.0 {
            break;
        }
        let cert = certify_inclusion(&g, &source, &Region::disk(target_center, shrunk), budget)?;
        r2_trials.push(trial(radius, &cert));
        if !cert.is_proved() {
            break;
        }
        r2 = Some(radius);
    }
    let r2 = r2.ok_or_else(|| Error::Domain(format!("no station radius below r1 = {r1} was proved")))?;

    let f = build_family(FamilyId::Ex2, &Params::from([("eps".into(), eps), ("r1".into(), r1)]))?;
    let station_certificate = certify_inclusion(
        &f,
        &Region::closed_disk(ComplexPoint::new(2.0 * PI, 0.0), r1),
        &Region::disk(target_center, r2),
        budget,
    )?;

    Ok(Ex2Constants { a, lambda, r1, eps, r2, pole_term_bound, r1_trials, r2_trials, station_certificate })
}
