//! The bundled map families and their parameter constraints.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::expr::{param, real, var, MapExpr, Params};
use crate::error::{Error, Result};
use crate::numerics::{ComplexBox, ComplexPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyId {
    /// `2 + 2z - 2e^z + eps/(e^z - e^a)`
    Ex1,
    /// `z + eps/z + lambda sin(z + a)`
    Ex2,
    /// `z e^z`
    Ex5,
    /// `4e^z - eps/z`
    Ex3Model,
    /// `e^z - sqrt(eps) - eps/z`
    Ex4Model,
    Custom,
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "ex1" => FamilyId::Ex1,
            "ex2" => FamilyId::Ex2,
            "ex5" => FamilyId::Ex5,
            "ex3_model" | "ex3-model" => FamilyId::Ex3Model,
            "ex4_model" | "ex4-model" => FamilyId::Ex4Model,
            "custom" => FamilyId::Custom,
            other => return Err(Error::Scenario(format!("unknown family `{other}`"))),
        })
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyId::Ex1 => "ex1",
            FamilyId::Ex2 => "ex2",
            FamilyId::Ex5 => "ex5",
            FamilyId::Ex3Model => "ex3_model",
            FamilyId::Ex4Model => "ex4_model",
            FamilyId::Custom => "custom",
        };
        f.write_str(s)
    }
}

/// How many translates `a + 2 pi i k` of the Ex1 pole are declared on each side.
const EX1_DECLARED_POLE_COPIES: i32 = 64;

/// A meromorphic map with its parameter table, declared poles and cached
/// symbolic derivative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeromorphicMap {
    pub expr: MapExpr,
    pub params: Params,
    pub declared_poles: Vec<ComplexPoint>,
    pub family: FamilyId,
    derivative_expr: MapExpr,
}

/// `a = pi - arctan(2 pi)` and `lambda = sqrt(1 + 4 pi^2)`, the unique
/// solution of `lambda sin a = 2 pi`, `1 + lambda cos a = 0` with `lambda > 0`.
pub fn solve_ex2_params() -> (f64, f64) {
    let a = PI - (2.0 * PI).atan();
    let lambda = (1.0 + 4.0 * PI * PI).sqrt();
    (a, lambda)
}

/// The entire part `g(z) = z + lambda sin(z + a)` of the Ex2 map.
pub fn ex2_entire_part() -> MeromorphicMap {
    let (a, lambda) = solve_ex2_params();
    let expr = var().add(param("lambda").mul(var().add(param("a")).sin()));
    let params = Params::from([("a".into(), a), ("lambda".into(), lambda)]);
    MeromorphicMap::custom(expr, params, Vec::new())
}

fn need(params: &Params, name: &str) -> Result<f64> {
    params.get(name).copied().ok_or_else(|| Error::ParamConstraint(format!("missing parameter `{name}`")))
}

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::ParamConstraint(what()))
    }
}

fn check_small_eps(eps: f64) -> Result<()> {
    check(eps > 0.0 && eps < 1.0 / 144.0, || format!("need 0 < eps < 1/144, got eps = {eps}"))
}

/// Builds and validates a bundled family.
///
/// * `Ex1` needs `a`, `eps` with `0 < a < 1/32` and `0 < eps <= a^2/16`.
/// * `Ex2` needs `eps` and the certified radius `r1`, with `0 < eps < 1/144`
///   and `6 sqrt(eps) < r1`; `a` and `lambda` are filled in.
/// * `Ex5` takes no parameters.
/// * `Ex3Model` / `Ex4Model` need `eps` with `0 < eps < 1/144`.
pub fn build_family(family: FamilyId, params: &Params) -> Result<MeromorphicMap> {
    let z = var;
    match family {
        FamilyId::Ex1 => {
            let a = need(params, "a")?;
            let eps = need(params, "eps")?;
            check(a > 0.0 && a < 1.0 / 32.0, || format!("need 0 < a < 1/32, got a = {a}"))?;
            check(eps > 0.0 && eps <= a * a / 16.0, || {
                format!("need 0 < eps <= a^2/16 = {}, got eps = {eps}", a * a / 16.0)
            })?;
            let expr = real(2.0)
                .add(real(2.0).mul(z()))
                .sub(real(2.0).mul(z().exp()))
                .add(param("eps").div(z().exp().sub(param("a").exp())));
            let poles = (-EX1_DECLARED_POLE_COPIES..=EX1_DECLARED_POLE_COPIES)
                .map(|k| ComplexPoint::new(a, 2.0 * PI * f64::from(k)))
                .collect();
            let table = Params::from([("a".into(), a), ("eps".into(), eps)]);
            Ok(MeromorphicMap::new(expr, table, poles, family))
        }
        FamilyId::Ex2 => {
            let eps = need(params, "eps")?;
            let r1 = need(params, "r1")?;
            check_small_eps(eps)?;
            check(r1 > 0.0 && r1 < 0.5, || format!("need 0 < r1 < 1/2, got r1 = {r1}"))?;
            check(6.0 * eps.sqrt() < r1, || {
                format!("need 6 sqrt(eps) < r1, got 6 sqrt(eps) = {} and r1 = {r1}", 6.0 * eps.sqrt())
            })?;
            let (a, lambda) = solve_ex2_params();
            let expr = z().add(param("eps").div(z())).add(param("lambda").mul(z().add(param("a")).sin()));
            let table =
                Params::from([("a".into(), a), ("lambda".into(), lambda), ("eps".into(), eps), ("r1".into(), r1)]);
            Ok(MeromorphicMap::new(expr, table, vec![ComplexPoint::new(0.0, 0.0)], family))
        }
        FamilyId::Ex5 => Ok(MeromorphicMap::new(z().mul(z().exp()), Params::new(), Vec::new(), family)),
        FamilyId::Ex3Model => {
            let eps = need(params, "eps")?;
            check_small_eps(eps)?;
            let expr = real(4.0).mul(z().exp()).sub(param("eps").div(z()));
            let table = Params::from([("eps".into(), eps)]);
            Ok(MeromorphicMap::new(expr, table, vec![ComplexPoint::new(0.0, 0.0)], family))
        }
        FamilyId::Ex4Model => {
            let eps = need(params, "eps")?;
            check_small_eps(eps)?;
            let expr = z().exp().sub(param("sqrt_eps")).sub(param("eps").div(z()));
            let table = Params::from([("eps".into(), eps), ("sqrt_eps".into(), eps.sqrt())]);
            Ok(MeromorphicMap::new(expr, table, vec![ComplexPoint::new(0.0, 0.0)], family))
        }
        FamilyId::Custom => {
            Err(Error::ParamConstraint("custom maps are built from an expression, not a family id".into()))
        }
    }
}

impl MeromorphicMap {
    fn new(expr: MapExpr, params: Params, declared_poles: Vec<ComplexPoint>, family: FamilyId) -> Self {
        let derivative_expr = expr.derivative();
        MeromorphicMap { expr, params, declared_poles, family, derivative_expr }
    }

    /// A user-supplied expression. Every parameter it references must be in
    /// `params`.
    pub fn custom(expr: MapExpr, params: Params, declared_poles: Vec<ComplexPoint>) -> Self {
        MeromorphicMap::new(expr, params, declared_poles, FamilyId::Custom)
    }

    pub fn try_custom(expr: MapExpr, params: Params, declared_poles: Vec<ComplexPoint>) -> Result<Self> {
        if let Some(missing) = expr.param_names().into_iter().find(|n| !params.contains_key(n)) {
            return Err(Error::UnknownParam(missing));
        }
        Ok(Self::custom(expr, params, declared_poles))
    }

    pub fn param(&self, name: &str) -> Result<f64> {
        self.params.get(name).copied().ok_or_else(|| Error::UnknownParam(name.to_string()))
    }

    /// Radius inside which evaluation near a declared pole reports a hit.
    pub fn pole_snap_radius(pole: ComplexPoint) -> f64 {
        1e-12 * (1.0 + pole.norm())
    }

    pub fn nearest_declared_pole(&self, z: ComplexPoint) -> Option<ComplexPoint> {
        self.declared_poles.iter().copied().find(|p| (z - p).norm() <= Self::pole_snap_radius(*p))
    }

    pub fn eval(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        if let Some(p) = self.nearest_declared_pole(z) {
            return Err(Error::PoleHit(p));
        }
        self.expr.eval(z, &self.params)
    }

    pub fn eval_derivative(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        if let Some(p) = self.nearest_declared_pole(z) {
            return Err(Error::PoleHit(p));
        }
        self.derivative_expr.eval(z, &self.params)
    }

    /// Rigorous enclosure of `f(B)`: the natural interval extension
    /// intersected with the mean-value form `f(c) + F'(B) (B - c)`.
    ///
    /// The mean-value form is valid for holomorphic `f` because
    /// `f(z) - f(c) = (z - c) * avg_{t in [0,1]} f'(c + t(z - c))` and the
    /// average lies in the convex box `F'(B)`.
    pub fn eval_box(&self, b: &ComplexBox) -> Result<ComplexBox> {
        centered_enclosure(&self.expr, &self.derivative_expr, b, &self.params)
    }

    pub fn derivative_expr(&self) -> &MapExpr {
        &self.derivative_expr
    }

    /// The derivative as a map of its own (same parameters and poles).
    pub fn derivative(&self) -> MeromorphicMap {
        MeromorphicMap::new(
            self.derivative_expr.clone(),
            self.params.clone(),
            self.declared_poles.clone(),
            FamilyId::Custom,
        )
    }
}

/// Natural enclosure of `expr` over `b`, tightened by the mean-value form
/// built from `deriv` when the derivative enclosure exists.
pub fn centered_enclosure(expr: &MapExpr, deriv: &MapExpr, b: &ComplexBox, params: &Params) -> Result<ComplexBox> {
    let natural = expr.eval_box(b, params)?;
    if b.width() == 0.0 && b.height() == 0.0 {
        return Ok(natural);
    }
    let c = b.center();
    let centered = expr
        .eval_box(&ComplexBox::point(c), params)
        .and_then(|fc| Ok(fc.add(&deriv.eval_box(b, params)?.mul(&b.sub(&ComplexBox::point(c))))));
    Ok(match centered {
        Ok(m) => natural.meet(&m),
        Err(_) => natural,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im)
    }

    fn ex1() -> MeromorphicMap {
        let a = 2f64.powi(-6);
        build_family(FamilyId::Ex1, &Params::from([("a".into(), a), ("eps".into(), 2f64.powi(-16))])).unwrap()
    }

    fn ex2() -> MeromorphicMap {
        build_family(FamilyId::Ex2, &Params::from([("eps".into(), 1e-5), ("r1".into(), 1.0 / 32.0)])).unwrap()
    }

    #[test]
    fn ex1_extreme_eps_is_admissible() {
        let m = ex1();
        assert_eq!(m.param("eps").unwrap(), m.param("a").unwrap().powi(2) / 16.0);
    }

    #[test]
    fn ex1_rejects_large_a() {
        let p = Params::from([("a".into(), 1.0 / 16.0), ("eps".into(), 1e-6)]);
        match build_family(FamilyId::Ex1, &p) {
            Err(Error::ParamConstraint(msg)) => assert!(msg.contains("a < 1/32")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ex2_rejects_eps_too_large_for_r1() {
        let p = Params::from([("eps".into(), 1e-4), ("r1".into(), 1.0 / 32.0)]);
        assert!(matches!(build_family(FamilyId::Ex2, &p), Err(Error::ParamConstraint(_))));
    }

    #[test]
    fn ex5_is_z_exp_z() {
        let m = build_family(FamilyId::Ex5, &Params::new()).unwrap();
        assert_eq!(m.expr.to_string(), "(mul z (exp z))");
        assert!((m.eval(c(1.0, 0.0)).unwrap() - c(std::f64::consts::E, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn ex2_identities() {
        let (a, lambda) = solve_ex2_params();
        assert!((lambda * a.sin() - 2.0 * PI).abs() < 1e-12);
        assert!((1.0 + lambda * a.cos()).abs() < 1e-12);
        // Leading digits, not rounded: a = 1.7286...
        assert_eq!((a * 1e3).floor(), 1728.0);
        assert_eq!((lambda * 1e3).floor(), 6362.0);
        assert!((a + (2.0 * PI).atan() - PI).abs() < 1e-15);
    }

    #[test]
    fn poles_are_reported() {
        assert!(matches!(ex1().eval(c(2f64.powi(-6), 0.0)), Err(Error::PoleHit(_))));
        assert!(matches!(ex2().eval(c(0.0, 0.0)), Err(Error::PoleHit(_))));
        let b = ComplexBox::around(c(0.0, 0.0), 0.01);
        assert!(matches!(ex2().eval_box(&b), Err(Error::PoleIntersect)));
    }

    #[test]
    fn ex2_at_two_pi() {
        let m = ex2();
        let v = m.eval(c(2.0 * PI, 0.0)).unwrap();
        let want = c(4.0 * PI + 1e-5 / (2.0 * PI), 0.0);
        assert!((v - want).norm() < 1e-12, "{v}");
    }

    #[test]
    fn ex2_entire_part_is_critical_at_zero() {
        let g = ex2_entire_part();
        assert!(g.eval_derivative(c(0.0, 0.0)).unwrap().norm() < 1e-12);
    }

    #[test]
    fn ex5_derivative_vanishes_at_minus_one() {
        let m = build_family(FamilyId::Ex5, &Params::new()).unwrap();
        assert!(m.eval_derivative(c(-1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!((m.eval(c(-1.0, 0.0)).unwrap() - c(-(-1f64).exp(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn point_box_contains_point_value() {
        let m = ex1();
        let z = c(0.01, 0.02);
        assert!(m.eval_box(&ComplexBox::point(z)).unwrap().contains_point(m.eval(z).unwrap()));
    }
}
