//! Sequential execution of scenario items.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;
use std::time::Instant;

use serde_json::{json, Value};

use super::pixmap::render_pixmap;
use super::report::{ItemReport, Report};
use super::scenario::{
    eval_point, AnchorSpec, CorridorSpec, InequalityRegion, Item, ItemKind, MapRef, NearRoots, Scalar, Scenario,
    StationSpec,
};
use crate::certify::{
    certify_inclusion, certify_inequality, certify_inequality_chain, close_inner_disk, curve_image_surrounds_pole,
    derive_ex2_constants, locate_preimages, riemann_hurwitz_check, winding_number, Budget, Circle,
};
use crate::dynamics::{classify_grid, find_fixed_point, track_wandering, Corridor, OrbitConfig};
use crate::error::{Error, Result};
use crate::maps::{ex2_entire_part, parse_expr, solve_ex2_params, MeromorphicMap, Params};
use crate::numerics::{ComplexBox, ComplexPoint};
use crate::topology::{connectivity, connectivity_monotonicity_check, label_components, surrounds};

/// Command-line overrides of scenario settings.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub budget_boxes: Option<u64>,
    pub max_iter: Option<usize>,
    /// Replaces the pixmap path of every raster item.
    pub pixmap_out: Option<PathBuf>,
    /// Run only the raster items and the items that produce constants.
    pub raster_only: bool,
}

struct Runner<'a> {
    scenario: &'a Scenario,
    budget: Budget,
    orbit: OrbitConfig,
    opts: &'a RunOptions,
    /// Scenario constants and everything items have stored.
    ctx: Params,
    derived: BTreeMap<String, f64>,
}

type Outcome = (bool, Value, Value);

fn finite(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

fn point_json(z: ComplexPoint) -> Value {
    json!([finite(z.re), finite(z.im)])
}

fn integral(x: f64, what: &str) -> Result<i64> {
    if x.fract() != 0.0 || !x.is_finite() {
        return Err(Error::Scenario(format!("{what} must be an integer, got {x}")));
    }
    Ok(x as i64)
}

/// `x` cut (not rounded) to the number of decimals in `digits`, compared
/// with `digits`.
fn leading_digits_match(x: f64, digits: &str) -> bool {
    let decimals = digits.split_once('.').map_or(0, |(_, d)| d.len());
    let scale = 10f64.powi(decimals as i32);
    format!("{:.*}", decimals, (x * scale).floor() / scale) == digits
}

impl<'a> Runner<'a> {
    fn new(scenario: &'a Scenario, opts: &'a RunOptions) -> Result<Self> {
        let mut budget = scenario.budget.resolve();
        if let Some(b) = opts.budget_boxes {
            budget.max_boxes = b;
        }
        let mut orbit = scenario.orbit.resolve();
        if let Some(m) = opts.max_iter {
            orbit.max_iter = m;
        }
        let mut ctx = Params::new();
        for (name, value) in &scenario.constants {
            let v = value.eval(&ctx)?;
            ctx.insert(name.clone(), v);
        }
        Ok(Runner { scenario, budget, orbit, opts, ctx, derived: BTreeMap::new() })
    }

    fn store(&mut self, name: &str, value: f64) {
        self.ctx.insert(name.to_string(), value);
        self.derived.insert(name.to_string(), value);
    }

    fn main_map(&self) -> Result<MeromorphicMap> {
        self.scenario.map.build(&self.ctx)
    }

    /// Constants visible to expressions: map parameters, overridden by the
    /// run context.
    fn scope(&self) -> Params {
        let mut scope = self.main_map().map(|m| m.params).unwrap_or_default();
        scope.extend(self.ctx.iter().map(|(k, v)| (k.clone(), *v)));
        scope
    }

    fn eval(&self, s: &Scalar) -> Result<f64> {
        s.eval(&self.scope())
    }

    fn point(&self, p: &[Scalar; 2]) -> Result<ComplexPoint> {
        eval_point(p, &self.scope())
    }

    fn resolve_map(&self, r: &MapRef) -> Result<MeromorphicMap> {
        match r {
            MapRef::Named(name) => match name.as_str() {
                "f" => self.main_map(),
                "f_prime" => Ok(self.main_map()?.derivative()),
                "g" => Ok(ex2_entire_part()),
                "g_prime" => Ok(ex2_entire_part().derivative()),
                other => Err(Error::Scenario(format!("unknown map reference `{other}`"))),
            },
            MapRef::Spec(spec) => spec.build(&self.scope()),
        }
    }

    fn run_item(&mut self, item: &Item) -> Result<Outcome> {
        match &item.kind {
            ItemKind::ParamIdentities { tolerance, a_digits, lambda_digits } => {
                let (a, lambda) = solve_ex2_params();
                let sin_gap = (lambda * a.sin() - 2.0 * PI).abs();
                let cos_gap = (1.0 + lambda * a.cos()).abs();
                let digits_ok = leading_digits_match(a, a_digits) && leading_digits_match(lambda, lambda_digits);
                self.store("a", a);
                self.store("lambda", lambda);
                Ok((
                    sin_gap < *tolerance && cos_gap < *tolerance && digits_ok,
                    json!({"tolerance": tolerance, "a": a_digits, "lambda": lambda_digits}),
                    json!({"a": a, "lambda": lambda, "sin_identity_gap": sin_gap, "cos_identity_gap": cos_gap,
                           "leading_digits_match": digits_ok}),
                ))
            }
            ItemKind::DeriveEx2Constants {} => {
                let k = derive_ex2_constants(&self.budget)?;
                for (name, v) in [("a", k.a), ("lambda", k.lambda), ("r1", k.r1), ("eps", k.eps), ("r2", k.r2)] {
                    self.store(name, v);
                }
                self.store("sqrt_eps", k.eps.sqrt());
                let ok = k.station_certificate.is_proved()
                    && 0.0 < k.r1
                    && k.r1 < 0.5
                    && 6.0 * k.eps.sqrt() < k.r1
                    && k.eps < 1.0 / 144.0
                    && k.r2 < k.r1;
                Ok((ok, json!("r1, eps, r2 certified"), serde_json::to_value(&k).map_err(json_err)?))
            }
            ItemKind::Inclusion { map, source, target, expect } => {
                let m = self.resolve_map(map)?;
                let scope = self.scope();
                let cert = certify_inclusion(&m, &source.build(&scope)?, &target.build(&scope)?, &self.budget)?;
                Ok((
                    cert.verdict.name() == expect.name(),
                    json!(expect.name()),
                    serde_json::to_value(&cert).map_err(json_err)?,
                ))
            }
            ItemKind::Inequality { lhs, rhs, comparison, domain, expect } => {
                let (l, r) = (parse_expr(lhs)?, parse_expr(rhs)?);
                let scope = self.scope();
                let (cert, tail) = match domain {
                    InequalityRegion::Region { region } => {
                        (certify_inequality(&l, &r, *comparison, &region.build(&scope)?, &scope, &self.budget)?, None)
                    }
                    InequalityRegion::AnnulusChain { center, inner, outer, tail } => {
                        let inner = self.eval(inner)?;
                        let cert = certify_inequality_chain(
                            &l,
                            &r,
                            *comparison,
                            self.point(center)?,
                            inner,
                            self.eval(outer)?,
                            &scope,
                            &self.budget,
                        )?;
                        let tail = match tail {
                            Some(t) => Some(close_inner_disk(inner, t.n, t.power, self.eval(&t.threshold)?, t.strict)?),
                            None => None,
                        };
                        (cert, tail)
                    }
                };
                let passed = cert.verdict.name() == expect.name() && tail.is_none_or(|t| t.proved);
                Ok((
                    passed,
                    json!(expect.name()),
                    json!({"certificate": serde_json::to_value(&cert).map_err(json_err)?,
                           "inner_disk": serde_json::to_value(tail).map_err(json_err)?}),
                ))
            }
            ItemKind::FixedPoint { seed_region, within, attracting, multiplier_modulus, max_residual, store } => {
                let m = self.main_map()?;
                let scope = self.scope();
                let fp = find_fixed_point(&m, &seed_region.build(&scope)?)?;
                let mut ok = fp.residual < self.eval(max_residual)?;
                if let Some(w) = within {
                    ok &= w.build(&scope)?.contains(fp.location);
                }
                if let Some(att) = attracting {
                    ok &= fp.is_attracting() == *att;
                }
                if let Some([value, tol]) = multiplier_modulus {
                    ok &= (fp.multiplier.norm() - self.eval(value)?).abs() <= self.eval(tol)?;
                }
                if let Some(name) = store {
                    self.store(&format!("{name}_re"), fp.location.re);
                    self.store(&format!("{name}_im"), fp.location.im);
                }
                Ok((
                    ok,
                    json!({"attracting": attracting, "max_residual": self.eval(max_residual)?}),
                    json!({"location": point_json(fp.location), "residual": fp.residual,
                           "multiplier": point_json(fp.multiplier), "multiplier_modulus": fp.multiplier.norm()}),
                ))
            }
            ItemKind::PointMap { z, target, radius } => {
                let m = self.main_map()?;
                let (z, target, radius) = (self.point(z)?, self.point(target)?, self.eval(radius)?);
                let w = m.eval(z)?;
                let d = (w - target).norm();
                Ok((
                    d < radius,
                    json!({"target": point_json(target), "radius": radius}),
                    json!({"image": point_json(w), "distance": d}),
                ))
            }
            ItemKind::Track { z0, stations, radius, steps } => {
                let m = self.main_map()?;
                let centers: Vec<ComplexPoint> = match stations {
                    StationSpec::Geometric { first, ratio } => {
                        let (first, ratio) = (self.point(first)?, self.eval(ratio)?);
                        (0..*steps).map(|n| first * ratio.powi(n as i32)).collect()
                    }
                    StationSpec::Arithmetic { origin, step } => {
                        let (origin, step) = (self.point(origin)?, self.point(step)?);
                        (0..*steps).map(|n| origin + step * n as f64).collect()
                    }
                };
                let hits = track_wandering(&m, self.point(z0)?, &centers, self.eval(radius)?, *steps)?;
                Ok((hits.iter().all(|h| *h), json!({"steps": steps, "all_inside": true}), json!({"inside": hits})))
            }
            ItemKind::Winding {
                map,
                center,
                radius,
                w0,
                expect_winding,
                min_distance_above,
                poles_inside,
                expect_zeros,
            } => {
                let m = self.resolve_map(map)?;
                let circle = Circle::new(self.point(center)?, self.eval(radius)?);
                let r = winding_number(&m, &circle, self.point(w0)?)?;
                let mut ok = r.valid && r.winding == *expect_winding;
                if let Some(b) = min_distance_above {
                    ok &= r.min_distance > self.eval(b)?;
                }
                let zeros = poles_inside.map(|p| r.winding + p);
                if let Some(z) = expect_zeros {
                    ok &= zeros == Some(*z);
                }
                Ok((
                    ok,
                    json!({"winding": expect_winding, "zeros": expect_zeros}),
                    json!({"winding": serde_json::to_value(r).map_err(json_err)?, "zeros_inside": zeros}),
                ))
            }
            ItemKind::Preimages { map, w0, region, expected, near, store } => {
                let m = self.resolve_map(map)?;
                let roots = locate_preimages(&m, self.point(w0)?, &region.build(&self.scope())?, *expected)?;
                let (near_ok, near_detail) = match near {
                    Some(n) => self.check_near_roots(n, &roots)?,
                    None => (true, Value::Null),
                };
                if let Some(name) = store {
                    self.store(name, roots.len() as f64);
                }
                Ok((
                    near_ok,
                    json!({"count": expected}),
                    json!({"roots": roots.iter().map(|z| point_json(*z)).collect::<Vec<_>>(), "near": near_detail}),
                ))
            }
            ItemKind::RiemannHurwitz { c_u, k, n, c_v, expect } => {
                let c_u = integral(self.eval(c_u)?, "c_u")?;
                let k = integral(self.eval(k)?, "k")?;
                let n = integral(self.eval(n)?, "n")?;
                let c_v = integral(self.eval(c_v)?, "c_v")?;
                let holds = riemann_hurwitz_check(c_u, k, n, c_v);
                Ok((
                    holds == *expect,
                    json!(expect),
                    json!({"c_u": c_u, "k": k, "n": n, "c_v": c_v, "holds": holds,
                           "lhs": c_u - 2, "rhs": k * (c_v - 2) + n}),
                ))
            }
            ItemKind::RasterTopology { window, resolution, corridor, anchors, monotone, pixmap } => {
                self.run_raster(window, *resolution, corridor.as_ref(), anchors, monotone, pixmap.as_deref())
            }
            ItemKind::PoleSurround { center, radius, iterations, pole, expect } => {
                let m = self.main_map()?;
                let circle = Circle::new(self.point(center)?, self.eval(radius)?);
                let s = curve_image_surrounds_pole(&m, *iterations, &circle, self.point(pole)?)?;
                Ok((s == *expect, json!(expect), json!({"surrounds": s})))
            }
            ItemKind::RayInvariance { samples, x_max } => {
                let m = self.main_map()?;
                let x_max = self.eval(x_max)?;
                let mut violations = 0usize;
                let mut min_gain = f64::INFINITY;
                for k in 1..=*samples {
                    let x = x_max * k as f64 / *samples as f64;
                    let y = m.eval(ComplexPoint::new(x, 0.0))?;
                    if !(y.im == 0.0 && y.re > x && x > 0.0) {
                        violations += 1;
                    }
                    min_gain = min_gain.min(y.re - x);
                }
                Ok((
                    violations == 0 && *samples > 0,
                    json!({"violations": 0}),
                    json!({"samples": samples, "violations": violations, "min_gain": finite(min_gain)}),
                ))
            }
            ItemKind::ScalarCheck { value, relation, bound } => {
                let (x, y) = (self.eval(value)?, self.eval(bound)?);
                Ok((
                    relation.holds(x, y),
                    json!({"relation": relation, "bound": finite(y)}),
                    json!({"value": finite(x)}),
                ))
            }
        }
    }

    fn check_near_roots(&self, n: &NearRoots, roots: &[ComplexPoint]) -> Result<(bool, Value)> {
        let (value, tol) = (self.eval(&n.value)?, self.eval(&n.tolerance)?);
        let k = roots.len();
        if k == 0 {
            return Ok((true, Value::Null));
        }
        let r = value.abs().powf(1.0 / k as f64);
        let phase = if value < 0.0 { PI } else { 0.0 };
        let mut worst: f64 = 0.0;
        for j in 0..k {
            let target = ComplexPoint::from_polar(r, (phase + 2.0 * PI * j as f64) / k as f64);
            let d = roots.iter().map(|z| (z - target).norm()).fold(f64::INFINITY, f64::min);
            worst = worst.max(d);
        }
        Ok((worst < tol * r, json!({"radius": r, "worst_distance": finite(worst), "allowed": tol * r})))
    }

    fn run_raster(
        &mut self,
        window: &[Scalar; 4],
        resolution: [usize; 2],
        corridor: Option<&CorridorSpec>,
        anchors: &[AnchorSpec],
        monotone: &[String],
        pixmap: Option<&str>,
    ) -> Result<Outcome> {
        let m = self.main_map()?;
        let w = window.iter().map(|s| self.eval(s)).collect::<Result<Vec<_>>>()?;
        let window = ComplexBox::new(w[0], w[1], w[2], w[3]);
        let corridor = match corridor {
            Some(c) => Some(Corridor {
                origin: self.point(&c.origin)?,
                step: self.point(&c.step)?,
                radius: self.eval(&c.radius)?,
            }),
            None => None,
        };
        let [width, height] = resolution;
        let t = Instant::now();
        let grid = classify_grid(&m, window, width, height, &self.orbit, corridor.as_ref())?;
        let classify_ms = t.elapsed().as_secs_f64() * 1e3;
        let cm = label_components(&grid);

        let mut ok = true;
        let mut ids = BTreeMap::new();
        let mut anchor_details = Vec::new();
        let mut expected = Vec::new();
        for a in anchors {
            let scope = self.scope();
            let fallback = a.fallback.as_ref().map(|f| f.build(&scope)).transpose()?;
            let p = eval_point(&a.point, &scope)?;
            let Some(id) = cm.component_for_anchor(p, fallback.as_ref())? else {
                ok = false;
                anchor_details.push(json!({"name": a.name, "component": Value::Null}));
                continue;
            };
            ids.insert(a.name.clone(), id);
            let report = connectivity(&cm, id)?;
            let info = cm.component(id)?;
            if let Some(c) = a.connectivity {
                ok &= report.connectivity == c;
            }
            let surround = match &a.surrounds {
                Some(q) => {
                    let s = surrounds(&cm, id, eval_point(q, &scope)?)?;
                    ok &= s;
                    Some(s)
                }
                None => None,
            };
            self.store(&format!("c_{}", a.name), report.connectivity as f64);
            expected.push(json!({"name": a.name, "connectivity": a.connectivity, "surrounds": a.surrounds.is_some()}));
            anchor_details.push(json!({
                "name": a.name,
                "component": id,
                "pixel_count": info.pixel_count,
                "touches_border": info.touches_border,
                "connectivity": report.connectivity,
                "holes": report.holes.iter().map(|h| json!({
                    "pixel_count": h.pixel_count,
                    "contains": h.contains.iter().map(|z| point_json(*z)).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
                "surrounds": surround,
            }));
        }
        let monotone_detail = if monotone.is_empty() {
            Value::Null
        } else {
            let seq = monotone
                .iter()
                .map(|name| {
                    ids.get(name)
                        .copied()
                        .ok_or_else(|| Error::Scenario(format!("monotone list names unknown anchor `{name}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            let r = connectivity_monotonicity_check(&cm, &seq)?;
            ok &= r.monotone;
            serde_json::to_value(r).map_err(json_err)?
        };
        let out = self.opts.pixmap_out.clone().or_else(|| pixmap.map(PathBuf::from));
        if let Some(path) = &out {
            render_pixmap(&grid, &cm, path)?;
        }
        Ok((
            ok,
            json!({"anchors": expected, "monotone": !monotone.is_empty()}),
            json!({
                "resolution": [width, height],
                "components": cm.components.len(),
                "tracks": grid.tracks,
                "basins": grid.basins.iter().map(|z| point_json(*z)).collect::<Vec<_>>(),
                "anchors": anchor_details,
                "monotonicity": monotone_detail,
                "pixmap": out.map(|p| p.display().to_string()),
                "classify_ms": classify_ms,
            }),
        ))
    }
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Scenario(format!("serialization failed: {e}"))
}

/// Whether the item only produces constants later items depend on.
fn produces_constants(kind: &ItemKind) -> bool {
    matches!(kind, ItemKind::ParamIdentities { .. } | ItemKind::DeriveEx2Constants {})
}

/// Runs every item in declaration order. Item failures, including errors,
/// are recorded in the report; only an unusable scenario is an `Err`.
pub fn execute(scenario: &Scenario, opts: &RunOptions) -> Result<Report> {
    let start = Instant::now();
    let mut runner = Runner::new(scenario, opts)?;
    let mut report = Report::new(&scenario.name);
    for item in &scenario.items {
        let is_raster = matches!(item.kind, ItemKind::RasterTopology { .. });
        if opts.raster_only && !is_raster && !produces_constants(&item.kind) {
            continue;
        }
        let t = Instant::now();
        let (passed, expected, details) = match runner.run_item(item) {
            Ok(outcome) => outcome,
            Err(e) => (false, Value::Null, json!({"error": e.to_string()})),
        };
        report.push(ItemReport {
            anchor: item.anchor.clone(),
            kind: item.kind.name().to_string(),
            expected,
            passed,
            details,
            elapsed_ms: t.elapsed().as_secs_f64() * 1e3,
        });
    }
    report.derived = runner.derived;
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}
