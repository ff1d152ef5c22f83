//! Scenario files: a versioned JSON document naming a map and a list of
//! checks to run against it.
//!
//! Numeric fields accept either a JSON number or a string holding a prefix
//! expression such as `"(mul 2 a)"`; identifiers resolve against the map
//! parameters and the constants produced by earlier items.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::certify::{Budget, Comparison};
use crate::dynamics::OrbitConfig;
use crate::error::{Error, Result};
use crate::maps::{build_family, parse_expr, FamilyId, MeromorphicMap, Params};
use crate::numerics::{ComplexBox, ComplexPoint, Region, Strip};

pub const SCHEMA_VERSION: u32 = 1;

/// A number or a constant expression.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Num(f64),
    Expr(String),
}

impl Scalar {
    pub fn eval(&self, ctx: &Params) -> Result<f64> {
        match self {
            Scalar::Num(x) => Ok(*x),
            Scalar::Expr(s) => match s.trim() {
                "inf" | "+inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                src => {
                    let v = parse_expr(src)?.eval(ComplexPoint::new(0.0, 0.0), ctx)?;
                    if v.im != 0.0 {
                        return Err(Error::Scenario(format!("`{src}` is not real: {v}")));
                    }
                    Ok(v.re)
                }
            },
        }
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Num(x)
    }
}

/// `[re, im]`.
pub type PointSpec = [Scalar; 2];

pub fn eval_point(p: &PointSpec, ctx: &Params) -> Result<ComplexPoint> {
    Ok(ComplexPoint::new(p[0].eval(ctx)?, p[1].eval(ctx)?))
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
pub enum RegionSpec {
    Disk {
        center: PointSpec,
        radius: Scalar,
        #[serde(default)]
        closed: bool,
    },
    Annulus {
        center: PointSpec,
        inner: Scalar,
        outer: Scalar,
        #[serde(default = "default_true")]
        closed: bool,
    },
    Rect {
        re: [Scalar; 2],
        im: [Scalar; 2],
    },
    Strip {
        re: [Scalar; 2],
        im: [Scalar; 2],
        #[serde(default)]
        closed: bool,
    },
    Union {
        parts: Vec<RegionSpec>,
    },
    Difference {
        base: Box<RegionSpec>,
        minus: Box<RegionSpec>,
    },
}

impl RegionSpec {
    pub fn build(&self, ctx: &Params) -> Result<Region> {
        Ok(match self {
            RegionSpec::Disk { center, radius, closed } => {
                let (c, r) = (eval_point(center, ctx)?, radius.eval(ctx)?);
                if !(r >= 0.0) {
                    return Err(Error::Scenario(format!("negative disk radius {r}")));
                }
                if *closed {
                    Region::closed_disk(c, r)
                } else {
                    Region::disk(c, r)
                }
            }
            RegionSpec::Annulus { center, inner, outer, closed } => {
                let (c, ri, ro) = (eval_point(center, ctx)?, inner.eval(ctx)?, outer.eval(ctx)?);
                if !(0.0 <= ri && ri <= ro) {
                    return Err(Error::Scenario(format!("bad annulus radii {ri}, {ro}")));
                }
                Region::annulus(c, ri, ro, *closed)
            }
            RegionSpec::Rect { re, im } => {
                let b = [re[0].eval(ctx)?, re[1].eval(ctx)?, im[0].eval(ctx)?, im[1].eval(ctx)?];
                if !(b[0] <= b[1] && b[2] <= b[3]) {
                    return Err(Error::Scenario(format!("inverted rectangle {b:?}")));
                }
                Region::Rect(ComplexBox::new(b[0], b[1], b[2], b[3]))
            }
            RegionSpec::Strip { re, im, closed } => Region::Strip(Strip {
                re_min: re[0].eval(ctx)?,
                re_max: re[1].eval(ctx)?,
                im_min: im[0].eval(ctx)?,
                im_max: im[1].eval(ctx)?,
                closed: *closed,
            }),
            RegionSpec::Union { parts } => Region::Union(parts.iter().map(|p| p.build(ctx)).collect::<Result<_>>()?),
            RegionSpec::Difference { base, minus } => base.build(ctx)?.difference(minus.build(ctx)?),
        })
    }
}

/// A bundled family with parameters, or a custom expression with declared
/// poles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub poles: Vec<PointSpec>,
}

impl MapSpec {
    /// Builds the map. Custom expressions see every context constant as a
    /// parameter, overridden by the spec's own parameters.
    pub fn build(&self, ctx: &Params) -> Result<MeromorphicMap> {
        let family: FamilyId = self.family.parse()?;
        let mut params = Params::new();
        for (k, v) in &self.params {
            params.insert(k.clone(), v.eval(ctx)?);
        }
        if family == FamilyId::Custom {
            let src = self.expr.as_deref().ok_or_else(|| Error::Scenario("custom map needs `expr`".into()))?;
            let expr = parse_expr(src)?;
            let mut all = ctx.clone();
            all.extend(params);
            all.retain(|k, _| expr.param_names().contains(k));
            let poles = self.poles.iter().map(|p| eval_point(p, ctx)).collect::<Result<_>>()?;
            return MeromorphicMap::try_custom(expr, all, poles);
        }
        if self.expr.is_some() {
            return Err(Error::Scenario(format!("family `{family}` does not take `expr`")));
        }
        build_family(family, &params)
    }
}

/// Which map an item applies to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapRef {
    /// `"f"` (scenario map) or `"f_prime"` (its derivative).
    Named(String),
    Spec(MapSpec),
}

impl Default for MapRef {
    fn default() -> Self {
        MapRef::Named("f".into())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSpec {
    pub max_boxes: Option<u64>,
    pub max_depth: Option<u32>,
}

impl BudgetSpec {
    pub fn resolve(&self) -> Budget {
        let d = Budget::default();
        Budget { max_boxes: self.max_boxes.unwrap_or(d.max_boxes), max_depth: self.max_depth.unwrap_or(d.max_depth) }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitSpec {
    pub max_iter: Option<usize>,
    pub escape_radius: Option<f64>,
    pub attract_tol: Option<f64>,
    pub cycle_window: Option<usize>,
}

impl OrbitSpec {
    pub fn resolve(&self) -> OrbitConfig {
        let d = OrbitConfig::default();
        OrbitConfig {
            max_iter: self.max_iter.unwrap_or(d.max_iter),
            escape_radius: self.escape_radius.unwrap_or(d.escape_radius),
            attract_tol: self.attract_tol.unwrap_or(d.attract_tol),
            cycle_window: self.cycle_window.unwrap_or(d.cycle_window),
        }
    }
}

/// Expected certificate outcome.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectVerdict {
    #[default]
    Proved,
    Inconclusive,
    PoleContact,
}

impl ExpectVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            ExpectVerdict::Proved => "proved",
            ExpectVerdict::Inconclusive => "inconclusive",
            ExpectVerdict::PoleContact => "pole_contact",
        }
    }
}

/// `<=`-style check of a computed value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

impl Relation {
    pub fn holds(&self, x: f64, y: f64) -> bool {
        match self {
            Relation::Lt => x < y,
            Relation::Le => x <= y,
            Relation::Gt => x > y,
            Relation::Ge => x >= y,
            Relation::Eq => x == y,
        }
    }
}

/// Inner-disk closure for an annulus chain: `R(r, n) / r^power` below
/// `threshold` for `0 < r <= inner`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailSpec {
    pub n: u32,
    pub power: u32,
    pub threshold: Scalar,
    #[serde(default = "default_true")]
    pub strict: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InequalityRegion {
    Region { region: RegionSpec },
    AnnulusChain { center: PointSpec, inner: Scalar, outer: Scalar, tail: Option<TailSpec> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StationSpec {
    /// `first * ratio^n`
    Geometric { first: PointSpec, ratio: Scalar },
    /// `origin + n * step`
    Arithmetic { origin: PointSpec, step: PointSpec },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorridorSpec {
    pub origin: PointSpec,
    pub step: PointSpec,
    pub radius: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnchorSpec {
    pub name: String,
    pub point: PointSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fallback: Option<RegionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connectivity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surrounds: Option<PointSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ItemKind {
    /// Checks `lambda sin a = 2 pi`, `1 + lambda cos a = 0` and the leading
    /// digits of both constants.
    ParamIdentities {
        tolerance: f64,
        a_digits: String,
        lambda_digits: String,
    },
    /// Derives `r1`, `eps`, `r2` and stores them as constants.
    DeriveEx2Constants {},
    Inclusion {
        #[serde(default)]
        map: MapRef,
        source: RegionSpec,
        target: RegionSpec,
        #[serde(default)]
        expect: ExpectVerdict,
    },
    Inequality {
        lhs: String,
        rhs: String,
        comparison: Comparison,
        domain: InequalityRegion,
        #[serde(default)]
        expect: ExpectVerdict,
    },
    FixedPoint {
        seed_region: RegionSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        within: Option<RegionSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        attracting: Option<bool>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        multiplier_modulus: Option<[Scalar; 2]>,
        max_residual: Scalar,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        store: Option<String>,
    },
    /// `|f(z) - target| < radius`
    PointMap {
        z: PointSpec,
        target: PointSpec,
        radius: Scalar,
    },
    Track {
        z0: PointSpec,
        stations: StationSpec,
        radius: Scalar,
        steps: usize,
    },
    Winding {
        #[serde(default)]
        map: MapRef,
        center: PointSpec,
        radius: Scalar,
        w0: PointSpec,
        expect_winding: i64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        min_distance_above: Option<Scalar>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        poles_inside: Option<i64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect_zeros: Option<i64>,
    },
    Preimages {
        #[serde(default)]
        map: MapRef,
        w0: PointSpec,
        region: RegionSpec,
        expected: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        near: Option<NearRoots>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        store: Option<String>,
    },
    RiemannHurwitz {
        c_u: Scalar,
        k: Scalar,
        n: Scalar,
        c_v: Scalar,
        expect: bool,
    },
    RasterTopology {
        window: [Scalar; 4],
        resolution: [usize; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        corridor: Option<CorridorSpec>,
        anchors: Vec<AnchorSpec>,
        /// Anchor names in orbit order whose connectivities must not increase.
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        monotone: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pixmap: Option<String>,
    },
    PoleSurround {
        center: PointSpec,
        radius: Scalar,
        iterations: usize,
        pole: PointSpec,
        expect: bool,
    },
    /// `f(x) > x > 0` and `f(x)` real for `x = k x_max / samples`, `k = 1..=samples`.
    RayInvariance {
        samples: usize,
        x_max: Scalar,
    },
    ScalarCheck {
        value: Scalar,
        relation: Relation,
        bound: Scalar,
    },
}

impl ItemKind {
    pub fn name(&self) -> &'static str {
        match self {
            ItemKind::ParamIdentities { .. } => "param_identities",
            ItemKind::DeriveEx2Constants {} => "derive_ex2_constants",
            ItemKind::Inclusion { .. } => "inclusion",
            ItemKind::Inequality { .. } => "inequality",
            ItemKind::FixedPoint { .. } => "fixed_point",
            ItemKind::PointMap { .. } => "point_map",
            ItemKind::Track { .. } => "track",
            ItemKind::Winding { .. } => "winding",
            ItemKind::Preimages { .. } => "preimages",
            ItemKind::RiemannHurwitz { .. } => "riemann_hurwitz",
            ItemKind::RasterTopology { .. } => "raster_topology",
            ItemKind::PoleSurround { .. } => "pole_surround",
            ItemKind::RayInvariance { .. } => "ray_invariance",
            ItemKind::ScalarCheck { .. } => "scalar_check",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
/// Each `expected`-th root `w` of `value` must have a located root within
/// `tolerance * |w|`.
pub struct NearRoots {
    pub value: Scalar,
    pub tolerance: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Item {
    /// Short descriptive tag such as `"ex2-station"`.
    pub anchor: String,
    #[serde(flatten)]
    pub kind: ItemKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub map: MapSpec,
    #[serde(default)]
    pub budget: BudgetSpec,
    #[serde(default)]
    pub orbit: OrbitSpec,
    /// Constants available to every item before any item runs.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub constants: BTreeMap<String, Scalar>,
    #[serde(default)]
    pub items: Vec<Item>,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario> {
        let scenario: Scenario = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if scenario.schema != SCHEMA_VERSION {
            return Err(Error::Scenario(format!(
                "unsupported schema {}, this build reads schema {SCHEMA_VERSION}",
                scenario.schema
            )));
        }
        scenario.map.family.parse::<FamilyId>()?;
        Ok(scenario)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_expressions_see_constants() {
        let ctx = Params::from([("a".into(), 0.25)]);
        assert_eq!(Scalar::Expr("(mul 2 a)".into()).eval(&ctx).unwrap(), 0.5);
        assert_eq!(Scalar::Expr("-inf".into()).eval(&ctx).unwrap(), f64::NEG_INFINITY);
        assert!(Scalar::Expr("(mul 2 b)".into()).eval(&ctx).is_err());
    }

    #[test]
    fn parse_errors_carry_position() {
        match Scenario::parse("{\n  \"schema\": 1,\n  oops }") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_family_is_rejected() {
        let text = r#"{"schema": 1, "name": "x", "map": {"family": "nope"}}"#;
        assert!(matches!(Scenario::parse(text), Err(Error::Scenario(_))));
    }

    #[test]
    fn region_spec_round_trip() {
        let text = r#"{"shape": "difference",
            "base": {"shape": "disk", "center": [0, 0], "radius": "(mul 2 a)", "closed": true},
            "minus": {"shape": "disk", "center": ["a", 0], "radius": "(div a 2)"}}"#;
        let spec: RegionSpec = serde_json::from_str(text).unwrap();
        let ctx = Params::from([("a".into(), 0.5)]);
        let r = spec.build(&ctx).unwrap();
        assert!(r.contains(ComplexPoint::new(-0.9, 0.0)));
        assert!(!r.contains(ComplexPoint::new(0.5, 0.1)));
        let back: RegionSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
    }
}
