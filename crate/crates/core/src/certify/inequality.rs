//! Pointwise modulus inequalities `|lhs| op |rhs|` over compact regions.

use serde::{Deserialize, Serialize};

use super::{subdivide, BoxTest, Budget, CertStats, CertVerdict, Certificate, Statement};
use crate::error::{Error, Result};
use crate::maps::{centered_enclosure, MapExpr, Params};
use crate::numerics::{exp_tail_bound, ComplexBox, ComplexPoint, Interval, Region};

/// Direction of `|lhs| op |rhs|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Lt,
    Le,
    Gt,
    Ge,
}

impl Comparison {
    /// Conservative decision from enclosures of both moduli.
    pub fn holds(&self, l: &Interval, r: &Interval) -> bool {
        match self {
            Comparison::Lt => l.hi < r.lo,
            Comparison::Le => l.hi <= r.lo,
            Comparison::Gt => l.lo > r.hi,
            Comparison::Ge => l.lo >= r.hi,
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            Comparison::Lt => "<",
            Comparison::Le => "<=",
            Comparison::Gt => ">",
            Comparison::Ge => ">=",
        }
    }
}

/// `|expr|` over the box: the structural modulus bound intersected with the
/// modulus of the mean-value enclosure.
fn modulus_range(expr: &MapExpr, deriv: &MapExpr, b: &ComplexBox, params: &Params) -> Result<Interval> {
    let structural = expr.modulus_box(b, params)?;
    let centered = centered_enclosure(expr, deriv, b, params)?.abs_range();
    Ok(structural.meet(&centered))
}

/// Certifies `|lhs(z)| op |rhs(z)|` for every `z` in `k`.
pub fn certify_inequality(
    lhs: &MapExpr,
    rhs: &MapExpr,
    comparison: Comparison,
    k: &Region,
    params: &Params,
    budget: &Budget,
) -> Result<Certificate> {
    let dl = lhs.derivative();
    let dr = rhs.derivative();
    let (verdict, stats) = subdivide(k, budget, |b| {
        BoxTest::from_result((|| {
            let l = modulus_range(lhs, &dl, b, params)?;
            let r = modulus_range(rhs, &dr, b, params)?;
            Ok(comparison.holds(&l, &r))
        })())
    })?;
    Ok(Certificate {
        statement: Statement::Inequality { lhs: lhs.to_string(), rhs: rhs.to_string(), comparison, region: k.clone() },
        verdict,
        stats,
    })
}

/// The same inequality on the closed annulus `inner <= |z - center| <= outer`,
/// certified one dyadic shell `[r/2, r]` at a time so every shell is resolved
/// at its own scale. Each shell gets the full budget; the first shell that is
/// not proved decides the verdict.
#[allow(clippy::too_many_arguments)]
pub fn certify_inequality_chain(
    lhs: &MapExpr,
    rhs: &MapExpr,
    comparison: Comparison,
    center: ComplexPoint,
    inner: f64,
    outer: f64,
    params: &Params,
    budget: &Budget,
) -> Result<Certificate> {
    if !(inner > 0.0 && inner <= outer) {
        return Err(Error::Domain(format!("annulus chain needs 0 < inner <= outer, got {inner}, {outer}")));
    }
    let mut stats = CertStats::default();
    let mut verdict = CertVerdict::Proved;
    let mut hi = outer;
    loop {
        let lo = (hi / 2.0).max(inner);
        let shell = Region::annulus(center, lo, hi, true);
        let cert = certify_inequality(lhs, rhs, comparison, &shell, params, budget)?;
        stats = stats.merge(&cert.stats);
        if !cert.is_proved() {
            verdict = cert.verdict;
            break;
        }
        if lo <= inner {
            break;
        }
        hi = lo;
    }
    Ok(Certificate {
        statement: Statement::Inequality {
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            comparison,
            region: Region::annulus(center, inner, outer, true),
        },
        verdict,
        stats,
    })
}

/// Bound on `R(r, n) / r^power` for `0 < r <= rho`, where `R` is the
/// exponential tail bound. The ratio is increasing in `r` when
/// `n >= power`, so its value at `rho` covers the whole punctured disk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailClosure {
    pub rho: f64,
    pub n: u32,
    pub power: u32,
    pub ratio_upper: f64,
    pub threshold: f64,
    pub strict: bool,
    pub proved: bool,
}

/// Checks `R(r, n) / r^power < threshold` (or `<=` when not strict) on
/// `0 < r <= rho`.
pub fn close_inner_disk(rho: f64, n: u32, power: u32, threshold: f64, strict: bool) -> Result<TailClosure> {
    if n < power {
        return Err(Error::Domain(format!("tail ratio is monotone only for n >= power, got n = {n}, power = {power}")));
    }
    if !(rho > 0.0) {
        return Err(Error::Domain(format!("inner radius must be positive, got {rho}")));
    }
    let tail = exp_tail_bound(rho, n)?;
    let denom = Interval::point(rho).powi(power);
    let ratio_upper = Interval::point(tail).div(&Interval::point(denom.lo))?.hi;
    let proved = if strict { ratio_upper < threshold } else { ratio_upper <= threshold };
    Ok(TailClosure { rho, n, power, ratio_upper, threshold, strict, proved })
}
