//! Expression trees over one complex variable.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ComplexBox, ComplexPoint, Interval};

/// Real-valued parameter table, resolved by name.
pub type Params = BTreeMap<String, f64>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapExpr {
    Var,
    Const(ComplexPoint),
    /// The exact constant pi; enclosed rigorously in box evaluation.
    Pi,
    Param(String),
    Add(Box<MapExpr>, Box<MapExpr>),
    Sub(Box<MapExpr>, Box<MapExpr>),
    Mul(Box<MapExpr>, Box<MapExpr>),
    Div(Box<MapExpr>, Box<MapExpr>),
    Neg(Box<MapExpr>),
    Exp(Box<MapExpr>),
    Sin(Box<MapExpr>),
    Cos(Box<MapExpr>),
    Pow(Box<MapExpr>, u32),
}

use MapExpr::*;

pub fn var() -> MapExpr {
    Var
}

pub fn real(x: f64) -> MapExpr {
    Const(ComplexPoint::new(x, 0.0))
}

pub fn param(name: &str) -> MapExpr {
    Param(name.to_string())
}

impl MapExpr {
    fn as_const(&self) -> Option<ComplexPoint> {
        match self {
            Const(c) => Some(*c),
            _ => None,
        }
    }

    fn is_zero(&self) -> bool {
        self.as_const() == Some(ComplexPoint::new(0.0, 0.0))
    }

    fn is_one(&self) -> bool {
        self.as_const() == Some(ComplexPoint::new(1.0, 0.0))
    }

    pub fn add(self, other: MapExpr) -> MapExpr {
        match (self.as_const(), other.as_const()) {
            _ if self.is_zero() => other,
            _ if other.is_zero() => self,
            (Some(a), Some(b)) => Const(a + b),
            _ => Add(Box::new(self), Box::new(other)),
        }
    }

    pub fn sub(self, other: MapExpr) -> MapExpr {
        match (self.as_const(), other.as_const()) {
            _ if other.is_zero() => self,
            _ if self.is_zero() => other.neg(),
            (Some(a), Some(b)) => Const(a - b),
            _ => Sub(Box::new(self), Box::new(other)),
        }
    }

    pub fn mul(self, other: MapExpr) -> MapExpr {
        match (self.as_const(), other.as_const()) {
            _ if self.is_zero() || other.is_zero() => real(0.0),
            _ if self.is_one() => other,
            _ if other.is_one() => self,
            (Some(a), Some(b)) => Const(a * b),
            _ => Mul(Box::new(self), Box::new(other)),
        }
    }

    pub fn div(self, other: MapExpr) -> MapExpr {
        if self.is_zero() {
            return real(0.0);
        }
        if other.is_one() {
            return self;
        }
        Div(Box::new(self), Box::new(other))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> MapExpr {
        match self {
            Const(c) => Const(-c),
            Neg(inner) => *inner,
            e => Neg(Box::new(e)),
        }
    }

    pub fn exp(self) -> MapExpr {
        Exp(Box::new(self))
    }

    pub fn sin(self) -> MapExpr {
        Sin(Box::new(self))
    }

    pub fn cos(self) -> MapExpr {
        Cos(Box::new(self))
    }

    pub fn pow(self, n: u32) -> MapExpr {
        match n {
            0 => real(1.0),
            1 => self,
            _ => Pow(Box::new(self), n),
        }
    }

    pub fn eval(&self, z: ComplexPoint, params: &Params) -> Result<ComplexPoint> {
        Ok(match self {
            Var => z,
            Const(c) => *c,
            Pi => ComplexPoint::new(std::f64::consts::PI, 0.0),
            Param(name) => ComplexPoint::new(lookup(params, name)?, 0.0),
            Add(a, b) => a.eval(z, params)? + b.eval(z, params)?,
            Sub(a, b) => a.eval(z, params)? - b.eval(z, params)?,
            Mul(a, b) => a.eval(z, params)? * b.eval(z, params)?,
            Div(a, b) => {
                let num = a.eval(z, params)?;
                let den = b.eval(z, params)?;
                let q = num / den;
                if den.norm_sqr() == 0.0 || !q.is_finite() {
                    return Err(Error::PoleHit(z));
                }
                q
            }
            Neg(a) => -a.eval(z, params)?,
            Exp(a) => a.eval(z, params)?.exp(),
            Sin(a) => a.eval(z, params)?.sin(),
            Cos(a) => a.eval(z, params)?.cos(),
            Pow(a, n) => a.eval(z, params)?.powu(*n),
        })
    }

    /// Natural interval extension. Fails with `PoleIntersect` when any
    /// denominator enclosure contains zero.
    pub fn eval_box(&self, b: &ComplexBox, params: &Params) -> Result<ComplexBox> {
        Ok(match self {
            Var => *b,
            Const(c) => ComplexBox::point(*c),
            Pi => ComplexBox::from_intervals(Interval::PI, Interval::point(0.0)),
            Param(name) => ComplexBox::point(ComplexPoint::new(lookup(params, name)?, 0.0)),
            Add(x, y) => x.eval_box(b, params)?.add(&y.eval_box(b, params)?),
            Sub(x, y) => x.eval_box(b, params)?.sub(&y.eval_box(b, params)?),
            Mul(x, y) => x.eval_box(b, params)?.mul(&y.eval_box(b, params)?),
            Div(x, y) => x.eval_box(b, params)?.div(&y.eval_box(b, params)?)?,
            Neg(x) => x.eval_box(b, params)?.neg(),
            Exp(x) => x.eval_box(b, params)?.exp(),
            Sin(x) => x.eval_box(b, params)?.sin(),
            Cos(x) => x.eval_box(b, params)?.cos(),
            Pow(x, n) => x.eval_box(b, params)?.powi(*n),
        })
    }

    /// Enclosure of `|expr|` over the box. Products, quotients and powers are
    /// bounded factor by factor, which avoids the corner blow-up of the
    /// rectangular product; the result is intersected with the modulus of the
    /// plain box enclosure.
    pub fn modulus_box(&self, b: &ComplexBox, params: &Params) -> Result<Interval> {
        let structural = match self {
            Var => b.abs_range(),
            Mul(x, y) => x.modulus_box(b, params)?.mul(&y.modulus_box(b, params)?),
            Div(x, y) => x.modulus_box(b, params)?.div(&y.modulus_box(b, params)?)?,
            Pow(x, n) => x.modulus_box(b, params)?.powi(*n),
            Neg(x) => x.modulus_box(b, params)?,
            Exp(x) => x.eval_box(b, params)?.re.exp(),
            _ => self.eval_box(b, params)?.abs_range(),
        };
        let plain = self.eval_box(b, params)?.abs_range();
        Ok(structural.meet(&plain))
    }

    pub fn derivative(&self) -> MapExpr {
        match self {
            Var => real(1.0),
            Const(_) | Pi | Param(_) => real(0.0),
            Add(a, b) => a.derivative().add(b.derivative()),
            Sub(a, b) => a.derivative().sub(b.derivative()),
            Mul(a, b) => a.derivative().mul((**b).clone()).add((**a).clone().mul(b.derivative())),
            Div(a, b) => {
                let da = a.derivative();
                let db = b.derivative();
                let denom = (**b).clone().pow(2);
                if da.is_zero() {
                    (**a).clone().mul(db).neg().div(denom)
                } else {
                    da.mul((**b).clone()).sub((**a).clone().mul(db)).div(denom)
                }
            }
            Neg(a) => a.derivative().neg(),
            Exp(a) => (**a).clone().exp().mul(a.derivative()),
            Sin(a) => (**a).clone().cos().mul(a.derivative()),
            Cos(a) => (**a).clone().sin().mul(a.derivative()).neg(),
            Pow(a, n) => real(f64::from(*n)).mul((**a).clone().pow(n - 1)).mul(a.derivative()),
        }
    }

    /// Names of all parameters referenced by the tree.
    pub fn param_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_params(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_params(&self, out: &mut Vec<String>) {
        match self {
            Param(n) => out.push(n.clone()),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => {
                a.collect_params(out);
                b.collect_params(out);
            }
            Neg(a) | Exp(a) | Sin(a) | Cos(a) | Pow(a, _) => a.collect_params(out),
            Var | Const(_) | Pi => {}
        }
    }
}

fn lookup(params: &Params, name: &str) -> Result<f64> {
    params.get(name).copied().ok_or_else(|| Error::UnknownParam(name.to_string()))
}

impl fmt::Display for MapExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var => write!(f, "z"),
            Const(c) if c.im == 0.0 => write!(f, "{:?}", c.re),
            Const(c) => write!(f, "(complex {:?} {:?})", c.re, c.im),
            Pi => write!(f, "pi"),
            Param(n) => write!(f, "{n}"),
            Add(a, b) => write!(f, "(add {a} {b})"),
            Sub(a, b) => write!(f, "(sub {a} {b})"),
            Mul(a, b) => write!(f, "(mul {a} {b})"),
            Div(a, b) => write!(f, "(div {a} {b})"),
            Neg(a) => write!(f, "(neg {a})"),
            Exp(a) => write!(f, "(exp {a})"),
            Sin(a) => write!(f, "(sin {a})"),
            Cos(a) => write!(f, "(cos {a})"),
            Pow(a, n) => write!(f, "(pow {a} {n})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Open,
    Close,
    Atom(String),
}

fn tokenize(src: &str) -> Vec<(Token, usize, usize)> {
    let mut out = Vec::new();
    for (line_no, line) in src.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let ch = chars[i];
            if ch.is_whitespace() {
                i += 1;
            } else if ch == '(' || ch == ')' {
                let tok = if ch == '(' { Token::Open } else { Token::Close };
                out.push((tok, line_no + 1, i + 1));
                i += 1;
            } else {
                let start = i;
                while i < chars.len() && !chars[i].is_whitespace() && chars[i] != '(' && chars[i] != ')' {
                    i += 1;
                }
                out.push((Token::Atom(chars[start..i].iter().collect()), line_no + 1, start + 1));
            }
        }
    }
    out
}

struct Parser {
    tokens: Vec<(Token, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let (line, column) = self.tokens.get(self.pos).or_else(|| self.tokens.last()).map_or((1, 1), |t| (t.1, t.2));
        Err(Error::Parse { line, column, message: message.into() })
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<MapExpr> {
        match self.next() {
            None => {
                self.pos -= 1;
                self.error("unexpected end of input")
            }
            Some(Token::Close) => {
                self.pos -= 1;
                self.error("unexpected `)`")
            }
            Some(Token::Atom(a)) => self.atom(&a),
            Some(Token::Open) => {
                let op = match self.next() {
                    Some(Token::Atom(op)) => op,
                    _ => {
                        self.pos -= 1;
                        return self.error("expected operator name after `(`");
                    }
                };
                let op_pos = self.pos - 1;
                let mut args = Vec::new();
                let mut exponent = None;
                loop {
                    match self.tokens.get(self.pos).map(|t| &t.0) {
                        Some(Token::Close) => {
                            self.pos += 1;
                            break;
                        }
                        None => return self.error(format!("unclosed `({op}`")),
                        Some(Token::Atom(a)) if op == "pow" && args.len() == 1 => {
                            let n = a.parse::<u32>().ok().filter(|n| *n >= 2);
                            if n.is_none() {
                                return self.error("pow exponent must be an integer >= 2");
                            }
                            exponent = n;
                            self.pos += 1;
                        }
                        _ => args.push(self.expr()?),
                    }
                }
                self.build(&op, args, exponent, op_pos)
            }
        }
    }

    fn atom(&mut self, a: &str) -> Result<MapExpr> {
        match a {
            "z" => Ok(Var),
            "i" => Ok(Const(ComplexPoint::new(0.0, 1.0))),
            "pi" => Ok(Pi),
            _ => {
                if let Ok(x) = a.parse::<f64>() {
                    Ok(real(x))
                } else if a.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                    && a.chars().all(|c| c.is_alphanumeric() || c == '_')
                {
                    Ok(Param(a.to_string()))
                } else {
                    self.pos -= 1;
                    self.error(format!("bad atom `{a}`"))
                }
            }
        }
    }

    fn build(&self, op: &str, args: Vec<MapExpr>, exponent: Option<u32>, op_pos: usize) -> Result<MapExpr> {
        let arity_err = |want: &str| -> Result<MapExpr> {
            let (line, column) = (self.tokens[op_pos].1, self.tokens[op_pos].2);
            Err(Error::Parse { line, column, message: format!("`{op}` takes {want} argument(s), got {}", args.len()) })
        };
        let unary = |f: fn(Box<MapExpr>) -> MapExpr, args: Vec<MapExpr>| {
            let mut it = args.into_iter();
            f(Box::new(it.next().expect("arity checked")))
        };
        match op {
            "add" | "mul" if args.len() >= 2 => {
                let mut it = args.into_iter();
                let first = it.next().expect("arity checked");
                Ok(it.fold(first, |acc, e| {
                    if op == "add" {
                        Add(Box::new(acc), Box::new(e))
                    } else {
                        Mul(Box::new(acc), Box::new(e))
                    }
                }))
            }
            "add" | "mul" => arity_err("at least 2"),
            "sub" | "div" if args.len() == 2 => {
                let mut it = args.into_iter();
                let (a, b) = (Box::new(it.next().unwrap()), Box::new(it.next().unwrap()));
                Ok(if op == "sub" { Sub(a, b) } else { Div(a, b) })
            }
            "sub" | "div" => arity_err("2"),
            "neg" | "exp" | "sin" | "cos" if args.len() == 1 => Ok(match op {
                "neg" => unary(Neg, args),
                "exp" => unary(Exp, args),
                "sin" => unary(Sin, args),
                _ => unary(Cos, args),
            }),
            "neg" | "exp" | "sin" | "cos" => arity_err("1"),
            "pow" => match (args.len(), exponent) {
                (1, Some(n)) => Ok(Pow(Box::new(args.into_iter().next().unwrap()), n)),
                _ => arity_err("an expression and an integer"),
            },
            "complex" => match args.as_slice() {
                [Const(a), Const(b)] if a.im == 0.0 && b.im == 0.0 => Ok(Const(ComplexPoint::new(a.re, b.re))),
                _ => arity_err("2 real literal"),
            },
            _ => {
                let (line, column) = (self.tokens[op_pos].1, self.tokens[op_pos].2);
                Err(Error::Parse { line, column, message: format!("unknown operator `{op}`") })
            }
        }
    }
}

/// Parses the parenthesized prefix syntax, e.g. `(add (mul z (exp z)) (div eps z))`.
pub fn parse_expr(src: &str) -> Result<MapExpr> {
    let mut p = Parser { tokens: tokenize(src), pos: 0 };
    let e = p.expr()?;
    if p.pos < p.tokens.len() {
        return p.error("trailing input after expression");
    }
    Ok(e)
}
