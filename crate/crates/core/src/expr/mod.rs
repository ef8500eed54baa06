//! Holomorphic expressions in the polarized coordinates `z1, z2, w, zc1, zc2, wc`.
//!
//! A real-analytic function of `z` is stored as a holomorphic function of
//! `(z, zc)`; on the real locus `zc = conj(z)`. Conjugation is structural and
//! happens while the tree is built, so a finished [`Expr`] never contains a
//! conjugation node.

mod jet;
mod parse;

use std::collections::BTreeSet;
use std::fmt;
use std::ops;

use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{clit, Real};
use crate::series::SeriesError;

pub use jet::{compose, eval_series, jet, jet_real, wirtinger};
pub use parse::{parse, parse_with, ParseError, ParseErrorKind, Params};

/// One of the six polarized coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    Z1,
    Z2,
    W,
    Zc1,
    Zc2,
    Wc,
}

impl Var {
    pub const ALL: [Var; 6] = [Var::Z1, Var::Z2, Var::W, Var::Zc1, Var::Zc2, Var::Wc];
    pub const PRIMARY: [Var; 3] = [Var::Z1, Var::Z2, Var::W];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Var {
        Var::ALL[i]
    }

    pub fn conj(self) -> Var {
        Var::from_index((self.index() + 3) % 6)
    }

    pub fn is_conjugate(self) -> bool {
        self.index() >= 3
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::Z1 => "z1",
            Var::Z2 => "z2",
            Var::W => "w",
            Var::Zc1 => "zc1",
            Var::Zc2 => "zc2",
            Var::Wc => "wc",
        }
    }

    /// Accepts the canonical names and the aliases `z3`, `zc3`.
    pub fn from_name(s: &str) -> Option<Var> {
        Some(match s {
            "z1" => Var::Z1,
            "z2" => Var::Z2,
            "w" | "z3" => Var::W,
            "zc1" => Var::Zc1,
            "zc2" => Var::Zc2,
            "wc" | "zc3" => Var::Wc,
            _ => return None,
        })
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Real coordinates `x1, y1, x2, y2, u, v` (with `x3 = u`, `y3 = v`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RealCoord {
    X1,
    Y1,
    X2,
    Y2,
    U,
    V,
}

impl RealCoord {
    pub const ALL: [RealCoord; 6] = [
        RealCoord::X1,
        RealCoord::Y1,
        RealCoord::X2,
        RealCoord::Y2,
        RealCoord::U,
        RealCoord::V,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["x1", "y1", "x2", "y2", "u", "v"][self.index()]
    }

    pub fn from_name(s: &str) -> Option<RealCoord> {
        Some(match s {
            "x1" => RealCoord::X1,
            "y1" => RealCoord::Y1,
            "x2" => RealCoord::X2,
            "y2" => RealCoord::Y2,
            "u" | "x3" => RealCoord::U,
            "v" | "y3" => RealCoord::V,
            _ => return None,
        })
    }

    /// The complex coordinate this real coordinate belongs to.
    pub fn holomorphic(self) -> Var {
        Var::PRIMARY[self.index() / 2]
    }

    pub fn is_imaginary(self) -> bool {
        self.index() % 2 == 1
    }
}

impl fmt::Display for RealCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Values for all six polarized coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPoint<T: Real = f64> {
    vals: [Complex<T>; 6],
    real_locus: bool,
}

impl<T: Real> EvalPoint<T> {
    /// Real-locus point: the conjugate coordinates are the conjugates.
    pub fn new(z1: Complex<T>, z2: Complex<T>, w: Complex<T>) -> Self {
        EvalPoint {
            vals: [z1, z2, w, z1.conj(), z2.conj(), w.conj()],
            real_locus: true,
        }
    }

    pub fn from_array(z: [Complex<T>; 3]) -> Self {
        Self::new(z[0], z[1], z[2])
    }

    /// Polarized point with independent conjugate coordinates.
    pub fn polarized(z: [Complex<T>; 3], zc: [Complex<T>; 3]) -> Self {
        EvalPoint {
            vals: [z[0], z[1], z[2], zc[0], zc[1], zc[2]],
            real_locus: false,
        }
    }

    pub fn origin() -> Self {
        Self::new(Complex::zero(), Complex::zero(), Complex::zero())
    }

    /// Build from `[x1, y1, x2, y2, u, v]`.
    pub fn from_real(r: [T; 6]) -> Self {
        Self::new(
            Complex::new(r[0], r[1]),
            Complex::new(r[2], r[3]),
            Complex::new(r[4], r[5]),
        )
    }

    pub fn is_real_locus(&self) -> bool {
        self.real_locus
    }

    pub fn get(&self, v: Var) -> Complex<T> {
        self.vals[v.index()]
    }

    pub fn values(&self) -> &[Complex<T>; 6] {
        &self.vals
    }

    pub fn primaries(&self) -> [Complex<T>; 3] {
        [self.vals[0], self.vals[1], self.vals[2]]
    }

    /// `[x1, y1, x2, y2, u, v]` of the primary coordinates.
    pub fn real_coords(&self) -> [T; 6] {
        let z = self.primaries();
        [z[0].re, z[0].im, z[1].re, z[1].im, z[2].re, z[2].im]
    }

    pub fn real(&self, c: RealCoord) -> T {
        self.real_coords()[c.index()]
    }

    /// Copy with one real coordinate replaced (result is on the real locus).
    pub fn with_real(&self, c: RealCoord, value: T) -> Self {
        let mut r = self.real_coords();
        r[c.index()] = value;
        Self::from_real(r)
    }

    /// Displace the primary coordinates, staying on the real locus.
    pub fn shifted(&self, d: [Complex<T>; 3]) -> Self {
        let z = self.primaries();
        Self::new(z[0] + d[0], z[1] + d[1], z[2] + d[2])
    }
}

impl<T: Real> fmt::Display for EvalPoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["z1", "z2", "w", "zc1", "zc2", "wc"];
        let n = if self.real_locus { 3 } else { 6 };
        for i in 0..n {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}={}", names[i], self.vals[i])?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("branch violation: {func} needs an argument with positive real part, got {value}")]
    Branch { func: &'static str, value: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{func} is singular at {value}")]
    Singular { func: &'static str, value: String },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Expression tree. See the module docs for the conjugation convention.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Complex64),
    Var(Var),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    /// Real power; non-integer exponents use the principal branch.
    Pow(Box<Expr>, f64),
    Exp(Box<Expr>),
    Log(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Atan(Box<Expr>),
}

fn bx(e: Expr) -> Box<Expr> {
    Box::new(e)
}

impl Expr {
    pub fn real(x: f64) -> Expr {
        Expr::Const(Complex64::new(x, 0.0))
    }

    pub fn complex(re: f64, im: f64) -> Expr {
        Expr::Const(Complex64::new(re, im))
    }

    pub fn var(v: Var) -> Expr {
        Expr::Var(v)
    }

    pub fn zero() -> Expr {
        Expr::real(0.0)
    }

    pub fn one() -> Expr {
        Expr::real(1.0)
    }

    pub fn powf(self, r: f64) -> Expr {
        Expr::Pow(bx(self), r)
    }

    pub fn exp(self) -> Expr {
        Expr::Exp(bx(self))
    }

    pub fn ln(self) -> Expr {
        Expr::Log(bx(self))
    }

    pub fn sin(self) -> Expr {
        Expr::Sin(bx(self))
    }

    pub fn cos(self) -> Expr {
        Expr::Cos(bx(self))
    }

    pub fn atan(self) -> Expr {
        Expr::Atan(bx(self))
    }

    /// Real coordinate as polarized expression, e.g. `y1 = (z1 - zc1)/(2i)`.
    pub fn real_coord(c: RealCoord) -> Expr {
        let z = Expr::Var(c.holomorphic());
        let zc = Expr::Var(c.holomorphic().conj());
        if c.is_imaginary() {
            (z - zc) / Expr::complex(0.0, 2.0)
        } else {
            (z + zc) / Expr::real(2.0)
        }
    }

    /// Structural conjugation: swaps `z <-> zc`, conjugates constants.
    pub fn conj(&self) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(c.conj()),
            Expr::Var(v) => Expr::Var(v.conj()),
            Expr::Add(a, b) => Expr::Add(bx(a.conj()), bx(b.conj())),
            Expr::Sub(a, b) => Expr::Sub(bx(a.conj()), bx(b.conj())),
            Expr::Mul(a, b) => Expr::Mul(bx(a.conj()), bx(b.conj())),
            Expr::Div(a, b) => Expr::Div(bx(a.conj()), bx(b.conj())),
            Expr::Neg(a) => Expr::Neg(bx(a.conj())),
            Expr::Pow(a, r) => Expr::Pow(bx(a.conj()), *r),
            Expr::Exp(a) => Expr::Exp(bx(a.conj())),
            Expr::Log(a) => Expr::Log(bx(a.conj())),
            Expr::Sin(a) => Expr::Sin(bx(a.conj())),
            Expr::Cos(a) => Expr::Cos(bx(a.conj())),
            Expr::Atan(a) => Expr::Atan(bx(a.conj())),
        }
    }

    /// `Re e = (e + conj e)/2`.
    pub fn re_part(&self) -> Expr {
        (self.clone() + self.conj()) / Expr::real(2.0)
    }

    /// `Im e = (e - conj e)/(2i)`.
    pub fn im_part(&self) -> Expr {
        (self.clone() - self.conj()) / Expr::complex(0.0, 2.0)
    }

    /// `abs2 e = e * conj e`.
    pub fn abs2(&self) -> Expr {
        self.clone() * self.conj()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(v) => {
                out.insert(*v);
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Neg(a)
            | Expr::Pow(a, _)
            | Expr::Exp(a)
            | Expr::Log(a)
            | Expr::Sin(a)
            | Expr::Cos(a)
            | Expr::Atan(a) => a.collect_vars(out),
        }
    }

    /// True when no conjugate coordinate occurs.
    pub fn is_holomorphic(&self) -> bool {
        self.vars().iter().all(|v| !v.is_conjugate())
    }

    /// Replace variables; `None` keeps the variable.
    pub fn substitute(&self, map: &[Option<Expr>; 6]) -> Expr {
        match self {
            Expr::Const(_) => self.clone(),
            Expr::Var(v) => map[v.index()].clone().unwrap_or_else(|| self.clone()),
            Expr::Add(a, b) => Expr::Add(bx(a.substitute(map)), bx(b.substitute(map))),
            Expr::Sub(a, b) => Expr::Sub(bx(a.substitute(map)), bx(b.substitute(map))),
            Expr::Mul(a, b) => Expr::Mul(bx(a.substitute(map)), bx(b.substitute(map))),
            Expr::Div(a, b) => Expr::Div(bx(a.substitute(map)), bx(b.substitute(map))),
            Expr::Neg(a) => Expr::Neg(bx(a.substitute(map))),
            Expr::Pow(a, r) => Expr::Pow(bx(a.substitute(map)), *r),
            Expr::Exp(a) => Expr::Exp(bx(a.substitute(map))),
            Expr::Log(a) => Expr::Log(bx(a.substitute(map))),
            Expr::Sin(a) => Expr::Sin(bx(a.substitute(map))),
            Expr::Cos(a) => Expr::Cos(bx(a.substitute(map))),
            Expr::Atan(a) => Expr::Atan(bx(a.substitute(map))),
        }
    }

    /// Evaluate at a point. Pure and deterministic.
    pub fn eval<T: Real>(&self, p: &EvalPoint<T>) -> Result<Complex<T>, EvalError> {
        Ok(match self {
            Expr::Const(c) => clit(*c),
            Expr::Var(v) => p.get(*v),
            Expr::Add(a, b) => a.eval(p)? + b.eval(p)?,
            Expr::Sub(a, b) => a.eval(p)? - b.eval(p)?,
            Expr::Mul(a, b) => a.eval(p)? * b.eval(p)?,
            Expr::Div(a, b) => {
                let d = b.eval(p)?;
                if d.is_zero() {
                    return Err(EvalError::DivisionByZero);
                }
                a.eval(p)? / d
            }
            Expr::Neg(a) => -a.eval(p)?,
            Expr::Pow(a, r) => pow_value(a.eval(p)?, *r)?,
            Expr::Exp(a) => a.eval(p)?.exp(),
            Expr::Log(a) => {
                let x = a.eval(p)?;
                check_branch("log", x)?;
                x.ln()
            }
            Expr::Sin(a) => a.eval(p)?.sin(),
            Expr::Cos(a) => a.eval(p)?.cos(),
            Expr::Atan(a) => {
                let x = a.eval(p)?;
                check_atan(x)?;
                x.atan()
            }
        })
    }

    /// Real part of the value; meaningful for real-valued functions on the
    /// real locus.
    pub fn eval_real(&self, p: &EvalPoint<f64>) -> Result<f64, EvalError> {
        Ok(self.eval(p)?.re)
    }

    /// Numeric value of a variable-free expression.
    pub fn constant_value(&self) -> Option<Complex64> {
        if !self.vars().is_empty() {
            return None;
        }
        self.eval(&EvalPoint::<f64>::origin()).ok()
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

pub(crate) fn is_integer(r: f64) -> bool {
    r.fract() == 0.0 && r.abs() < 1e9
}

pub(crate) fn check_branch<T: Real>(func: &'static str, x: Complex<T>) -> Result<(), EvalError> {
    if x.re > T::zero() {
        Ok(())
    } else {
        Err(EvalError::Branch {
            func,
            value: format!("{x}"),
        })
    }
}

pub(crate) fn check_atan<T: Real>(x: Complex<T>) -> Result<(), EvalError> {
    let q = Complex::<T>::one() + x * x;
    if q.norm() <= T::tiny() {
        Err(EvalError::Singular {
            func: "atan",
            value: format!("{x}"),
        })
    } else {
        Ok(())
    }
}

fn pow_value<T: Real>(b: Complex<T>, r: f64) -> Result<Complex<T>, EvalError> {
    if is_integer(r) {
        let n = r as i32;
        if n < 0 && b.is_zero() {
            return Err(EvalError::DivisionByZero);
        }
        Ok(b.powi(n))
    } else {
        check_branch("pow", b)?;
        Ok(b.powf(T::lit(r)))
    }
}

fn fmt_num(f: &mut fmt::Formatter<'_>, x: f64) -> fmt::Result {
    if x.is_finite() && x == x.trunc() && x.abs() < 1e15 {
        write!(f, "{}", x as i64)
    } else {
        write!(f, "{x:?}")
    }
}

fn fmt_const(f: &mut fmt::Formatter<'_>, c: Complex64) -> fmt::Result {
    if c.im == 0.0 {
        if c.re < 0.0 || c.re.is_sign_negative() {
            f.write_str("(")?;
            fmt_num(f, c.re)?;
            return f.write_str(")");
        }
        return fmt_num(f, c.re);
    }
    f.write_str("(")?;
    if c.re != 0.0 {
        fmt_num(f, c.re)?;
        f.write_str(if c.im < 0.0 { " - " } else { " + " })?;
    } else if c.im < 0.0 {
        f.write_str("-")?;
    }
    if c.im.abs() != 1.0 {
        fmt_num(f, c.im.abs())?;
        f.write_str("*")?;
    }
    f.write_str("i)")
}

fn fmt_child(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    if e.precedence() < min_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => fmt_const(f, *c),
            Expr::Var(v) => f.write_str(v.name()),
            Expr::Add(a, b) => {
                fmt_child(f, a, 1)?;
                f.write_str(" + ")?;
                fmt_child(f, b, 2)
            }
            Expr::Sub(a, b) => {
                fmt_child(f, a, 1)?;
                f.write_str(" - ")?;
                fmt_child(f, b, 2)
            }
            Expr::Mul(a, b) => {
                fmt_child(f, a, 2)?;
                f.write_str("*")?;
                fmt_child(f, b, 3)
            }
            Expr::Div(a, b) => {
                fmt_child(f, a, 2)?;
                f.write_str("/")?;
                fmt_child(f, b, 4)
            }
            Expr::Neg(a) => {
                f.write_str("-")?;
                fmt_child(f, a, 4)
            }
            Expr::Pow(a, r) => {
                fmt_child(f, a, 5)?;
                f.write_str("^")?;
                if *r < 0.0 {
                    f.write_str("(")?;
                    fmt_num(f, *r)?;
                    f.write_str(")")
                } else {
                    fmt_num(f, *r)
                }
            }
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Log(a) => write!(f, "log({a})"),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
            Expr::Atan(a) => write!(f, "atan({a})"),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $variant:ident) => {
        impl ops::$tr for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                Expr::$variant(bx(self), bx(rhs))
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(bx(self))
    }
}

impl Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}
