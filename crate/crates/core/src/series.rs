//! Dense truncated multivariate Taylor series with complex coefficients.
//!
//! Coefficients are stored in graded-lexicographic order (all monomials of
//! degree 0, then degree 1, ...; inside a degree the exponent of the first
//! variable decreases). The rank of a multi-index is computed combinatorially,
//! so the storage needs no hashing.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_complex::Complex;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalar::Real;

/// Largest number of variables a series may carry.
pub const MAX_VARS: usize = 6;
/// Largest truncation degree.
pub const MAX_DEGREE: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("series degree {0} exceeds the cap {MAX_DEGREE}")]
    DegreeTooHigh(usize),
    #[error("series over {0} variables exceeds the cap {MAX_VARS}")]
    TooManyVars(usize),
    #[error("{func} is singular at the expansion point {value}")]
    Singular { func: &'static str, value: String },
    #[error("shape mismatch: {0}")]
    Mismatch(String),
}

struct Layout {
    nvars: usize,
    monos: Vec<[u8; MAX_VARS]>,
    /// `deg_start[k]` is the index of the first monomial of degree `k`.
    deg_start: Vec<usize>,
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

impl Layout {
    fn build(nvars: usize, degree: usize) -> Layout {
        let mut monos = Vec::new();
        let mut deg_start = Vec::with_capacity(degree + 2);
        for k in 0..=degree {
            deg_start.push(monos.len());
            let mut cur = [0u8; MAX_VARS];
            gen_degree(nvars, 0, k, &mut cur, &mut monos);
        }
        deg_start.push(monos.len());
        Layout {
            nvars,
            monos,
            deg_start,
        }
    }

    fn len(&self) -> usize {
        self.monos.len()
    }

    fn rank(&self, e: &[u8]) -> usize {
        let n = self.nvars;
        let k: usize = e[..n].iter().map(|&x| x as usize).sum();
        if n == 0 {
            return 0;
        }
        let mut r = self.deg_start[k];
        let mut rem = k;
        for (i, &ei) in e.iter().enumerate().take(n - 1) {
            let ei = ei as usize;
            let m = n - i - 1;
            if rem > ei {
                r += binom(rem - ei - 1 + m, m);
            }
            rem -= ei;
        }
        r
    }
}

fn gen_degree(n: usize, i: usize, rem: usize, cur: &mut [u8; MAX_VARS], out: &mut Vec<[u8; MAX_VARS]>) {
    if n == 0 {
        if rem == 0 {
            out.push(*cur);
        }
        return;
    }
    if i == n - 1 {
        cur[i] = rem as u8;
        out.push(*cur);
        cur[i] = 0;
        return;
    }
    for t in (0..=rem).rev() {
        cur[i] = t as u8;
        gen_degree(n, i + 1, rem - t, cur, out);
    }
    cur[i] = 0;
}

#[allow(clippy::declare_interior_mutable_const)]
const EMPTY: OnceLock<Layout> = OnceLock::new();
#[allow(clippy::declare_interior_mutable_const)]
const ROW: [OnceLock<Layout>; MAX_DEGREE + 1] = [EMPTY; MAX_DEGREE + 1];
static LAYOUTS: [[OnceLock<Layout>; MAX_DEGREE + 1]; MAX_VARS + 1] = [ROW; MAX_VARS + 1];

fn layout(nvars: usize, degree: usize) -> &'static Layout {
    LAYOUTS[nvars][degree].get_or_init(|| Layout::build(nvars, degree))
}

/// Truncated power series in `nvars` displacement variables around `center`.
///
/// All arithmetic truncates at `degree`, so the stored coefficients agree with
/// the analytic Taylor coefficients of the represented function through that
/// degree.
#[derive(Clone, PartialEq)]
pub struct TruncatedSeries<T: Real> {
    nvars: usize,
    degree: usize,
    center: Vec<Complex<T>>,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> fmt::Debug for TruncatedSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (e, c) in self.terms() {
            if !c.is_zero() {
                m.entry(&e.to_vec(), &c);
            }
        }
        m.finish()
    }
}

fn check_shape(nvars: usize, degree: usize) -> Result<(), SeriesError> {
    if nvars > MAX_VARS {
        return Err(SeriesError::TooManyVars(nvars));
    }
    if degree > MAX_DEGREE {
        return Err(SeriesError::DegreeTooHigh(degree));
    }
    Ok(())
}

impl<T: Real> TruncatedSeries<T> {
    pub fn zero(nvars: usize, degree: usize) -> Result<Self, SeriesError> {
        check_shape(nvars, degree)?;
        let len = layout(nvars, degree).len();
        Ok(TruncatedSeries {
            nvars,
            degree,
            center: vec![Complex::zero(); nvars],
            coeffs: vec![Complex::zero(); len],
        })
    }

    pub fn constant(nvars: usize, degree: usize, c: Complex<T>) -> Result<Self, SeriesError> {
        let mut s = Self::zero(nvars, degree)?;
        s.coeffs[0] = c;
        Ok(s)
    }

    /// The coordinate function `value + δ_k`.
    pub fn variable(nvars: usize, degree: usize, k: usize, value: Complex<T>) -> Result<Self, SeriesError> {
        if k >= nvars {
            return Err(SeriesError::Mismatch(format!("variable {k} out of {nvars}")));
        }
        let mut s = Self::constant(nvars, degree, value)?;
        if degree >= 1 {
            let mut e = [0u8; MAX_VARS];
            e[k] = 1;
            let r = s.layout().rank(&e);
            s.coeffs[r] = Complex::one();
        }
        Ok(s)
    }

    /// Attach the expansion point (informational; arithmetic ignores it).
    pub fn with_center(mut self, center: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(center.len(), self.nvars);
        self.center = center;
        self
    }

    pub fn center(&self) -> &[Complex<T>] {
        &self.center
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn layout(&self) -> &'static Layout {
        layout(self.nvars, self.degree)
    }

    fn same_shape(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "series variable count mismatch");
        assert_eq!(self.degree, other.degree, "series degree mismatch");
    }

    pub fn constant_term(&self) -> Complex<T> {
        self.coeffs[0]
    }

    /// Coefficient of the monomial with exponents `e` (length `nvars`).
    pub fn coeff(&self, e: &[u8]) -> Complex<T> {
        assert_eq!(e.len(), self.nvars);
        let deg: usize = e.iter().map(|&x| x as usize).sum();
        if deg > self.degree {
            return Complex::zero();
        }
        self.coeffs[self.layout().rank(e)]
    }

    pub fn set_coeff(&mut self, e: &[u8], c: Complex<T>) {
        assert_eq!(e.len(), self.nvars);
        let deg: usize = e.iter().map(|&x| x as usize).sum();
        assert!(deg <= self.degree, "monomial beyond truncation degree");
        let r = self.layout().rank(e);
        self.coeffs[r] = c;
    }

    /// All (exponent, coefficient) pairs in storage order, zeros included.
    pub fn terms(&self) -> impl Iterator<Item = (&'static [u8], Complex<T>)> + '_ {
        let lay = self.layout();
        let n = self.nvars;
        lay.monos.iter().zip(self.coeffs.iter()).map(move |(m, c)| (&m[..n], *c))
    }

    /// Largest coefficient modulus; handy for tolerance scaling.
    pub fn max_norm(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.norm()))
    }

    /// Keep only the homogeneous part of total degree `k`.
    pub fn homogeneous_part(&self, k: usize) -> Self {
        let lay = self.layout();
        let mut out = Self::zero(self.nvars, self.degree).expect("shape already valid");
        if k <= self.degree {
            for i in lay.deg_start[k]..lay.deg_start[k + 1] {
                out.coeffs[i] = self.coeffs[i];
            }
        }
        out.center = self.center.clone();
        out
    }

    /// Re-truncate at a lower (or equal) degree.
    pub fn truncate(&self, degree: usize) -> Self {
        let degree = degree.min(self.degree);
        let lay = layout(self.nvars, degree);
        TruncatedSeries {
            nvars: self.nvars,
            degree,
            center: self.center.clone(),
            coeffs: self.coeffs[..lay.len()].to_vec(),
        }
    }

    /// Sum of the series at displacement `delta`.
    pub fn evaluate(&self, delta: &[Complex<T>]) -> Complex<T> {
        assert_eq!(delta.len(), self.nvars);
        let mut acc = Complex::zero();
        for (e, c) in self.terms() {
            if c.is_zero() {
                continue;
            }
            let mut t = c;
            for (x, &k) in delta.iter().zip(e) {
                for _ in 0..k {
                    t = t * x;
                }
            }
            acc = acc + t;
        }
        acc
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        let mut out = self.clone();
        for x in &mut out.coeffs {
            *x = *x * c;
        }
        out
    }

    pub fn add_constant(&self, c: Complex<T>) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0] + c;
        out
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.same_shape(other);
        let lay = self.layout();
        let n = self.nvars;
        let d = self.degree;
        let mut out = vec![Complex::<T>::zero(); lay.len()];
        let mut di = 0;
        for (i, a) in self.coeffs.iter().enumerate() {
            while i >= lay.deg_start[di + 1] {
                di += 1;
            }
            if a.is_zero() {
                continue;
            }
            let ma = &lay.monos[i];
            let jmax = lay.deg_start[d - di + 1];
            for (j, b) in other.coeffs[..jmax].iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let mb = &lay.monos[j];
                let mut e = [0u8; MAX_VARS];
                for k in 0..n {
                    e[k] = ma[k] + mb[k];
                }
                let r = lay.rank(&e);
                out[r] = out[r] + a * b;
            }
        }
        TruncatedSeries {
            nvars: n,
            degree: d,
            center: self.center.clone(),
            coeffs: out,
        }
    }

    /// Apply a univariate function given its Taylor coefficients at the
    /// constant term: `Σ c_k (s - a)^k`, evaluated by Horner's rule.
    pub fn apply_univariate(&self, c: &[Complex<T>]) -> Self {
        let a = self.constant_term();
        let delta = self.add_constant(-a);
        let mut acc = Self::constant(self.nvars, self.degree, c[c.len() - 1]).expect("valid shape");
        for ck in c[..c.len() - 1].iter().rev() {
            acc = acc.mul_ref(&delta).add_constant(*ck);
        }
        acc.center = self.center.clone();
        acc
    }

    pub fn exp(&self) -> Self {
        let a = self.constant_term();
        let ea = a.exp();
        let mut c = Vec::with_capacity(self.degree + 1);
        let mut fact = T::one();
        for k in 0..=self.degree {
            if k > 0 {
                fact = fact * T::lit(k as f64);
            }
            c.push(ea / fact);
        }
        self.apply_univariate(&c)
    }

    /// Principal logarithm; singular only at zero (branch policy is the
    /// caller's business).
    pub fn ln(&self) -> Result<Self, SeriesError> {
        let a = self.constant_term();
        if a.is_zero() {
            return Err(singular("log", a));
        }
        let mut c = vec![a.ln()];
        let inv = a.inv();
        let mut p = Complex::<T>::one();
        for k in 1..=self.degree {
            p = p * inv;
            let sign = if k % 2 == 1 { T::one() } else { -T::one() };
            c.push(p * (sign / T::lit(k as f64)));
        }
        Ok(self.apply_univariate(&c))
    }

    pub fn sin(&self) -> Self {
        self.trig(false)
    }

    pub fn cos(&self) -> Self {
        self.trig(true)
    }

    fn trig(&self, cosine: bool) -> Self {
        let a = self.constant_term();
        let (s, co) = (a.sin(), a.cos());
        // derivatives of sin cycle through sin, cos, -sin, -cos
        let cyc = if cosine { [co, -s, -co, s] } else { [s, co, -s, -co] };
        let mut c = Vec::with_capacity(self.degree + 1);
        let mut fact = T::one();
        for k in 0..=self.degree {
            if k > 0 {
                fact = fact * T::lit(k as f64);
            }
            c.push(cyc[k % 4] / fact);
        }
        self.apply_univariate(&c)
    }

    pub fn atan(&self) -> Result<Self, SeriesError> {
        let a = self.constant_term();
        let q0 = Complex::<T>::one() + a * a;
        if q0.norm() <= T::tiny() {
            return Err(singular("atan", a));
        }
        let q1 = a * T::lit(2.0);
        // r = 1 / (q0 + q1 t + t^2)
        let mut r: Vec<Complex<T>> = Vec::with_capacity(self.degree);
        for k in 0..self.degree {
            let mut num: Complex<T> = if k == 0 { Complex::one() } else { Complex::zero() };
            if k >= 1 {
                num = num - q1 * r[k - 1];
            }
            if k >= 2 {
                num = num - r[k - 2];
            }
            r.push(num / q0);
        }
        let mut c = vec![a.atan()];
        for (k, rk) in r.iter().enumerate() {
            c.push(*rk / T::lit((k + 1) as f64));
        }
        Ok(self.apply_univariate(&c))
    }

    /// Principal power `s^r` for real `r`; singular at zero base.
    pub fn powf(&self, r: T) -> Result<Self, SeriesError> {
        let a = self.constant_term();
        if a.is_zero() {
            return Err(singular("pow", a));
        }
        let mut c = vec![(a.ln() * r).exp()];
        let inv = a.inv();
        for k in 1..=self.degree {
            let prev = c[k - 1];
            c.push(prev * inv * ((r - T::lit((k - 1) as f64)) / T::lit(k as f64)));
        }
        Ok(self.apply_univariate(&c))
    }

    pub fn recip(&self) -> Result<Self, SeriesError> {
        let a = self.constant_term();
        if a.is_zero() {
            return Err(singular("division", a));
        }
        let inv = a.inv();
        let mut c = Vec::with_capacity(self.degree + 1);
        let mut p = inv;
        for k in 0..=self.degree {
            let sign = if k % 2 == 0 { T::one() } else { -T::one() };
            c.push(p * sign);
            p = p * inv;
        }
        Ok(self.apply_univariate(&c))
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self.mul_ref(&other.recip()?))
    }

    pub fn powi(&self, n: i32) -> Result<Self, SeriesError> {
        if n < 0 {
            return self.recip()?.powi(-n);
        }
        let mut base = self.clone();
        let mut acc = Self::constant(self.nvars, self.degree, Complex::one())?.with_center(self.center.clone());
        let mut k = n as u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_ref(&base);
            }
        }
        Ok(acc)
    }

    /// Partial derivative in variable `k`; the result has degree one lower.
    pub fn derivative(&self, k: usize) -> Self {
        assert!(k < self.nvars);
        let nd = self.degree.saturating_sub(1);
        let mut out = Self::zero(self.nvars, nd).expect("valid shape");
        if self.degree == 0 {
            return out;
        }
        let n = self.nvars;
        for (e, c) in self.terms() {
            if e[k] == 0 || c.is_zero() {
                continue;
            }
            let mut f = [0u8; MAX_VARS];
            f[..n].copy_from_slice(e);
            f[k] -= 1;
            let r = out.layout().rank(&f);
            out.coeffs[r] = c * T::lit(e[k] as f64);
        }
        out.center = self.center.clone();
        out
    }

    /// Substitute series (all with zero constant term) for the variables.
    ///
    /// The result lives in the variables of the substituted series and is
    /// truncated at the smaller of the two degrees.
    pub fn compose(&self, subs: &[Self]) -> Result<Self, SeriesError> {
        if subs.len() != self.nvars {
            return Err(SeriesError::Mismatch(format!(
                "compose needs {} substitutions, got {}",
                self.nvars,
                subs.len()
            )));
        }
        let (m, d) = match subs.first() {
            Some(s) => (s.nvars, s.degree.min(self.degree)),
            None => {
                return Self::constant(0, 0, self.constant_term());
            }
        };
        let subs: Vec<Self> = subs.iter().map(|s| s.truncate(d)).collect();
        for s in &subs {
            if s.nvars != m {
                return Err(SeriesError::Mismatch("substitutions differ in variable count".into()));
            }
            let scale = T::one().max(s.max_norm());
            if s.constant_term().norm() > T::tiny() * scale {
                return Err(SeriesError::Mismatch(
                    "substituted series must vanish at the origin".into(),
                ));
            }
        }
        let lay = layout(self.nvars, d);
        let n = self.nvars;
        // powers[i] = product of subs over monomial i, built from a smaller one
        let mut powers: Vec<Self> = Vec::with_capacity(lay.len());
        let mut out = Self::zero(m, d)?;
        for (i, mono) in lay.monos.iter().enumerate() {
            let p = if i == 0 {
                Self::constant(m, d, Complex::one())?
            } else {
                let k = (0..n).find(|&k| mono[k] > 0).expect("nonconstant monomial");
                let mut prev = *mono;
                prev[k] -= 1;
                powers[lay.rank(&prev)].mul_ref(&subs[k])
            };
            let c = self.coeffs[i];
            if !c.is_zero() {
                for (o, x) in out.coeffs.iter_mut().zip(&p.coeffs) {
                    *o = *o + c * x;
                }
            }
            powers.push(p);
        }
        Ok(out)
    }

    /// Convert every coefficient to another real type.
    pub fn cast<U: Real>(&self) -> TruncatedSeries<U> {
        let conv = |c: &Complex<T>| {
            Complex::new(
                U::from_f64(c.re.to_f64().unwrap_or(f64::NAN)).unwrap_or(U::nan()),
                U::from_f64(c.im.to_f64().unwrap_or(f64::NAN)).unwrap_or(U::nan()),
            )
        };
        TruncatedSeries {
            nvars: self.nvars,
            degree: self.degree,
            center: self.center.iter().map(conv).collect(),
            coeffs: self.coeffs.iter().map(conv).collect(),
        }
    }
}

fn singular<T: Real>(func: &'static str, a: Complex<T>) -> SeriesError {
    SeriesError::Singular {
        func,
        value: format!("{a}"),
    }
}

impl<T: Real> Add for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn add(self, rhs: Self) -> TruncatedSeries<T> {
        self.same_shape(rhs);
        let mut out = self.clone();
        for (o, x) in out.coeffs.iter_mut().zip(&rhs.coeffs) {
            *o = *o + x;
        }
        out
    }
}

impl<T: Real> Sub for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn sub(self, rhs: Self) -> TruncatedSeries<T> {
        self.same_shape(rhs);
        let mut out = self.clone();
        for (o, x) in out.coeffs.iter_mut().zip(&rhs.coeffs) {
            *o = *o - x;
        }
        out
    }
}

impl<T: Real> Mul for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn mul(self, rhs: Self) -> TruncatedSeries<T> {
        self.mul_ref(rhs)
    }
}

impl<T: Real> Neg for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;
    fn neg(self) -> TruncatedSeries<T> {
        self.scale(-Complex::one())
    }
}
