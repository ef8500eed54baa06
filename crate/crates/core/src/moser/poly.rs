//! Polynomials in `z1, z2, z̄1, z̄2` with complex coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::expr::{jet, EvalPoint, Expr};

/// Exponents of `(z1, z2, z̄1, z̄2)`.
pub type Mono = [u8; 4];

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, Complex64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn monomial(e: Mono, c: Complex64) -> Self {
        let mut p = Poly::zero();
        p.add_term(e, c);
        p
    }

    /// The coordinate `z_j` (j = 0, 1).
    pub fn z(j: usize) -> Self {
        let mut e = [0; 4];
        e[j] = 1;
        Poly::monomial(e, Complex64::new(1.0, 0.0))
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Mono, Complex64)>) -> Self {
        let mut p = Poly::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Mono, c: Complex64) {
        let v = self.terms.entry(e).or_insert(Complex64::new(0.0, 0.0));
        *v += c;
        if *v == Complex64::new(0.0, 0.0) {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: Mono) -> Complex64 {
        self.terms.get(&e).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Poly::from_terms(self.terms.iter().map(|(e, v)| (*e, v * c)))
    }

    pub fn add(&self, o: &Poly) -> Self {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(*e, *c);
        }
        p
    }

    pub fn sub(&self, o: &Poly) -> Self {
        self.add(&o.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, o: &Poly) -> Self {
        let mut p = Poly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let e = [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]];
                p.add_term(e, x * y);
            }
        }
        p
    }

    /// Complex conjugate as a function: `z ↔ z̄`, coefficients conjugated.
    pub fn conj(&self) -> Self {
        Poly::from_terms(self.terms.iter().map(|(e, c)| ([e[2], e[3], e[0], e[1]], c.conj())))
    }

    /// Part of bidegree `(k, l)` in `(z, z̄)`.
    pub fn bidegree(&self, k: u8, l: u8) -> Self {
        Poly::from_terms(
            self.terms
                .iter()
                .filter(|(e, _)| e[0] + e[1] == k && e[2] + e[3] == l)
                .map(|(e, c)| (*e, *c)),
        )
    }

    pub fn is_bihomogeneous(&self, k: u8, l: u8) -> bool {
        self.terms.keys().all(|e| e[0] + e[1] == k && e[2] + e[3] == l)
    }

    /// `max |c(a,b) − conj c(b,a)|`; zero for real-valued polynomials.
    pub fn reality_defect(&self) -> f64 {
        self.sub(&self.conj()).max_abs()
    }

    /// Drop coefficients with modulus at most `tol`.
    pub fn chop(&self, tol: f64) -> Self {
        Poly::from_terms(self.terms.iter().filter(|(_, c)| c.norm() > tol).map(|(e, c)| (*e, *c)))
    }

    pub fn eval(&self, z: [Complex64; 2]) -> Complex64 {
        let v = [z[0], z[1], z[0].conj(), z[1].conj()];
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = *c;
                for k in 0..4 {
                    t *= v[k].powu(e[k] as u32);
                }
                t
            })
            .sum()
    }

    /// Taylor polynomial (total degree ≤ 6) of an expression in
    /// `z1, z2, zc1, zc2` at the origin; `w` must not occur.
    pub fn from_expr(e: &Expr) -> Result<Self, crate::expr::EvalError> {
        use crate::expr::Var;
        if e.vars().iter().any(|v| matches!(v, Var::W | Var::Wc)) {
            return Err(crate::expr::EvalError::Series(crate::series::SeriesError::Mismatch(
                "polynomial in z, z̄ may not involve w".into(),
            )));
        }
        let s = jet(e, &EvalPoint::<f64>::origin(), 6)?;
        Ok(Poly::from_terms(
            s.terms()
                .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
                .map(|(m, c)| ([m[0], m[1], m[3], m[4]], c)),
        ))
    }
}

pub(super) fn fmt_coeff(f: &mut fmt::Formatter<'_>, c: Complex64, first: bool, has_mono: bool) -> fmt::Result {
    let num = |x: f64| {
        if x == x.trunc() && x.abs() < 1e15 {
            format!("{}", x as i64)
        } else {
            format!("{x}")
        }
    };
    if c.im == 0.0 || c.re == 0.0 {
        let (mag, neg, imag) = if c.im == 0.0 {
            (c.re.abs(), c.re < 0.0, false)
        } else {
            (c.im.abs(), c.im < 0.0, true)
        };
        match (first, neg) {
            (true, true) => f.write_str("-")?,
            (false, true) => f.write_str(" - ")?,
            (false, false) => f.write_str(" + ")?,
            (true, false) => {}
        }
        let mut parts = Vec::new();
        if mag != 1.0 || (!imag && !has_mono) {
            parts.push(num(mag));
        }
        if imag {
            parts.push("i".to_string());
        }
        f.write_str(&parts.join("*"))?;
        if has_mono && !parts.is_empty() {
            f.write_str("*")?;
        }
        return Ok(());
    }
    if !first {
        f.write_str(" + ")?;
    }
    let sign = if c.im < 0.0 { "-" } else { "+" };
    write!(f, "({} {} {}*i)", num(c.re), sign, num(c.im.abs()))?;
    if has_mono {
        f.write_str("*")?;
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        const NAMES: [&str; 4] = ["z1", "z2", "zc1", "zc2"];
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = (0..4)
                .filter(|&k| e[k] > 0)
                .map(|k| if e[k] == 1 { NAMES[k].to_string() } else { format!("{}^{}", NAMES[k], e[k]) })
                .collect();
            fmt_coeff(f, *c, n == 0, !mono.is_empty())?;
            f.write_str(&mono.join("*"))?;
        }
        Ok(())
    }
}
