//! Taylor-mode differentiation: expressions evaluated on truncated series.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::Zero;

use super::{check_atan, check_branch, is_integer, EvalError, EvalPoint, Expr, RealCoord, Var};
use crate::scalar::{clit, Real};
use crate::series::TruncatedSeries;

/// Propagate series through the tree; `inputs[k]` is the series of variable `k`.
pub fn eval_series<T: Real>(
    expr: &Expr,
    inputs: &[TruncatedSeries<T>; 6],
) -> Result<TruncatedSeries<T>, EvalError> {
    let shape = &inputs[0];
    let (n, d) = (shape.nvars(), shape.degree());
    let rec = |e: &Expr| eval_series(e, inputs);
    Ok(match expr {
        Expr::Const(c) => TruncatedSeries::constant(n, d, clit(*c))?,
        Expr::Var(v) => inputs[v.index()].clone(),
        Expr::Add(a, b) => &rec(a)? + &rec(b)?,
        Expr::Sub(a, b) => &rec(a)? - &rec(b)?,
        Expr::Mul(a, b) => &rec(a)? * &rec(b)?,
        Expr::Div(a, b) => {
            let den = rec(b)?;
            if den.constant_term().is_zero() {
                return Err(EvalError::DivisionByZero);
            }
            rec(a)?.div(&den)?
        }
        Expr::Neg(a) => -&rec(a)?,
        Expr::Pow(a, r) => {
            let base = rec(a)?;
            if is_integer(*r) {
                if *r < 0.0 && base.constant_term().is_zero() {
                    return Err(EvalError::DivisionByZero);
                }
                base.powi(*r as i32)?
            } else {
                check_branch("pow", base.constant_term())?;
                base.powf(T::lit(*r))?
            }
        }
        Expr::Exp(a) => rec(a)?.exp(),
        Expr::Log(a) => {
            let s = rec(a)?;
            check_branch("log", s.constant_term())?;
            s.ln()?
        }
        Expr::Sin(a) => rec(a)?.sin(),
        Expr::Cos(a) => rec(a)?.cos(),
        Expr::Atan(a) => {
            let s = rec(a)?;
            check_atan(s.constant_term())?;
            s.atan()?
        }
    })
}

/// Taylor jet in all six polarized variables around `center`.
pub fn jet<T: Real>(
    expr: &Expr,
    center: &EvalPoint<T>,
    degree: usize,
) -> Result<TruncatedSeries<T>, EvalError> {
    let vals = center.values();
    let mut inputs = Vec::with_capacity(6);
    for (k, v) in vals.iter().enumerate() {
        inputs.push(TruncatedSeries::variable(6, degree, k, *v)?);
    }
    let inputs: [TruncatedSeries<T>; 6] = inputs.try_into().expect("six inputs");
    Ok(eval_series(expr, &inputs)?.with_center(vals.to_vec()))
}

/// Taylor jet in displacements of selected real coordinates around a
/// real-locus point; the other coordinates stay fixed.
pub fn jet_real(
    expr: &Expr,
    center: &EvalPoint<f64>,
    coords: &[RealCoord],
    degree: usize,
) -> Result<TruncatedSeries<f64>, EvalError> {
    let n = coords.len();
    let vals = center.values();
    let mut inputs: Vec<TruncatedSeries<f64>> = Vec::with_capacity(6);
    for (k, v) in vals.iter().enumerate() {
        let mut s = TruncatedSeries::constant(n, degree, *v)?;
        let var = Var::from_index(k);
        let primary = if var.is_conjugate() { var.conj() } else { var };
        for (slot, c) in coords.iter().enumerate() {
            if c.holomorphic() != primary || degree == 0 {
                continue;
            }
            // z = x + iy and zc = x - iy
            let unit = match (c.is_imaginary(), var.is_conjugate()) {
                (false, _) => Complex::new(1.0, 0.0),
                (true, false) => Complex::new(0.0, 1.0),
                (true, true) => Complex::new(0.0, -1.0),
            };
            let mut e = vec![0u8; n];
            e[slot] = 1;
            s.set_coeff(&e, unit);
        }
        inputs.push(s);
    }
    let inputs: [TruncatedSeries<f64>; 6] = inputs.try_into().expect("six inputs");
    eval_series(expr, &inputs)
}

/// First or second partial derivative in polarized variables; `zc_k` plays
/// the role of the Wirtinger variable conj(z_k).
pub fn wirtinger<T: Real>(
    expr: &Expr,
    p: &EvalPoint<T>,
    var: Var,
    order: u8,
    var2: Option<Var>,
) -> Result<Complex<T>, EvalError> {
    let mut e = [0u8; 6];
    e[var.index()] += 1;
    match order {
        1 => Ok(jet(expr, p, 1)?.coeff(&e)),
        2 => {
            let other = var2.unwrap_or(var);
            e[other.index()] += 1;
            let c = jet(expr, p, 2)?.coeff(&e);
            Ok(if other == var { c * T::lit(2.0) } else { c })
        }
        _ => Err(EvalError::Series(crate::series::SeriesError::Mismatch(format!(
            "derivative order {order} not supported (1 or 2)"
        )))),
    }
}

/// Substitute expressions for variables. A primary variable's image also
/// fixes its conjugate's image (the structural conjugate) unless the map
/// names the conjugate explicitly. Unmapped variables stay as they are.
pub fn compose(outer: &Expr, subs: &BTreeMap<Var, Expr>) -> Expr {
    let mut map: [Option<Expr>; 6] = Default::default();
    for (v, e) in subs {
        map[v.index()] = Some(e.clone());
    }
    for v in Var::PRIMARY {
        if let (Some(e), None) = (&map[v.index()], &map[v.conj().index()]) {
            map[v.conj().index()] = Some(e.conj());
        }
    }
    outer.substitute(&map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exponential_jet() {
        let s = jet(&parse("exp(z1)").unwrap(), &EvalPoint::<f64>::origin(), 2).unwrap();
        assert_eq!(s.coeff(&[0; 6]), c(1.0, 0.0));
        assert_eq!(s.coeff(&[1, 0, 0, 0, 0, 0]), c(1.0, 0.0));
        assert_eq!(s.coeff(&[2, 0, 0, 0, 0, 0]), c(0.5, 0.0));
        assert_eq!(s.coeff(&[1, 1, 0, 0, 0, 0]), c(0.0, 0.0));
    }

    #[test]
    fn log_at_zero_is_singular() {
        assert!(jet(&parse("log(z1)").unwrap(), &EvalPoint::<f64>::origin(), 2).is_err());
    }

    #[test]
    fn mixed_partials() {
        let p = EvalPoint::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        let d = |s: &str, a, b| wirtinger(&parse(s).unwrap(), &p, a, 2, Some(b)).unwrap();
        assert_eq!(d("z1*zc1", Var::Z1, Var::Zc1), c(1.0, 0.0));
        assert_eq!(d("z1*zc2 + z2*zc1", Var::Z1, Var::Zc2), c(1.0, 0.0));
        assert!((d("(z1*zc1)^2", Var::Z1, Var::Zc1) - c(4.0, 0.0)).norm() < 1e-14);
        assert!((d("z1^3", Var::Z1, Var::Z1) - c(6.0, 0.0)).norm() < 1e-14);
        let first = wirtinger(&parse("x1").unwrap(), &p, Var::Z1, 1, None).unwrap();
        assert_eq!(first, c(0.5, 0.0));
    }

    #[test]
    fn first_order_matches_finite_differences() {
        let e = parse("exp(z1*zc2) * atan(x1 + 0.3) + log(2 + u) * sin(y2) - z2^2.5").unwrap();
        let p = EvalPoint::new(c(0.3, -0.2), c(1.1, 0.4), c(0.5, 0.7));
        let j = jet(&e, &p, 1).unwrap();
        let h = 1e-5;
        for k in 0..6 {
            let shift = |s: f64| {
                let mut z = [p.get(Var::Z1), p.get(Var::Z2), p.get(Var::W)];
                let mut zc = [p.get(Var::Zc1), p.get(Var::Zc2), p.get(Var::Wc)];
                if k < 3 {
                    z[k] += s;
                } else {
                    zc[k - 3] += s;
                }
                e.eval(&EvalPoint::polarized(z, zc)).unwrap()
            };
            let fd = (shift(h) - shift(-h)) / (2.0 * h);
            let mut ex = [0u8; 6];
            ex[k] = 1;
            let exact = j.coeff(&ex);
            assert!((fd - exact).norm() <= 1e-6 * (1.0 + exact.norm()), "var {k}");
        }
    }

    #[test]
    fn compose_examples() {
        let shift = BTreeMap::from([(Var::Z1, parse("z1 + 1").unwrap())]);
        let e = compose(&parse("z1").unwrap(), &shift);
        let p = EvalPoint::new(c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert_eq!(e.eval(&p).unwrap(), c(3.0, 0.0));

        let square = BTreeMap::from([(Var::Z2, parse("z2^2").unwrap())]);
        let e = compose(&parse("abs2(z2)").unwrap(), &square);
        let want = parse("abs2(z2)^2").unwrap();
        let q = EvalPoint::new(c(0.1, 0.0), c(0.7, -1.3), c(0.0, 2.0));
        assert!((e.eval(&q).unwrap() - want.eval(&q).unwrap()).norm() < 1e-13);

        let f = parse("v*x1 - exp(z2)*conj(w)").unwrap();
        assert_eq!(compose(&f, &BTreeMap::new()), f);
    }

    #[test]
    fn real_jet_of_surface_function() {
        // y1*y2 - (x2 + 1)*v around the origin, in (y1, x2, y2)
        let e = parse("y1*y2 - (x2 + 1)*v").unwrap();
        let s = jet_real(
            &e,
            &EvalPoint::<f64>::origin(),
            &[RealCoord::Y1, RealCoord::X2, RealCoord::Y2],
            3,
        )
        .unwrap();
        assert_eq!(s.coeff(&[1, 0, 1]), c(1.0, 0.0));
        assert_eq!(s.coeff(&[1, 1, 0]), c(0.0, 0.0));
    }
}
