//! Holomorphic vector fields `f ∂/∂z1 + g ∂/∂z2 + h ∂/∂w`, stored by their
//! (1,0)-components. The real field is `2 Re` of this one, so its flow is
//! the complex ODE `ż = (f, g, h)(z)`.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{jet, parse_with, EvalError, EvalPoint, Expr, ParseError, Params, Var};
use crate::liealg::StructureConstants;
use crate::Series;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("component {index} of a holomorphic field uses a conjugate variable: {expr}")]
    NotHolomorphic { index: usize, expr: String },
    #[error("frame has {frame} fields but the algebra has dimension {algebra}")]
    Dimension { frame: usize, algebra: usize },
    #[error("parse error in field component: {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("flow stopped at t = {time}: {source}")]
    Flow { time: f64, source: EvalError },
}

/// Field with holomorphic components `(f, g, h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HoloVectorField {
    comps: [Expr; 3],
}

impl HoloVectorField {
    pub fn new(f: Expr, g: Expr, h: Expr) -> Result<Self, FieldError> {
        let comps = [f, g, h];
        for (index, c) in comps.iter().enumerate() {
            if !c.is_holomorphic() {
                return Err(FieldError::NotHolomorphic {
                    index,
                    expr: c.to_string(),
                });
            }
        }
        Ok(HoloVectorField { comps })
    }

    pub fn parse(src: [&str; 3], params: &Params) -> Result<Self, FieldError> {
        Self::new(
            parse_with(src[0], params)?,
            parse_with(src[1], params)?,
            parse_with(src[2], params)?,
        )
    }

    /// Field with constant components.
    pub fn constant(c: [Complex64; 3]) -> Self {
        HoloVectorField {
            comps: c.map(Expr::Const),
        }
    }

    pub fn components(&self) -> &[Expr; 3] {
        &self.comps
    }

    pub fn eval(&self, p: &EvalPoint) -> Result<[Complex64; 3], EvalError> {
        Ok([self.comps[0].eval(p)?, self.comps[1].eval(p)?, self.comps[2].eval(p)?])
    }

    /// Multiply every component by a constant.
    pub fn scaled(&self, c: Complex64) -> Self {
        HoloVectorField {
            comps: self.comps.clone().map(|e| Expr::Const(c) * e),
        }
    }

    /// Jets of the components at `p` (six polarized variables).
    pub fn jets(&self, p: &EvalPoint, degree: usize) -> Result<FieldJet, EvalError> {
        Ok(FieldJet([
            jet(&self.comps[0], p, degree)?,
            jet(&self.comps[1], p, degree)?,
            jet(&self.comps[2], p, degree)?,
        ]))
    }

    /// `X(Φ) = f ∂Φ/∂z1 + g ∂Φ/∂z2 + h ∂Φ/∂w` at `p`.
    pub fn apply_to(&self, phi: &Expr, p: &EvalPoint) -> Result<Complex64, EvalError> {
        let v = self.eval(p)?;
        let j = jet(phi, p, 1)?;
        let mut out = Complex64::new(0.0, 0.0);
        for (k, var) in Var::PRIMARY.iter().enumerate() {
            let mut e = [0u8; 6];
            e[var.index()] = 1;
            out += v[k] * j.coeff(&e);
        }
        Ok(out)
    }
}

impl fmt::Display for HoloVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.comps[0], self.comps[1], self.comps[2])
    }
}

/// Component jets of a field around a point.
#[derive(Debug, Clone)]
pub struct FieldJet(pub [Series; 3]);

impl FieldJet {
    pub fn value(&self) -> [Complex64; 3] {
        [self.0[0].constant_term(), self.0[1].constant_term(), self.0[2].constant_term()]
    }

    /// Jet of `[X, Y]` one degree lower: components `X(Y_c) − Y(X_c)`.
    pub fn bracket(&self, other: &FieldJet) -> FieldJet {
        let d = self.0[0].degree().saturating_sub(1);
        let comp = |c: usize| {
            let mut acc: Option<Series> = None;
            for k in 0..3 {
                let t = &(&self.0[k].truncate(d) * &other.0[c].derivative(k))
                    - &(&other.0[k].truncate(d) * &self.0[c].derivative(k));
                acc = Some(match acc {
                    None => t,
                    Some(a) => &a + &t,
                });
            }
            acc.expect("three terms")
        };
        FieldJet([comp(0), comp(1), comp(2)])
    }
}

/// `[X, Y](p)` with components `X(f_Y) − Y(f_X)` etc.
pub fn commutator_at(x: &HoloVectorField, y: &HoloVectorField, p: &EvalPoint) -> Result<[Complex64; 3], EvalError> {
    Ok(x.jets(p, 1)?.bracket(&y.jets(p, 1)?).value())
}

/// Cyclic sum `[[X,Y],Z] + [[Y,Z],X] + [[Z,X],Y]` at `p`, using second-order jets.
pub fn jacobi_at(
    x: &HoloVectorField,
    y: &HoloVectorField,
    z: &HoloVectorField,
    p: &EvalPoint,
) -> Result<[Complex64; 3], EvalError> {
    let (jx, jy, jz) = (x.jets(p, 2)?, y.jets(p, 2)?, z.jets(p, 2)?);
    let lower = |j: &FieldJet| FieldJet(j.0.clone().map(|s| s.truncate(1)));
    let a = jx.bracket(&jy).bracket(&lower(&jz)).value();
    let b = jy.bracket(&jz).bracket(&lower(&jx)).value();
    let c = jz.bracket(&jx).bracket(&lower(&jy)).value();
    Ok([a[0] + b[0] + c[0], a[1] + b[1] + c[1], a[2] + b[2] + c[2]])
}

/// Ordered list of fields, optionally labelled with the algebra they realize.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFieldFrame {
    pub fields: Vec<HoloVectorField>,
    pub label: Option<String>,
}

impl VectorFieldFrame {
    pub fn new(fields: Vec<HoloVectorField>) -> Self {
        VectorFieldFrame { fields, label: None }
    }

    pub fn labelled(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    pub fn parse(src: &[[&str; 3]], params: &Params) -> Result<Self, FieldError> {
        let fields = src
            .iter()
            .map(|c| HoloVectorField::parse(*c, params))
            .collect::<Result<_, _>>()?;
        Ok(Self::new(fields))
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    /// Component strings, three per field.
    pub fn to_strings(&self) -> Vec<[String; 3]> {
        self.fields
            .iter()
            .map(|f| f.components().clone().map(|e| e.to_string()))
            .collect()
    }
}

fn sup_norm(v: &[Complex64]) -> f64 {
    v.iter().fold(0.0, |m, z| m.max(z.norm()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationReport {
    pub max_residual: f64,
    /// 1-based indices of the worst bracket, if any pair was checked.
    pub worst_pair: Option<(usize, usize)>,
    pub points: usize,
    pub tol: f64,
    pub pass: bool,
}

/// Compare `[e_i, e_j]` with `Σ c^k_ij e_k` at every point.
pub fn verify_realization(
    frame: &VectorFieldFrame,
    sc: &StructureConstants,
    points: &[EvalPoint],
    tol: f64,
) -> Result<RealizationReport, FieldError> {
    let n = frame.len();
    if n != sc.dim() {
        return Err(FieldError::Dimension {
            frame: n,
            algebra: sc.dim(),
        });
    }
    let mut worst = 0.0;
    let mut worst_pair = None;
    for p in points {
        let jets: Vec<FieldJet> = frame.fields.iter().map(|f| f.jets(p, 1)).collect::<Result<_, _>>()?;
        let vals: Vec<[Complex64; 3]> = jets.iter().map(FieldJet::value).collect();
        for i in 0..n {
            for j in i + 1..n {
                let br = jets[i].bracket(&jets[j]).value();
                let mut diff = br;
                for (k, v) in vals.iter().enumerate() {
                    let c = sc.get(i, j, k);
                    if c != 0.0 {
                        for t in 0..3 {
                            diff[t] -= v[t] * c;
                        }
                    }
                }
                let r = sup_norm(&diff);
                if r > worst || worst_pair.is_none() {
                    worst = r.max(worst);
                    worst_pair = Some((i + 1, j + 1));
                }
            }
        }
    }
    Ok(RealizationReport {
        max_residual: worst,
        worst_pair,
        points: points.len(),
        tol,
        pass: worst <= tol,
    })
}

/// Fit real constants `[e_i,e_j] = Σ c^k e_k` jointly over all points.
/// Returns the fitted constants (1-based records) and the max residual; a
/// small residual means the real span of the frame closes under brackets.
pub fn fit_structure_constants(
    frame: &VectorFieldFrame,
    points: &[EvalPoint],
) -> Result<(StructureConstants, f64), FieldError> {
    let n = frame.len();
    let mut sc = StructureConstants::zero(n);
    let mut worst: f64 = 0.0;
    let mut per_point = Vec::new();
    for p in points {
        let jets: Vec<FieldJet> = frame.fields.iter().map(|f| f.jets(p, 1)).collect::<Result<_, _>>()?;
        per_point.push(jets);
    }
    for i in 0..n {
        for j in i + 1..n {
            let rows = 6 * points.len();
            let mut a = DMatrix::<f64>::zeros(rows, n);
            let mut b = DVector::<f64>::zeros(rows);
            for (pi, jets) in per_point.iter().enumerate() {
                let br = jets[i].bracket(&jets[j]).value();
                for t in 0..3 {
                    b[6 * pi + 2 * t] = br[t].re;
                    b[6 * pi + 2 * t + 1] = br[t].im;
                    for (k, jk) in jets.iter().enumerate() {
                        let v = jk.value()[t];
                        a[(6 * pi + 2 * t, k)] = v.re;
                        a[(6 * pi + 2 * t + 1, k)] = v.im;
                    }
                }
            }
            let svd = a.clone().svd(true, true);
            let c = svd.solve(&b, 1e-12).map_err(|_| {
                FieldError::Eval(EvalError::Series(crate::series::SeriesError::Mismatch(
                    "least squares failed".into(),
                )))
            })?;
            let r = &a * &c - &b;
            worst = worst.max(r.amax());
            for k in 0..n {
                let v = if c[k].abs() < 1e-11 { 0.0 } else { c[k] };
                sc.set(i, j, k, v);
            }
        }
    }
    Ok((sc, worst))
}

/// Numeric rank of the real 6-vectors `(Re f, Im f, Re g, Im g, Re h, Im h)`.
pub fn real_rank_at(frame: &VectorFieldFrame, p: &EvalPoint) -> Result<usize, EvalError> {
    if frame.is_empty() {
        return Ok(0);
    }
    let mut m = DMatrix::<f64>::zeros(frame.len(), 6);
    for (r, f) in frame.fields.iter().enumerate() {
        let v = f.eval(p)?;
        for t in 0..3 {
            m[(r, 2 * t)] = v[t].re;
            m[(r, 2 * t + 1)] = v[t].im;
        }
    }
    let s = m.singular_values();
    let max = s.max();
    if max == 0.0 {
        return Ok(0);
    }
    Ok(s.iter().filter(|x| **x > 1e-9 * max).count())
}

/// Sampled flow line.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<EvalPoint>,
    pub step: f64,
}

impl Trajectory {
    pub fn end(&self) -> &EvalPoint {
        self.points.last().expect("trajectory has its start point")
    }
}

/// Fixed-step classical RK4 for `ż = (f, g, h)(z)` from `p0` up to `t_end`.
pub fn integrate_flow(
    field: &HoloVectorField,
    p0: &EvalPoint,
    t_end: f64,
    step: f64,
) -> Result<Trajectory, FieldError> {
    assert!(step > 0.0, "step must be positive");
    let nsteps = (t_end / step).round().max(0.0) as usize;
    let mut times = vec![0.0];
    let mut points = vec![EvalPoint::from_array(p0.primaries())];
    let mut z = p0.primaries();
    let rhs = |z: [Complex64; 3], t: f64| {
        field
            .eval(&EvalPoint::from_array(z))
            .map_err(|source| FieldError::Flow { time: t, source })
    };
    let axpy = |z: [Complex64; 3], a: f64, k: [Complex64; 3]| [z[0] + k[0] * a, z[1] + k[1] * a, z[2] + k[2] * a];
    for n in 0..nsteps {
        let t = n as f64 * step;
        let k1 = rhs(z, t)?;
        let k2 = rhs(axpy(z, step / 2.0, k1), t)?;
        let k3 = rhs(axpy(z, step / 2.0, k2), t)?;
        let k4 = rhs(axpy(z, step, k3), t)?;
        for c in 0..3 {
            z[c] += (k1[c] + k2[c] * 2.0 + k3[c] * 2.0 + k4[c]) * (step / 6.0);
        }
        times.push((n + 1) as f64 * step);
        points.push(EvalPoint::from_array(z));
    }
    Ok(Trajectory { times, points, step })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{table_algebra, AlgebraParams};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn field(src: [&str; 3]) -> HoloVectorField {
        HoloVectorField::parse(src, &Params::new()).unwrap()
    }

    fn pt(z1: Complex64, z2: Complex64, w: Complex64) -> EvalPoint {
        EvalPoint::new(z1, z2, w)
    }

    #[test]
    fn rejects_conjugate_components() {
        assert!(matches!(
            HoloVectorField::parse(["zc1", "0", "0"], &Params::new()),
            Err(FieldError::NotHolomorphic { index: 0, .. })
        ));
    }

    #[test]
    fn apply_examples() {
        let p = pt(c(0.2, 0.4), c(-0.3, 0.1), c(0.5, -1.0));
        let phi = crate::expr::parse("v - y1*y2").unwrap();
        let r = field(["0", "0", "1"]).apply_to(&phi, &p).unwrap();
        assert!((r - c(0.0, -0.5)).norm() < 1e-15);
        let x1 = crate::expr::parse("x1").unwrap();
        assert_eq!(field(["1", "0", "0"]).apply_to(&x1, &p).unwrap(), c(0.5, 0.0));
        let w = crate::expr::parse("w").unwrap();
        let q = pt(c(0.0, 0.0), c(0.0, 0.0), c(3.0, 0.0));
        assert_eq!(field(["2*z1", "-z2", "w"]).apply_to(&w, &q).unwrap(), c(3.0, 0.0));
    }

    #[test]
    fn commutator_examples() {
        let p = pt(c(0.3, 0.0), c(-0.2, 0.0), c(0.0, 0.1));
        let zero = commutator_at(&field(["1", "0", "0"]), &field(["0", "1", "0"]), &p).unwrap();
        assert_eq!(zero, [c(0.0, 0.0); 3]);
        let e2 = field(["2*z1", "-z2", "w"]);
        let e3 = field(["z1^2", "z1*z2 + w", "z1*w"]);
        let br = commutator_at(&e2, &e3, &p).unwrap();
        let want = e3.eval(&p).unwrap();
        for t in 0..3 {
            assert!((br[t] - want[t] * 2.0).norm() < 1e-14);
        }
    }

    #[test]
    fn translation_frame_realizes_abelian() {
        let frame = VectorFieldFrame::parse(&[["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]], &Params::new()).unwrap();
        let sc = table_algebra("abelian_3", &AlgebraParams::new()).unwrap();
        let rep = verify_realization(&frame, &sc, &[EvalPoint::origin()], 1e-12).unwrap();
        assert_eq!(rep.max_residual, 0.0);
        assert!(rep.pass);
    }

    #[test]
    fn rank_examples() {
        let p = EvalPoint::origin();
        let two = VectorFieldFrame::parse(&[["1", "0", "0"], ["2", "0", "0"]], &Params::new()).unwrap();
        assert_eq!(real_rank_at(&two, &p).unwrap(), 1);
        let cplx = VectorFieldFrame::parse(&[["1", "0", "0"], ["i", "0", "0"]], &Params::new()).unwrap();
        assert_eq!(real_rank_at(&cplx, &p).unwrap(), 2);
    }

    #[test]
    fn flow_of_constant_and_linear_fields() {
        let t = integrate_flow(&field(["0", "0", "1"]), &EvalPoint::origin(), 1.0, 0.125).unwrap();
        assert_eq!(t.end().get(Var::W), c(1.0, 0.0));
        assert_eq!(t.times.len(), 9);
        let one = c(1.0, 0.0);
        let t = integrate_flow(&field(["2*z1", "-z2", "w"]), &pt(one, one, one), 0.1, 1e-3).unwrap();
        let end = t.end().primaries();
        let want = [0.2f64.exp(), (-0.1f64).exp(), 0.1f64.exp()];
        for k in 0..3 {
            assert!((end[k] - c(want[k], 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn flow_reports_singularity_time() {
        let err = integrate_flow(&field(["1", "0", "1/z1"]), &pt(c(-0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0)), 1.0, 0.25).unwrap_err();
        assert!(matches!(err, FieldError::Flow { .. }));
    }
}
