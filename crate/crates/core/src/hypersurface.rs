//! Real hypersurfaces `{Φ = 0}` given by a real-valued defining function in
//! polarized form, restricted to a domain of strict inequalities.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{jet, jet_real, parse_with, EvalError, EvalPoint, Expr, ParseError, Params, RealCoord};
use crate::vfield::{integrate_flow, FieldError, HoloVectorField};
use crate::Point;

/// Required margin of every domain constraint.
pub const DOMAIN_MARGIN: f64 = 1e-6;
/// Default relative tolerance for a zero Levi eigenvalue.
pub const LEVI_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurfaceError {
    #[error("domain violation: constraint {index} ({constraint}) is {value:.3e} at {point}")]
    Domain {
        index: usize,
        constraint: String,
        value: f64,
        point: String,
    },
    #[error("Newton iteration in {var} did not converge (|Φ| = {residual:.3e} after {iterations} steps)")]
    NoConvergence {
        var: RealCoord,
        iterations: usize,
        residual: f64,
    },
    #[error("derivative of Φ in {0} vanishes")]
    FlatDirection(RealCoord),
    #[error("point is off the surface (|Φ| = {0:.3e})")]
    OffSurface(f64),
    #[error("gradient of Φ vanishes")]
    VanishingGradient,
    #[error("found only {found} of {wanted} sample points")]
    Sampling { found: usize, wanted: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Strict inequalities `c(p) > 0` on the real locus.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DomainPredicate {
    pub constraints: Vec<Expr>,
}

impl DomainPredicate {
    pub fn new(constraints: Vec<Expr>) -> Self {
        DomainPredicate { constraints }
    }

    pub fn parse(src: &[&str], params: &Params) -> Result<Self, ParseError> {
        Ok(DomainPredicate {
            constraints: src.iter().map(|s| parse_with(s, params)).collect::<Result<_, _>>()?,
        })
    }

    /// Errors on the first constraint not exceeding `margin` (or failing to evaluate).
    pub fn check(&self, p: &Point, margin: f64) -> Result<(), SurfaceError> {
        for (index, c) in self.constraints.iter().enumerate() {
            let value = c.eval(p).map(|z| z.re).unwrap_or(f64::NAN);
            if !(value > margin) {
                return Err(SurfaceError::Domain {
                    index,
                    constraint: c.to_string(),
                    value,
                    point: p.to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.check(p, 0.0).is_ok()
    }
}

/// `Φ` together with its domain.
#[derive(Debug, Clone, PartialEq)]
pub struct DefiningFunction {
    pub phi: Expr,
    pub domain: DomainPredicate,
}

impl DefiningFunction {
    pub fn new(phi: Expr) -> Self {
        DefiningFunction {
            phi,
            domain: DomainPredicate::default(),
        }
    }

    pub fn with_domain(mut self, domain: DomainPredicate) -> Self {
        self.domain = domain;
        self
    }

    pub fn parse(phi: &str, domain: &[&str], params: &Params) -> Result<Self, ParseError> {
        Ok(DefiningFunction {
            phi: parse_with(phi, params)?,
            domain: DomainPredicate::parse(domain, params)?,
        })
    }

    /// Real value of `Φ` at a real-locus point.
    pub fn value(&self, p: &Point) -> Result<f64, EvalError> {
        Ok(self.phi.eval(p)?.re)
    }

    /// `(∂Φ/∂z1, ∂Φ/∂z2, ∂Φ/∂w)` at `p`.
    pub fn gradient(&self, p: &Point) -> Result<[Complex64; 3], EvalError> {
        let j = jet(&self.phi, p, 1)?;
        Ok([
            j.coeff(&[1, 0, 0, 0, 0, 0]),
            j.coeff(&[0, 1, 0, 0, 0, 0]),
            j.coeff(&[0, 0, 1, 0, 0, 0]),
        ])
    }

    /// Mixed second partials `H_jk = ∂²Φ/∂z_j∂z̄_k` and the gradient at `p`.
    pub fn levi_data(&self, p: &Point) -> Result<([[Complex64; 3]; 3], [Complex64; 3]), EvalError> {
        let j = jet(&self.phi, p, 2)?;
        let mut h = [[Complex64::new(0.0, 0.0); 3]; 3];
        let mut g = [Complex64::new(0.0, 0.0); 3];
        for a in 0..3 {
            let mut e = [0u8; 6];
            e[a] = 1;
            g[a] = j.coeff(&e);
            for b in 0..3 {
                let mut e = [0u8; 6];
                e[a] += 1;
                e[b + 3] += 1;
                h[a][b] = j.coeff(&e);
            }
        }
        Ok((h, g))
    }
}

fn real_derivative(phi: &Expr, p: &Point, var: RealCoord) -> Result<(f64, f64), EvalError> {
    let s = jet_real(phi, p, &[var], 1)?;
    Ok((s.coeff(&[0]).re, s.coeff(&[1]).re))
}

/// Newton iteration in one real coordinate, starting from `seed`.
pub fn find_point(df: &DefiningFunction, seed: &Point, var: RealCoord) -> Result<Point, SurfaceError> {
    df.domain.check(seed, 0.0)?;
    let mut p = *seed;
    let mut residual = f64::INFINITY;
    for _ in 0..50 {
        let (f, d) = real_derivative(&df.phi, &p, var)?;
        residual = f.abs();
        if residual <= 1e-12 {
            df.domain.check(&p, DOMAIN_MARGIN)?;
            return Ok(p);
        }
        if d == 0.0 || !d.is_finite() {
            return Err(SurfaceError::FlatDirection(var));
        }
        let x = p.real(var);
        let mut step = f / d;
        // halve the step while it leaves the region where Φ is defined
        let mut next = p.with_real(var, x - step);
        let mut tries = 0;
        while df.phi.eval(&next).is_err() || !df.domain.contains(&next) {
            tries += 1;
            if tries > 40 {
                return Err(SurfaceError::NoConvergence {
                    var,
                    iterations: tries,
                    residual,
                });
            }
            step *= 0.5;
            next = p.with_real(var, x - step);
        }
        p = next;
        if step.abs() <= 1e-15 * (1.0 + x.abs()) {
            let f = df.value(&p)?;
            if f.abs() <= 1e-10 {
                df.domain.check(&p, DOMAIN_MARGIN)?;
                return Ok(p);
            }
        }
    }
    Err(SurfaceError::NoConvergence {
        var,
        iterations: 50,
        residual,
    })
}

/// `n` surface points near `base`: free coordinates perturbed uniformly in
/// `[-radius, radius]`, then re-solved in `var`. Deterministic in `seed`.
pub fn sample_points(
    df: &DefiningFunction,
    base: &Point,
    n: usize,
    radius: f64,
    seed: u64,
    var: RealCoord,
) -> Result<Vec<Point>, SurfaceError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0;
    while out.len() < n && attempts < 10 * n {
        attempts += 1;
        let mut r = base.real_coords();
        for c in RealCoord::ALL {
            if c != var {
                r[c.index()] += rng.gen_range(-radius..=radius);
            }
        }
        let trial = EvalPoint::from_real(r);
        if !df.domain.contains(&trial) {
            continue;
        }
        if let Ok(p) = find_point(df, &trial, var) {
            out.push(p);
        }
    }
    if out.len() < n {
        return Err(SurfaceError::Sampling { found: out.len(), wanted: n });
    }
    Ok(out)
}

/// `n` points uniform in the polydisc of `radius` around `center` (each
/// coordinate perturbed in a square of half-side `radius`). Deterministic in
/// `seed`.
pub fn polydisc_points(center: &Point, n: usize, radius: f64, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let d = [(); 3].map(|_| Complex64::new(rng.gen_range(-radius..=radius), rng.gen_range(-radius..=radius)));
            center.shifted(d)
        })
        .collect()
}

/// `|Re X(Φ)|` at a surface point.
pub fn tangency_residual(field: &HoloVectorField, df: &DefiningFunction, p: &Point) -> Result<f64, SurfaceError> {
    let f = df.value(p)?;
    if f.abs() > 1e-10 {
        return Err(SurfaceError::OffSurface(f.abs()));
    }
    Ok(field.apply_to(&df.phi, p)?.re.abs())
}

/// Max `|Φ|` along the RK4 flow of `field` from `p0`.
pub fn flow_drift(field: &HoloVectorField, df: &DefiningFunction, p0: &Point, t_end: f64, step: f64) -> Result<f64, SurfaceError> {
    let traj = integrate_flow(field, p0, t_end, step)?;
    let mut worst: f64 = 0.0;
    for p in &traj.points {
        worst = worst.max(df.value(p)?.abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LeviKind {
    Definite,
    Indefinite,
    Degenerate,
}

impl LeviKind {
    pub fn name(self) -> &'static str {
        match self {
            LeviKind::Definite => "Definite",
            LeviKind::Indefinite => "Indefinite",
            LeviKind::Degenerate => "Degenerate",
        }
    }
}

impl fmt::Display for LeviKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Levi class with the eigenvalues of the restricted form (ascending,
/// in an orthonormal basis of the complex tangent).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeviClass {
    pub kind: LeviKind,
    pub eigenvalues: [f64; 2],
}

/// Orthonormal basis of `{t : Σ g_j t_j = 0}` in C³.
pub fn complex_tangent_basis(g: &[Complex64; 3]) -> Option<[[Complex64; 3]; 2]> {
    let m = (0..3).max_by(|&a, &b| g[a].norm().total_cmp(&g[b].norm()))?;
    if g[m].norm() == 0.0 {
        return None;
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut raw = Vec::new();
    for i in (0..3).filter(|&i| i != m) {
        let mut b = [zero; 3];
        b[i] = Complex64::new(1.0, 0.0);
        b[m] = -g[i] / g[m];
        raw.push(b);
    }
    let dot = |a: &[Complex64; 3], b: &[Complex64; 3]| -> Complex64 { (0..3).map(|k| a[k] * b[k].conj()).sum() };
    let norm = |a: &[Complex64; 3]| dot(a, a).re.sqrt();
    let mut b0 = raw[0];
    let n0 = norm(&b0);
    b0 = b0.map(|x| x / n0);
    let mut b1 = raw[1];
    let d = dot(&b1, &b0);
    for k in 0..3 {
        b1[k] -= d * b0[k];
    }
    let n1 = norm(&b1);
    b1 = b1.map(|x| x / n1);
    Some([b0, b1])
}

/// Eigenvalues (ascending) of a 2×2 Hermitian matrix.
pub fn hermitian_eigenvalues(l: &[[Complex64; 2]; 2]) -> [f64; 2] {
    let (a, d, b) = (l[0][0].re, l[1][1].re, l[0][1]);
    let mean = (a + d) / 2.0;
    let rad = (((a - d) / 2.0).powi(2) + b.norm_sqr()).sqrt();
    [mean - rad, mean + rad]
}

/// Restricted Levi matrix `L_ab = Σ H_jk b_a,j conj(b_b,k)` for a tangent basis.
pub fn restricted_levi(h: &[[Complex64; 3]; 3], basis: &[[Complex64; 3]; 2]) -> [[Complex64; 2]; 2] {
    let mut l = [[Complex64::new(0.0, 0.0); 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            for j in 0..3 {
                for k in 0..3 {
                    l[a][b] += h[j][k] * basis[a][j] * basis[b][k].conj();
                }
            }
        }
    }
    l
}

/// Classify eigenvalues: zero when `|λ| ≤ tol·max|λ|`.
pub fn classify_eigenvalues(ev: [f64; 2], tol: f64) -> LeviKind {
    let scale = ev[0].abs().max(ev[1].abs());
    if scale == 0.0 || ev.iter().any(|x| x.abs() <= tol * scale) {
        LeviKind::Degenerate
    } else if ev[0].signum() == ev[1].signum() {
        LeviKind::Definite
    } else {
        LeviKind::Indefinite
    }
}

pub fn levi_classify(df: &DefiningFunction, p: &Point, tol: f64) -> Result<LeviClass, SurfaceError> {
    let (h, g) = df.levi_data(p)?;
    let gnorm = g.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if gnorm < 1e-8 {
        return Err(SurfaceError::VanishingGradient);
    }
    let basis = complex_tangent_basis(&g).ok_or(SurfaceError::VanishingGradient)?;
    let ev = hermitian_eigenvalues(&restricted_levi(&h, &basis));
    Ok(LeviClass {
        kind: classify_eigenvalues(ev, tol),
        eigenvalues: ev,
    })
}

/// Max `|Φ_target(F(p))|` over source points `p`.
pub fn map_image_residual(
    map: &[Expr; 3],
    source: &DefiningFunction,
    target: &DefiningFunction,
    points: &[Point],
) -> Result<f64, SurfaceError> {
    let mut worst: f64 = 0.0;
    for p in points {
        let s = source.value(p)?;
        if s.abs() > 1e-8 {
            return Err(SurfaceError::OffSurface(s.abs()));
        }
        let image = EvalPoint::new(map[0].eval(p)?, map[1].eval(p)?, map[2].eval(p)?);
        worst = worst.max(target.value(&image)?.abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn df(phi: &str, domain: &[&str]) -> DefiningFunction {
        DefiningFunction::parse(phi, domain, &Params::new()).unwrap()
    }

    fn real(r: [f64; 6]) -> Point {
        EvalPoint::from_real(r)
    }

    #[test]
    fn newton_on_graph_and_quadratic() {
        let p = find_point(&df("v - y1*y2", &[]), &real([0.0, 1.0, 0.0, 1.0, 0.0, 0.0]), RealCoord::V).unwrap();
        assert!((p.real(RealCoord::V) - 1.0).abs() < 1e-14);
        let q = find_point(
            &df("(v - x2*y1)^2 + y1^2*y2^2 - y1", &["y1"]),
            &real([0.0, 1.0, 0.0, 0.0, 0.0, 0.5]),
            RealCoord::V,
        )
        .unwrap();
        assert!((q.real(RealCoord::V) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn seed_outside_domain_is_rejected() {
        let err = find_point(
            &df("(v - x2*y1)^2 + y1^2*y2^2 - y1", &["y1"]),
            &real([0.0, -1.0, 0.0, 0.0, 0.0, 0.5]),
            RealCoord::V,
        )
        .unwrap_err();
        assert!(matches!(err, SurfaceError::Domain { .. }));
    }

    #[test]
    fn sampling_quadric() {
        let d = df("v - abs2(z1) - abs2(z2)", &[]);
        assert!(sample_points(&d, &EvalPoint::origin(), 0, 0.3, 1, RealCoord::V).unwrap().is_empty());
        let pts = sample_points(&d, &EvalPoint::origin(), 50, 0.3, 1, RealCoord::V).unwrap();
        assert_eq!(pts.len(), 50);
        assert!(pts.iter().all(|p| d.value(p).unwrap().abs() <= 1e-12));
        let again = sample_points(&d, &EvalPoint::origin(), 50, 0.3, 1, RealCoord::V).unwrap();
        assert_eq!(pts, again);
    }

    #[test]
    fn levi_of_quadrics_and_hyperplane() {
        let o = EvalPoint::origin();
        let kind = |s: &str| levi_classify(&df(s, &[]), &o, LEVI_TOL).unwrap().kind;
        assert_eq!(kind("v - abs2(z1) - abs2(z2)"), LeviKind::Definite);
        assert_eq!(kind("v - abs2(z1) + abs2(z2)"), LeviKind::Indefinite);
        assert_eq!(kind("v"), LeviKind::Degenerate);
        assert_eq!(kind("v - (z1*conj(z2) + z2*conj(z1)) - abs2(z1)^2"), LeviKind::Indefinite);
        assert!(matches!(
            levi_classify(&df("abs2(z1)", &[]), &o, LEVI_TOL),
            Err(SurfaceError::VanishingGradient)
        ));
    }

    #[test]
    fn constant_field_in_u_is_tangent_to_tube() {
        let d = df("v - y1^2 - y2^2", &[]);
        let p = find_point(&d, &real([0.3, 0.5, -0.2, 0.1, 0.7, 0.0]), RealCoord::V).unwrap();
        let e = HoloVectorField::parse(["0", "0", "1"], &Params::new()).unwrap();
        assert!(tangency_residual(&e, &d, &p).unwrap() < 1e-14);
        let off = real([0.3, 0.5, -0.2, 0.1, 0.7, 1.0]);
        assert!(matches!(tangency_residual(&e, &d, &off), Err(SurfaceError::OffSurface(_))));
    }

    #[test]
    fn identity_map_has_zero_residual() {
        let d = df("v - abs2(z1) - abs2(z2)", &[]);
        let pts = sample_points(&d, &EvalPoint::origin(), 5, 0.3, 3, RealCoord::V).unwrap();
        let id = [crate::expr::parse("z1").unwrap(), crate::expr::parse("z2").unwrap(), crate::expr::parse("w").unwrap()];
        assert!(map_image_residual(&id, &d, &d, &pts).unwrap() < 1e-15);
    }
}
