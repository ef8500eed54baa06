//! Degree-4 normalization of a Levi-nondegenerate hypersurface at a point,
//! up to the `N220` invariant and the umbilic test.
//!
//! The surface is carried as a polarized jet `Ψ(z, w, z̄, w̄)` of degree 4.
//! Holomorphic coordinate changes are applied by composing jets, and after
//! each one the graph `v = F(z, z̄, u)` is re-solved. The steps are: move
//! the point to the origin, make the linear part `v`, bring the Levi form to
//! its model, then remove pluriharmonic terms of weight 2 and 3. What is left
//! at weight 4 is read off and projected onto the normal-form basis.

mod poly;

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::expr::{jet, EvalError};
use crate::hypersurface::{DefiningFunction, LEVI_TOL};
use crate::series::SeriesError;
use crate::{Point, Series};

pub use poly::{Mono, Poly};

/// Truncation degree of every jet in this module.
pub const JET_DEGREE: usize = 4;
/// Largest `|N220|` coefficient still called umbilic.
pub const UMBILIC_TOL: f64 = 1e-8;
/// `|Φ(p)|` allowed at the base point.
pub const ON_SURFACE_TOL: f64 = 1e-9;

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Error)]
pub enum MoserError {
    #[error("base point is off the surface: |Φ| = {0:e}")]
    OffSurface(f64),
    #[error("Φ has vanishing gradient at the base point")]
    VanishingGradient,
    #[error("Levi form is degenerate at the base point (eigenvalues {0:?})")]
    Degenerate([f64; 2]),
    #[error("unsupported Hermitian form: {0}")]
    UnsupportedForm(String),
    #[error("expected a polynomial of bidegree ({k},{l}), found the term {found}")]
    Bidegree { k: u8, l: u8, found: String },
    #[error("polynomial is not real-valued (defect {0:e})")]
    NotReal(f64),
    #[error("no decomposition into normal form plus trace part (residual {0:e})")]
    Projection(f64),
    #[error("graph equation did not converge (residual {0:e})")]
    Graph(f64),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Model Levi form at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LeviModel {
    /// `|z1|² + |z2|²`
    Definite,
    /// `z1 z̄2 + z2 z̄1`
    Indefinite,
}

/// A Hermitian form `Σ h_jk z_j z̄_k` on C².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianForm2 {
    pub h: [[Complex64; 2]; 2],
}

impl HermitianForm2 {
    pub fn new(h: [[Complex64; 2]; 2]) -> Self {
        HermitianForm2 { h }
    }

    pub fn model(m: LeviModel) -> Self {
        match m {
            LeviModel::Definite => HermitianForm2::new([[C1, C0], [C0, C1]]),
            LeviModel::Indefinite => HermitianForm2::new([[C0, C1], [C1, C0]]),
        }
    }

    pub fn norm(&self) -> f64 {
        self.h.iter().flatten().fold(0.0, |m, c| m.max(c.norm()))
    }

    fn matrix(&self) -> Matrix2<Complex64> {
        Matrix2::new(self.h[0][0], self.h[0][1], self.h[1][0], self.h[1][1])
    }

    /// Eigenvalues (ascending) and matching unit eigenvectors as columns.
    pub fn eigen(&self) -> ([f64; 2], [[Complex64; 2]; 2]) {
        let e = self.matrix().symmetric_eigen();
        let (a, b) = if e.eigenvalues[0] <= e.eigenvalues[1] { (0, 1) } else { (1, 0) };
        let v = &e.eigenvectors;
        (
            [e.eigenvalues[a], e.eigenvalues[b]],
            [[v[(0, a)], v[(0, b)]], [v[(1, a)], v[(1, b)]]],
        )
    }

    /// The model this form is a positive multiple of, if any.
    pub fn as_model(&self, tol: f64) -> Option<LeviModel> {
        [LeviModel::Definite, LeviModel::Indefinite]
            .into_iter()
            .find(|m| dist(&self.h, &HermitianForm2::model(*m).h) <= tol)
    }

    /// `⟨a, b⟩ = Σ h_jk a_j conj(b_k)` for polynomial vectors.
    pub fn pair(&self, a: &[Poly; 2], b: &[Poly; 2]) -> Poly {
        let mut out = Poly::zero();
        for j in 0..2 {
            for k in 0..2 {
                if self.h[j][k] != C0 {
                    out = out.add(&a[j].mul(&b[k].conj()).scale(self.h[j][k]));
                }
            }
        }
        out
    }

    /// `⟨z, z⟩` as a polynomial.
    pub fn quadratic(&self) -> Poly {
        let z = [Poly::z(0), Poly::z(1)];
        self.pair(&z, &z)
    }
}

fn dist(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> f64 {
    (0..4).fold(0.0, |m, i| m.max((a[i / 2][i % 2] - b[i / 2][i % 2]).norm()))
}

/// Graph function `F(z, z̄, u)` truncated at weight 4 (`z` weight 1, `u`
/// weight 2). Keys are exponents of `(z1, z2, z̄1, z̄2, u)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Jet4 {
    terms: BTreeMap<[u8; 5], Complex64>,
}

impl Jet4 {
    fn from_series(f: &Series) -> Self {
        let terms = f
            .terms()
            .filter(|(e, c)| *c != C0 && weight(e) <= 4)
            .map(|(e, c)| ([e[0], e[1], e[2], e[3], e[4]], c))
            .collect();
        Jet4 { terms }
    }

    pub fn coeff(&self, e: [u8; 5]) -> Complex64 {
        self.terms.get(&e).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8; 5], &Complex64)> {
        self.terms.iter()
    }

    /// Coefficient of `u^m` restricted to bidegree `(k, l)`.
    pub fn part(&self, k: u8, l: u8, m: u8) -> Poly {
        Poly::from_terms(
            self.terms
                .iter()
                .filter(|(e, _)| e[0] + e[1] == k && e[2] + e[3] == l && e[4] == m)
                .map(|(e, c)| ([e[0], e[1], e[2], e[3]], *c)),
        )
    }

    /// The Hermitian part `F11`.
    pub fn levi(&self) -> HermitianForm2 {
        let mut h = [[C0; 2]; 2];
        for (j, row) in h.iter_mut().enumerate() {
            for (k, x) in row.iter_mut().enumerate() {
                let mut e = [0u8; 5];
                e[j] = 1;
                e[2 + k] = 1;
                *x = self.coeff(e);
            }
        }
        HermitianForm2::new(h)
    }

    fn to_series(&self) -> Series {
        let mut s = Series::zero(5, JET_DEGREE).expect("valid shape");
        for (e, c) in &self.terms {
            s.set_coeff(e, *c);
        }
        s
    }

    /// Re-expand in real displacements `(x1, y1, x2, y2, u)`.
    pub fn to_real(&self) -> Series {
        let v = |k: usize, c: Complex64| Series::variable(5, JET_DEGREE, k, C0).unwrap().scale(c);
        let z1 = &v(0, C1) + &v(1, I);
        let z2 = &v(2, C1) + &v(3, I);
        let zc1 = &v(0, C1) - &v(1, I);
        let zc2 = &v(2, C1) - &v(3, I);
        self.to_series()
            .compose(&[z1, z2, zc1, zc2, v(4, C1)])
            .expect("linear substitution")
    }
}

fn weight(e: &[u8]) -> u8 {
    e[0] + e[1] + e[2] + e[3] + 2 * e[4]
}

/// `bidegree(F, k, l)`: the `u`-free part of `F` of bidegree `(k, l)`.
pub fn bidegree(f: &Jet4, k: u8, l: u8) -> Poly {
    f.part(k, l, 0)
}

/// Output of [`graph_jet`].
#[derive(Debug, Clone)]
pub struct GraphJet {
    pub base_point: Point,
    pub model: LeviModel,
    /// Graph function after only the translation and the linear step, in
    /// displacement coordinates of the original chart.
    pub raw: Jet4,
    /// Fully normalized graph function.
    pub jet: Jet4,
    pub levi: HermitianForm2,
    /// Human-readable record of every substitution, old coordinates in
    /// terms of new ones.
    pub substitutions: Vec<String>,
}

// Variable slots. Polarized: z1 z2 w zc1 zc2 wc. Graph: z1 z2 zc1 zc2 u v.
fn var6(k: usize) -> Series {
    Series::variable(6, JET_DEGREE, k, C0).expect("valid shape")
}

fn conj_holo(s: &Series) -> Series {
    let mut out = Series::zero(6, s.degree()).expect("valid shape");
    for (e, c) in s.terms() {
        if c != C0 {
            out.set_coeff(&[e[3], e[4], e[5], e[0], e[1], e[2]], c.conj());
        }
    }
    out
}

/// Holomorphic map written as old coordinates in terms of new ones.
struct HoloMap {
    label: &'static str,
    comps: [Series; 3],
}

impl HoloMap {
    fn apply(&self, psi: &Series) -> Result<Series, SeriesError> {
        let [a, b, c] = &self.comps;
        psi.compose(&[a.clone(), b.clone(), c.clone(), conj_holo(a), conj_holo(b), conj_holo(c)])
    }
}

impl fmt::Display for HoloMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 3] = ["z1", "z2", "w"];
        write!(f, "{}:", self.label)?;
        let mut any = false;
        for (k, s) in self.comps.iter().enumerate() {
            if *s == var6(k) {
                continue;
            }
            write!(f, "{} {} -> ", if any { ";" } else { "" }, NAMES[k])?;
            any = true;
            let mut first = true;
            for (e, c) in s.terms() {
                let c = Complex64::new(round12(c.re), round12(c.im));
                if c == C0 {
                    continue;
                }
                let mono: Vec<String> = (0..3)
                    .filter(|&j| e[j] > 0)
                    .map(|j| if e[j] == 1 { NAMES[j].to_string() } else { format!("{}^{}", NAMES[j], e[j]) })
                    .collect();
                poly::fmt_coeff(f, c, first, !mono.is_empty())?;
                f.write_str(&mono.join("*"))?;
                first = false;
            }
            if first {
                f.write_str("0")?;
            }
        }
        if !any {
            f.write_str(" identity")?;
        }
        Ok(())
    }
}

fn round12(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Solve `Ψ(z, u + iv, z̄, u − iv) = 0` for `v = F(z, z̄, u)`.
fn solve_graph(psi: &Series) -> Result<Series, MoserError> {
    let d = JET_DEGREE;
    let g = |k: usize| Series::variable(6, d, k, C0).expect("valid shape");
    let w = &g(4) + &g(5).scale(I);
    let wc = &g(4) - &g(5).scale(I);
    let psi_g = psi.compose(&[g(0), g(1), w, g(2), g(3), wc])?;
    let a = psi_g.coeff(&[0, 0, 0, 0, 0, 1]);
    if a.norm() <= 1e-12 * psi_g.max_norm().max(1.0) {
        return Err(MoserError::VanishingGradient);
    }
    let x = |k: usize| Series::variable(5, d, k, C0).expect("valid shape");
    let mut f = Series::zero(5, d)?;
    let mut resid = 0.0;
    for _ in 0..d + 3 {
        let r = psi_g.compose(&[x(0), x(1), x(2), x(3), x(4), f.clone()])?;
        resid = r.max_norm();
        f = &f - &r.scale(a.inv());
    }
    if resid > 1e-10 * psi_g.max_norm().max(1.0) {
        return Err(MoserError::Graph(resid));
    }
    Ok(f)
}

/// `Ψ = v − F(z, z̄, u)` in polarized variables.
fn polarize(f: &Series) -> Result<Series, SeriesError> {
    let half = Complex64::new(0.5, 0.0);
    let u = (&var6(2) + &var6(5)).scale(half);
    let v = (&var6(2) - &var6(5)).scale(-I * half);
    let fz = f.compose(&[var6(0), var6(1), var6(3), var6(4), u])?;
    Ok(&v - &fz)
}

/// Holomorphic part of `F` of degree `k` as a series in `z1, z2`.
fn holo_part(f: &Series, k: u8) -> Series {
    let mut out = Series::zero(6, JET_DEGREE).expect("valid shape");
    for (e, c) in f.terms() {
        if e[0] + e[1] == k && e[2] + e[3] + e[4] == 0 {
            out.set_coeff(&[e[0], e[1], 0, 0, 0, 0], c);
        }
    }
    out
}

fn graph_levi(f: &Series) -> HermitianForm2 {
    Jet4::from_series(f).levi()
}

/// Linear map `z ↦ T z` (in the `z` slots only) as a [`HoloMap`].
fn linear_z(label: &'static str, t: [[Complex64; 2]; 2]) -> HoloMap {
    let z = |j: usize| &var6(0).scale(t[j][0]) + &var6(1).scale(t[j][1]);
    HoloMap {
        label,
        comps: [z(0), z(1), var6(2)],
    }
}

/// `T` with `Tᵀ H T̄` equal to the model form.
fn levi_normalizer(h: &HermitianForm2, model: LeviModel) -> [[Complex64; 2]; 2] {
    let mo = HermitianForm2::model(model);
    // H = s·model is the common case and has an exact answer.
    let s = match model {
        LeviModel::Definite => (h.h[0][0].re + h.h[1][1].re) / 2.0,
        LeviModel::Indefinite => h.h[0][1].re,
    };
    let scaled = mo.h.map(|r| r.map(|c| c * s));
    if s != 0.0 && dist(&h.h, &scaled) <= 1e-14 * h.norm() {
        let r = Complex64::new(1.0 / s.abs().sqrt(), 0.0);
        let flip = if s < 0.0 { -r } else { r };
        return [[r, C0], [C0, flip]];
    }
    let (ev, u) = h.eigen();
    let dscale = ev.map(|l| 1.0 / l.abs().sqrt());
    let rmat = match model {
        LeviModel::Definite => [[C1, C0], [C0, C1]],
        LeviModel::Indefinite => {
            let q = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            [[q, -q], [q, q]]
        }
    };
    let mut t = [[C0; 2]; 2];
    for (i, row) in t.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            let sij: Complex64 = (0..2).map(|k| u[i][k] * dscale[k] * rmat[k][j]).sum();
            *x = sij.conj();
        }
    }
    t
}

/// Normalize `Φ = 0` at `p` through weight 3.
pub fn graph_jet(df: &DefiningFunction, p: &Point) -> Result<GraphJet, MoserError> {
    let mut psi = jet(&df.phi, p, JET_DEGREE)?.with_center(vec![C0; 6]);
    let c0 = psi.constant_term();
    if c0.norm() > ON_SURFACE_TOL {
        return Err(MoserError::OffSurface(c0.norm()));
    }
    psi.set_coeff(&[0; 6], C0);
    let pv = p.primaries();
    let mut subs = vec![format!(
        "translate: z1 -> z1 + ({}); z2 -> z2 + ({}); w -> w + ({})",
        fmt_c(pv[0]),
        fmt_c(pv[1]),
        fmt_c(pv[2])
    )];

    let grad = |psi: &Series| -> [Complex64; 3] {
        [0, 1, 2].map(|k| {
            let mut e = [0u8; 6];
            e[k] = 1;
            psi.coeff(&e)
        })
    };
    let mut g = grad(&psi);
    let gmax = g.iter().fold(0.0_f64, |m, c| m.max(c.norm()));
    if gmax <= 1e-12 {
        return Err(MoserError::VanishingGradient);
    }
    if g[2].norm() <= 1e-8 * gmax {
        // w is a bad graph direction here; swap it with the best z_j.
        let j = if g[0].norm() >= g[1].norm() { 0 } else { 1 };
        let mut comps = [var6(0), var6(1), var6(2)];
        comps.swap(j, 2);
        let m = HoloMap { label: "swap", comps };
        psi = m.apply(&psi)?;
        subs.push(m.to_string());
        g = grad(&psi);
    }
    let (a1, a2, b) = (g[0], g[1], g[2]);
    let nb = Complex64::new(b.norm(), 0.0);
    let lin = HoloMap {
        label: "linear",
        comps: [
            var6(0),
            var6(1),
            (&(&var6(2).scale(-I * nb) - &var6(0).scale(a1)) - &var6(1).scale(a2)).scale(b.inv()),
        ],
    };
    psi = lin.apply(&psi)?;
    subs.push(lin.to_string());
    let mut f = solve_graph(&psi)?;
    let raw = Jet4::from_series(&f);

    let h = graph_levi(&f);
    let (ev, _) = h.eigen();
    let scale = ev[0].abs().max(ev[1].abs());
    if ev[0].abs() <= LEVI_TOL * scale || ev[1].abs() <= LEVI_TOL * scale || scale == 0.0 {
        return Err(MoserError::Degenerate(ev));
    }
    let model = if ev[0] * ev[1] > 0.0 { LeviModel::Definite } else { LeviModel::Indefinite };

    let mut step = |m: HoloMap, f: &mut Series, psi: &mut Series| -> Result<(), MoserError> {
        *psi = m.apply(&polarize(f)?)?;
        *f = solve_graph(psi)?;
        subs.push(m.to_string());
        Ok(())
    };

    if model == LeviModel::Definite && ev[1] < 0.0 {
        let m = HoloMap {
            label: "orientation",
            comps: [var6(0), var6(1), var6(2).scale(-C1)],
        };
        step(m, &mut f, &mut psi)?;
    }
    let t = levi_normalizer(&graph_levi(&f), model);
    step(linear_z("levi", t), &mut f, &mut psi)?;

    let f20 = holo_part(&f, 2);
    let m = HoloMap {
        label: "weight 2",
        comps: [var6(0), var6(1), &var6(2) + &f20.scale(2.0 * I)],
    };
    step(m, &mut f, &mut psi)?;

    let ell = |j: usize| {
        let mut e = [0u8; 5];
        e[j] = 1;
        e[4] = 1;
        f.coeff(&e)
    };
    let lz = &var6(0).scale(ell(0)) + &var6(1).scale(ell(1));
    let f30 = holo_part(&f, 3);
    let w3 = &(&var6(2) + &(&var6(2) * &lz).scale(2.0 * I)) + &f30.scale(2.0 * I);
    step(
        HoloMap {
            label: "weight 3",
            comps: [var6(0), var6(1), w3],
        },
        &mut f,
        &mut psi,
    )?;

    let jet = Jet4::from_series(&f);
    let levi = jet.levi();
    let defect = dist(&levi.h, &HermitianForm2::model(model).h);
    if defect > 1e-9 {
        return Err(MoserError::UnsupportedForm(format!(
            "Levi normalization left a defect of {defect:e}"
        )));
    }
    Ok(GraphJet {
        base_point: p.clone(),
        model,
        raw,
        jet,
        levi,
        substitutions: subs,
    })
}

fn fmt_c(c: Complex64) -> String {
    let (re, im) = (round12(c.re), round12(c.im));
    if im == 0.0 {
        format!("{re}")
    } else if im < 0.0 {
        format!("{re} - {}*i", -im)
    } else {
        format!("{re} + {im}*i")
    }
}

/// Solve `F21 = ⟨f, z⟩` for the quadratic holomorphic pair `f`.
pub fn solve_f2(f21: &Poly, levi: &HermitianForm2) -> Result<[Poly; 2], MoserError> {
    check_bidegree(f21, 2, 1)?;
    // ⟨f, z⟩ = Σ_k (Σ_j h_jk f_j) z̄_k, so Hᵀ f = (coefficient of z̄_k).
    let h = levi.h;
    let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    if det.norm() <= 1e-12 * levi.norm().powi(2).max(f64::MIN_POSITIVE) {
        return Err(MoserError::UnsupportedForm("degenerate Hermitian form".into()));
    }
    let mut f = [Poly::zero(), Poly::zero()];
    let monos: std::collections::BTreeSet<[u8; 2]> = f21.terms().map(|(e, _)| [e[0], e[1]]).collect();
    for m in monos {
        let c1 = f21.coeff([m[0], m[1], 1, 0]);
        let c2 = f21.coeff([m[0], m[1], 0, 1]);
        // Hᵀ = [[h00, h10], [h01, h11]]
        let x0 = (h[1][1] * c1 - h[1][0] * c2) / det;
        let x1 = (h[0][0] * c2 - h[0][1] * c1) / det;
        f[0].add_term([m[0], m[1], 0, 0], x0);
        f[1].add_term([m[0], m[1], 0, 0], x1);
    }
    Ok(f)
}

/// `H22 = F22 − ⟨f2, f2⟩`.
pub fn h22(f22: &Poly, f2: &[Poly; 2], levi: &HermitianForm2) -> Poly {
    f22.sub(&levi.pair(f2, f2))
}

fn check_bidegree(p: &Poly, k: u8, l: u8) -> Result<(), MoserError> {
    match p.terms().find(|(e, _)| e[0] + e[1] != k || e[2] + e[3] != l) {
        Some((e, c)) => Err(MoserError::Bidegree {
            k,
            l,
            found: Poly::monomial(*e, *c).to_string(),
        }),
        None => Ok(()),
    }
}

/// Coordinates of the `N220` normal-form part.
///
/// For the indefinite model the five numbers multiply
/// `|z1|⁴`, `4|z1|²|z2|² − (z1²z̄2² + z2²z̄1²)`, `|z2|⁴`,
/// `i(z1²z̄1z̄2 − z1z2z̄1²)` and `i(z1z2z̄2² − z2²z̄1z̄2)`. For the definite model
/// they are coordinates on the harmonic basis `z1²z̄2² + z2²z̄1²`,
/// `i(z1²z̄2² − z2²z̄1²)`, `|z1|⁴ − 4|z1|²|z2|² + |z2|⁴`, `2 Re P`, `2 Im P` with
/// `P = z1²z̄1z̄2 − z1z2z̄2²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct N220Coeffs {
    pub model: LeviModel,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub mu1: f64,
    pub mu2: f64,
}

impl N220Coeffs {
    pub fn values(&self) -> [f64; 5] {
        [self.lambda1, self.lambda2, self.lambda3, self.mu1, self.mu2]
    }

    pub fn max_abs(&self) -> f64 {
        self.values().iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

fn m(e: Mono, c: Complex64) -> Poly {
    Poly::monomial(e, c)
}

/// The five basis polynomials of the normal-form space.
pub fn normal_basis(model: LeviModel) -> [Poly; 5] {
    let r = |x: f64| Complex64::new(x, 0.0);
    match model {
        LeviModel::Indefinite => [
            m([2, 0, 2, 0], C1),
            m([1, 1, 1, 1], r(4.0)).sub(&m([2, 0, 0, 2], C1)).sub(&m([0, 2, 2, 0], C1)),
            m([0, 2, 0, 2], C1),
            m([2, 0, 1, 1], I).sub(&m([1, 1, 2, 0], I)),
            m([1, 1, 0, 2], I).sub(&m([0, 2, 1, 1], I)),
        ],
        LeviModel::Definite => {
            let p = m([2, 0, 1, 1], C1).sub(&m([1, 1, 0, 2], C1));
            [
                m([2, 0, 0, 2], C1).add(&m([0, 2, 2, 0], C1)),
                m([2, 0, 0, 2], I).sub(&m([0, 2, 2, 0], I)),
                m([2, 0, 2, 0], C1).sub(&m([1, 1, 1, 1], r(4.0))).add(&m([0, 2, 0, 2], C1)),
                p.add(&p.conj()),
                p.sub(&p.conj()).scale(-I),
            ]
        }
    }
}

/// Split a real `(2,2)` polynomial as `N220 + ⟨z,z⟩·A(z, z̄)` with `A`
/// Hermitian and return the `N220` coordinates.
pub fn n220_project(h: &Poly, levi: &HermitianForm2) -> Result<N220Coeffs, MoserError> {
    let model = levi.as_model(1e-9).ok_or_else(|| {
        MoserError::UnsupportedForm(format!("Levi form {:?} is not a normal model", levi.h))
    })?;
    check_bidegree(h, 2, 2)?;
    let scale = h.max_abs().max(1.0);
    let defect = h.reality_defect();
    if defect > 1e-9 * scale {
        return Err(MoserError::NotReal(defect));
    }
    let q = levi.quadratic();
    let mut cols: Vec<Poly> = normal_basis(model).into();
    cols.push(q.mul(&m([1, 0, 1, 0], C1)));
    cols.push(q.mul(&m([0, 1, 0, 1], C1)));
    cols.push(q.mul(&m([1, 0, 0, 1], C1).add(&m([0, 1, 1, 0], C1))));
    cols.push(q.mul(&m([1, 0, 0, 1], I).sub(&m([0, 1, 1, 0], I))));

    let monos: Vec<Mono> = (0..=2u8)
        .flat_map(|a| (0..=2u8).map(move |b| [a, 2 - a, b, 2 - b]))
        .collect();
    let rows = 2 * monos.len();
    let a = DMatrix::from_fn(rows, cols.len(), |r, c| {
        let v = cols[c].coeff(monos[r / 2]);
        if r % 2 == 0 {
            v.re
        } else {
            v.im
        }
    });
    let rhs = DVector::from_fn(rows, |r, _| {
        let v = h.coeff(monos[r / 2]);
        if r % 2 == 0 {
            v.re
        } else {
            v.im
        }
    });
    // The 9 columns are independent and well conditioned for both models,
    // so the normal equations are accurate here.
    let at = a.transpose();
    let x = (&at * &a)
        .cholesky()
        .ok_or_else(|| MoserError::UnsupportedForm("projection system is singular".into()))?
        .solve(&(&at * &rhs));
    let resid = (&a * &x - &rhs).amax();
    if resid > 1e-9 * scale {
        return Err(MoserError::Projection(resid));
    }
    Ok(N220Coeffs {
        model,
        lambda1: x[0],
        lambda2: x[1],
        lambda3: x[2],
        mu1: x[3],
        mu2: x[4],
    })
}

pub fn is_umbilic(n: &N220Coeffs, tol: f64) -> bool {
    n.max_abs() <= tol
}

/// One nonzero weight-≤4 piece of the normalized graph function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BidegreeEntry {
    pub bidegree: [u8; 2],
    pub u_power: u8,
    pub poly: String,
}

/// Everything computed for one base point, in a JSON-friendly shape.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoserReport {
    pub base_point: [[f64; 2]; 3],
    pub model: LeviModel,
    pub substitutions: Vec<String>,
    pub raw_levi: [[[f64; 2]; 2]; 2],
    pub bidegree_tables: Vec<BidegreeEntry>,
    pub f21: String,
    pub f22: String,
    pub f2: [String; 2],
    pub h22: String,
    pub n220: N220Coeffs,
    pub umbilic: bool,
}

fn rounded(p: &Poly) -> Poly {
    Poly::from_terms(p.terms().map(|(e, c)| (*e, Complex64::new(round12(c.re), round12(c.im)))))
}

/// Run the whole normalization and collect the results.
pub fn moser_report(df: &DefiningFunction, p: &Point) -> Result<MoserReport, MoserError> {
    let gj = graph_jet(df, p)?;
    let f21 = bidegree(&gj.jet, 2, 1);
    let f22 = bidegree(&gj.jet, 2, 2);
    let f2 = solve_f2(&f21, &gj.levi)?;
    let h = h22(&f22, &f2, &gj.levi);
    let n = n220_project(&h, &gj.levi)?;
    let mut tables = Vec::new();
    for w in 2..=4u8 {
        for mu in 0..=w / 2 {
            let d = w - 2 * mu;
            for k in (0..=d).rev() {
                let part = rounded(&gj.jet.part(k, d - k, mu));
                if !part.is_zero() {
                    tables.push(BidegreeEntry {
                        bidegree: [k, d - k],
                        u_power: mu,
                        poly: part.to_string(),
                    });
                }
            }
        }
    }
    let rl = gj.raw.levi().h;
    Ok(MoserReport {
        base_point: p.primaries().map(|c| [c.re, c.im]),
        model: gj.model,
        substitutions: gj.substitutions.clone(),
        raw_levi: rl.map(|r| r.map(|c| [c.re, c.im])),
        bidegree_tables: tables,
        f21: rounded(&f21).to_string(),
        f22: rounded(&f22).to_string(),
        f2: [rounded(&f2[0]).to_string(), rounded(&f2[1]).to_string()],
        h22: rounded(&h).to_string(),
        umbilic: is_umbilic(&n, UMBILIC_TOL),
        n220: n,
    })
}

#[cfg(test)]
mod tests;
