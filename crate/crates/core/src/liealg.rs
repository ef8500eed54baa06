//! Real Lie algebras given by structure constants `[e_i, e_j] = Σ c^k_ij e_k`.
//!
//! Basis labels in the public API are 1-based (`e1 … en`) to match the usual
//! tables; vectors are plain coordinate slices of length `dim`.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{orthonormal_basis, rank, residual_to_span, row_basis_at_scale, Scalar, RANK_TOL};

/// Parameter values by name (`alpha`, `beta`, `gamma`, `p`, `eps`, `h`).
pub type AlgebraParams = BTreeMap<String, f64>;

pub const MAX_DIM: usize = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LieError {
    #[error("unknown algebra '{name}'; known: {}", known.join(", "))]
    UnknownAlgebra { name: String, known: Vec<String> },
    #[error("unknown parameter '{0}' (expected one of alpha, beta, gamma, p, eps, h)")]
    UnknownParam(String),
    #[error("parameter constraint violated for {algebra}: {message}")]
    Constraint { algebra: String, message: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("bad structure-constant record {0}")]
    BadRecord(String),
    #[error("Jacobi identity fails (defect {0:e})")]
    Jacobi(f64),
}

/// One bracket coefficient, 1-based with `i < j`: `[e_i, e_j] ∋ value·e_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: f64,
}

/// Antisymmetric structure tensor. Only `i < j` is stored.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants<S: Scalar = f64> {
    dim: usize,
    /// `c[pair_index(i, j) * dim + k]` for `i < j` (0-based).
    c: Vec<S>,
}

fn pair_index(dim: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < dim);
    i * dim - i * (i + 1) / 2 + (j - i - 1)
}

impl<S: Scalar> StructureConstants<S> {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds {MAX_DIM}");
        StructureConstants {
            dim,
            c: vec![S::zero(); dim * (dim.saturating_sub(1)) / 2 * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `c^k_ij`, 0-based, any order of `i, j`.
    pub fn get(&self, i: usize, j: usize, k: usize) -> S {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => S::zero(),
            Less => self.c[pair_index(self.dim, i, j) * self.dim + k].clone(),
            Greater => -self.c[pair_index(self.dim, j, i) * self.dim + k].clone(),
        }
    }

    /// Set `c^k_ij` (0-based); antisymmetry is implied.
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: S) {
        assert!(i != j, "diagonal brackets vanish");
        if i < j {
            let at = pair_index(self.dim, i, j) * self.dim + k;
            self.c[at] = v;
        } else {
            let at = pair_index(self.dim, j, i) * self.dim + k;
            self.c[at] = -v;
        }
    }

    /// Build from 1-based `(i, j, k, value)` triples.
    pub fn from_triples(dim: usize, triples: &[(usize, usize, usize, S)]) -> Self {
        let mut sc = Self::zero(dim);
        for (i, j, k, v) in triples {
            let cur = sc.get(i - 1, j - 1, k - 1);
            sc.set(i - 1, j - 1, k - 1, cur + v.clone());
        }
        sc
    }

    /// `[e_i, e_j]` as a coordinate vector (0-based).
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vec<S> {
        (0..self.dim).map(|k| self.get(i, j, k)).collect()
    }

    pub fn bracket(&self, x: &[S], y: &[S]) -> Result<Vec<S>, LieError> {
        for v in [x, y] {
            if v.len() != self.dim {
                return Err(LieError::Dimension {
                    expected: self.dim,
                    got: v.len(),
                });
            }
        }
        Ok(self.bracket_unchecked(x, y))
    }

    fn bracket_unchecked(&self, x: &[S], y: &[S]) -> Vec<S> {
        let n = self.dim;
        let mut out = vec![S::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if i == j || y[j].is_zero() {
                    continue;
                }
                let f = x[i].clone() * y[j].clone();
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.get(i, j, k);
                    if !c.is_zero() {
                        *o = o.clone() + f.clone() * c;
                    }
                }
            }
        }
        out
    }

    fn unit(&self, i: usize) -> Vec<S> {
        let mut v = vec![S::zero(); self.dim];
        v[i] = S::one();
        v
    }

    /// Max over basis triples of the sup-norm of the cyclic Jacobi sum.
    pub fn jacobi_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (ei, ej, ek) = (self.unit(i), self.unit(j), self.unit(k));
                    let a = self.bracket_unchecked(&self.bracket_unchecked(&ei, &ej), &ek);
                    let b = self.bracket_unchecked(&self.bracket_unchecked(&ej, &ek), &ei);
                    let c = self.bracket_unchecked(&self.bracket_unchecked(&ek, &ei), &ej);
                    for t in 0..n {
                        let s = a[t].clone() + b[t].clone() + c[t].clone();
                        worst = worst.max(s.magnitude());
                    }
                }
            }
        }
        worst
    }

    /// Nonzero coefficients as 1-based records with `i < j`.
    pub fn records(&self) -> Vec<Record> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in 0..self.dim {
                    let v = self.get(i, j, k);
                    if !v.is_zero() {
                        out.push(Record {
                            i: i + 1,
                            j: j + 1,
                            k: k + 1,
                            value: v.to_f64(),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn from_records(dim: usize, records: &[Record]) -> Result<Self, LieError> {
        if dim > MAX_DIM {
            return Err(LieError::Dimension {
                expected: MAX_DIM,
                got: dim,
            });
        }
        let mut sc = Self::zero(dim);
        for r in records {
            if !(1 <= r.i && r.i < r.j && r.j <= dim && 1 <= r.k && r.k <= dim) || !r.value.is_finite() {
                return Err(LieError::BadRecord(format!("{r:?}")));
            }
            sc.set(r.i - 1, r.j - 1, r.k - 1, S::from_f64(r.value));
        }
        Ok(sc)
    }

    pub fn to_f64(&self) -> StructureConstants<f64> {
        StructureConstants {
            dim: self.dim,
            c: self.c.iter().map(Scalar::to_f64).collect(),
        }
    }

    /// Basis of the span of all brackets `[a, b]` with `a ∈ left`, `b ∈ right`.
    fn bracket_span(&self, left: &[Vec<S>], right: &[Vec<S>]) -> Vec<Vec<S>> {
        let mut rows = Vec::new();
        for a in left {
            for b in right {
                rows.push(self.bracket_unchecked(a, b));
            }
        }
        if rows.is_empty() {
            return rows;
        }
        // cancellation error grows with |c|·|a|·|b|, not with the result
        let size = |vs: &[Vec<S>]| vs.iter().flatten().map(Scalar::magnitude).fold(0.0, f64::max);
        let c = self.c.iter().map(Scalar::magnitude).fold(0.0, f64::max);
        row_basis_at_scale(&rows, (self.dim * self.dim) as f64 * c * size(left) * size(right))
    }

    fn full_basis(&self) -> Vec<Vec<S>> {
        (0..self.dim).map(|i| self.unit(i)).collect()
    }

    /// Basis-independent invariants. Requires the Jacobi identity.
    pub fn fingerprint(&self) -> Result<AlgebraFingerprint, LieError> {
        let defect = self.jacobi_defect();
        if defect > 1e-10 {
            return Err(LieError::Jacobi(defect));
        }
        let n = self.dim;
        // center: x with Σ_i x_i c^k_ij = 0 for all j, k
        let mut rows = Vec::new();
        for j in 0..n {
            for k in 0..n {
                rows.push((0..n).map(|i| self.get(i, j, k)).collect::<Vec<S>>());
            }
        }
        let center = n - if rows.is_empty() { 0 } else { rank(&rows) };

        let g = self.full_basis();
        let mut derived = vec![n];
        let mut cur = g.clone();
        loop {
            let next = self.bracket_span(&cur, &cur);
            let d = next.len();
            let stop = d == cur.len() || d == 0;
            derived.push(d);
            cur = next;
            if stop {
                break;
            }
        }
        let mut lower = vec![n];
        let mut cur = g.clone();
        loop {
            let next = self.bracket_span(&g, &cur);
            let d = next.len();
            let stop = d == cur.len() || d == 0;
            lower.push(d);
            cur = next;
            if stop {
                break;
            }
        }
        Ok(AlgebraFingerprint {
            dim: n,
            center_dim: center,
            derived_dim: derived.get(1).copied().unwrap_or(0),
            solvable: *derived.last().unwrap() == 0,
            nilpotent: *lower.last().unwrap() == 0,
            derived_series: derived,
            lower_central_series: lower,
        })
    }
}

impl StructureConstants<f64> {
    /// Constants in the basis `f_a = Σ_b P[a][b] e_b` (rows of `p` are the new
    /// basis vectors). Fails when `p` is singular.
    pub fn change_basis(&self, p: &[Vec<f64>]) -> Result<Self, LieError> {
        let n = self.dim;
        if p.len() != n || p.iter().any(|r| r.len() != n) {
            return Err(LieError::Dimension {
                expected: n,
                got: p.len(),
            });
        }
        let pm = DMatrix::from_fn(n, n, |a, b| p[a][b]);
        let inv_t = pm
            .transpose()
            .try_inverse()
            .ok_or_else(|| LieError::BadRecord("singular change of basis".into()))?;
        let mut out = Self::zero(n);
        for a in 0..n {
            for b in a + 1..n {
                let v = self.bracket_unchecked(&p[a], &p[b]);
                let coords = &inv_t * nalgebra::DVector::from_vec(v);
                for k in 0..n {
                    out.set(a, b, k, coords[k]);
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for StructureConstants<f64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let v = self.basis_bracket(i, j);
                if v.iter().all(|x| *x == 0.0) {
                    continue;
                }
                if !first {
                    f.write_str(", ")?;
                }
                first = false;
                write!(f, "[e{},e{}]=", i + 1, j + 1)?;
                let mut t = 0;
                for (k, c) in v.iter().enumerate() {
                    if *c == 0.0 {
                        continue;
                    }
                    if t > 0 {
                        f.write_str(if *c < 0.0 { "-" } else { "+" })?;
                    } else if *c < 0.0 {
                        f.write_str("-")?;
                    }
                    if c.abs() != 1.0 {
                        write!(f, "{}", c.abs())?;
                    }
                    write!(f, "e{}", k + 1)?;
                    t += 1;
                }
            }
        }
        if first {
            f.write_str("abelian")?;
        }
        Ok(())
    }
}

/// Invariants under change of basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFingerprint {
    pub dim: usize,
    pub center_dim: usize,
    /// Dimensions of `g ⊃ [g,g] ⊃ …` until the sequence stabilizes.
    pub derived_series: Vec<usize>,
    /// Dimensions of `g ⊃ [g,g] ⊃ [g,[g,g]] ⊃ …` until it stabilizes.
    pub lower_central_series: Vec<usize>,
    pub derived_dim: usize,
    pub solvable: bool,
    pub nilpotent: bool,
}

/// Linear subspace given by independent coordinate vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: Vec<Vec<f64>>,
}

impl Subspace {
    pub fn new(dim: usize, basis: Vec<Vec<f64>>) -> Result<Self, LieError> {
        if let Some(v) = basis.iter().find(|v| v.len() != dim) {
            return Err(LieError::Dimension {
                expected: dim,
                got: v.len(),
            });
        }
        if !basis.is_empty() && rank(&basis) != basis.len() {
            return Err(LieError::BadRecord("subspace basis is linearly dependent".into()));
        }
        Ok(Subspace { basis })
    }

    /// Span of the listed basis elements, 1-based (`&[1, 2, 4]` is ⟨e1,e2,e4⟩).
    pub fn coordinate(dim: usize, labels: &[usize]) -> Self {
        let basis = labels
            .iter()
            .map(|&l| {
                assert!(1 <= l && l <= dim, "label e{l} outside dimension {dim}");
                let mut v = vec![0.0; dim];
                v[l - 1] = 1.0;
                v
            })
            .collect();
        Subspace::new(dim, basis).expect("distinct labels")
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn check_dim(sc: &StructureConstants<f64>, s: &Subspace) -> bool {
    s.basis.iter().all(|v| v.len() == sc.dim())
}

/// All pairwise brackets of basis vectors vanish.
pub fn is_abelian<S: Scalar>(sc: &StructureConstants<S>, s: &Subspace) -> bool {
    let sc = sc.to_f64();
    if !check_dim(&sc, s) {
        return false;
    }
    for (a, x) in s.basis.iter().enumerate() {
        for y in &s.basis[a + 1..] {
            if sc.bracket_unchecked(x, y).iter().any(|c| c.abs() > RANK_TOL) {
                return false;
            }
        }
    }
    true
}

fn brackets_in_span(sc: &StructureConstants<f64>, left: &[Vec<f64>], s: &Subspace) -> bool {
    let q = orthonormal_basis(&s.basis);
    left.iter().all(|x| {
        s.basis
            .iter()
            .all(|y| residual_to_span(&sc.bracket_unchecked(x, y), &q) <= RANK_TOL)
    })
}

pub fn is_subalgebra<S: Scalar>(sc: &StructureConstants<S>, s: &Subspace) -> bool {
    let sc = sc.to_f64();
    check_dim(&sc, s) && brackets_in_span(&sc, &s.basis, s)
}

pub fn is_ideal<S: Scalar>(sc: &StructureConstants<S>, s: &Subspace) -> bool {
    let sc = sc.to_f64();
    check_dim(&sc, s) && brackets_in_span(&sc, &sc.full_basis(), s)
}

/// True when a 4-dimensional abelian subalgebra exists among `candidates` or
/// the coordinate 4-subsets; any hypersurface orbit is then Levi-degenerate.
pub fn lemma1_degeneracy_forced<S: Scalar>(sc: &StructureConstants<S>, candidates: &[Subspace]) -> bool {
    let n = sc.dim();
    if candidates.iter().any(|s| s.dim() == 4 && is_abelian(sc, s)) {
        return true;
    }
    if n < 4 {
        return false;
    }
    let labels: Vec<usize> = (1..=n).collect();
    subsets(&labels, 4)
        .into_iter()
        .any(|set| is_abelian(sc, &Subspace::coordinate(n, &set)))
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut with: Vec<Vec<usize>> = subsets(&items[1..], k - 1)
        .into_iter()
        .map(|mut s| {
            s.insert(0, items[0]);
            s
        })
        .collect();
    with.extend(subsets(&items[1..], k));
    with
}

// ---------------------------------------------------------------------------
// Table encodings

const PARAM_NAMES: [&str; 6] = ["alpha", "beta", "gamma", "p", "eps", "h"];

/// Default parameter values used when a caller omits one.
pub fn default_param(name: &str) -> Option<f64> {
    Some(match name {
        "alpha" => 0.5,
        "beta" => 2.0,
        "gamma" => 1.0,
        "p" => 0.5,
        "eps" => 1.0,
        "h" => 0.0,
        _ => return None,
    })
}

const NAMED: &[&str] = &[
    "g5", "g5_19", "g5_20", "g5_21", "g5_22", "g5_23", "g5_24", "g5_25", "g5_26", "g5_27", "g5_28",
    "g5_29", "g5_30", "g5_31", "g5_32", "g5_33", "g5_34", "g5_35", "g5_36", "g5_37", "g5_38",
    "g5_39", "su2_g2", "sl2_g2", "su2_sl2", "g5_35_ext", "abelian_n",
];

/// Names accepted by [`table_algebra`] (`abelian_n` stands for `abelian_1` … `abelian_6`).
pub fn known_algebras() -> Vec<String> {
    NAMED.iter().map(|s| s.to_string()).collect()
}

pub fn is_known_algebra(name: &str) -> bool {
    abelian_dim(name).is_some() || (name != "abelian_n" && NAMED.contains(&name))
}

fn abelian_dim(name: &str) -> Option<usize> {
    let n: usize = name.strip_prefix("abelian_")?.parse().ok()?;
    (1..=MAX_DIM).contains(&n).then_some(n)
}

/// Parameters that the named row depends on.
pub fn algebra_param_names(name: &str) -> &'static [&'static str] {
    match name {
        "g5_19" | "g5_35" | "g5_35_ext" => &["alpha", "beta"],
        "g5_20" | "g5_28" | "g5_34" => &["alpha"],
        "g5_23" => &["beta"],
        "g5_24" => &["eps"],
        "g5_25" => &["p", "beta"],
        "g5_26" => &["p", "eps"],
        "g5_30" | "g5_32" => &["h"],
        "g5_33" => &["beta", "gamma"],
        _ => &[],
    }
}

/// Parameter grid for property suites: the cartesian product of per-name grids
/// restricted to admissible values.
pub fn parameter_grid(name: &str) -> Vec<AlgebraParams> {
    let grid = |p: &str| -> Vec<f64> {
        match (name, p) {
            ("g5_32", "h") => vec![-1.0, 0.0, 1.0],
            (_, "h") => vec![-2.0, -1.0, 0.0, 0.5, 1.0],
            (_, "alpha") => vec![-2.0, -0.5, 0.5, 2.0],
            (_, "beta") => vec![-1.0, 0.5, 2.0],
            (_, "gamma") => vec![-1.0, 0.0, 1.5],
            (_, "p") => vec![-1.0, 0.0, 0.5],
            (_, "eps") => vec![-1.0, 1.0],
            _ => vec![],
        }
    };
    let mut out = vec![AlgebraParams::new()];
    for p in algebra_param_names(name) {
        let mut next = Vec::new();
        for base in &out {
            for v in grid(p) {
                let mut m = base.clone();
                m.insert(p.to_string(), v);
                next.push(m);
            }
        }
        out = next;
    }
    out
}

/// Table row in double precision.
pub fn table_algebra(name: &str, params: &AlgebraParams) -> Result<StructureConstants<f64>, LieError> {
    table_algebra_in(name, params)
}

/// Table row in exact rational arithmetic (parameters are converted exactly
/// when they are short decimals).
pub fn table_algebra_exact(name: &str, params: &AlgebraParams) -> Result<StructureConstants<Ratio<i64>>, LieError> {
    table_algebra_in(name, params)
}

pub fn table_algebra_in<S: Scalar>(name: &str, params: &AlgebraParams) -> Result<StructureConstants<S>, LieError> {
    for k in params.keys() {
        if !PARAM_NAMES.contains(&k.as_str()) {
            return Err(LieError::UnknownParam(k.clone()));
        }
    }
    if let Some(n) = abelian_dim(name) {
        return Ok(StructureConstants::zero(n));
    }
    if !is_known_algebra(name) {
        return Err(LieError::UnknownAlgebra {
            name: name.to_string(),
            known: known_algebras(),
        });
    }
    let raw = |p: &str| params.get(p).copied().or_else(|| default_param(p)).unwrap();
    check_constraints(name, &raw)?;
    let v = |p: &str| S::from_f64(raw(p));
    let n = |x: i64| S::from_int(x);
    let (a, b, g, p, e, h) = (v("alpha"), v("beta"), v("gamma"), v("p"), v("eps"), v("h"));
    let one = n(1);

    // (i, j, k, c): [e_i, e_j] gets c·e_k
    let mut t: Vec<(usize, usize, usize, S)> = Vec::new();
    let mut dim = 5;
    // [e2, e3] = e1, shared by g5_19 … g5_29
    let heisenberg = |t: &mut Vec<(usize, usize, usize, S)>| t.push((2, 3, 1, n(1)));
    match name {
        "g5" => {
            t.extend([
                (1, 2, 1, n(2)),
                (1, 3, 2, n(-1)),
                (1, 4, 5, n(1)),
                (2, 3, 3, n(2)),
                (2, 4, 4, n(1)),
                (2, 5, 5, n(-1)),
                (3, 5, 4, n(1)),
            ]);
        }
        "g5_19" => {
            heisenberg(&mut t);
            t.extend([
                (1, 5, 1, one.clone() + a.clone()),
                (2, 5, 2, n(1)),
                (3, 5, 3, a),
                (4, 5, 4, b),
            ]);
        }
        "g5_20" => {
            heisenberg(&mut t);
            t.extend([
                (1, 5, 1, one.clone() + a.clone()),
                (2, 5, 2, n(1)),
                (3, 5, 3, a.clone()),
                (4, 5, 1, n(1)),
                (4, 5, 4, one + a),
            ]);
        }
        "g5_21" => {
            heisenberg(&mut t);
            t.extend([
                (1, 5, 1, n(2)),
                (2, 5, 2, n(1)),
                (2, 5, 3, n(1)),
                (3, 5, 3, n(1)),
                (3, 5, 4, n(1)),
                (4, 5, 4, n(1)),
            ]);
        }
        "g5_22" => {
            heisenberg(&mut t);
            t.extend([(2, 5, 3, n(1)), (4, 5, 4, n(1))]);
        }
        "g5_23" => {
            heisenberg(&mut t);
            t.extend([
                (1, 5, 1, n(2)),
                (2, 5, 2, n(1)),
                (2, 5, 3, n(1)),
                (3, 5, 3, n(1)),
                (4, 5, 4, b),
            ]);
        }
        "g5_24" => {
            heisenberg(&mut t);
            t.extend([
                (1, 5, 1, n(2)),
                (2, 5, 2, n(1)),
                (2, 5, 3, n(1)),
                (3, 5, 3, n(1)),
                (4, 5, 1, e),
                (4, 5, 4, n(2)),
            ]);
        }
        "g5_25" => {
            heisenberg(&mut t);
            t.extend([
                (1, 5, 1, n(2) * p.clone()),
                (2, 5, 2, p.clone()),
                (2, 5, 3, n(1)),
                (3, 5, 2, n(-1)),
                (3, 5, 3, p),
                (4, 5, 4, b),
            ]);
        }
        "g5_26" => {
            heisenberg(&mut t);
            t.extend([
                (1, 5, 1, n(2) * p.clone()),
                (2, 5, 2, p.clone()),
                (2, 5, 3, n(1)),
                (3, 5, 2, n(-1)),
                (3, 5, 3, p.clone()),
                (4, 5, 1, e),
                (4, 5, 4, n(2) * p),
            ]);
        }
        "g5_27" => {
            heisenberg(&mut t);
            t.extend([
                (1, 5, 1, n(1)),
                (3, 5, 3, n(1)),
                (3, 5, 4, n(1)),
                (4, 5, 1, n(1)),
                (4, 5, 4, n(1)),
            ]);
        }
        "g5_28" => {
            heisenberg(&mut t);
            t.extend([
                (1, 5, 1, one + a.clone()),
                (2, 5, 2, a),
                (3, 5, 3, n(1)),
                (3, 5, 4, n(1)),
                (4, 5, 4, n(1)),
            ]);
        }
        "g5_29" => {
            heisenberg(&mut t);
            t.extend([(1, 5, 1, n(1)), (2, 5, 2, n(1)), (3, 5, 4, n(1))]);
        }
        "g5_30" => {
            t.extend([
                (1, 5, 1, n(2) + h.clone()),
                (2, 4, 1, n(1)),
                (2, 5, 2, one + h.clone()),
                (3, 4, 2, n(1)),
                (3, 5, 3, h),
                (4, 5, 4, n(1)),
            ]);
        }
        "g5_31" => {
            t.extend([
                (1, 5, 1, n(3)),
                (2, 4, 1, n(1)),
                (2, 5, 2, n(2)),
                (3, 4, 2, n(1)),
                (3, 5, 3, n(1)),
                (4, 5, 3, n(1)),
                (4, 5, 4, n(1)),
            ]);
        }
        "g5_32" => {
            t.extend([
                (1, 5, 1, n(1)),
                (2, 4, 1, n(1)),
                (2, 5, 2, n(1)),
                (3, 4, 2, n(1)),
                (3, 5, 1, h),
                (3, 5, 3, n(1)),
            ]);
        }
        "g5_33" => {
            // the printed γ·e4 in [e3,e5] violates Jacobi; γ·e3 is the consistent row
            t.extend([(1, 4, 1, n(1)), (2, 5, 2, n(1)), (3, 4, 3, b), (3, 5, 3, g)]);
        }
        "g5_34" => {
            t.extend([
                (1, 4, 1, a),
                (1, 5, 1, n(1)),
                (2, 4, 2, n(1)),
                (3, 4, 3, n(1)),
                (3, 5, 2, n(1)),
            ]);
        }
        "g5_35" => {
            t.extend([
                (1, 4, 1, b),
                (1, 5, 1, a),
                (2, 4, 2, n(1)),
                (2, 5, 3, n(-1)),
                (3, 4, 3, n(1)),
                (3, 5, 2, n(1)),
            ]);
        }
        "g5_35_ext" => {
            dim = 6;
            t.extend([
                (1, 4, 1, b.clone()),
                (1, 5, 1, a.clone()),
                (2, 4, 2, n(1)),
                (2, 5, 3, n(-1)),
                (3, 4, 3, n(1)),
                (3, 5, 2, n(1)),
                (4, 6, 6, b - n(2)),
                (5, 6, 6, a),
            ]);
        }
        "g5_36" => {
            t.extend([
                (1, 4, 1, n(1)),
                (2, 3, 1, n(1)),
                (2, 4, 2, n(1)),
                (2, 5, 2, n(-1)),
                (3, 5, 3, n(1)),
            ]);
        }
        "g5_37" => {
            t.extend([
                (1, 4, 1, n(2)),
                (2, 3, 1, n(1)),
                (2, 4, 2, n(1)),
                (2, 5, 3, n(-1)),
                (3, 4, 3, n(1)),
                (3, 5, 2, n(1)),
            ]);
        }
        "g5_38" => {
            t.extend([(1, 4, 1, n(1)), (2, 5, 2, n(1)), (4, 5, 3, n(1))]);
        }
        "g5_39" => {
            t.extend([
                (1, 4, 1, n(1)),
                (1, 5, 2, n(-1)),
                (2, 4, 2, n(1)),
                (2, 5, 1, n(1)),
                (4, 5, 3, n(1)),
            ]);
        }
        "su2_g2" => {
            t.extend([(1, 2, 3, n(1)), (1, 3, 2, n(-1)), (2, 3, 1, n(1)), (4, 5, 4, n(1))]);
        }
        "sl2_g2" => {
            t.extend([(1, 2, 2, n(2)), (1, 3, 3, n(-2)), (2, 3, 1, n(1)), (4, 5, 4, n(1))]);
        }
        "su2_sl2" => {
            dim = 6;
            t.extend([
                (1, 2, 3, n(1)),
                (1, 3, 2, n(-1)),
                (2, 3, 1, n(1)),
                (4, 5, 4, n(1)),
                (4, 6, 5, n(2)),
                (5, 6, 6, n(1)),
            ]);
        }
        _ => unreachable!("checked by is_known_algebra"),
    }
    Ok(StructureConstants::from_triples(dim, &t))
}

fn check_constraints(name: &str, v: &dyn Fn(&str) -> f64) -> Result<(), LieError> {
    let fail = |message: String| {
        Err(LieError::Constraint {
            algebra: name.to_string(),
            message,
        })
    };
    let uses = |p: &str| algebra_param_names(name).contains(&p);
    for p in algebra_param_names(name) {
        if !v(p).is_finite() {
            return fail(format!("{p} must be finite"));
        }
    }
    match name {
        "g5_19" | "g5_23" | "g5_25" if v("beta") == 0.0 => fail("beta != 0 required".into()),
        "g5_24" | "g5_26" if v("eps").abs() != 1.0 => fail(format!("eps = ±1 required, got {}", v("eps"))),
        "g5_32" if ![-1.0, 0.0, 1.0].contains(&v("h")) => {
            fail(format!("h must be one of -1, 0, 1, got {}", v("h")))
        }
        _ if uses("eps") && v("eps").abs() != 1.0 => fail("eps = ±1 required".into()),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(n: usize, i: usize) -> Vec<f64> {
        let mut v = vec![0.0; n];
        v[i - 1] = 1.0;
        v
    }

    #[test]
    fn g5_brackets_match_table() {
        let g = table_algebra("g5", &AlgebraParams::new()).unwrap();
        assert_eq!(g.bracket(&unit(5, 2), &unit(5, 3)).unwrap(), vec![0.0, 0.0, 2.0, 0.0, 0.0]);
        assert_eq!(g.bracket(&unit(5, 1), &unit(5, 3)).unwrap(), vec![0.0, -1.0, 0.0, 0.0, 0.0]);
        assert_eq!(g.records().len(), 7);
        assert_eq!(g.jacobi_defect(), 0.0);
    }

    #[test]
    fn g5_30_with_h_one() {
        let mut p = AlgebraParams::new();
        p.insert("h".into(), 1.0);
        let g = table_algebra("g5_30", &p).unwrap();
        assert_eq!(g.basis_bracket(0, 4), vec![3.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(g.basis_bracket(1, 4), vec![0.0, 2.0, 0.0, 0.0, 0.0]);
        assert_eq!(g.basis_bracket(3, 4), vec![0.0, 0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn abelian_is_zero() {
        let g = table_algebra("abelian_4", &AlgebraParams::new()).unwrap();
        assert_eq!(g.dim(), 4);
        assert!(g.records().is_empty());
    }

    #[test]
    fn bracket_is_antisymmetric_and_checks_dimension() {
        let g = table_algebra("g5_37", &AlgebraParams::new()).unwrap();
        let x = vec![0.3, -1.0, 2.0, 0.5, 0.25];
        assert!(g.bracket(&x, &x).unwrap().iter().all(|c| c.abs() < 1e-15));
        assert!(matches!(g.bracket(&x, &[1.0]), Err(LieError::Dimension { .. })));
    }

    #[test]
    fn hand_computed_jacobi_defect() {
        let sc = StructureConstants::from_triples(3, &[(1, 2, 3, 1.0), (1, 3, 1, 1.0)]);
        assert_eq!(sc.jacobi_defect(), 1.0);
    }

    #[test]
    fn constraint_violations() {
        let mut p = AlgebraParams::new();
        p.insert("beta".into(), 0.0);
        assert!(matches!(table_algebra("g5_19", &p), Err(LieError::Constraint { .. })));
        let mut p = AlgebraParams::new();
        p.insert("eps".into(), 0.5);
        assert!(matches!(table_algebra("g5_24", &p), Err(LieError::Constraint { .. })));
        let mut p = AlgebraParams::new();
        p.insert("h".into(), 0.5);
        assert!(matches!(table_algebra("g5_32", &p), Err(LieError::Constraint { .. })));
        let mut p = AlgebraParams::new();
        p.insert("delta".into(), 1.0);
        assert!(matches!(table_algebra("g5", &p), Err(LieError::UnknownParam(_))));
        assert!(matches!(
            table_algebra("g7_1", &AlgebraParams::new()),
            Err(LieError::UnknownAlgebra { .. })
        ));
    }

    #[test]
    fn rational_and_float_encodings_agree() {
        for name in known_algebras().iter().filter(|n| *n != "abelian_n") {
            for p in parameter_grid(name) {
                let f = table_algebra(name, &p).unwrap();
                let q = table_algebra_exact(name, &p).unwrap();
                assert_eq!(q.to_f64(), f, "{name} {p:?}");
            }
        }
    }

    #[test]
    fn fingerprints_of_reference_algebras() {
        let a = table_algebra("abelian_5", &AlgebraParams::new()).unwrap().fingerprint().unwrap();
        assert_eq!((a.center_dim, a.derived_dim, a.solvable, a.nilpotent), (5, 0, true, true));
        let g = table_algebra("g5", &AlgebraParams::new()).unwrap().fingerprint().unwrap();
        assert!(!g.solvable);
        assert!(*g.derived_series.last().unwrap() > 0);
        let g37 = table_algebra("g5_37", &AlgebraParams::new()).unwrap().fingerprint().unwrap();
        assert!(g37.solvable);
        assert_eq!(g37.derived_dim, 3);
    }

    #[test]
    fn fingerprint_rejects_jacobi_violation() {
        let sc = StructureConstants::from_triples(3, &[(1, 2, 3, 1.0), (1, 3, 1, 1.0)]);
        assert!(matches!(sc.fingerprint(), Err(LieError::Jacobi(_))));
    }

    #[test]
    fn subspace_predicates() {
        let g19 = table_algebra("g5_19", &AlgebraParams::new()).unwrap();
        let h1 = Subspace::coordinate(5, &[1, 2, 4]);
        assert!(is_abelian(&g19, &h1) && is_ideal(&g19, &h1));
        let g = table_algebra("g5", &AlgebraParams::new()).unwrap();
        let s = Subspace::coordinate(5, &[2, 3]);
        assert!(!is_abelian(&g, &s));
        assert!(is_subalgebra(&g, &s));
        let ab = table_algebra("abelian_5", &AlgebraParams::new()).unwrap();
        let any = Subspace::new(5, vec![vec![1.0, 2.0, 0.0, 0.0, 1.0]]).unwrap();
        assert!(is_abelian(&ab, &any) && is_subalgebra(&ab, &any) && is_ideal(&ab, &any));
    }

    #[test]
    fn lemma1_examples() {
        let sc = StructureConstants::from_triples(5, &[(4, 5, 1, 1.0)]);
        assert!(lemma1_degeneracy_forced(&sc, &[]));
        let g = table_algebra("g5", &AlgebraParams::new()).unwrap();
        assert!(!lemma1_degeneracy_forced(&g, &[]));
        let mut p = AlgebraParams::new();
        p.insert("beta".into(), 0.5);
        p.insert("gamma".into(), -1.0);
        let g33 = table_algebra("g5_33", &p).unwrap();
        assert!(!lemma1_degeneracy_forced(&g33, &[]));
    }

    #[test]
    fn records_round_trip() {
        let g = table_algebra("g5_26", &AlgebraParams::new()).unwrap();
        let back = StructureConstants::<f64>::from_records(5, &g.records()).unwrap();
        assert_eq!(back, g);
        let bad = [Record { i: 2, j: 1, k: 1, value: 1.0 }];
        assert!(StructureConstants::<f64>::from_records(5, &bad).is_err());
    }
}
