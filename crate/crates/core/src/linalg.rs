//! Small dense linear-algebra helpers shared by the algebraic modules.

use std::fmt::Debug;
use std::ops::Neg;

use num_rational::Ratio;
use num_traits::{Num, ToPrimitive, Zero};

/// Relative rank tolerance for floating point elimination.
pub const RANK_TOL: f64 = 1e-10;

/// Field of coefficients for structure constants and elimination: floating
/// point with a tolerance, or exact rationals.
pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> + Send + Sync + 'static {
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    /// Zero test relative to the magnitude `scale` of the data at hand.
    fn negligible(&self, scale: f64) -> bool;
    fn from_int(n: i64) -> Self {
        Self::from_f64(n as f64)
    }
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn negligible(&self, scale: f64) -> bool {
        self.abs() <= RANK_TOL * scale.max(1.0)
    }
}

impl Scalar for f32 {
    fn from_f64(x: f64) -> Self {
        x as f32
    }
    fn to_f64(&self) -> f64 {
        *self as f64
    }
    fn negligible(&self, scale: f64) -> bool {
        (self.abs() as f64) <= 1e-5 * scale.max(1.0)
    }
}

impl Scalar for Ratio<i64> {
    /// Exact for dyadic and short decimal inputs such as `0.5` or `-2`.
    fn from_f64(x: f64) -> Self {
        Ratio::approximate_float(x).unwrap_or_else(|| panic!("{x} has no rational approximation"))
    }
    fn from_int(n: i64) -> Self {
        Ratio::from_integer(n)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
}

/// Reduced row echelon form; returns the nonzero rows (a basis of the row span).
pub fn row_basis<S: Scalar>(rows: &[Vec<S>]) -> Vec<Vec<S>> {
    row_basis_at_scale(rows, 0.0)
}

/// [`row_basis`] with zero tests relative to at least `reference`, for rows
/// computed from larger data whose true entries may all cancel.
pub fn row_basis_at_scale<S: Scalar>(rows: &[Vec<S>], reference: f64) -> Vec<Vec<S>> {
    let Some(first) = rows.first() else {
        return Vec::new();
    };
    let ncols = first.len();
    let scale = rows
        .iter()
        .flat_map(|r| r.iter().map(Scalar::magnitude))
        .fold(reference, f64::max);
    let mut m: Vec<Vec<S>> = rows.to_vec();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == m.len() {
            break;
        }
        let (piv, best) = (rank..m.len())
            .map(|r| (r, m[r][col].magnitude()))
            .fold((rank, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if m[piv][col].negligible(scale) || best < 0.0 {
            for row in m.iter_mut().skip(rank) {
                row[col] = S::zero();
            }
            continue;
        }
        m.swap(rank, piv);
        let p = m[rank][col].clone();
        for x in m[rank].iter_mut() {
            *x = x.clone() / p.clone();
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = x.clone() - f.clone() * y.clone();
            }
        }
        rank += 1;
    }
    m.truncate(rank);
    m
}

pub fn rank<S: Scalar>(rows: &[Vec<S>]) -> usize {
    row_basis(rows).len()
}

/// Orthonormal basis (modified Gram-Schmidt, two passes) of the span of `vs`.
pub fn orthonormal_basis(vs: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let scale = vs
        .iter()
        .map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vs {
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &out {
                let d: f64 = r.iter().zip(q).map(|(a, b)| a * b).sum();
                for (x, y) in r.iter_mut().zip(q) {
                    *x -= d * y;
                }
            }
        }
        let n = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > RANK_TOL * scale.max(1.0) {
            out.push(r.into_iter().map(|x| x / n).collect());
        }
    }
    out
}

/// Max-norm distance from `v` to the span with orthonormal basis `q`.
pub fn residual_to_span(v: &[f64], q: &[Vec<f64>]) -> f64 {
    let mut r = v.to_vec();
    for _ in 0..2 {
        for b in q {
            let d: f64 = r.iter().zip(b).map(|(a, c)| a * c).sum();
            for (x, y) in r.iter_mut().zip(b) {
                *x -= d * y;
            }
        }
    }
    r.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_rank() {
        let rows = vec![vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0], vec![0.0, 1.0, 1.0]];
        assert_eq!(rank(&rows), 2);
    }

    #[test]
    fn exact_rank_over_rationals() {
        let r = |n, d| Ratio::new(n, d);
        let rows = vec![
            vec![r(1, 3), r(1, 2), r(0, 1)],
            vec![r(2, 3), r(1, 1), r(0, 1)],
            vec![r(0, 1), r(0, 1), r(1, 7)],
        ];
        assert_eq!(rank(&rows), 2);
    }

    #[test]
    fn span_residual() {
        let q = orthonormal_basis(&[vec![1.0, 1.0, 0.0], vec![2.0, 2.0, 0.0]]);
        assert_eq!(q.len(), 1);
        assert!(residual_to_span(&[3.0, 3.0, 0.0], &q) < 1e-15);
        assert!((residual_to_span(&[1.0, 0.0, 0.0], &q) - 0.5).abs() < 1e-15);
    }
}
