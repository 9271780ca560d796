//! Exact rational arithmetic and dense linear algebra.
//!
//! Everything above this module computes over `Rational`; nothing here uses
//! floating point.

mod factor;
mod jordan;
mod matrix;
mod poly;

pub use factor::{factor_over_q, squarefree_decomposition};
pub use jordan::{jordan_chevalley, jordan_chevalley_poly, JordanParts};
pub use matrix::Matrix;
pub use poly::Poly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Arbitrary-precision rational number, always stored reduced with a
/// positive denominator.
pub type Rational = BigRational;

/// Shorthand for the rational `n / 1`.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for the rational `n / d`. Panics if `d == 0`.
pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats as `p/q`, omitting `/q` when `q = 1`.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p`, `-p`, `p/q`. Returns `None` on malformed input or a zero
/// denominator.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
    }
}

/// Dot product of two equal-length rational slices.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub(crate) fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}


/// Basis of the span of `vectors` (reduced row echelon rows).
pub fn span_basis(vectors: &[Vec<Rational>], dim: usize) -> Vec<Vec<Rational>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_rows(dim, vectors.to_vec());
    let (r, piv) = m.rref();
    (0..piv.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Rank of a list of vectors of length `dim`.
pub fn rank_of(vectors: &[Vec<Rational>], dim: usize) -> usize {
    span_basis(vectors, dim).len()
}

/// Basis of the intersection of two subspaces of `Q^dim` given by spanning
/// sets.
pub fn intersect_spans(a: &[Vec<Rational>], b: &[Vec<Rational>], dim: usize) -> Vec<Vec<Rational>> {
    let a = span_basis(a, dim);
    let b = span_basis(b, dim);
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // Solve sum x_i a_i - sum y_j b_j = 0.
    let cols = a.len() + b.len();
    let mut m = Matrix::zeros(dim, cols);
    for (j, v) in a.iter().enumerate() {
        for i in 0..dim {
            m[(i, j)] = v[i].clone();
        }
    }
    for (j, v) in b.iter().enumerate() {
        for i in 0..dim {
            m[(i, a.len() + j)] = -v[i].clone();
        }
    }
    let ker = m.kernel();
    let out: Vec<Vec<Rational>> = ker
        .iter()
        .map(|k| {
            let mut w = vec![Rational::zero(); dim];
            for (j, v) in a.iter().enumerate() {
                if !k[j].is_zero() {
                    for i in 0..dim {
                        w[i] += &k[j] * &v[i];
                    }
                }
            }
            w
        })
        .collect();
    span_basis(&out, dim)
}

/// True if `v` lies in the span of `basis`.
pub fn in_span(basis: &[Vec<Rational>], v: &[Rational]) -> bool {
    solve_combination(basis, v).is_some()
}

/// Coefficients `c` with `sum c_i basis_i = v`, if they exist.
pub fn solve_combination(basis: &[Vec<Rational>], v: &[Rational]) -> Option<Vec<Rational>> {
    let dim = v.len();
    if basis.is_empty() {
        return if is_zero_vec(v) { Some(Vec::new()) } else { None };
    }
    let mut m = Matrix::zeros(dim, basis.len());
    for (j, b) in basis.iter().enumerate() {
        for i in 0..dim {
            m[(i, j)] = b[i].clone();
        }
    }
    m.solve(v)
}
