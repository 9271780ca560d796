use super::{Matrix, Poly};
use crate::error::{Error, Result};

/// Semisimple and nilpotent parts of a square matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanParts {
    pub ss: Matrix,
    pub nil: Matrix,
    /// `ss = poly(m)`.
    pub poly: Poly,
}

/// Polynomial `s` with `s(m)` the semisimple part of `m`.
///
/// Newton iteration on the squarefree part `p` of the characteristic
/// polynomial `chi`: `s <- s - p(s) / p'(s) mod chi`, starting from `s = t`.
/// Each step doubles the power of `p` dividing `p(s)`.
pub fn jordan_chevalley_poly(m: &Matrix) -> Result<Poly> {
    let chi = m.charpoly()?;
    if chi.degree() == Some(0) {
        return Ok(Poly::zero());
    }
    let p = chi.squarefree_part();
    let dp = p.derivative();
    let mut s = Poly::x().rem(&chi);
    loop {
        let ps = p.compose_mod(&s, &chi);
        if ps.is_zero() {
            return Ok(s);
        }
        let dps = dp.compose_mod(&s, &chi);
        let inv = dps
            .inv_mod(&chi)
            .expect("derivative of squarefree part is a unit modulo the characteristic polynomial");
        s = s.sub(&ps.mul(&inv)).rem(&chi);
    }
}

/// Jordan–Chevalley decomposition `m = ss + nil` over the rationals.
pub fn jordan_chevalley(m: &Matrix) -> Result<JordanParts> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    let poly = jordan_chevalley_poly(m)?;
    let ss = poly.eval_matrix(m);
    let nil = m - &ss;
    Ok(JordanParts { ss, nil, poly })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nilpotent_input() {
        let m = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        let jp = jordan_chevalley(&m).unwrap();
        assert!(jp.ss.is_zero());
        assert_eq!(jp.nil, m);
    }

    #[test]
    fn unipotent_block() {
        let m = Matrix::from_i64(&[&[1, 1], &[0, 1]]);
        let jp = jordan_chevalley(&m).unwrap();
        assert_eq!(jp.ss, Matrix::identity(2));
        assert_eq!(jp.nil, Matrix::from_i64(&[&[0, 1], &[0, 0]]));
    }

    #[test]
    fn rotation_is_semisimple() {
        let m = Matrix::from_i64(&[&[0, 1], &[-1, 0]]);
        let jp = jordan_chevalley(&m).unwrap();
        assert_eq!(jp.ss, m);
        assert!(jp.nil.is_zero());
    }

    #[test]
    fn irrational_eigenvalues_with_nilpotent_part() {
        // Companion of t^2 - 2, doubled into a Jordan-like block.
        let c = Matrix::from_i64(&[&[0, 2], &[1, 0]]);
        let mut m = c.direct_sum(&c);
        m[(0, 2)] = super::super::q(1);
        m[(1, 3)] = super::super::q(1);
        let jp = jordan_chevalley(&m).unwrap();
        assert_eq!(&jp.ss + &jp.nil, m);
        assert!(jp.ss.commutator(&jp.nil).is_zero());
        assert!(jp.nil.is_nilpotent());
        assert!(jp.ss.minpoly().unwrap().is_squarefree());
        assert!(!jp.nil.is_zero());
    }

    #[test]
    fn rejects_non_square() {
        assert!(matches!(jordan_chevalley(&Matrix::zeros(1, 2)), Err(Error::NonSquare { .. })));
    }
}
