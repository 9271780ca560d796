use super::{Model, Side, Vector};
use crate::exactnum::{rank_of, Matrix, Rational};

/// Finite level `n` of a model: `V_n` spanned by `e_0..e_{n-1}` and the
/// `V` augmentations, `V*_n` likewise, with the restricted pairing. The
/// restricted pairing may be degenerate; its radicals are reported.
#[derive(Clone, Debug)]
pub struct TruncatedModel {
    pub n: usize,
    /// Rows index `V_n`, columns index `V*_n`, both in dense coordinates
    /// (basis first, then augmentations).
    pub pairing: Matrix,
    pub left_radical: Vec<Vec<Rational>>,
    pub right_radical: Vec<Vec<Rational>>,
}

impl TruncatedModel {
    pub fn new(model: &Model, n: usize) -> Self {
        let kv = model.n_augs(Side::V);
        let kw = model.n_augs(Side::VStar);
        let rows: Vec<Vector> = (0..n)
            .map(|i| Vector::basis_unit(Side::V, i, kv))
            .chain((0..kv).map(|k| Vector::aug_unit(Side::V, k, kv)))
            .collect();
        let cols: Vec<Vector> = (0..n)
            .map(|j| Vector::basis_unit(Side::VStar, j, kw))
            .chain((0..kw).map(|l| Vector::aug_unit(Side::VStar, l, kw)))
            .collect();
        let pairing = Matrix::from_rows(
            cols.len(),
            rows.iter().map(|r| cols.iter().map(|c| model.pair_unchecked(r, c)).collect()).collect(),
        );
        let right_radical = pairing.kernel();
        let left_radical = pairing.transpose().kernel();
        TruncatedModel { n, pairing, left_radical, right_radical }
    }

    pub fn dim(&self, side: Side) -> usize {
        match side {
            Side::V => self.pairing.rows(),
            Side::VStar => self.pairing.cols(),
        }
    }

    pub fn radical(&self, side: Side) -> &[Vec<Rational>] {
        match side {
            Side::V => &self.left_radical,
            Side::VStar => &self.right_radical,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        !self.left_radical.is_empty() || !self.right_radical.is_empty()
    }
}

/// Annihilator, inside the truncated other side, of the span of `basis`
/// (dense vectors on `side`).
pub fn finite_perp(t: &TruncatedModel, side: Side, basis: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let p = match side {
        Side::V => t.pairing.clone(),
        Side::VStar => t.pairing.transpose(),
    };
    if basis.is_empty() {
        return Matrix::identity(p.cols()).to_rows();
    }
    let u = Matrix::from_rows(p.rows(), basis.to_vec());
    (&u * &p).kernel()
}

/// Whether `a` and `b` span the same space after adding `radical`.
pub fn same_span_modulo(a: &[Vec<Rational>], b: &[Vec<Rational>], radical: &[Vec<Rational>], dim: usize) -> bool {
    let mut ar: Vec<Vec<Rational>> = a.to_vec();
    ar.extend(radical.iter().cloned());
    let mut br: Vec<Vec<Rational>> = b.to_vec();
    br.extend(radical.iter().cloned());
    let ra = rank_of(&ar, dim);
    let rb = rank_of(&br, dim);
    let mut all = ar;
    all.extend(br);
    ra == rb && rank_of(&all, dim) == ra
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::q;
    use crate::pairedspace::PairedSpaceModel;

    #[test]
    fn plain_truncation_is_identity() {
        let t = TruncatedModel::new(&PairedSpaceModel::plain(), 3);
        assert_eq!(t.pairing, Matrix::identity(3));
        assert!(!t.is_degenerate());
    }

    #[test]
    fn dense_line_truncation() {
        let t = TruncatedModel::new(&PairedSpaceModel::dense_line(), 2);
        assert_eq!(t.pairing, Matrix::from_i64(&[&[1, 0], &[0, 1], &[1, 1]]));
        assert_eq!(t.left_radical.len(), 1);
        assert_eq!(t.left_radical[0][2], q(1));
    }
}
