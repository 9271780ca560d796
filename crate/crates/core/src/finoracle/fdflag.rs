use num_traits::Zero;

use super::space::{FdLieAlgebra, MatSpace};
use crate::exactnum::{rank_of, span_basis, Matrix, Rational};

/// Annihilator in `Q^n` (row functionals) of the span of `basis`.
pub fn annihilator_of(basis: &[Vec<Rational>], n: usize) -> Vec<Vec<Rational>> {
    if basis.is_empty() {
        return Matrix::identity(n).to_rows();
    }
    Matrix::from_rows(n, basis.to_vec()).kernel()
}

/// `{X ∈ gl_n : phi(X v) = 0}` over all listed pairs `(v, phi)`.
fn vanishing_space(n: usize, pairs: impl IntoIterator<Item = (Vec<Rational>, Vec<Rational>)>) -> FdLieAlgebra {
    let mut eqs: Vec<Vec<Rational>> = Vec::new();
    for (v, phi) in pairs {
        let mut row = vec![Rational::zero(); n * n];
        for a in 0..n {
            if phi[a].is_zero() {
                continue;
            }
            for b in 0..n {
                if !v[b].is_zero() {
                    row[a * n + b] = &phi[a] * &v[b];
                }
            }
        }
        eqs.push(row);
    }
    FdLieAlgebra::gl(n).solution_space(eqs)
}

/// Brute-force `{X ∈ gl_n : X A ⊆ A, X^T B ⊆ B}` for subspaces `A` of
/// `Q^n` and `B` of the dual, each given by a spanning set.
pub fn preserving_subalgebra(n: usize, v_spaces: &[Vec<Vec<Rational>>], vstar_spaces: &[Vec<Vec<Rational>>]) -> FdLieAlgebra {
    let mut pairs = Vec::new();
    for a in v_spaces {
        for phi in annihilator_of(a, n) {
            pairs.extend(a.iter().map(|v| (v.clone(), phi.clone())));
        }
    }
    for b in vstar_spaces {
        for u in annihilator_of(b, n) {
            pairs.extend(b.iter().map(|psi| (u.clone(), psi.clone())));
        }
    }
    vanishing_space(n, pairs)
}

/// Dense basis vectors of a subspace of `Q^n`.
pub type Basis = Vec<Vec<Rational>>;

/// Span of the rank-one matrices `v psi^T` with `v ∈ A`, `psi ∈ B`, summed
/// over the listed pairs `(A, B)`.
pub fn tensor_span(n: usize, terms: &[(Basis, Basis)]) -> MatSpace {
    let mut mats = Vec::new();
    for (a, b) in terms {
        for v in a {
            for psi in b {
                let mut m = Matrix::zeros(n, n);
                for i in 0..n {
                    if v[i].is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        m[(i, j)] = &v[i] * &psi[j];
                    }
                }
                mats.push(m);
            }
        }
    }
    MatSpace::span(n, &mats)
}

/// Chain `0 = F_0 ⊂ F_1 ⊂ ... ⊂ F_r = Q^n` of subspaces of column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FdFlag {
    pub n: usize,
    /// Reduced echelon bases, strictly increasing.
    pub chain: Vec<Vec<Vec<Rational>>>,
}

impl FdFlag {
    pub fn dims(&self) -> Vec<usize> {
        self.chain.iter().map(Vec::len).collect()
    }

    /// `{X : X F_i ⊆ F_i}`.
    pub fn stabilizer(&self) -> FdLieAlgebra {
        preserving_subalgebra(self.n, &self.chain, &[])
    }

    /// `{X : X F_i ⊆ F_{i-1}}`.
    pub fn nil_stabilizer(&self) -> FdLieAlgebra {
        let n = self.n;
        let mut pairs = Vec::new();
        for i in 0..self.chain.len() {
            let target: &[Vec<Rational>] = if i > 0 { &self.chain[i - 1] } else { &[] };
            for phi in annihilator_of(target, n) {
                pairs.extend(self.chain[i].iter().map(|v| (v.clone(), phi.clone())));
            }
        }
        vanishing_space(n, pairs)
    }

    /// `sum_i F_i ⊗ F_i^⊥`.
    pub fn nil_formula(&self) -> MatSpace {
        let terms: Vec<_> = self.chain.iter().map(|f| (f.clone(), annihilator_of(f, self.n))).collect();
        tensor_span(self.n, &terms)
    }

    /// Annihilators `F_r^⊥ ⊂ ... ⊂ F_0^⊥` in the dual, increasing.
    pub fn dual(&self) -> FdFlag {
        FdFlag { n: self.n, chain: self.chain.iter().rev().map(|f| span_basis(&annihilator_of(f, self.n), self.n)).collect() }
    }

    /// Refinement to a complete flag, stepping through each quotient in
    /// basis order.
    pub fn complete(&self) -> FdFlag {
        let n = self.n;
        let mut chain = vec![Vec::new()];
        let mut cur: Vec<Vec<Rational>> = Vec::new();
        for f in self.chain.iter().skip(1) {
            for v in f {
                let mut t = cur.clone();
                t.push(v.clone());
                if rank_of(&t, n) > cur.len() {
                    cur = span_basis(&t, n);
                    chain.push(cur.clone());
                }
            }
        }
        FdFlag { n, chain }
    }
}
