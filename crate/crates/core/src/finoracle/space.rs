use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactnum::{intersect_spans, Matrix, Rational};

/// Subspace of `n x n` matrices, stored as reduced row echelon rows of the
/// flattened matrices; this is canonical, so equality is structural.
#[derive(Clone, PartialEq, Eq)]
pub struct MatSpace {
    n: usize,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl MatSpace {
    pub fn zero(n: usize) -> Self {
        MatSpace { n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn span(n: usize, mats: &[Matrix]) -> Self {
        Self::from_flat(n, mats.iter().map(|m| m.flat().to_vec()).collect())
    }

    pub(crate) fn from_flat(n: usize, flat: Vec<Vec<Rational>>) -> Self {
        let flat: Vec<Vec<Rational>> = flat.into_iter().filter(|v| !v.iter().all(Zero::is_zero)).collect();
        if flat.is_empty() {
            return Self::zero(n);
        }
        let (r, pivots) = Matrix::from_rows(n * n, flat).rref();
        let rows = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        MatSpace { n, rows, pivots }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn basis(&self) -> Vec<Matrix> {
        self.rows.iter().map(|r| Matrix::from_flat(self.n, r)).collect()
    }

    pub(crate) fn flat_rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Coordinates of `m` in [`basis`](Self::basis), if `m` lies in the
    /// space.
    pub fn coords(&self, m: &Matrix) -> Option<Vec<Rational>> {
        let f = m.flat();
        let c: Vec<Rational> = self.pivots.iter().map(|&p| f[p].clone()).collect();
        let mut rest = f.to_vec();
        for (ci, row) in c.iter().zip(&self.rows) {
            if ci.is_zero() {
                continue;
            }
            for (x, y) in rest.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= ci * y;
                }
            }
        }
        rest.iter().all(Zero::is_zero).then_some(c)
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.coords(m).is_some()
    }

    pub fn contains_space(&self, o: &MatSpace) -> bool {
        o.basis().iter().all(|m| self.contains(m))
    }

    pub fn sum(&self, o: &MatSpace) -> MatSpace {
        let mut all = self.rows.clone();
        all.extend(o.rows.iter().cloned());
        Self::from_flat(self.n, all)
    }

    pub fn intersection(&self, o: &MatSpace) -> MatSpace {
        Self::from_flat(self.n, intersect_spans(&self.rows, &o.rows, self.n * self.n))
    }

    /// `sum c_i basis_i`.
    pub fn element(&self, c: &[Rational]) -> Matrix {
        let mut f = vec![Rational::zero(); self.n * self.n];
        for (ci, row) in c.iter().zip(&self.rows) {
            if ci.is_zero() {
                continue;
            }
            for (x, y) in f.iter_mut().zip(row) {
                *x += ci * y;
            }
        }
        Matrix::from_flat(self.n, &f)
    }

    /// Closure under the bracket.
    pub fn is_subalgebra(&self) -> bool {
        let b = self.basis();
        (0..b.len()).all(|i| (i + 1..b.len()).all(|j| self.contains(&b[i].commutator(&b[j]))))
    }
}

impl fmt::Debug for MatSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatSpace(n = {}, dim = {})", self.n, self.dim())
    }
}

/// Finite-dimensional Lie algebra of `n x n` rational matrices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FdLieAlgebra {
    space: MatSpace,
}

impl std::ops::Deref for FdLieAlgebra {
    type Target = MatSpace;
    fn deref(&self) -> &MatSpace {
        &self.space
    }
}

impl FdLieAlgebra {
    /// Validates closure under the bracket.
    pub fn from_space(space: MatSpace) -> Result<Self> {
        if !space.is_subalgebra() {
            return Err(Error::Invalid("span is not closed under the bracket".into()));
        }
        Ok(FdLieAlgebra { space })
    }

    pub fn from_basis(n: usize, mats: &[Matrix]) -> Result<Self> {
        for m in mats {
            if m.rows() != n || m.cols() != n {
                return Err(Error::Invalid(format!("expected {n} x {n} matrices")));
            }
        }
        Self::from_space(MatSpace::span(n, mats))
    }

    pub(crate) fn trusted(space: MatSpace) -> Self {
        debug_assert!(space.is_subalgebra());
        FdLieAlgebra { space }
    }

    pub fn zero(n: usize) -> Self {
        FdLieAlgebra { space: MatSpace::zero(n) }
    }

    pub fn gl(n: usize) -> Self {
        let mats: Vec<Matrix> = (0..n).flat_map(|i| (0..n).map(move |j| Matrix::unit(n, i, j))).collect();
        Self::trusted(MatSpace::span(n, &mats))
    }

    pub fn sl(n: usize) -> Self {
        let mut mats: Vec<Matrix> =
            (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| Matrix::unit(n, i, j))).collect();
        for i in 1..n {
            mats.push(&Matrix::unit(n, i - 1, i - 1) - &Matrix::unit(n, i, i));
        }
        Self::trusted(MatSpace::span(n, &mats))
    }

    /// Block upper triangular matrices for the given block sizes.
    pub fn block_upper(sizes: &[usize]) -> Self {
        let n: usize = sizes.iter().sum();
        let mut block = Vec::new();
        for (b, &s) in sizes.iter().enumerate() {
            block.extend(std::iter::repeat_n(b, s));
        }
        let mats: Vec<Matrix> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| block[i] <= block[j])
            .map(|(i, j)| Matrix::unit(n, i, j))
            .collect();
        Self::trusted(MatSpace::span(n, &mats))
    }

    /// Upper triangular matrices.
    pub fn borel(n: usize) -> Self {
        Self::block_upper(&vec![1; n])
    }

    /// Diagonal matrices.
    pub fn diagonal(n: usize) -> Self {
        let mats: Vec<Matrix> = (0..n).map(|i| Matrix::unit(n, i, i)).collect();
        Self::trusted(MatSpace::span(n, &mats))
    }

    /// Block diagonal embedding of `a ⊕ b`.
    pub fn direct_sum(a: &FdLieAlgebra, b: &FdLieAlgebra) -> Self {
        let (na, nb) = (a.n(), b.n());
        let mut mats: Vec<Matrix> = a.basis().iter().map(|m| m.direct_sum(&Matrix::zeros(nb, nb))).collect();
        mats.extend(b.basis().iter().map(|m| Matrix::zeros(na, na).direct_sum(m)));
        Self::trusted(MatSpace::span(na + nb, &mats))
    }

    pub fn space(&self) -> &MatSpace {
        &self.space
    }

    pub fn intersect(&self, o: &FdLieAlgebra) -> FdLieAlgebra {
        FdLieAlgebra { space: self.space.intersection(&o.space) }
    }

    /// `ad x` on `self`, for `x` normalizing `self`; column `j` holds the
    /// coordinates of `[x, b_j]`.
    pub fn ad(&self, x: &Matrix) -> Matrix {
        let b = self.basis();
        let d = b.len();
        let mut m = Matrix::zeros(d, d);
        for (j, bj) in b.iter().enumerate() {
            let c = self.coords(&x.commutator(bj)).expect("x normalizes the algebra");
            for i in 0..d {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    /// Killing form Gram matrix on the basis.
    pub fn killing(&self) -> Matrix {
        let ads: Vec<Matrix> = self.basis().iter().map(|x| self.ad(x)).collect();
        let d = ads.len();
        let mut k = Matrix::zeros(d, d);
        for i in 0..d {
            for j in i..d {
                let mut t = Rational::zero();
                for p in 0..d {
                    for q in 0..d {
                        let a = &ads[i][(p, q)];
                        if !a.is_zero() {
                            let b = &ads[j][(q, p)];
                            if !b.is_zero() {
                                t += a * b;
                            }
                        }
                    }
                }
                k[(i, j)] = t.clone();
                k[(j, i)] = t;
            }
        }
        k
    }

    /// `[a, b]` as a span, for subspaces of the algebra.
    pub fn bracket_span(a: &MatSpace, b: &MatSpace) -> MatSpace {
        let ab = a.basis();
        let bb = b.basis();
        let mats: Vec<Matrix> = ab.iter().flat_map(|x| bb.iter().map(move |y| x.commutator(y))).collect();
        MatSpace::span(a.n(), &mats)
    }

    /// `[g, g]`.
    pub fn derived(&self) -> FdLieAlgebra {
        FdLieAlgebra { space: Self::bracket_span(&self.space, &self.space) }
    }

    pub fn derived_series(&self) -> Vec<FdLieAlgebra> {
        let mut out = vec![self.clone()];
        loop {
            let d = out.last().unwrap().derived();
            if d.dim() == out.last().unwrap().dim() {
                break;
            }
            out.push(d);
        }
        out
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().unwrap().is_zero()
    }

    /// Lower central series reaches zero.
    pub fn is_nilpotent(&self) -> bool {
        let mut c = self.space.clone();
        loop {
            if c.is_zero() {
                return true;
            }
            let next = Self::bracket_span(&self.space, &c);
            if next.dim() == c.dim() {
                return false;
            }
            c = next;
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.derived().is_zero()
    }

    /// Elements of `self` commuting with every matrix in `set`.
    pub fn centralizer(&self, set: &[Matrix]) -> FdLieAlgebra {
        let b = self.basis();
        if b.is_empty() || set.is_empty() {
            return self.clone();
        }
        let nn = self.n() * self.n();
        let mut eqs: Vec<Vec<Rational>> = Vec::new();
        for s in set {
            let cols: Vec<Matrix> = b.iter().map(|x| x.commutator(s)).collect();
            for p in 0..nn {
                let row: Vec<Rational> = cols.iter().map(|c| c.flat()[p].clone()).collect();
                if row.iter().any(|x| !x.is_zero()) {
                    eqs.push(row);
                }
            }
        }
        self.solution_space(eqs)
    }

    /// Elements `x` of `self` with `[x, h] ⊆ h`.
    pub fn normalizer(&self, h: &MatSpace) -> FdLieAlgebra {
        let b = self.basis();
        if b.is_empty() {
            return self.clone();
        }
        let ann = annihilator(h);
        let mut eqs: Vec<Vec<Rational>> = Vec::new();
        for y in h.basis() {
            let cols: Vec<Matrix> = b.iter().map(|x| x.commutator(&y)).collect();
            for a in &ann {
                eqs.push(cols.iter().map(|c| crate::exactnum::dot(a, c.flat())).collect());
            }
        }
        self.solution_space(eqs)
    }

    /// Elements `sum c_i b_i` whose coefficient vector solves `eqs`.
    pub(crate) fn solution_space(&self, eqs: Vec<Vec<Rational>>) -> FdLieAlgebra {
        let d = self.dim();
        let sols = if eqs.is_empty() {
            Matrix::identity(d).to_rows()
        } else {
            Matrix::from_rows(d, eqs).kernel()
        };
        let mats: Vec<Matrix> = sols.iter().map(|c| self.element(c)).collect();
        FdLieAlgebra { space: MatSpace::span(self.n(), &mats) }
    }
}

/// Coordinates with respect to a fixed list of independent vectors, read
/// off a pivot minor.
pub(crate) struct Coords {
    pivots: Vec<usize>,
    inv: Matrix,
}

impl Coords {
    pub(crate) fn new(basis: &[Vec<Rational>]) -> Self {
        if basis.is_empty() {
            return Coords { pivots: Vec::new(), inv: Matrix::zeros(0, 0) };
        }
        let len = basis[0].len();
        let (_, pivots) = Matrix::from_rows(len, basis.to_vec()).rref();
        assert_eq!(pivots.len(), basis.len(), "basis vectors are independent");
        let d = basis.len();
        let mut minor = Matrix::zeros(d, d);
        for (i, b) in basis.iter().enumerate() {
            for (j, &p) in pivots.iter().enumerate() {
                minor[(i, j)] = b[p].clone();
            }
        }
        let inv = minor.inverse().expect("pivot minor is invertible");
        Coords { pivots, inv }
    }

    /// Coordinates of `v`, assumed to lie in the span.
    pub(crate) fn of(&self, v: &[Rational]) -> Vec<Rational> {
        let d = self.pivots.len();
        let mut out = vec![Rational::zero(); d];
        for (j, &p) in self.pivots.iter().enumerate() {
            if v[p].is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let m = &self.inv[(j, i)];
                if !m.is_zero() {
                    *o += &v[p] * m;
                }
            }
        }
        out
    }
}

/// Linear functionals on flattened matrices vanishing exactly on `s`.
pub(crate) fn annihilator(s: &MatSpace) -> Vec<Vec<Rational>> {
    let nn = s.n() * s.n();
    if s.is_zero() {
        return Matrix::identity(nn).to_rows();
    }
    Matrix::from_rows(nn, s.flat_rows().to_vec()).kernel()
}

/// Smallest subalgebra containing `gens`.
pub fn lie_close(n: usize, gens: &[Matrix]) -> FdLieAlgebra {
    let mut space = MatSpace::span(n, gens);
    let mut frontier = space.basis();
    while !frontier.is_empty() {
        let basis = space.basis();
        let mut new = Vec::new();
        for x in &frontier {
            for y in &basis {
                let c = x.commutator(y);
                if !space.contains(&c) {
                    space = space.sum(&MatSpace::span(n, std::slice::from_ref(&c)));
                    new.push(c);
                }
            }
        }
        frontier = new;
    }
    FdLieAlgebra::trusted(space)
}
