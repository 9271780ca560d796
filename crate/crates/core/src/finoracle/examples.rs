use super::space::{lie_close, FdLieAlgebra, MatSpace};
use crate::exactnum::{q, Matrix};

fn from(n: usize, mats: &[Matrix]) -> FdLieAlgebra {
    FdLieAlgebra::from_basis(n, mats).expect("example is a subalgebra")
}

fn block(m: &Matrix, lo: usize, len: usize) -> Matrix {
    let mut b = Matrix::zeros(len, len);
    for i in 0..len {
        for j in 0..len {
            b[(i, j)] = m[(lo + i, lo + j)].clone();
        }
    }
    b
}

fn embed(m: &Matrix, n: usize, at: usize) -> Matrix {
    let mut out = Matrix::zeros(n, n);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out[(at + i, at + j)] = m[(i, j)].clone();
        }
    }
    out
}

/// `{(A, B) ∈ gl_2 ⊕ gl_2 : tr A = 2 tr B}`.
pub fn trace_ratio_example() -> FdLieAlgebra {
    let sl = FdLieAlgebra::sl(2).basis();
    let mut mats: Vec<Matrix> = sl.iter().map(|x| embed(x, 4, 0)).collect();
    mats.extend(sl.iter().map(|x| embed(x, 4, 2)));
    mats.push(&embed(&Matrix::identity(2).scale(&q(2)), 4, 0) + &embed(&Matrix::identity(2), 4, 2));
    from(4, &mats)
}

/// Block parabolic `{[[A, B], [0, C]]}` of `sl_{2k}` with `k x k` blocks.
fn sl_block_parabolic(k: usize) -> FdLieAlgebra {
    FdLieAlgebra::block_upper(&[k, k]).intersect(&FdLieAlgebra::sl(2 * k))
}

/// Pairs of block parabolics of `sl_{2k} ⊕ sl_{2k}` whose upper-left blocks
/// have equal traces, so `tr A = tr D = -tr C = -tr F`.
pub fn four_block_example(k: usize) -> FdLieAlgebra {
    let n = 4 * k;
    let p = sl_block_parabolic(k);
    let traceless: Vec<Matrix> = p
        .space()
        .intersection(&trace_free_upper_left(k))
        .basis();
    let mut mats: Vec<Matrix> = traceless.iter().map(|x| embed(x, n, 0)).collect();
    mats.extend(traceless.iter().map(|x| embed(x, n, 2 * k)));
    let h = &Matrix::unit(2 * k, 0, 0) - &Matrix::unit(2 * k, k, k);
    mats.push(&embed(&h, n, 0) + &embed(&h, n, 2 * k));
    from(n, &mats)
}

fn trace_free_upper_left(k: usize) -> MatSpace {
    let n = 2 * k;
    let mut mats = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j || i >= k {
                mats.push(Matrix::unit(n, i, j));
            }
        }
    }
    for i in 1..k {
        mats.push(&Matrix::unit(n, 0, 0) - &Matrix::unit(n, i, i));
    }
    MatSpace::span(n, &mats)
}

/// Dimensions showing that [`four_block_example`] is not the direct sum of
/// its intersections with the two summands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourBlockReport {
    pub dim_p: usize,
    pub dim_p_cap_s1: usize,
    pub dim_p_cap_s2: usize,
    pub dim_proj1: usize,
    pub dim_proj2: usize,
    pub dim_summand_parabolic: usize,
}

impl FourBlockReport {
    /// `dim p - dim(p ∩ s1) - dim(p ∩ s2)`; zero exactly for a direct sum.
    pub fn gap(&self) -> usize {
        self.dim_p - self.dim_p_cap_s1 - self.dim_p_cap_s2
    }
}

pub fn four_block_report(k: usize) -> FourBlockReport {
    let n = 4 * k;
    let p = four_block_example(k);
    let sl = FdLieAlgebra::sl(2 * k).basis();
    let s1 = MatSpace::span(n, &sl.iter().map(|x| embed(x, n, 0)).collect::<Vec<_>>());
    let s2 = MatSpace::span(n, &sl.iter().map(|x| embed(x, n, 2 * k)).collect::<Vec<_>>());
    let pb = p.basis();
    let proj1 = MatSpace::span(2 * k, &pb.iter().map(|x| block(x, 0, 2 * k)).collect::<Vec<_>>());
    let proj2 = MatSpace::span(2 * k, &pb.iter().map(|x| block(x, 2 * k, 2 * k)).collect::<Vec<_>>());
    FourBlockReport {
        dim_p: p.dim(),
        dim_p_cap_s1: p.space().intersection(&s1).dim(),
        dim_p_cap_s2: p.space().intersection(&s2).dim(),
        dim_proj1: proj1.dim(),
        dim_proj2: proj2.dim(),
        dim_summand_parabolic: sl_block_parabolic(k).dim(),
    }
}

fn so3() -> FdLieAlgebra {
    let a = |i, j| &Matrix::unit(3, i, j) - &Matrix::unit(3, j, i);
    from(3, &[a(0, 1), a(0, 2), a(1, 2)])
}

fn sp4() -> FdLieAlgebra {
    let e = |i, j| Matrix::unit(4, i, j);
    let mut mats = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            mats.push(&e(i, j) - &e(2 + j, 2 + i));
        }
    }
    for i in 0..2 {
        for j in i..2 {
            let b = if i == j { e(i, 2 + j) } else { &e(i, 2 + j) + &e(j, 2 + i) };
            let c = if i == j { e(2 + i, j) } else { &e(2 + i, j) + &e(2 + j, i) };
            mats.push(b);
            mats.push(c);
        }
    }
    from(4, &mats)
}

fn sl2_sym2() -> FdLieAlgebra {
    let e = Matrix::from_i64(&[&[0, 2, 0], &[0, 0, 1], &[0, 0, 0]]);
    let f = Matrix::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 2, 0]]);
    lie_close(3, &[e, f])
}

/// `[[A, v], [0, 0]]` with `A` in `a ⊆ gl_m`.
fn affine(a: &FdLieAlgebra) -> FdLieAlgebra {
    let m = a.n();
    let mut mats: Vec<Matrix> = a.basis().iter().map(|x| embed(x, m + 1, 0)).collect();
    mats.extend((0..m).map(|i| Matrix::unit(m + 1, i, m)));
    from(m + 1, &mats)
}

fn diagonal_copy(a: &FdLieAlgebra) -> FdLieAlgebra {
    let m = a.n();
    let mats: Vec<Matrix> = a.basis().iter().map(|x| x.direct_sum(x)).collect();
    from(2 * m, &mats)
}

fn traceless(g: &FdLieAlgebra) -> FdLieAlgebra {
    g.intersect(&FdLieAlgebra::sl(g.n()))
}

/// Named battery of constructed algebras: parabolics, Borels, sums of
/// general linear algebras, classical and twisted cases, and the two
/// trace-condition examples.
pub fn battery() -> Vec<(String, FdLieAlgebra)> {
    let gl = FdLieAlgebra::gl;
    let bu = FdLieAlgebra::block_upper;
    let ds = FdLieAlgebra::direct_sum;
    let strict3 = from(3, &[Matrix::unit(3, 0, 1), Matrix::unit(3, 0, 2), Matrix::unit(3, 1, 2)]);
    let scalar_plus_nil = from(2, &[Matrix::identity(2), Matrix::unit(2, 0, 1)]);
    let out = vec![
        ("gl1", gl(1)),
        ("gl2", gl(2)),
        ("gl3", gl(3)),
        ("sl2", FdLieAlgebra::sl(2)),
        ("sl3", FdLieAlgebra::sl(3)),
        ("b2", FdLieAlgebra::borel(2)),
        ("b3", FdLieAlgebra::borel(3)),
        ("b4", FdLieAlgebra::borel(4)),
        ("p21", bu(&[2, 1])),
        ("p12", bu(&[1, 2])),
        ("p22", bu(&[2, 2])),
        ("p121", bu(&[1, 2, 1])),
        ("p31", bu(&[3, 1])),
        ("p21_traceless", traceless(&bu(&[2, 1]))),
        ("b3_traceless", traceless(&FdLieAlgebra::borel(3))),
        ("diag3", FdLieAlgebra::diagonal(3)),
        ("strict3", strict3),
        ("scalar_plus_nil", scalar_plus_nil),
        ("gl2+gl2", ds(&gl(2), &gl(2))),
        ("gl2+gl1", ds(&gl(2), &gl(1))),
        ("sl2+gl1", ds(&FdLieAlgebra::sl(2), &gl(1))),
        ("gl2+b2", ds(&gl(2), &FdLieAlgebra::borel(2))),
        ("so3", so3()),
        ("sp4", sp4()),
        ("sl2_sym2", sl2_sym2()),
        ("affine_gl2", affine(&gl(2))),
        ("affine_sl2", affine(&FdLieAlgebra::sl(2))),
        ("gl2_diagonal_copy", diagonal_copy(&gl(2))),
        ("trace_ratio", trace_ratio_example()),
        ("four_block", four_block_example(1)),
    ];
    out.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Killing-form signature data used to compare Levi components up to
/// isomorphism: dimension and rank of the Killing form.
pub fn killing_invariants(g: &FdLieAlgebra) -> (usize, usize) {
    (g.dim(), g.killing().rank())
}
