use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::space::{lie_close, Coords, FdLieAlgebra, MatSpace};
use crate::error::{Error, Result};
use crate::exactnum::{jordan_chevalley, Matrix, Rational};

/// Associative span of all nonempty products of `gens`, plus the identity
/// when `unital`.
pub fn associative_closure(n: usize, gens: &[Matrix], unital: bool) -> MatSpace {
    let mut start: Vec<Matrix> = gens.to_vec();
    if unital {
        start.push(Matrix::identity(n));
    }
    let mut space = MatSpace::span(n, &start);
    let mut frontier = space.basis();
    while !frontier.is_empty() {
        let mut new = Vec::new();
        for x in &frontier {
            for g in gens {
                let p = g * x;
                if !space.contains(&p) {
                    space = space.sum(&MatSpace::span(n, std::slice::from_ref(&p)));
                    new.push(p);
                }
            }
        }
        frontier = new;
    }
    space
}

/// Largest solvable ideal: the Killing-orthogonal of `[g, g]`.
pub fn solvable_radical(g: &FdLieAlgebra) -> FdLieAlgebra {
    if g.is_zero() {
        return g.clone();
    }
    let k = g.killing();
    let d = g.derived();
    let eqs: Vec<Vec<Rational>> = d
        .basis()
        .iter()
        .map(|y| k.mul_vec(&g.coords(y).expect("[g, g] lies in g")))
        .collect();
    let r = g.solution_space(eqs);
    assert!(r.is_solvable(), "radical is solvable");
    r
}

/// Nilpotent elements of the radical, cut out as the elements `x` of the
/// radical with `tr(x b) = 0` for every `b` in the associative algebra the
/// radical generates.
pub fn linear_nilradical(g: &FdLieAlgebra) -> FdLieAlgebra {
    let r = solvable_radical(g);
    if r.is_zero() {
        return r;
    }
    let rb = r.basis();
    let a = associative_closure(g.n(), &rb, false);
    let eqs: Vec<Vec<Rational>> =
        a.basis().iter().map(|b| rb.iter().map(|x| trace_product(x, b)).collect()).collect();
    let nil = r.solution_space(eqs);
    for x in nil.basis() {
        assert!(x.is_nilpotent(), "nilradical element is nilpotent");
    }
    assert!(is_ideal(g, &nil), "nilradical is an ideal");
    nil
}

/// `tr(a b)`.
pub fn trace_product(a: &Matrix, b: &Matrix) -> Rational {
    let n = a.rows();
    let mut t = Rational::zero();
    for i in 0..n {
        for j in 0..n {
            let x = &a[(i, j)];
            if !x.is_zero() {
                let y = &b[(j, i)];
                if !y.is_zero() {
                    t += x * y;
                }
            }
        }
    }
    t
}

/// `[g, s] ⊆ s`.
pub fn is_ideal(g: &FdLieAlgebra, s: &MatSpace) -> bool {
    let sb = s.basis();
    g.basis().iter().all(|x| sb.iter().all(|y| s.contains(&x.commutator(y))))
}

/// Semisimple complement of the radical inside `[g, g]`, lifted level by
/// level through the derived series of the radical.
pub fn levi_component(g: &FdLieAlgebra) -> Result<FdLieAlgebra> {
    let n = g.n();
    let r = solvable_radical(g);
    if r.dim() == g.dim() {
        return Ok(FdLieAlgebra::zero(n));
    }
    let mut all: Vec<Vec<Rational>> = r.flat_rows().to_vec();
    let mut comp: Vec<Matrix> = Vec::new();
    let gd = g.derived();
    for b in gd.basis().into_iter().chain(g.basis()) {
        let mut test = all.clone();
        test.push(b.flat().to_vec());
        if crate::exactnum::rank_of(&test, n * n) == test.len() {
            all.push(b.flat().to_vec());
            comp.push(b);
        }
    }
    let m = comp.len();
    // Structure constants of g / r on the chosen complement.
    let mut cbasis: Vec<Vec<Rational>> = comp.iter().map(|x| x.flat().to_vec()).collect();
    cbasis.extend(r.flat_rows().iter().cloned());
    let gc = Coords::new(&cbasis);
    let mut c = vec![vec![Vec::new(); m]; m];
    for i in 0..m {
        for j in 0..m {
            let mut v = gc.of(comp[i].commutator(&comp[j]).flat());
            v.truncate(m);
            c[i][j] = v;
        }
    }
    let series = r.derived_series();
    let mut y = comp;
    for lvl in 0..series.len() - 1 {
        let ri = series[lvl].basis();
        let next = &series[lvl + 1];
        let (phi, s) = quotient_functional(&series[lvl], next);
        if s == 0 {
            continue;
        }
        let di = ri.len();
        let residual = |i: usize, j: usize, y: &[Matrix]| -> Matrix {
            let mut e = y[i].commutator(&y[j]);
            for (k, ck) in c[i][j].iter().enumerate() {
                if !ck.is_zero() {
                    e = &e - &y[k].scale(ck);
                }
            }
            e
        };
        let phi_ri: Vec<Vec<Rational>> = ri.iter().map(|x| phi.of(x.flat())[..s].to_vec()).collect();
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        let mut rhs: Vec<Rational> = Vec::new();
        for i in 0..m {
            let ad_i: Vec<Vec<Rational>> =
                ri.iter().map(|rho| phi.of(y[i].commutator(rho).flat())[..s].to_vec()).collect();
            for j in i + 1..m {
                let ad_j: Vec<Vec<Rational>> =
                    ri.iter().map(|rho| phi.of(y[j].commutator(rho).flat())[..s].to_vec()).collect();
                let res = phi.of(residual(i, j, &y).flat());
                for q in 0..s {
                    let mut row = vec![Rational::zero(); m * di];
                    for l in 0..di {
                        // [y_i, z_j] + [z_i, y_j]
                        row[j * di + l] += &ad_i[l][q];
                        row[i * di + l] -= &ad_j[l][q];
                        for (k, ck) in c[i][j].iter().enumerate() {
                            if !ck.is_zero() {
                                row[k * di + l] -= ck * &phi_ri[l][q];
                            }
                        }
                    }
                    rows.push(row);
                    rhs.push(-res[q].clone());
                }
            }
        }
        if rows.is_empty() {
            continue;
        }
        let sol = Matrix::from_rows(m * di, rows)
            .solve(&rhs)
            .ok_or_else(|| Error::Invalid("Levi lifting system is inconsistent".into()))?;
        for (i, yi) in y.iter_mut().enumerate() {
            for (l, rho) in ri.iter().enumerate() {
                let w = &sol[i * di + l];
                if !w.is_zero() {
                    *yi = &*yi + &rho.scale(w);
                }
            }
        }
    }
    let l = FdLieAlgebra::from_space(MatSpace::span(n, &y))?;
    if l.dim() != m || l.killing().rank() != m || !l.intersection(&r).is_zero() {
        return Err(Error::Invalid("Levi candidate failed verification".into()));
    }
    Ok(l)
}

/// Functionals on `hi` with kernel `lo`: the first `s` coordinates of
/// [`Coords`] over a complement of `lo` followed by a basis of `lo`.
fn quotient_functional(hi: &MatSpace, lo: &MatSpace) -> (Coords, usize) {
    let nn = hi.n() * hi.n();
    let mut comp: Vec<Vec<Rational>> = Vec::new();
    let mut acc: Vec<Vec<Rational>> = lo.flat_rows().to_vec();
    for b in hi.flat_rows() {
        let mut t = acc.clone();
        t.push(b.clone());
        if crate::exactnum::rank_of(&t, nn) == t.len() {
            acc.push(b.clone());
            comp.push(b.clone());
        }
    }
    let s = comp.len();
    comp.extend(lo.flat_rows().iter().cloned());
    (Coords::new(&comp), s)
}

fn probes(g: &MatSpace) -> Vec<Matrix> {
    let b = g.basis();
    let mut out = b.clone();
    if b.len() > 1 {
        let ones: Vec<Rational> = (0..b.len()).map(|i| Rational::from_integer((i as i64 + 1).into())).collect();
        out.push(g.element(&ones));
        let alt: Vec<Rational> =
            (0..b.len()).map(|i| Rational::from_integer((if i % 2 == 0 { 1 } else { -2 }).into())).collect();
        out.push(g.element(&alt));
    }
    out
}

/// Smallest splittable subalgebra containing `g`: adjoin Jordan parts and
/// re-close until stable.
pub fn splittable_closure(g: &FdLieAlgebra) -> FdLieAlgebra {
    let n = g.n();
    let mut cur = g.clone();
    loop {
        let mut gens = cur.basis();
        for x in probes(&cur) {
            let jc = jordan_chevalley(&x).expect("square matrix");
            gens.push(jc.ss);
            gens.push(jc.nil);
        }
        let next = lie_close(n, &gens);
        if next.dim() == cur.dim() {
            return cur;
        }
        cur = next;
    }
}

pub fn is_splittable(g: &FdLieAlgebra) -> bool {
    splittable_closure(g).dim() == g.dim()
}

/// Commuting family of semisimple matrices.
pub fn is_toral(t: &MatSpace) -> bool {
    let b = t.basis();
    let commuting = (0..b.len()).all(|i| (i + 1..b.len()).all(|j| b[i].commutator(&b[j]).is_zero()));
    commuting && b.iter().all(is_semisimple)
}

pub fn is_semisimple(x: &Matrix) -> bool {
    x.minpoly().map(|p| p.is_squarefree()).unwrap_or(false)
}

/// Span of the semisimple parts of a basis.
pub fn semisimple_span(h: &MatSpace) -> MatSpace {
    let ss: Vec<Matrix> = h.basis().iter().map(|x| jordan_chevalley(x).expect("square").ss).collect();
    MatSpace::span(h.n(), &ss)
}

/// Nilradical, Levi component and toral part of a splittable algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FdDecomposition {
    pub nilradical: FdLieAlgebra,
    pub levi: FdLieAlgebra,
    pub torus: FdLieAlgebra,
    pub reductive_part: FdLieAlgebra,
}

pub(crate) fn random_element(g: &MatSpace, rng: &mut ChaCha8Rng) -> Matrix {
    let c: Vec<Rational> = (0..g.dim()).map(|_| Rational::from_integer(rng.gen_range(-4i64..=4).into())).collect();
    g.element(&c)
}

/// Generalized null space of `ad a` on `g`.
pub fn fitting_null_of(g: &FdLieAlgebra, a: &Matrix) -> FdLieAlgebra {
    let d = g.dim();
    let m = g.ad(a).pow(d as u32);
    let ker = m.kernel();
    let mats: Vec<Matrix> = ker.iter().map(|c| g.element(c)).collect();
    FdLieAlgebra::from_space(MatSpace::span(g.n(), &mats)).expect("Fitting null component is a subalgebra")
}

/// Cartan subalgebra of `g` (nilpotent and self-normalizing) as the Fitting
/// null component of a random element.
pub fn cartan_subalgebra(g: &FdLieAlgebra, seed: u64) -> Result<FdLieAlgebra> {
    if g.is_zero() {
        return Ok(g.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Weighted sums of semisimple parts of the basis come first, so
    // standard inputs give standard answers.
    let ss: Vec<Matrix> = g.basis().iter().map(|x| jordan_chevalley(x).expect("square").ss).collect();
    let mut candidates: Vec<Matrix> = Vec::new();
    for base in [1i64, 3, 7] {
        let mut acc = Matrix::zeros(g.n(), g.n());
        let mut w = Rational::from_integer(1.into());
        for s in &ss {
            acc = &acc + &s.scale(&w);
            w *= Rational::from_integer(base.into());
            if base == 1 {
                w += Rational::from_integer(1.into());
            }
        }
        if g.contains(&acc) {
            candidates.push(acc);
        }
    }
    candidates.extend((0..12).map(|_| random_element(g, &mut rng)));
    for round in 0..4 {
        if round > 0 {
            candidates = (0..16).map(|_| random_element(g, &mut rng)).collect();
        }
        let nulls: Vec<FdLieAlgebra> = candidates.iter().map(|a| fitting_null_of(g, a)).collect();
        let min = nulls.iter().map(|h| h.dim()).min().unwrap_or(0);
        for h in nulls.into_iter().filter(|h| h.dim() == min) {
            if h.is_nilpotent() && g.normalizer(h.space()) == h {
                return Ok(h);
            }
        }
    }
    Err(Error::Invalid("no Cartan subalgebra found".into()))
}

/// `g = n_g ⊕ (l ⋉ t')`.
pub fn locally_reductive_part(g: &FdLieAlgebra, seed: u64) -> Result<FdDecomposition> {
    let n = g.n();
    let closure = splittable_closure(g);
    if closure.dim() != g.dim() {
        let w = closure.basis().into_iter().find(|x| !g.contains(x)).expect("closure is larger");
        return Err(Error::NotSplittable(format!("{w:?}")));
    }
    let nil = linear_nilradical(g);
    let levi = levi_component(g)?;
    let r = solvable_radical(g);
    let z = r.centralizer(&levi.basis());
    let h = cartan_subalgebra(&z, seed)?;
    let torus = FdLieAlgebra::from_space(semisimple_span(h.space()))?;
    let verify = |ok: bool, what: &str| if ok { Ok(()) } else { Err(Error::Invalid(format!("decomposition check failed: {what}"))) };
    verify(g.contains_space(torus.space()), "torus lies in g")?;
    verify(is_toral(torus.space()), "torus is toral")?;
    verify(levi.basis().iter().all(|x| torus.basis().iter().all(|t| x.commutator(t).is_zero())), "[l, t'] = 0")?;
    verify(nil.dim() + levi.dim() + torus.dim() == g.dim(), "dimensions add up")?;
    let reductive_part = FdLieAlgebra::from_space(levi.sum(&torus))?;
    verify(reductive_part.dim() == levi.dim() + torus.dim(), "l ∩ t' = 0")?;
    verify(nil.sum(&reductive_part).dim() == g.dim(), "n_g + g_red = g")?;
    debug_assert_eq!(reductive_part.n(), n);
    Ok(FdDecomposition { nilradical: nil, levi, torus, reductive_part })
}
