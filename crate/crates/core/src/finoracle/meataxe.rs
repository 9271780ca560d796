use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::fdflag::FdFlag;
use super::space::{Coords, FdLieAlgebra};
use super::structure::{associative_closure, linear_nilradical, random_element};
use crate::error::{Error, Result};
use crate::exactnum::{factor_over_q, rank_of, span_basis, Matrix, Rational};
use crate::genflag::{flag_from_chain, make_taut_couple, TautCouple};
use crate::pairedspace::{PairedSpaceModel, Side, Subspace, Vector};

const MAX_TRIES: usize = 400;

/// Submodule of `Q^d` generated by `seeds` under `gens`, as reduced echelon
/// rows.
pub fn spin(gens: &[Matrix], seeds: &[Vec<Rational>], d: usize) -> Vec<Vec<Rational>> {
    let mut basis = span_basis(seeds, d);
    let mut frontier = basis.clone();
    while !frontier.is_empty() {
        let mut new = Vec::new();
        for v in &frontier {
            for g in gens {
                let w = g.mul_vec(v);
                let mut t = basis.clone();
                t.push(w.clone());
                if rank_of(&t, d) > basis.len() {
                    basis = span_basis(&t, d);
                    new.push(w);
                }
            }
        }
        frontier = new;
    }
    basis
}

enum Split {
    Irreducible,
    Proper(Vec<Vec<Rational>>),
}

/// One meataxe step: a proper nonzero submodule, or a certificate of
/// irreducibility (a factor `p` of a characteristic polynomial with
/// `nullity p(a) = deg p`, whose kernel spins to the whole module on both
/// sides).
fn split_module(gens: &[Matrix], d: usize, rng: &mut ChaCha8Rng) -> Result<Split> {
    if d <= 1 {
        return Ok(Split::Irreducible);
    }
    let alg = associative_closure(d, gens, true);
    let gt: Vec<Matrix> = gens.iter().map(Matrix::transpose).collect();
    for _ in 0..MAX_TRIES {
        let a = random_element(&alg, rng);
        let mut factors = factor_over_q(&a.charpoly()?);
        factors.sort_by_key(|(p, _)| p.degree());
        for (p, _) in factors {
            let pa = p.eval_matrix(&a);
            let ker = pa.kernel();
            let s = spin(gens, &ker[..1], d);
            if s.len() < d {
                return Ok(Split::Proper(s));
            }
            if ker.len() == p.degree().unwrap_or(0) {
                let kt = pa.transpose().kernel();
                let st = spin(&gt, &kt[..1], d);
                if st.len() < d {
                    return Ok(Split::Proper(Matrix::from_rows(d, st).kernel()));
                }
                return Ok(Split::Irreducible);
            }
        }
    }
    Err(Error::Invalid("meataxe did not certify within the retry budget".into()))
}

/// Matrices of the action of `gens` on `hi / lo`, and the complement
/// vectors used as the quotient basis.
fn quotient_action(gens: &[Matrix], lo: &[Vec<Rational>], hi: &[Vec<Rational>], n: usize) -> (Vec<Matrix>, Vec<Vec<Rational>>) {
    let mut acc = lo.to_vec();
    let mut comp = Vec::new();
    for v in hi {
        let mut t = acc.clone();
        t.push(v.clone());
        if rank_of(&t, n) == t.len() {
            acc.push(v.clone());
            comp.push(v.clone());
        }
    }
    let s = comp.len();
    let mut all = comp.clone();
    all.extend(lo.iter().cloned());
    let coords = Coords::new(&all);
    let mats = gens
        .iter()
        .map(|g| {
            let mut m = Matrix::zeros(s, s);
            for (j, c) in comp.iter().enumerate() {
                let x = coords.of(&g.mul_vec(c));
                for i in 0..s {
                    m[(i, j)] = x[i].clone();
                }
            }
            m
        })
        .collect();
    (mats, comp)
}

/// Whether `Q^d` is irreducible under `gens`.
pub fn is_irreducible(gens: &[Matrix], d: usize, seed: u64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(matches!(split_module(gens, d, &mut rng)?, Split::Irreducible))
}

/// Composition series of `Q^n` under `gens`, with every quotient certified
/// irreducible.
pub fn composition_series(gens: &[Matrix], n: usize, seed: u64) -> Result<FdFlag> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chain: Vec<Vec<Vec<Rational>>> = vec![Vec::new(), Matrix::identity(n).to_rows()];
    if n == 0 {
        chain.pop();
    }
    let mut i = 0;
    while i + 1 < chain.len() {
        let (mats, comp) = quotient_action(gens, &chain[i], &chain[i + 1], n);
        match split_module(&mats, comp.len(), &mut rng)? {
            Split::Irreducible => i += 1,
            Split::Proper(sub) => {
                let mut lifted = chain[i].clone();
                for s in &sub {
                    let mut v = vec![Rational::zero(); n];
                    for (c, b) in s.iter().zip(&comp) {
                        if !c.is_zero() {
                            for (x, y) in v.iter_mut().zip(b) {
                                *x += c * y;
                            }
                        }
                    }
                    lifted.push(v);
                }
                chain.insert(i + 1, span_basis(&lifted, n));
            }
        }
    }
    Ok(FdFlag { n, chain })
}

/// Output of [`invariant_taut_couple`].
#[derive(Clone, Debug)]
pub struct InvariantCouple {
    pub flag: FdFlag,
    pub dual_flag: FdFlag,
    /// The chain inside the plain model, topped by `V`, with its perps.
    pub couple: TautCouple,
    pub quotients_irreducible: bool,
    /// `n_k = n_p ∩ k` with `p` the joint stabilizer.
    pub nilradical_match: bool,
}

/// `k`-stable taut couple from a composition series of `Q^n`.
pub fn invariant_taut_couple(k: &FdLieAlgebra, seed: u64) -> Result<InvariantCouple> {
    let n = k.n();
    let gens = k.basis();
    let flag = composition_series(&gens, n, seed)?;
    let dual_flag = flag.dual();
    let mut quotients_irreducible = true;
    for w in flag.chain.windows(2) {
        let (mats, comp) = quotient_action(&gens, &w[0], &w[1], n);
        quotients_irreducible &= is_irreducible(&mats, comp.len(), seed ^ 0x9e37)?;
    }
    let gt: Vec<Matrix> = gens.iter().map(|g| -&g.transpose()).collect();
    for f in &dual_flag.chain {
        quotients_irreducible &= spin(&gt, f, n).len() == f.len();
    }
    let np = flag.nil_stabilizer();
    let nk = linear_nilradical(k);
    let nilradical_match = np.space() == &flag.nil_formula() && nk.space() == &np.intersection(k.space());

    let model = PairedSpaceModel::plain();
    let to_sub = |basis: &[Vec<Rational>], side: Side| {
        let vs: Vec<Vector> = basis.iter().map(|v| Vector::from_dense(side, n, v)).collect();
        Subspace::span(&model, side, vs)
    };
    let fs: Vec<Subspace> = flag.chain.iter().map(|b| to_sub(b, Side::V)).collect::<Result<_>>()?;
    let gs: Vec<Subspace> = fs.iter().map(Subspace::perp).collect();
    let couple = make_taut_couple(flag_from_chain(&model, Side::V, fs)?, flag_from_chain(&model, Side::VStar, gs)?)?;
    Ok(InvariantCouple { flag, dual_flag, couple, quotients_irreducible, nilradical_match })
}
