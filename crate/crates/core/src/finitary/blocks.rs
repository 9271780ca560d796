use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::element::FinitaryElement;
use super::membership::{image_generators, in_joint_stabilizer, in_stabilizer};
use crate::error::{Error, Result};
use crate::exactnum::{rank_of, solve_combination, Matrix, Rational};
use crate::genflag::TautCouple;
use crate::pairedspace::{echelon, Side, Subspace, Vector};

/// How a complement of `U ∩ F'` inside `U = x · F''` is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Complement {
    /// Greedy over an echelon basis of `U`.
    Pivot,
    /// Random integer combinations, seeded.
    Random(u64),
}

/// Induced operator of `x` on the finite-dimensional image of
/// `F''_a / F'_a`, with its trace.
#[derive(Clone, Debug)]
pub struct BlockComponent {
    /// Basis of the chosen complement, in `V`.
    pub basis: Vec<Vector>,
    /// Column `j` holds the coordinates of `x · basis[j]` modulo `F'_a`.
    pub matrix: Matrix,
    pub trace: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ambient {
    Gl,
    Sl,
}

fn dense(vs: &[Vector]) -> (usize, Vec<Vec<Rational>>) {
    let n = vs.iter().map(Vector::support_bound).max().unwrap_or(0);
    (n, vs.iter().map(|v| v.to_dense(n)).collect())
}

/// Component of `x` on the c-pair `k` of the couple.
pub fn block_component(x: &FinitaryElement, t: &TautCouple, k: usize, choice: Complement) -> Result<BlockComponent> {
    if !in_joint_stabilizer(x, t)? {
        return Err(Error::NotInJointStabilizer);
    }
    let (a, _) = t.c_pairs()[k];
    quotient_operator(x, t.f().succ(a), t.f().pred(a), choice)
}

/// Operator induced by `x` on `(x · hi + lo) / lo` for `x`-stable
/// `lo ⊆ hi`.
pub fn quotient_operator(x: &FinitaryElement, hi: &Subspace, lo: &Subspace, choice: Complement) -> Result<BlockComponent> {
    let u = echelon(&image_generators(x, hi)?);
    let naug = x.model().n_augs(hi.side());
    // U ∩ lo from the kernel of the normal-form map.
    let nf: Vec<Vector> = u.iter().map(|v| lo.normal_form(v)).collect::<Result<_>>()?;
    let (n, nf_dense) = dense(&nf);
    let cols = Matrix::from_rows(n + naug, nf_dense).transpose();
    let inner: Vec<Vector> = if u.is_empty() {
        Vec::new()
    } else {
        cols.kernel()
            .into_iter()
            .map(|z| {
                u.iter().zip(&z).fold(Vector::zero(hi.side(), naug), |acc, (v, c)| acc.axpy(c, v))
            })
            .collect()
    };
    let target = u.len() - inner.len();
    let mut basis: Vec<Vector> = Vec::new();
    let independent = |basis: &[Vector], cand: &Vector| {
        let mut all: Vec<Vector> = inner.iter().chain(basis).cloned().collect();
        all.push(cand.clone());
        let (n, d) = dense(&all);
        rank_of(&d, n + naug) == all.len()
    };
    match choice {
        Complement::Pivot => {
            for v in &u {
                if basis.len() == target {
                    break;
                }
                if independent(&basis, v) {
                    basis.push(v.clone());
                }
            }
        }
        Complement::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            while basis.len() < target {
                let cand = u.iter().fold(Vector::zero(hi.side(), naug), |acc, v| {
                    acc.axpy(&Rational::from_integer(rng.gen_range(-3i64..=3).into()), v)
                });
                if independent(&basis, &cand) {
                    basis.push(cand);
                }
            }
        }
    }
    let r = basis.len();
    let mut matrix = Matrix::zeros(r, r);
    let mut span: Vec<Vector> = basis.clone();
    span.extend(inner.iter().cloned());
    for j in 0..r {
        let y = x.act(&basis[j])?;
        let mut all = span.clone();
        all.push(y);
        let (n, d) = dense(&all);
        let coeffs = solve_combination(&d[..span.len()], &d[span.len()]).expect("x · U ⊆ U");
        let _ = n;
        for i in 0..r {
            matrix[(i, j)] = coeffs[i].clone();
        }
    }
    let trace = matrix.trace();
    Ok(BlockComponent { basis, matrix, trace })
}

/// Trace of `x` restricted to an `x`-stable subspace, computed on the
/// finite-dimensional invariant subspace `x · s`.
pub fn restricted_trace(x: &FinitaryElement, s: &Subspace) -> Result<Rational> {
    let zero = Subspace::zero(s.model(), s.side());
    Ok(quotient_operator(x, s, &zero, Complement::Pivot)?.trace)
}

/// Block traces of `x` on every c-pair.
pub fn block_traces(x: &FinitaryElement, t: &TautCouple) -> Result<Vec<Rational>> {
    (0..t.c_pairs().len()).map(|k| Ok(block_component(x, t, k, Complement::Pivot)?.trace)).collect()
}

/// Membership in the preimage of the traceless part: `x` in the joint
/// stabilizer with zero trace on every infinite-dimensional block, and
/// traceless when the ambient algebra is `sl`.
pub fn in_pminus(x: &FinitaryElement, t: &TautCouple, ambient: Ambient) -> Result<bool> {
    if !in_joint_stabilizer(x, t)? {
        return Ok(false);
    }
    if ambient == Ambient::Sl && !x.trace().is_zero() {
        return Ok(false);
    }
    for k in 0..t.c_pairs().len() {
        if t.is_infinite_block(k) && !block_component(x, t, k, Complement::Pivot)?.trace.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Subalgebra between `p_-` and `p_+` cut out by linear conditions on the
/// block traces.
#[derive(Clone, Debug)]
pub struct TraceConditionSubalgebra {
    couple: TautCouple,
    ambient: Ambient,
    constraints: Vec<Vec<Rational>>,
}

impl TraceConditionSubalgebra {
    /// Each constraint has one coefficient per c-pair. Over `gl` the
    /// coefficients on finite blocks must vanish; over `sl` they must be
    /// equal, so that the subalgebra contains `p_-`.
    pub fn new(couple: TautCouple, ambient: Ambient, constraints: Vec<Vec<Rational>>) -> Result<Self> {
        let nc = couple.c_pairs().len();
        let finite: Vec<usize> = (0..nc).filter(|&k| !couple.is_infinite_block(k)).collect();
        for c in &constraints {
            if c.len() != nc {
                return Err(Error::Invalid(format!("constraint has {} coefficients, expected {nc}", c.len())));
            }
            let ok = match ambient {
                Ambient::Gl => finite.iter().all(|&k| c[k].is_zero()),
                Ambient::Sl => finite.windows(2).all(|w| c[w[0]] == c[w[1]]),
            };
            if !ok {
                return Err(Error::Invalid("constraint does not vanish on p_-".into()));
            }
        }
        Ok(TraceConditionSubalgebra { couple, ambient, constraints })
    }

    pub fn couple(&self) -> &TautCouple {
        &self.couple
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn constraints(&self) -> &[Vec<Rational>] {
        &self.constraints
    }
}

pub fn tc_member(x: &FinitaryElement, s: &TraceConditionSubalgebra) -> Result<bool> {
    if !in_joint_stabilizer(x, &s.couple)? {
        return Ok(false);
    }
    if s.ambient == Ambient::Sl && !x.trace().is_zero() {
        return Ok(false);
    }
    if s.constraints.is_empty() {
        return Ok(true);
    }
    let tr = block_traces(x, &s.couple)?;
    Ok(s.constraints.iter().all(|c| c.iter().zip(&tr).map(|(a, b)| a * b).sum::<Rational>().is_zero()))
}

/// Normalizer of `p_-`, which equals `p_+`.
pub fn normalizer_test(x: &FinitaryElement, t: &TautCouple) -> Result<bool> {
    in_joint_stabilizer(x, t)
}

/// Generators of `p_-` supported on the window of the couple: rank-one
/// elements `u ⊗ w` with `u` among the window generators of `F''_a` and `w`
/// among those of the largest `G''_b` with `a <= b`, corrected to zero
/// trace on infinite blocks. `bound` caps the basis support considered.
pub fn pminus_battery(t: &TautCouple, bound: usize, ambient: Ambient) -> Result<Vec<FinitaryElement>> {
    let model = t.f().model();
    let mut good = Vec::new();
    let mut traced: Vec<(FinitaryElement, Vec<Rational>)> = Vec::new();
    for (fa, ha) in t.joint_terms() {
        let us: Vec<Vector> = fa.window_generators(bound).into_iter().filter(|v| v.support_bound() <= bound).collect();
        let ws: Vec<Vector> = ha.window_generators(bound).into_iter().filter(|v| v.support_bound() <= bound).collect();
        for u in &us {
            for w in &ws {
                let y = FinitaryElement::rank_one(model, u, w)?;
                let mut tr: Vec<Rational> = block_traces(&y, t)?
                    .into_iter()
                    .enumerate()
                    .filter(|(k, _)| t.is_infinite_block(*k))
                    .map(|(_, c)| c)
                    .collect();
                if ambient == Ambient::Sl {
                    tr.push(y.trace());
                }
                if tr.iter().all(Zero::is_zero) {
                    good.push(y);
                } else {
                    traced.push((y, tr));
                }
            }
        }
    }
    if !traced.is_empty() {
        let rows: Vec<Vec<Rational>> = traced.iter().map(|(_, tr)| tr.clone()).collect();
        let m = Matrix::from_rows(rows[0].len(), rows).transpose();
        for z in m.kernel() {
            let mut y = FinitaryElement::zero(model);
            for ((e, _), c) in traced.iter().zip(&z) {
                y = y.axpy(c, e)?;
            }
            good.push(y);
        }
    }
    Ok(good)
}

/// Sampling cross-check of the normalizer: `[x, y]` lies in `p_-` for every
/// element `y` of the battery.
pub fn normalizer_sampling(x: &FinitaryElement, t: &TautCouple, bound: usize, ambient: Ambient) -> Result<bool> {
    for y in pminus_battery(t, bound, ambient)? {
        if !in_pminus(&x.bracket(&y)?, t, ambient)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership in `p' = St(F^c) ∩ St(G^c)`.
pub fn perp_parabolic_member(x: &FinitaryElement, t: &TautCouple) -> Result<bool> {
    let c = t.closed_couple()?;
    Ok(in_stabilizer(x, c.f())? && in_stabilizer(x, c.g())?)
}

/// Block trace computed on the `V*` side: minus the trace on
/// `G''_b / G'_b`.
pub fn block_trace_dual(x: &FinitaryElement, t: &TautCouple, k: usize) -> Result<Rational> {
    if !in_joint_stabilizer(x, t)? {
        return Err(Error::NotInJointStabilizer);
    }
    let (_, b) = t.c_pairs()[k];
    debug_assert_eq!(t.g().side(), Side::VStar);
    let tr = quotient_operator(x, t.g().succ(b), t.g().pred(b), Complement::Pivot)?.trace;
    Ok(-tr)
}
