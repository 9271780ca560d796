use std::sync::Arc;

use super::flag::{classify_flag, fc_flag, FinitePairFlag};
use crate::error::{Error, Result};
use crate::pairedspace::{Side, Subspace};

/// Flags `f` in `V` and `g` in `V*` such that the annihilator of every
/// member of one flag is a member of the other.
#[derive(Clone, Debug)]
pub struct TautCouple {
    f: FinitePairFlag,
    g: FinitePairFlag,
    /// `f_perp[i]` is the annihilator of `f.chain()[i]`; likewise `g_perp`.
    f_perp: Vec<Subspace>,
    g_perp: Vec<Subspace>,
    c_pairs: Vec<(usize, usize)>,
    /// `(dim F''/F', dim G''/G')` per c-pair, `None` when infinite.
    c_dims: Vec<(Option<usize>, Option<usize>)>,
}

pub fn make_taut_couple(f: FinitePairFlag, g: FinitePairFlag) -> Result<TautCouple> {
    if f.side() != Side::V {
        return Err(Error::SideMismatch { expected: "V".into(), found: f.side().to_string() });
    }
    if g.side() != Side::VStar {
        return Err(Error::SideMismatch { expected: "V*".into(), found: g.side().to_string() });
    }
    if !Arc::ptr_eq(f.model(), g.model()) && f.model() != g.model() {
        return Err(Error::ModelMismatch);
    }
    for flag in [&f, &g] {
        let c = classify_flag(flag)?;
        if !c.semiclosed {
            let a = (0..flag.n_pairs())
                .find(|&a| {
                    let cl = flag.pred(a).closure();
                    !(cl.same_as(flag.pred(a)).unwrap() || cl.same_as(flag.succ(a)).unwrap())
                })
                .unwrap_or(0);
            return Err(Error::NotSemiclosed(a));
        }
    }
    let f_perp: Vec<Subspace> = f.chain().iter().map(Subspace::perp).collect();
    let g_perp: Vec<Subspace> = g.chain().iter().map(Subspace::perp).collect();
    for (src, perps, dst) in [(&f, &f_perp, &g), (&g, &g_perp, &f)] {
        for (s, p) in src.chain().iter().zip(perps) {
            if dst.position(p).is_none() {
                return Err(Error::NotTaut(format!("{s:?}")));
            }
        }
    }
    let mut c_pairs = Vec::new();
    for a in 0..f.n_pairs() {
        if !f.pred(a).is_closed() {
            continue;
        }
        let b = g.position(&f_perp[a + 1]).expect("taut");
        if b < g.n_pairs() && g_perp[b + 1].same_as(f.pred(a))? {
            c_pairs.push((a, b));
        }
    }
    let c_dims = c_pairs
        .iter()
        .map(|&(a, b)| Ok((f.succ(a).quotient_dim(f.pred(a))?, g.succ(b).quotient_dim(g.pred(b))?)))
        .collect::<Result<_>>()?;
    Ok(TautCouple { f, g, f_perp, g_perp, c_pairs, c_dims })
}

impl TautCouple {
    pub fn f(&self) -> &FinitePairFlag {
        &self.f
    }

    pub fn g(&self) -> &FinitePairFlag {
        &self.g
    }

    /// Matched pairs `(a, b)` with closed `F'_a`, `G'_b = (F''_a)^⊥` and
    /// `F'_a = (G''_b)^⊥`.
    pub fn c_pairs(&self) -> &[(usize, usize)] {
        &self.c_pairs
    }

    /// Quotient dimensions of each c-pair.
    pub fn c_dims(&self) -> &[(Option<usize>, Option<usize>)] {
        &self.c_dims
    }

    /// Whether c-pair `k` has an infinite-dimensional quotient.
    pub fn is_infinite_block(&self, k: usize) -> bool {
        self.c_dims[k].0.is_none()
    }

    /// The couple `(F^c, G^c)`.
    pub fn closed_couple(&self) -> Result<TautCouple> {
        make_taut_couple(fc_flag(&self.f)?, fc_flag(&self.g)?)
    }

    /// Annihilator of `F''_a`.
    pub fn succ_perp_f(&self, a: usize) -> &Subspace {
        &self.f_perp[a + 1]
    }

    /// Annihilator of `G''_b`.
    pub fn succ_perp_g(&self, b: usize) -> &Subspace {
        &self.g_perp[b + 1]
    }

    /// `a < b` in the joint order: `<F''_a, G''_b> = 0`.
    pub fn pair_order(&self, a: usize, b: usize) -> bool {
        self.f_perp[a + 1].contains(self.g.succ(b)).expect("same model")
    }

    /// `a <= b`: `a < b` or `(a, b)` is a c-pair.
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.c_pairs.contains(&(a, b)) || self.pair_order(a, b)
    }

    /// The largest `G''_b` with `a <= b`, which is the union of all of them,
    /// or the zero subspace when there is none.
    pub fn upper_g(&self, a: usize) -> Subspace {
        (0..self.g.n_pairs())
            .rev()
            .find(|&b| self.le(a, b))
            .map(|b| self.g.succ(b).clone())
            .unwrap_or_else(|| Subspace::zero(self.f.model(), Side::VStar))
    }

    /// Terms `(F''_a, H_a)` of the joint stabilizer `sum_a F''_a ⊗ H_a`,
    /// with `H_a` from [`upper_g`](Self::upper_g); `F''_a` increase and
    /// `H_a` decrease.
    pub fn joint_terms(&self) -> Vec<(Subspace, Subspace)> {
        (0..self.f.n_pairs()).map(|a| (self.f.succ(a).clone(), self.upper_g(a))).collect()
    }

    /// Terms `(F''_a, (F''_a)^⊥)` of the nilradical.
    pub fn nil_terms(&self) -> Vec<(Subspace, Subspace)> {
        (0..self.f.n_pairs()).map(|a| (self.f.succ(a).clone(), self.f_perp[a + 1].clone())).collect()
    }
}
