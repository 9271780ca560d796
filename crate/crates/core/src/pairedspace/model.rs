use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::Vector;
use crate::epcore::{ep_linear_solve, EpSeq, EpSet, Periodic};
use crate::error::{Error, Result};
use crate::exactnum::{Matrix, Rational};

/// Which of the two paired spaces a vector or subspace lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    V,
    VStar,
}

impl Side {
    pub fn dual(self) -> Side {
        match self {
            Side::V => Side::VStar,
            Side::VStar => Side::V,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::V => "V",
            Side::VStar => "V*",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormKind {
    Symmetric,
    Antisymmetric,
}

/// Eventually periodic involution of the naturals: a permutation of
/// `[0, pre.len())`, then `n -> n + offsets[n % offsets.len()]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Involution {
    pre: Vec<usize>,
    offsets: Vec<i64>,
}

impl Involution {
    pub fn new(pre: Vec<usize>, offsets: Vec<i64>) -> Result<Self> {
        let inv = Involution { pre, offsets };
        inv.validate()?;
        Ok(inv)
    }

    /// `2i <-> 2i + 1`.
    pub fn adjacent_pairs() -> Self {
        Involution { pre: Vec::new(), offsets: vec![1, -1] }
    }

    pub fn pre(&self) -> &[usize] {
        &self.pre
    }

    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    #[inline]
    pub fn apply(&self, n: usize) -> usize {
        if n < self.pre.len() {
            self.pre[n]
        } else {
            (n as i64 + self.offsets[n % self.offsets.len()]) as usize
        }
    }

    pub fn max_offset(&self) -> usize {
        self.offsets.iter().map(|o| o.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Window past which the involution is a fixed shift pattern.
    pub fn window(&self) -> (usize, usize) {
        (self.pre.len(), self.offsets.len())
    }

    fn validate(&self) -> Result<()> {
        let n = self.pre.len();
        if self.offsets.is_empty() {
            return Err(Error::Invalid("involution needs at least one offset".into()));
        }
        let mut seen = vec![false; n];
        for &x in &self.pre {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::Invalid("involution prefix is not a permutation".into()));
            }
        }
        let p = self.offsets.len();
        for m in n..n + 2 * p + self.max_offset() {
            let t = m as i64 + self.offsets[m % p];
            if t < n as i64 {
                return Err(Error::Invalid(format!("involution maps {m} below its threshold")));
            }
        }
        for m in 0..n + 2 * p + self.max_offset() {
            if self.apply(self.apply(m)) != m {
                return Err(Error::Invalid(format!("not an involution at {m}")));
            }
        }
        Ok(())
    }

    /// `{i : apply(i) in s}`, which is also the image of `s`.
    pub fn image(&self, s: &EpSet) -> EpSet {
        let (n0, p0) = self.window();
        let n = n0.max(s.threshold() + self.max_offset());
        let p = num_integer::lcm(p0, s.period());
        EpSet::from_fn(n, p, |i| s.contains(self.apply(i)))
    }

    /// The sequence `i -> seq(apply(i)) * w(i)`.
    pub fn pull_back(&self, seq: &EpSeq, w: &EpSeq) -> EpSeq {
        let (n0, p0) = self.window();
        let n = n0.max(seq.threshold() + self.max_offset()).max(w.threshold());
        let p = num_integer::lcm(num_integer::lcm(p0, seq.period()), w.period());
        EpSeq::from_fn(n, p, |i| seq.value(self.apply(i)) * w.value(i))
    }
}

/// Nondegenerate bilinear form on `V` identifying `V` with `V*` through
/// `e_i -> sign(i) f_{iota(i)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    pub kind: FormKind,
    pub iota: Involution,
    pub sign: EpSeq,
}

/// Computable model of a pair of countable-dimensional spaces with a
/// pairing.
///
/// `V` has basis `e_i` plus augmentations `a_k` with `<a_k, f_j> = v_augs[k](j)`;
/// `V*` has basis `f_j` plus augmentations `b_l` with `<e_i, b_l> = w_augs[l](i)`;
/// `<a_k, b_l> = cross[k][l]` and `<e_i, f_j> = delta_ij`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairedSpaceModel {
    v_augs: Vec<EpSeq>,
    w_augs: Vec<EpSeq>,
    cross: Vec<Vec<Rational>>,
    form: Option<Form>,
}

/// Models are shared by every vector-bearing object built on them.
pub type Model = Arc<PairedSpaceModel>;

/// Outcome of [`PairedSpaceModel::validate`] when the pairing is
/// nondegenerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelReport {
    pub v_augs: usize,
    pub w_augs: usize,
    pub has_form: bool,
}

impl PairedSpaceModel {
    pub fn new(v_augs: Vec<EpSeq>, w_augs: Vec<EpSeq>, cross: Vec<Vec<Rational>>, form: Option<Form>) -> Result<Self> {
        if cross.len() != v_augs.len() || cross.iter().any(|r| r.len() != w_augs.len()) {
            return Err(Error::Invalid(format!(
                "cross table must be {}x{}",
                v_augs.len(),
                w_augs.len()
            )));
        }
        if let Some(f) = &form {
            if !v_augs.is_empty() || !w_augs.is_empty() {
                return Err(Error::Invalid("forms are supported on pure-basis models only".into()));
            }
            check_form(f)?;
        }
        Ok(PairedSpaceModel { v_augs, w_augs, cross, form })
    }

    /// No augmentations, no form.
    pub fn plain() -> Model {
        Arc::new(PairedSpaceModel { v_augs: Vec::new(), w_augs: Vec::new(), cross: Vec::new(), form: None })
    }

    /// One extra vector in `V` pairing to 1 with every `f_j`.
    pub fn dense_line() -> Model {
        Arc::new(PairedSpaceModel {
            v_augs: vec![EpSeq::constant(Rational::one())],
            w_augs: Vec::new(),
            cross: vec![Vec::new()],
            form: None,
        })
    }

    /// Pure-basis model with a form.
    pub fn with_form(form: Form) -> Result<Model> {
        Self::new(Vec::new(), Vec::new(), Vec::new(), Some(form)).map(Arc::new)
    }

    /// Symmetric form with `e_{2i}` paired to `e_{2i+1}`.
    pub fn split_symmetric() -> Model {
        Self::with_form(Form {
            kind: FormKind::Symmetric,
            iota: Involution::adjacent_pairs(),
            sign: EpSeq::constant(Rational::one()),
        })
        .expect("valid form")
    }

    /// Antisymmetric form with `<e_{2i}, e_{2i+1}> = 1`.
    pub fn split_symplectic() -> Model {
        Self::with_form(Form {
            kind: FormKind::Antisymmetric,
            iota: Involution::adjacent_pairs(),
            sign: EpSeq::new(vec![], vec![Rational::one(), -Rational::one()]).unwrap(),
        })
        .expect("valid form")
    }

    pub fn v_augs(&self) -> &[EpSeq] {
        &self.v_augs
    }

    pub fn w_augs(&self) -> &[EpSeq] {
        &self.w_augs
    }

    pub fn cross(&self) -> &[Vec<Rational>] {
        &self.cross
    }

    pub fn form(&self) -> Option<&Form> {
        self.form.as_ref()
    }

    pub fn is_pure_basis(&self) -> bool {
        self.v_augs.is_empty() && self.w_augs.is_empty()
    }

    pub fn n_augs(&self, side: Side) -> usize {
        self.own_rows(side).len()
    }

    /// Rows of this side's augmentations against the other side's basis.
    pub fn own_rows(&self, side: Side) -> &[EpSeq] {
        match side {
            Side::V => &self.v_augs,
            Side::VStar => &self.w_augs,
        }
    }

    /// Rows of the other side's augmentations against this side's basis.
    pub fn other_rows(&self, side: Side) -> &[EpSeq] {
        self.own_rows(side.dual())
    }

    /// Pairing of this side's augmentation `k` with the other side's `l`.
    pub fn cross_entry(&self, side: Side, k: usize, l: usize) -> &Rational {
        match side {
            Side::V => &self.cross[k][l],
            Side::VStar => &self.cross[l][k],
        }
    }

    /// Joint window of all augmentation rows.
    pub fn window(&self) -> (usize, usize) {
        crate::epcore::stabilization_window(
            self.v_augs.iter().chain(&self.w_augs).map(|r| r as &dyn Periodic),
        )
    }

    /// The pairing, with arguments on opposite sides in either order.
    pub fn pair(&self, x: &Vector, y: &Vector) -> Result<Rational> {
        if x.side() == y.side() {
            return Err(Error::SideMismatch { expected: x.side().dual().to_string(), found: y.side().to_string() });
        }
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.pair_unchecked(x, y))
    }

    pub(crate) fn pair_unchecked(&self, x: &Vector, y: &Vector) -> Rational {
        let side = x.side();
        let own = self.own_rows(side);
        let other = self.other_rows(side);
        let mut acc = Rational::zero();
        // basis-basis: iterate the smaller support
        let (a, b) = if x.basis().len() <= y.basis().len() { (x, y) } else { (y, x) };
        for (i, c) in a.basis() {
            if let Some(d) = b.basis().get(i) {
                acc += c * d;
            }
        }
        for (l, bl) in y.aug().iter().enumerate() {
            if bl.is_zero() {
                continue;
            }
            for (i, c) in x.basis() {
                acc += c * bl * other[l].value_ref(*i);
            }
        }
        for (k, ak) in x.aug().iter().enumerate() {
            if ak.is_zero() {
                continue;
            }
            for (j, c) in y.basis() {
                acc += c * ak * own[k].value_ref(*j);
            }
            for (l, bl) in y.aug().iter().enumerate() {
                if !bl.is_zero() {
                    acc += ak * bl * self.cross_entry(side, k, l);
                }
            }
        }
        acc
    }

    /// `<x, basis_j of the other side>` as an eventually periodic sequence
    /// in `j`.
    pub fn pairing_row(&self, x: &Vector) -> EpSeq {
        let own = self.own_rows(x.side());
        let mut row = EpSeq::combination(own, x.aug());
        if !x.basis().is_empty() {
            let max = *x.basis().keys().next_back().unwrap();
            let mut vals = vec![Rational::zero(); max + 1];
            for (i, c) in x.basis() {
                vals[*i] = c.clone();
            }
            row = row.add(&EpSeq::finite(vals));
        }
        row
    }

    pub(crate) fn check_len(&self, x: &Vector) -> Result<()> {
        if x.aug().len() != self.n_augs(x.side()) {
            return Err(Error::ModelMismatch);
        }
        Ok(())
    }

    /// Basis of the vectors on `side` pairing to zero with the whole other
    /// side.
    pub fn radical(&self, side: Side) -> Vec<Vector> {
        let own = self.own_rows(side);
        let k = own.len();
        if k == 0 {
            return Vec::new();
        }
        // x = sum alpha_k a_k + sum c_i e_i with c_i = -sum alpha_k rho_k(i).
        let sol = ep_linear_solve(&own.iter().map(|r| (r.clone(), EpSet::naturals())).collect::<Vec<_>>());
        let cands: Vec<Vector> = sol
            .admissible
            .iter()
            .map(|alpha| Vector::from_parts(side, sol.correction(alpha), alpha.clone()))
            .collect();
        if cands.is_empty() {
            return Vec::new();
        }
        let others = self.n_augs(side.dual());
        let m = Matrix::from_rows(
            cands.len(),
            (0..others)
                .map(|l| {
                    let b = Vector::aug_unit(side.dual(), l, others);
                    cands.iter().map(|c| self.pair_unchecked(c, &b)).collect()
                })
                .collect(),
        );
        let ker = if others == 0 { identity_rows(cands.len()) } else { m.kernel() };
        ker.iter()
            .map(|z| {
                cands
                    .iter()
                    .zip(z)
                    .fold(Vector::zero(side, k), |acc, (c, s)| acc.add(&c.scale(s)))
            })
            .collect()
    }

    /// Confirms the pairing is nondegenerate on both sides.
    pub fn validate(&self) -> Result<ModelReport> {
        for side in [Side::V, Side::VStar] {
            if let Some(w) = self.radical(side).into_iter().next() {
                return Err(Error::DegeneratePairing(format!("{side}: {w:?}")));
            }
        }
        Ok(ModelReport { v_augs: self.v_augs.len(), w_augs: self.w_augs.len(), has_form: self.form.is_some() })
    }
}

fn identity_rows(n: usize) -> Vec<Vec<Rational>> {
    Matrix::identity(n).to_rows()
}

fn check_form(f: &Form) -> Result<()> {
    let (n0, p0) = f.iota.window();
    let n = n0.max(f.sign.threshold()) + f.iota.max_offset();
    let p = num_integer::lcm(p0, f.sign.period());
    for i in 0..n + 2 * p {
        let s = f.sign.value(i);
        if s != Rational::one() && s != -Rational::one() {
            return Err(Error::Invalid(format!("form sign at {i} must be +1 or -1")));
        }
        let j = f.iota.apply(i);
        let sj = f.sign.value(j);
        match f.kind {
            FormKind::Symmetric if sj != s => {
                return Err(Error::Invalid(format!("symmetric form needs sign({i}) = sign({j})")));
            }
            FormKind::Antisymmetric if j == i || sj != -s.clone() => {
                return Err(Error::Invalid(format!("antisymmetric form needs sign({i}) = -sign({j})")));
            }
            _ => {}
        }
    }
    Ok(())
}
