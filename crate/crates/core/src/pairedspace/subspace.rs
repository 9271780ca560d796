use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::vector::{echelon, reduce_against};
use super::{Model, Side, Vector};
use crate::epcore::{ep_linear_solve, join_window, EpSeq, EpSet, Periodic};
use crate::error::{Error, Result};
use crate::exactnum::{Matrix, Rational};

/// Subspace of `V` or `V*` of the form `K + span(corrections)` where
///
/// `K = { x in span(e_i : i in aligned) : phi_t(x) = 0 for every condition }`
///
/// and each condition `phi_t` is an eventually periodic functional
/// `x -> sum_i phi_t(i) x_i`. With no conditions this is the plain
/// "aligned set plus finite corrections" shape. Conditions are needed
/// because annihilators in augmented models are of this kind, e.g. the
/// annihilator of a vector pairing to 1 with every basis vector is
/// `{ sum x_i f_i : sum x_i = 0 }`.
///
/// Conditions are kept masked to the aligned set and in reduced echelon
/// form with respect to their values on the window, with pivot indices
/// `pivots`. Corrections are kept reduced modulo `K` (their support inside
/// the aligned set lies in `pivots`) and in reduced echelon form under the
/// order "augmentation coordinates first, then ascending basis index".
#[derive(Clone)]
pub struct Subspace {
    model: Model,
    side: Side,
    aligned: EpSet,
    conditions: Vec<EpSeq>,
    pivots: Vec<usize>,
    corrections: Vec<Vector>,
}

impl Subspace {
    pub fn new(
        model: &Model,
        side: Side,
        aligned: EpSet,
        conditions: Vec<EpSeq>,
        corrections: Vec<Vector>,
    ) -> Result<Self> {
        for c in &corrections {
            if c.side() != side {
                return Err(Error::SideMismatch { expected: side.to_string(), found: c.side().to_string() });
            }
            model.check_len(c)?;
        }
        Ok(normalize(model, side, aligned, conditions, corrections))
    }

    pub fn zero(model: &Model, side: Side) -> Self {
        Self::aligned(model, side, EpSet::empty())
    }

    /// The whole side, augmentations included.
    pub fn full(model: &Model, side: Side) -> Self {
        let k = model.n_augs(side);
        let corr = (0..k).map(|i| Vector::aug_unit(side, i, k)).collect();
        normalize(model, side, EpSet::naturals(), Vec::new(), corr)
    }

    /// `span(e_i : i in s)`.
    pub fn aligned(model: &Model, side: Side, s: EpSet) -> Self {
        normalize(model, side, s, Vec::new(), Vec::new())
    }

    /// Span of finitely many vectors.
    pub fn span(model: &Model, side: Side, vectors: Vec<Vector>) -> Result<Self> {
        Self::new(model, side, EpSet::empty(), Vec::new(), vectors)
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn aligned_set(&self) -> &EpSet {
        &self.aligned
    }

    pub fn conditions(&self) -> &[EpSeq] {
        &self.conditions
    }

    pub fn corrections(&self) -> &[Vector] {
        &self.corrections
    }

    /// True for the plain "aligned set plus corrections" shape.
    pub fn is_unconditioned(&self) -> bool {
        self.conditions.is_empty()
    }

    /// `(N*, p*)`: past `N*` every defining datum repeats with period `p*`
    /// and no correction or pivot reaches `N*`.
    pub fn window(&self) -> (usize, usize) {
        let mut w = join_window(self.model.window(), (self.aligned.threshold(), self.aligned.period()));
        for c in &self.conditions {
            w = join_window(w, (c.threshold(), c.period()));
        }
        let bound = self
            .corrections
            .iter()
            .map(Vector::support_bound)
            .chain(self.pivots.iter().map(|p| p + 1))
            .max()
            .unwrap_or(0);
        (w.0.max(bound), w.1)
    }

    fn check_same(&self, o: &Subspace) -> Result<()> {
        if !Arc::ptr_eq(&self.model, &o.model) && self.model != o.model {
            return Err(Error::ModelMismatch);
        }
        if self.side != o.side {
            return Err(Error::SideMismatch { expected: self.side.to_string(), found: o.side.to_string() });
        }
        Ok(())
    }

    fn check_vector(&self, v: &Vector) -> Result<()> {
        if v.side() != self.side {
            return Err(Error::SideMismatch { expected: self.side.to_string(), found: v.side().to_string() });
        }
        self.model.check_len(v)
    }

    fn naug(&self) -> usize {
        self.model.n_augs(self.side)
    }

    /// Basis vector of `K` attached to a non-pivot aligned index `i`:
    /// `e_i - sum_t phi_t(i) e_{pivot_t}`.
    pub fn kernel_vector(&self, i: usize) -> Vector {
        let mut terms = vec![(i, Rational::one())];
        for (t, p) in self.pivots.iter().enumerate() {
            let c = self.conditions[t].value(i);
            if !c.is_zero() {
                terms.push((*p, -c));
            }
        }
        Vector::from_parts(self.side, terms, vec![Rational::zero(); self.naug()])
    }

    /// Projection with kernel `K`: clears aligned coordinates outside the
    /// pivots.
    fn reduce_mod_k(&self, v: &Vector) -> Vector {
        reduce_mod(&self.aligned, &self.conditions, &self.pivots, v)
    }

    pub fn member(&self, v: &Vector) -> Result<bool> {
        self.check_vector(v)?;
        Ok(self.member_unchecked(v))
    }

    pub(crate) fn member_unchecked(&self, v: &Vector) -> bool {
        reduce_against(&self.reduce_mod_k(v), &self.corrections).is_zero()
    }

    /// `o ⊆ self`.
    pub fn contains(&self, o: &Subspace) -> Result<bool> {
        self.check_same(o)?;
        if !o.corrections.iter().all(|c| self.member_unchecked(c)) {
            return Ok(false);
        }
        let (n, p) = join_window(self.window(), o.window());
        let piv: BTreeSet<usize> = o.pivots.iter().copied().collect();
        for i in o.aligned.members_in(0, n + p) {
            if !piv.contains(&i) && !self.member_unchecked(&o.kernel_vector(i)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality as subspaces.
    pub fn same_as(&self, o: &Subspace) -> Result<bool> {
        Ok(self.contains(o)? && o.contains(self)?)
    }

    pub fn is_zero(&self) -> bool {
        self.corrections.is_empty() && self.aligned.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.same_as(&Subspace::full(&self.model, self.side)).unwrap_or(false)
    }

    pub fn sum(&self, o: &Subspace) -> Result<Subspace> {
        self.check_same(o)?;
        let s = self.aligned.union(&o.aligned);
        // Functionals on span(e_s) vanishing on both kernels: mu*Phi_A on
        // the first aligned set, nu*Phi_B on the second, agreeing on the
        // overlap.
        let ta = self.conditions.len();
        let tb = o.conditions.len();
        let mut conditions = Vec::new();
        if ta + tb > 0 {
            let (n, p) = join_window(self.window(), o.window());
            let overlap = self.aligned.intersection(&o.aligned);
            let eqs: Vec<Vec<Rational>> = overlap
                .members_in(0, n + p)
                .into_iter()
                .map(|i| {
                    self.conditions
                        .iter()
                        .map(|c| c.value(i))
                        .chain(o.conditions.iter().map(|c| -c.value(i)))
                        .collect()
                })
                .collect();
            let only_b = o.aligned.difference(&self.aligned);
            for z in kernel(eqs, ta + tb) {
                let la = EpSeq::combination(&self.conditions, &z[..ta]);
                let lb = EpSeq::combination(&o.conditions, &z[ta..]).mask(&only_b);
                conditions.push(la.add(&lb));
            }
        }
        let mut corr = self.corrections.clone();
        corr.extend(o.corrections.iter().cloned());
        Ok(normalize(&self.model, self.side, s, conditions, corr))
    }

    pub fn intersection(&self, o: &Subspace) -> Result<Subspace> {
        self.check_same(o)?;
        let t = self.aligned.intersection(&o.aligned);
        let mut conditions: Vec<EpSeq> = self.conditions.iter().map(|c| c.mask(&t)).collect();
        conditions.extend(o.conditions.iter().map(|c| c.mask(&t)));
        // Particular vectors x = a + sum c r_A = b + sum d r_B with a in K_A,
        // b in K_B, all supported in the joint window.
        let (n, p) = join_window(self.window(), o.window());
        let m = n + p;
        let ra = &self.corrections;
        let rb = &o.corrections;
        let ai = self.aligned.members_in(0, m);
        let bi = o.aligned.members_in(0, m);
        let naug = self.naug();
        let nu = ra.len() + rb.len() + ai.len() + bi.len();
        let oc = ra.len();
        let oa = oc + rb.len();
        let ob = oa + ai.len();
        let mut eqs = Vec::new();
        for i in 0..m {
            let mut row = vec![Rational::zero(); nu];
            for (j, r) in ra.iter().enumerate() {
                row[j] = r.coord(i);
            }
            for (j, r) in rb.iter().enumerate() {
                row[oc + j] = -r.coord(i);
            }
            if let Ok(j) = ai.binary_search(&i) {
                row[oa + j] = Rational::one();
            }
            if let Ok(j) = bi.binary_search(&i) {
                row[ob + j] = -Rational::one();
            }
            eqs.push(row);
        }
        for k in 0..naug {
            let mut row = vec![Rational::zero(); nu];
            for (j, r) in ra.iter().enumerate() {
                row[j] = r.aug()[k].clone();
            }
            for (j, r) in rb.iter().enumerate() {
                row[oc + j] = -r.aug()[k].clone();
            }
            eqs.push(row);
        }
        for c in &self.conditions {
            let mut row = vec![Rational::zero(); nu];
            for (j, &i) in ai.iter().enumerate() {
                row[oa + j] = c.value(i);
            }
            eqs.push(row);
        }
        for c in &o.conditions {
            let mut row = vec![Rational::zero(); nu];
            for (j, &i) in bi.iter().enumerate() {
                row[ob + j] = c.value(i);
            }
            eqs.push(row);
        }
        let corr: Vec<Vector> = kernel(eqs, nu)
            .into_iter()
            .map(|z| {
                let mut x = Vector::from_parts(
                    self.side,
                    ai.iter().enumerate().map(|(j, &i)| (i, z[oa + j].clone())),
                    vec![Rational::zero(); naug],
                );
                for (j, r) in ra.iter().enumerate() {
                    x = x.axpy(&z[j], r);
                }
                x
            })
            .collect();
        Ok(normalize(&self.model, self.side, t, conditions, corr))
    }

    /// Annihilator on the other side.
    pub fn perp(&self) -> Subspace {
        let model = &self.model;
        let side = self.side;
        let dual = side.dual();
        let ndual = model.n_augs(dual);
        let tau = model.other_rows(side);
        let s = &self.aligned;
        let tconds = self.conditions.len();
        // y pairs with e_i (i in s) to y_i + sum_l beta_l tau_l(i); this must
        // be a combination sum_t mu_t phi_t(i), so it is finitely supported.
        let mut rows: Vec<(EpSeq, EpSet)> = self.conditions.iter().map(|c| (c.clone(), s.clone())).collect();
        rows.extend(tau.iter().map(|r| (r.neg(), s.clone())));
        let sol = ep_linear_solve(&rows);
        let base: Vec<Vector> = sol
            .admissible
            .iter()
            .map(|z| {
                let basis = sol.correction(z).into_iter().map(|(i, c)| (i, -c));
                Vector::from_parts(dual, basis, z[tconds..].to_vec())
            })
            .collect();
        let comp = s.complement();
        let u: Vec<EpSeq> = self.corrections.iter().map(|r| model.pairing_row(r).mask(&comp)).collect();
        let mut w = (comp.threshold(), comp.period());
        for r in &u {
            w = join_window(w, (r.threshold(), r.period()));
        }
        let cols = comp.members_in(0, w.0 + w.1);
        let nu = base.len() + cols.len();
        let eqs: Vec<Vec<Rational>> = self
            .corrections
            .iter()
            .zip(&u)
            .map(|(r, ur)| {
                base.iter()
                    .map(|y| model.pair_unchecked(r, y))
                    .chain(cols.iter().map(|&j| ur.value(j)))
                    .collect()
            })
            .collect();
        let corr: Vec<Vector> = kernel(eqs, nu)
            .into_iter()
            .map(|z| {
                let mut y = Vector::from_parts(
                    dual,
                    cols.iter().enumerate().map(|(k, &j)| (j, z[base.len() + k].clone())),
                    vec![Rational::zero(); ndual],
                );
                for (k, b) in base.iter().enumerate() {
                    y = y.axpy(&z[k], b);
                }
                y
            })
            .collect();
        normalize(model, dual, comp, u, corr)
    }

    /// Linear projection whose kernel is exactly `self`; its values are
    /// finitely supported and it fixes its own outputs.
    pub fn normal_form(&self, v: &Vector) -> Result<Vector> {
        self.check_vector(v)?;
        Ok(reduce_against(&self.reduce_mod_k(v), &self.corrections))
    }

    /// Spanning vectors for the part of `self` that an operator supported
    /// below `bound` can distinguish: the kernel vectors of aligned indices
    /// below `max(bound, N*) + p*` and the corrections. The image of `self`
    /// under any finite-rank operator whose basis support lies below
    /// `bound` is the span of the images of these vectors.
    pub fn window_generators(&self, bound: usize) -> Vec<Vector> {
        let (n, p) = self.window();
        let piv: BTreeSet<usize> = self.pivots.iter().copied().collect();
        let mut out: Vec<Vector> = self
            .aligned
            .members_in(0, n.max(bound) + p)
            .into_iter()
            .filter(|i| !piv.contains(i))
            .map(|i| self.kernel_vector(i))
            .collect();
        out.extend(self.corrections.iter().cloned());
        out
    }

    /// Mackey closure, the double annihilator.
    pub fn closure(&self) -> Subspace {
        self.perp().perp()
    }

    pub fn is_closed(&self) -> bool {
        self.contains(&self.closure()).expect("closure lives in the same model")
    }

    /// Basis of `self ∩ V_n`, where `V_n` is spanned by the first `n` basis
    /// vectors and all augmentations; dense coordinates as in
    /// [`Vector::to_dense`].
    pub fn truncate(&self, n: usize) -> Vec<Vec<Rational>> {
        let naug = self.naug();
        let (w, _) = self.window();
        let m = n.max(w);
        let idx = self.aligned.members_in(0, m);
        let nr = self.corrections.len();
        let nu = idx.len() + nr;
        let mut eqs = Vec::new();
        for c in &self.conditions {
            let mut row = vec![Rational::zero(); nu];
            for (j, &i) in idx.iter().enumerate() {
                row[j] = c.value(i);
            }
            eqs.push(row);
        }
        for i in n..m {
            let mut row = vec![Rational::zero(); nu];
            if let Ok(j) = idx.binary_search(&i) {
                row[j] = Rational::one();
            }
            for (k, r) in self.corrections.iter().enumerate() {
                row[idx.len() + k] = r.coord(i);
            }
            eqs.push(row);
        }
        let vecs: Vec<Vec<Rational>> = kernel(eqs, nu)
            .into_iter()
            .map(|z| {
                let mut v = vec![Rational::zero(); n + naug];
                for (j, &i) in idx.iter().enumerate() {
                    if i < n {
                        v[i] += &z[j];
                    }
                }
                for (k, r) in self.corrections.iter().enumerate() {
                    if z[idx.len() + k].is_zero() {
                        continue;
                    }
                    let d = r.to_dense(n);
                    for (x, y) in v.iter_mut().zip(&d) {
                        *x += &z[idx.len() + k] * y;
                    }
                }
                v
            })
            .collect();
        crate::exactnum::span_basis(&vecs, n + naug)
    }

    /// Dimension of `self ∩ V_n`.
    pub fn truncated_dim(&self, n: usize) -> usize {
        self.truncate(n).len()
    }

    /// `dim(self / sub)` for `sub ⊆ self`, or `None` when infinite.
    pub fn quotient_dim(&self, sub: &Subspace) -> Result<Option<usize>> {
        self.check_same(sub)?;
        let (n, p) = join_window(self.window(), sub.window());
        let d1 = self.truncated_dim(n + p) - sub.truncated_dim(n + p);
        let d2 = self.truncated_dim(n + 2 * p) - sub.truncated_dim(n + 2 * p);
        Ok((d1 == d2).then_some(d1))
    }

    /// Image `J(self)` in `V*` of a subspace of `V` under the form.
    pub fn form_image(&self) -> Result<Subspace> {
        let form = self.model.form().ok_or(Error::NoFormOnModel)?;
        if self.side != Side::V {
            return Err(Error::SideMismatch { expected: "V".into(), found: self.side.to_string() });
        }
        let aligned = form.iota.image(&self.aligned);
        let conditions = self.conditions.iter().map(|c| form.iota.pull_back(c, &form.sign)).collect();
        let corrections = self
            .corrections
            .iter()
            .map(|v| super::form_image(&self.model, v))
            .collect::<Result<Vec<_>>>()?;
        Ok(normalize(&self.model, Side::VStar, aligned, conditions, corrections))
    }

    /// Annihilator under the model's form, computed on `V`.
    pub fn form_perp(&self) -> Result<Subspace> {
        let form = self.model.form().ok_or(Error::NoFormOnModel)?;
        if self.side != Side::V {
            return Err(Error::SideMismatch { expected: "V".into(), found: self.side.to_string() });
        }
        let p = self.perp();
        let aligned = form.iota.image(&p.aligned);
        let conditions = p.conditions.iter().map(|c| form.iota.pull_back(c, &form.sign)).collect();
        let corrections = p.corrections.iter().map(|g| super::form_preimage(&self.model, g)).collect();
        Ok(normalize(&self.model, Side::V, aligned, conditions, corrections))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace({}, aligned {:?}", self.side, self.aligned)?;
        if !self.conditions.is_empty() {
            write!(f, ", conditions {:?}", self.conditions)?;
        }
        if !self.corrections.is_empty() {
            write!(f, ", corrections {:?}", self.corrections)?;
        }
        write!(f, ")")
    }
}

/// Kernel of a homogeneous system given by equation rows; all of
/// `Q^unknowns` when there are no equations.
pub(crate) fn kernel(eqs: Vec<Vec<Rational>>, unknowns: usize) -> Vec<Vec<Rational>> {
    if unknowns == 0 {
        return Vec::new();
    }
    if eqs.is_empty() {
        return Matrix::identity(unknowns).to_rows();
    }
    Matrix::from_rows(unknowns, eqs).kernel()
}

fn reduce_mod(aligned: &EpSet, conditions: &[EpSeq], pivots: &[usize], v: &Vector) -> Vector {
    let piv: BTreeSet<usize> = pivots.iter().copied().collect();
    let mut terms: Vec<(usize, Rational)> = Vec::new();
    for (&i, c) in v.basis() {
        if aligned.contains(i) && !piv.contains(&i) {
            // subtract c * (e_i - sum_t phi_t(i) e_{p_t})
            for (t, p) in pivots.iter().enumerate() {
                let f = conditions[t].value(i);
                if !f.is_zero() {
                    terms.push((*p, c * f));
                }
            }
        } else {
            terms.push((i, c.clone()));
        }
    }
    Vector::from_parts(v.side(), terms, v.aug().to_vec())
}

/// Brings `(aligned, conditions, corrections)` to the normal form described
/// on [`Subspace`].
fn normalize(model: &Model, side: Side, aligned: EpSet, conditions: Vec<EpSeq>, corrections: Vec<Vector>) -> Subspace {
    let mut aligned = aligned;
    let mut conditions: Vec<EpSeq> = conditions
        .into_iter()
        .map(|c| c.mask(&aligned))
        .filter(|c| !c.is_zero())
        .collect();
    let mut corrections = corrections;
    let naug = model.n_augs(side);

    // Conditions with a finitely supported combination cut out a finite
    // set F: split K into the part over aligned \ F plus finitely many
    // vectors touching F.
    if !conditions.is_empty() {
        let sol = ep_linear_solve(&conditions.iter().map(|c| (c.clone(), EpSet::naturals())).collect::<Vec<_>>());
        let mut f = BTreeSet::new();
        for d in &sol.admissible {
            f.extend(sol.correction(d).into_iter().map(|(i, _)| i));
        }
        if !f.is_empty() {
            let mut w = (aligned.threshold(), aligned.period());
            for c in &conditions {
                w = join_window(w, (c.threshold(), c.period()));
            }
            let m = w.0.max(f.iter().next_back().unwrap() + 1) + w.1;
            let idx = aligned.members_in(0, m);
            let eqs: Vec<Vec<Rational>> =
                conditions.iter().map(|c| idx.iter().map(|&i| c.value(i)).collect()).collect();
            for z in kernel(eqs, idx.len()) {
                if idx.iter().zip(&z).any(|(i, c)| f.contains(i) && !c.is_zero()) {
                    corrections.push(Vector::from_parts(
                        side,
                        idx.iter().copied().zip(z),
                        vec![Rational::zero(); naug],
                    ));
                }
            }
            aligned = aligned.difference(&EpSet::finite(f));
            conditions = conditions.into_iter().map(|c| c.mask(&aligned)).filter(|c| !c.is_zero()).collect();
        }
    }

    // Reduced echelon form of the conditions on the window columns.
    let mut pivots = Vec::new();
    if !conditions.is_empty() {
        let mut w = (aligned.threshold(), aligned.period());
        for c in &conditions {
            w = join_window(w, (c.threshold(), c.period()));
        }
        let cols = aligned.members_in(0, w.0 + w.1);
        let mut rows = conditions;
        let mut done = 0;
        for &col in &cols {
            if done == rows.len() {
                break;
            }
            let Some(r) = (done..rows.len()).find(|&r| !rows[r].value_ref(col).is_zero()) else {
                continue;
            };
            rows.swap(done, r);
            let inv = rows[done].value(col).recip();
            rows[done] = rows[done].scale(&inv);
            for r in 0..rows.len() {
                if r != done {
                    let c = rows[r].value(col);
                    if !c.is_zero() {
                        rows[r] = rows[r].sub(&rows[done].scale(&c));
                    }
                }
            }
            pivots.push(col);
            done += 1;
        }
        rows.truncate(done);
        conditions = rows;
    }

    let reduced: Vec<Vector> = corrections
        .iter()
        .map(|c| reduce_mod(&aligned, &conditions, &pivots, c))
        .collect();
    let corrections = echelon(&reduced);
    Subspace { model: model.clone(), side, aligned, conditions, pivots, corrections }
}
