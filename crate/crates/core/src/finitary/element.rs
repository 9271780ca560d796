use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{format_rational, Rational};
use crate::pairedspace::{Model, Side, Vector};

/// Coordinate of `V` or `V*`: an augmentation or a basis vector. The order
/// puts augmentations first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coord {
    Aug(usize),
    Basis(usize),
}

impl Coord {
    pub fn unit(self, model: &Model, side: Side) -> Vector {
        let k = model.n_augs(side);
        match self {
            Coord::Aug(a) => Vector::aug_unit(side, a, k),
            Coord::Basis(i) => Vector::basis_unit(side, i, k),
        }
    }

    /// Coordinates carrying a nonzero entry of `v`.
    pub fn support(v: &Vector) -> Vec<(Coord, Rational)> {
        let mut out: Vec<(Coord, Rational)> = v
            .aug()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (Coord::Aug(k), c.clone()))
            .collect();
        out.extend(v.basis().iter().map(|(i, c)| (Coord::Basis(*i), c.clone())));
        out
    }
}

/// `<v_a, w_b>` for coordinates of `V` and `V*`.
pub fn coord_pair(model: &Model, a: Coord, b: Coord) -> Rational {
    match (a, b) {
        (Coord::Basis(i), Coord::Basis(j)) => {
            if i == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        }
        (Coord::Aug(k), Coord::Basis(j)) => model.own_rows(Side::V)[k].value(j),
        (Coord::Basis(i), Coord::Aug(l)) => model.own_rows(Side::VStar)[l].value(i),
        (Coord::Aug(k), Coord::Aug(l)) => model.cross_entry(Side::V, k, l).clone(),
    }
}

/// Finite-rank operator `sum x[a][b] v_a ⊗ w_b` in `V ⊗ V*`, stored as its
/// sparse coefficient matrix over the coordinate bases; this is canonical.
#[derive(Clone)]
pub struct FinitaryElement {
    model: Model,
    entries: BTreeMap<(Coord, Coord), Rational>,
}

impl PartialEq for FinitaryElement {
    fn eq(&self, o: &Self) -> bool {
        same_model(&self.model, &o.model) && self.entries == o.entries
    }
}

impl Eq for FinitaryElement {}

pub(crate) fn same_model(a: &Model, b: &Model) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl FinitaryElement {
    pub fn zero(model: &Model) -> Self {
        FinitaryElement { model: model.clone(), entries: BTreeMap::new() }
    }

    pub fn from_entries(model: &Model, entries: impl IntoIterator<Item = ((Coord, Coord), Rational)>) -> Self {
        let mut x = Self::zero(model);
        for (k, c) in entries {
            x.add_entry(k, c);
        }
        x
    }

    /// `v ⊗ w`.
    pub fn rank_one(model: &Model, v: &Vector, w: &Vector) -> Result<Self> {
        Self::from_terms(model, &[(v.clone(), w.clone())])
    }

    /// `sum v_i ⊗ w_i`.
    pub fn from_terms(model: &Model, terms: &[(Vector, Vector)]) -> Result<Self> {
        let mut x = Self::zero(model);
        for (v, w) in terms {
            if v.side() != Side::V || w.side() != Side::VStar {
                return Err(Error::SideMismatch { expected: "V ⊗ V*".into(), found: format!("{} ⊗ {}", v.side(), w.side()) });
            }
            model.pair(v, w)?;
            for (a, c) in Coord::support(v) {
                for (b, d) in Coord::support(w) {
                    x.add_entry((a, b), &c * &d);
                }
            }
        }
        Ok(x)
    }

    /// Elementary matrix `e_i ⊗ f_j` scaled by `c`.
    pub fn elementary(model: &Model, i: usize, j: usize, c: Rational) -> Self {
        Self::from_entries(model, [((Coord::Basis(i), Coord::Basis(j)), c)])
    }

    fn add_entry(&mut self, k: (Coord, Coord), c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.entries.entry(k).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.entries.remove(&k);
        }
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn entries(&self) -> &BTreeMap<(Coord, Coord), Rational> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// One past the largest basis index on either side.
    pub fn support_bound(&self) -> usize {
        self.entries
            .keys()
            .flat_map(|(a, b)| [*a, *b])
            .filter_map(|c| match c {
                Coord::Basis(i) => Some(i + 1),
                Coord::Aug(_) => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Terms `(v, w)` with the `v` distinct coordinate vectors, hence
    /// linearly independent.
    pub fn terms(&self) -> Vec<(Vector, Vector)> {
        let mut rows: BTreeMap<Coord, Vec<(Coord, Rational)>> = BTreeMap::new();
        for ((a, b), c) in &self.entries {
            rows.entry(*a).or_default().push((*b, c.clone()));
        }
        rows.into_iter()
            .map(|(a, row)| {
                let mut w = Vector::zero(Side::VStar, self.model.n_augs(Side::VStar));
                for (b, c) in row {
                    w = w.axpy(&c, &b.unit(&self.model, Side::VStar));
                }
                (a.unit(&self.model, Side::V), w)
            })
            .collect()
    }

    pub(crate) fn check(&self, o: &FinitaryElement) -> Result<()> {
        if same_model(&self.model, &o.model) {
            Ok(())
        } else {
            Err(Error::ModelMismatch)
        }
    }

    pub fn add(&self, o: &FinitaryElement) -> Result<Self> {
        self.axpy(&Rational::one(), o)
    }

    pub fn sub(&self, o: &FinitaryElement) -> Result<Self> {
        self.axpy(&-Rational::one(), o)
    }

    /// `self + c * o`.
    pub fn axpy(&self, c: &Rational, o: &FinitaryElement) -> Result<Self> {
        self.check(o)?;
        let mut x = self.clone();
        for (k, d) in &o.entries {
            x.add_entry(*k, c * d);
        }
        Ok(x)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_entries(&self.model, self.entries.iter().map(|(k, d)| (*k, c * d)))
    }

    /// Composition `self ∘ o`, from `(v ⊗ w)(v' ⊗ w') = <v', w> v ⊗ w'`.
    pub fn compose(&self, o: &FinitaryElement) -> Result<Self> {
        self.check(o)?;
        let mut by_row: BTreeMap<Coord, Vec<(Coord, &Rational)>> = BTreeMap::new();
        for ((c, d), y) in &o.entries {
            by_row.entry(*c).or_default().push((*d, y));
        }
        let mut out = Self::zero(&self.model);
        for ((a, b), x) in &self.entries {
            for (c, row) in &by_row {
                let p = coord_pair(&self.model, *c, *b);
                if p.is_zero() {
                    continue;
                }
                let xp = x * p;
                for (d, y) in row {
                    out.add_entry((*a, *d), &xp * *y);
                }
            }
        }
        Ok(out)
    }

    pub fn bracket(&self, o: &FinitaryElement) -> Result<Self> {
        self.compose(o)?.sub(&o.compose(self)?)
    }

    /// `sum <v_i, w_i>`.
    pub fn trace(&self) -> Rational {
        self.entries.iter().map(|((a, b), c)| c * coord_pair(&self.model, *a, *b)).sum()
    }

    /// `x · u = sum <u, w_i> v_i`.
    pub fn act_v(&self, u: &Vector) -> Result<Vector> {
        if u.side() != Side::V {
            return Err(Error::SideMismatch { expected: "V".into(), found: u.side().to_string() });
        }
        self.model.pair(u, &Vector::zero(Side::VStar, self.model.n_augs(Side::VStar)))?;
        let us = Coord::support(u);
        let mut out = Vector::zero(Side::V, self.model.n_augs(Side::V));
        for ((a, b), x) in &self.entries {
            let p: Rational = us.iter().map(|(c, uc)| uc * coord_pair(&self.model, *c, *b)).sum();
            if !p.is_zero() {
                out = out.axpy(&(x * p), &a.unit(&self.model, Side::V));
            }
        }
        Ok(out)
    }

    /// `x · g = - sum <v_i, g> w_i`.
    pub fn act_vstar(&self, g: &Vector) -> Result<Vector> {
        if g.side() != Side::VStar {
            return Err(Error::SideMismatch { expected: "V*".into(), found: g.side().to_string() });
        }
        self.model.pair(&Vector::zero(Side::V, self.model.n_augs(Side::V)), g)?;
        let gs = Coord::support(g);
        let mut out = Vector::zero(Side::VStar, self.model.n_augs(Side::VStar));
        for ((a, b), x) in &self.entries {
            let p: Rational = gs.iter().map(|(c, gc)| gc * coord_pair(&self.model, *a, *c)).sum();
            if !p.is_zero() {
                out = out.axpy(&-(x * p), &b.unit(&self.model, Side::VStar));
            }
        }
        Ok(out)
    }

    /// Action on the given side.
    pub fn act(&self, u: &Vector) -> Result<Vector> {
        match u.side() {
            Side::V => self.act_v(u),
            Side::VStar => self.act_vstar(u),
        }
    }
}

impl fmt::Debug for FinitaryElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        let name = |c: &Coord, v: bool| match (c, v) {
            (Coord::Aug(k), true) => format!("a{k}"),
            (Coord::Basis(i), true) => format!("e{i}"),
            (Coord::Aug(k), false) => format!("b{k}"),
            (Coord::Basis(i), false) => format!("f{i}"),
        };
        let terms: Vec<String> = self
            .entries
            .iter()
            .map(|((a, b), c)| format!("{}*{}⊗{}", format_rational(c), name(a, true), name(b, false)))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}
