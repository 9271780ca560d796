use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::Side;
use crate::exactnum::{format_rational, Rational};

/// Element of `V` or `V*`: finitely many basis coordinates plus
/// coefficients on the side's augmentations.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector {
    side: Side,
    basis: BTreeMap<usize, Rational>,
    aug: Vec<Rational>,
}

impl Vector {
    pub fn zero(side: Side, n_aug: usize) -> Self {
        Vector { side, basis: BTreeMap::new(), aug: vec![Rational::zero(); n_aug] }
    }

    pub fn new(side: Side, basis: BTreeMap<usize, Rational>, aug: Vec<Rational>) -> Self {
        let basis = basis.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Vector { side, basis, aug }
    }

    pub fn from_parts(side: Side, basis: impl IntoIterator<Item = (usize, Rational)>, aug: Vec<Rational>) -> Self {
        let mut map = BTreeMap::new();
        for (i, c) in basis {
            *map.entry(i).or_insert_with(Rational::zero) += c;
        }
        Self::new(side, map, aug)
    }

    pub fn basis_unit(side: Side, i: usize, n_aug: usize) -> Self {
        let mut v = Self::zero(side, n_aug);
        v.basis.insert(i, Rational::one());
        v
    }

    pub fn aug_unit(side: Side, k: usize, n_aug: usize) -> Self {
        let mut v = Self::zero(side, n_aug);
        v.aug[k] = Rational::one();
        v
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn basis(&self) -> &BTreeMap<usize, Rational> {
        &self.basis
    }

    pub fn aug(&self) -> &[Rational] {
        &self.aug
    }

    pub fn coord(&self, i: usize) -> Rational {
        self.basis.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty() && self.aug.iter().all(Zero::is_zero)
    }

    /// One past the largest basis index in the support.
    pub fn support_bound(&self) -> usize {
        self.basis.keys().next_back().map_or(0, |i| i + 1)
    }

    pub fn add(&self, o: &Vector) -> Vector {
        self.axpy(&Rational::one(), o)
    }

    pub fn sub(&self, o: &Vector) -> Vector {
        self.axpy(&-Rational::one(), o)
    }

    /// `self + c * o`.
    pub fn axpy(&self, c: &Rational, o: &Vector) -> Vector {
        debug_assert_eq!(self.side, o.side);
        let mut out = self.clone();
        if c.is_zero() {
            return out;
        }
        for (i, x) in &o.basis {
            let e = out.basis.entry(*i).or_insert_with(Rational::zero);
            *e += c * x;
            if e.is_zero() {
                out.basis.remove(i);
            }
        }
        for (a, b) in out.aug.iter_mut().zip(&o.aug) {
            *a += c * b;
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Vector {
        if c.is_zero() {
            return Vector::zero(self.side, self.aug.len());
        }
        Vector {
            side: self.side,
            basis: self.basis.iter().map(|(i, x)| (*i, x * c)).collect(),
            aug: self.aug.iter().map(|x| x * c).collect(),
        }
    }

    /// Dense coordinates: basis `[0, n)` then augmentations. Basis support
    /// at or above `n` is dropped.
    pub fn to_dense(&self, n: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); n + self.aug.len()];
        for (i, c) in self.basis.range(..n) {
            v[*i] = c.clone();
        }
        for (k, c) in self.aug.iter().enumerate() {
            v[n + k] = c.clone();
        }
        v
    }

    pub fn from_dense(side: Side, n: usize, v: &[Rational]) -> Vector {
        Vector::from_parts(side, (0..n).map(|i| (i, v[i].clone())), v[n..].to_vec())
    }

    /// Pivot of the canonical order: augmentation coordinates first, then
    /// ascending basis index.
    pub(crate) fn pivot(&self) -> Option<Pivot> {
        if let Some(k) = self.aug.iter().position(|c| !c.is_zero()) {
            return Some(Pivot::Aug(k));
        }
        self.basis.keys().next().map(|&i| Pivot::Basis(i))
    }

    pub(crate) fn at(&self, p: Pivot) -> Rational {
        match p {
            Pivot::Aug(k) => self.aug[k].clone(),
            Pivot::Basis(i) => self.coord(i),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Pivot {
    Aug(usize),
    Basis(usize),
}

/// Reduced echelon basis of the span of `vs` under the canonical pivot
/// order.
pub(crate) fn echelon(vs: &[Vector]) -> Vec<Vector> {
    let mut rows: Vec<Vector> = Vec::new();
    for v in vs {
        let mut r = v.clone();
        for b in &rows {
            let p = b.pivot().unwrap();
            let c = r.at(p);
            if !c.is_zero() {
                r = r.axpy(&-c, b);
            }
        }
        if let Some(p) = r.pivot() {
            let inv = r.at(p).recip();
            r = r.scale(&inv);
            for b in rows.iter_mut() {
                let c = b.at(p);
                if !c.is_zero() {
                    *b = b.axpy(&-c, &r);
                }
            }
            rows.push(r);
        }
    }
    rows.sort_by_key(|r| r.pivot());
    rows
}

/// Remainder of `v` after elimination against an echelon basis.
pub(crate) fn reduce_against(v: &Vector, rows: &[Vector]) -> Vector {
    let mut r = v.clone();
    for b in rows {
        let p = b.pivot().unwrap();
        let c = r.at(p);
        if !c.is_zero() {
            r = r.axpy(&-c, b);
        }
    }
    r
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (b, a) = match self.side {
            Side::V => ("e", "a"),
            Side::VStar => ("f", "b"),
        };
        let mut terms: Vec<String> = Vec::new();
        for (k, c) in self.aug.iter().enumerate() {
            if !c.is_zero() {
                terms.push(format!("{}*{a}{k}", format_rational(c)));
            }
        }
        for (i, c) in &self.basis {
            terms.push(format!("{}*{b}{i}", format_rational(c)));
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::q;

    #[test]
    fn echelon_prefers_aug_pivots() {
        let a = Vector::from_parts(Side::V, [(0, q(1))], vec![q(1)]);
        let b = Vector::from_parts(Side::V, [(0, q(2)), (3, q(1))], vec![q(0)]);
        let e = echelon(&[a, b]);
        assert_eq!(e.len(), 2);
        assert_eq!(e[0].pivot(), Some(Pivot::Aug(0)));
        assert_eq!(e[1].pivot(), Some(Pivot::Basis(0)));
        assert!(e[0].coord(0).is_zero());
    }

    #[test]
    fn dense_round_trip() {
        let v = Vector::from_parts(Side::VStar, [(1, q(2)), (4, q(-1))], vec![q(3)]);
        assert_eq!(Vector::from_dense(Side::VStar, 5, &v.to_dense(5)), v);
    }
}
