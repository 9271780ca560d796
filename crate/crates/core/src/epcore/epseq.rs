use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use super::{EpSet, Periodic};
use crate::exactnum::{format_rational, Rational};

/// Eventually periodic rational sequence indexed by the naturals.
///
/// `value(n)` is `preperiod[n]` below `preperiod.len()` and
/// `repeat[(n - preperiod.len()) % repeat.len()]` from there on. Values are
/// canonical: minimal repeat length, then minimal preperiod.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EpSeq {
    preperiod: Vec<Rational>,
    repeat: Vec<Rational>,
}

impl EpSeq {
    pub fn new(preperiod: Vec<Rational>, repeat: Vec<Rational>) -> Option<Self> {
        if repeat.is_empty() {
            return None;
        }
        Some(EpSeq { preperiod, repeat }.canonical())
    }

    /// Tabulates `f`, which must be periodic with `period` from `threshold`.
    pub fn from_fn(threshold: usize, period: usize, f: impl Fn(usize) -> Rational) -> Self {
        assert!(period > 0);
        let preperiod = (0..threshold).map(&f).collect();
        let repeat = (threshold..threshold + period).map(f).collect();
        EpSeq { preperiod, repeat }.canonical()
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    pub fn constant(c: Rational) -> Self {
        EpSeq { preperiod: Vec::new(), repeat: vec![c] }
    }

    /// Sequence equal to `values` then zero.
    pub fn finite(values: Vec<Rational>) -> Self {
        EpSeq { preperiod: values, repeat: vec![Rational::zero()] }.canonical()
    }

    /// Indicator of a set.
    pub fn indicator(s: &EpSet) -> Self {
        Self::from_fn(s.threshold(), s.period(), |n| {
            if s.contains(n) {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn preperiod(&self) -> &[Rational] {
        &self.preperiod
    }

    pub fn repeat(&self) -> &[Rational] {
        &self.repeat
    }

    #[inline]
    pub fn value(&self, n: usize) -> Rational {
        self.value_ref(n).clone()
    }

    #[inline]
    pub fn value_ref(&self, n: usize) -> &Rational {
        let l = self.preperiod.len();
        if n < l {
            &self.preperiod[n]
        } else {
            &self.repeat[(n - l) % self.repeat.len()]
        }
    }

    pub fn is_zero(&self) -> bool {
        self.preperiod.is_empty() && self.repeat.len() == 1 && self.repeat[0].is_zero()
    }

    /// True when only finitely many values are nonzero.
    pub fn is_finitely_supported(&self) -> bool {
        self.repeat.iter().all(Zero::is_zero)
    }

    /// `{n : value(n) != 0}`.
    pub fn support(&self) -> EpSet {
        EpSet::from_fn(self.threshold(), self.period(), |n| !self.value_ref(n).is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a - b)
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a * b)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        EpSeq {
            preperiod: self.preperiod.iter().map(|x| x * c).collect(),
            repeat: self.repeat.iter().map(|x| x * c).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    /// Zero outside `s`.
    pub fn mask(&self, s: &EpSet) -> Self {
        let n = self.threshold().max(s.threshold());
        let p = self.period().lcm(&s.period());
        Self::from_fn(n, p, |i| if s.contains(i) { self.value(i) } else { Rational::zero() })
    }

    /// `sum_k c_k * rows_k`.
    pub fn combination(rows: &[EpSeq], c: &[Rational]) -> Self {
        rows.iter()
            .zip(c)
            .filter(|(_, x)| !x.is_zero())
            .fold(Self::zero(), |acc, (r, x)| acc.add(&r.scale(x)))
    }

    fn zip(&self, o: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let n = self.threshold().max(o.threshold());
        let p = self.period().lcm(&o.period());
        Self::from_fn(n, p, |i| f(self.value_ref(i), o.value_ref(i)))
    }

    fn canonical(mut self) -> Self {
        let p = self.repeat.len();
        for d in (1..=p).filter(|&d| p.is_multiple_of(d)) {
            if (0..p).all(|r| self.repeat[r] == self.repeat[(r + d) % p]) {
                self.repeat.truncate(d);
                break;
            }
        }
        // Roll the preperiod back while its last entry matches the cycle.
        while let Some(last) = self.preperiod.last() {
            if *last == *self.repeat.last().unwrap() {
                self.preperiod.pop();
                self.repeat.rotate_right(1);
            } else {
                break;
            }
        }
        self
    }
}

impl Periodic for EpSeq {
    fn threshold(&self) -> usize {
        self.preperiod.len()
    }

    fn period(&self) -> usize {
        self.repeat.len()
    }
}

impl fmt::Debug for EpSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pre: Vec<String> = self.preperiod.iter().map(format_rational).collect();
        let rep: Vec<String> = self.repeat.iter().map(format_rational).collect();
        write!(f, "[{}]({})*", pre.join(", "), rep.join(", "))
    }
}
