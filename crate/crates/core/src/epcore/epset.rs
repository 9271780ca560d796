use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;

use super::Periodic;

/// Eventually periodic subset of the naturals.
///
/// `n < threshold` is a member iff it lies in `pre`; `n >= threshold` is a
/// member iff `n % period` lies in `residues`. Values are always canonical:
/// minimal period, then minimal threshold, so derived equality is set
/// equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EpSet {
    threshold: usize,
    period: usize,
    pre: BTreeSet<usize>,
    residues: BTreeSet<usize>,
}

impl EpSet {
    /// Builds and canonicalizes. Entries of `pre` at or above `threshold`
    /// and residues at or above `period` are rejected.
    pub fn new(
        threshold: usize,
        period: usize,
        pre: impl IntoIterator<Item = usize>,
        residues: impl IntoIterator<Item = usize>,
    ) -> Option<Self> {
        if period == 0 {
            return None;
        }
        let pre: BTreeSet<usize> = pre.into_iter().collect();
        let residues: BTreeSet<usize> = residues.into_iter().collect();
        if pre.iter().any(|&x| x >= threshold) || residues.iter().any(|&r| r >= period) {
            return None;
        }
        Some(EpSet { threshold, period, pre, residues }.canonical())
    }

    /// Tabulates a predicate on `[0, threshold + period)`; the predicate must
    /// be periodic from `threshold` on.
    pub fn from_fn(threshold: usize, period: usize, f: impl Fn(usize) -> bool) -> Self {
        assert!(period > 0);
        let pre = (0..threshold).filter(|&n| f(n));
        let residues = (0..period).filter(|&r| f(first_at_least(threshold, period, r)));
        EpSet {
            threshold,
            period,
            pre: pre.collect(),
            residues: residues.collect(),
        }
        .canonical()
    }

    pub fn empty() -> Self {
        EpSet { threshold: 0, period: 1, pre: BTreeSet::new(), residues: BTreeSet::new() }
    }

    pub fn naturals() -> Self {
        EpSet { threshold: 0, period: 1, pre: BTreeSet::new(), residues: [0].into() }
    }

    pub fn finite(members: impl IntoIterator<Item = usize>) -> Self {
        let pre: BTreeSet<usize> = members.into_iter().collect();
        let threshold = pre.iter().next_back().map_or(0, |m| m + 1);
        EpSet { threshold, period: 1, pre, residues: BTreeSet::new() }.canonical()
    }

    /// `{n : n % modulus == residue}`.
    pub fn residue_class(modulus: usize, residue: usize) -> Self {
        Self::new(0, modulus, [], [residue % modulus]).expect("modulus must be positive")
    }

    /// `{n : n >= start}`.
    pub fn at_least(start: usize) -> Self {
        Self::from_fn(start, 1, |n| n >= start)
    }

    /// `[0, end)`.
    pub fn below(end: usize) -> Self {
        Self::finite(0..end)
    }

    pub fn pre(&self) -> &BTreeSet<usize> {
        &self.pre
    }

    pub fn residues(&self) -> &BTreeSet<usize> {
        &self.residues
    }

    #[inline]
    pub fn contains(&self, n: usize) -> bool {
        if n < self.threshold {
            self.pre.contains(&n)
        } else {
            self.residues.contains(&(n % self.period))
        }
    }

    pub fn is_empty(&self) -> bool {
        self.pre.is_empty() && self.residues.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn is_naturals(&self) -> bool {
        *self == Self::naturals()
    }

    /// Number of members per period in the tail.
    pub fn density(&self) -> (usize, usize) {
        (self.residues.len(), self.period)
    }

    pub fn complement(&self) -> Self {
        Self::from_fn(self.threshold, self.period, |n| !self.contains(n))
    }

    pub fn union(&self, o: &Self) -> Self {
        self.combine(o, |a, b| a || b)
    }

    pub fn intersection(&self, o: &Self) -> Self {
        self.combine(o, |a, b| a && b)
    }

    pub fn difference(&self, o: &Self) -> Self {
        self.combine(o, |a, b| a && !b)
    }

    pub fn is_subset(&self, o: &Self) -> bool {
        self.difference(o).is_empty()
    }

    pub fn is_disjoint(&self, o: &Self) -> bool {
        self.intersection(o).is_empty()
    }

    fn combine(&self, o: &Self, f: impl Fn(bool, bool) -> bool) -> Self {
        let n = self.threshold.max(o.threshold);
        let p = self.period.lcm(&o.period);
        Self::from_fn(n, p, |i| f(self.contains(i), o.contains(i)))
    }

    /// Members in `[lo, hi)`.
    pub fn members_in(&self, lo: usize, hi: usize) -> Vec<usize> {
        (lo..hi).filter(|&n| self.contains(n)).collect()
    }

    /// Number of members below `n`.
    pub fn rank(&self, n: usize) -> usize {
        if n <= self.threshold {
            return self.pre.range(..n).count();
        }
        let below_threshold = self.pre.len();
        let span = n - self.threshold;
        let full = span / self.period;
        let mut count = below_threshold + full * self.residues.len();
        let start = self.threshold + full * self.period;
        count += (start..n).filter(|&m| self.contains(m)).count();
        count
    }

    /// Least member `>= n`, if any.
    pub fn next_member(&self, n: usize) -> Option<usize> {
        let limit = n.max(self.threshold) + self.period;
        (n..limit).find(|&m| self.contains(m))
    }

    /// The `k`-th member (0-based), if it exists.
    pub fn nth(&self, k: usize) -> Option<usize> {
        if k < self.pre.len() {
            return self.pre.iter().nth(k).copied();
        }
        if self.residues.is_empty() {
            return None;
        }
        let k = k - self.pre.len();
        let per = self.residues.len();
        let base = self.threshold + (k / per) * self.period;
        let mut left = k % per;
        let mut m = base;
        loop {
            if self.contains(m) {
                if left == 0 {
                    return Some(m);
                }
                left -= 1;
            }
            m += 1;
        }
    }

    /// Largest member, for finite sets.
    pub fn max_member(&self) -> Option<usize> {
        if self.is_finite() {
            self.pre.iter().next_back().copied()
        } else {
            None
        }
    }

    fn canonical(mut self) -> Self {
        let p = self.period;
        // Period descent: smallest divisor d of p under which the residue
        // pattern is invariant.
        for d in (1..=p).filter(|&d| p.is_multiple_of(d)) {
            if (0..p).all(|r| self.residues.contains(&r) == self.residues.contains(&((r + d) % p))) {
                if d < p {
                    self.residues.retain(|&r| r < d);
                    self.period = d;
                }
                break;
            }
        }
        // Threshold rollback.
        while self.threshold > 0 {
            let m = self.threshold - 1;
            if self.pre.contains(&m) == self.residues.contains(&(m % self.period)) {
                self.pre.remove(&m);
                self.threshold = m;
            } else {
                break;
            }
        }
        self
    }
}

impl Periodic for EpSet {
    fn threshold(&self) -> usize {
        self.threshold
    }

    fn period(&self) -> usize {
        self.period
    }
}

/// Least `n >= threshold` with `n % period == r`.
pub(crate) fn first_at_least(threshold: usize, period: usize, r: usize) -> usize {
    let base = threshold - threshold % period;
    let c = base + r;
    if c >= threshold {
        c
    } else {
        c + period
    }
}

impl fmt::Debug for EpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{pre: {:?}, period: {}, residues: {:?}, threshold: {}}}",
            self.pre.iter().collect::<Vec<_>>(),
            self.period,
            self.residues.iter().collect::<Vec<_>>(),
            self.threshold
        )
    }
}
