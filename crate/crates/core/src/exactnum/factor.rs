//! Factorization of rational polynomials into monic irreducibles.
//!
//! Squarefree parts are factored modulo a prime larger than twice the
//! Mignotte bound (Cantor–Zassenhaus), then true factors are recovered by
//! recombining modular factors and trial division over the integers.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Poly, Rational};

/// Yun's squarefree decomposition: pairs `(g_i, i)` with `f = lc * prod g_i^i`,
/// each `g_i` monic, squarefree and pairwise coprime. Constant input gives an
/// empty list.
pub fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let f = f.monic();
    let fp = f.derivative();
    let a0 = f.gcd(&fp);
    let mut b = f.divrem(&a0).0;
    let mut c = fp.divrem(&a0).0;
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    loop {
        let a = b.gcd(&d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.monic(), i));
        }
        b = b.divrem(&a).0;
        if b.degree().unwrap_or(0) == 0 {
            break;
        }
        c = d.divrem(&a).0;
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

/// Monic irreducible factors over the rationals with multiplicities, sorted
/// by (degree, coefficients). Constants give an empty list.
pub fn factor_over_q(f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    for (g, m) in squarefree_decomposition(f) {
        for h in factor_squarefree(&g) {
            out.push((h, m));
        }
    }
    out.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    out
}

fn factor_squarefree(f: &Poly) -> Vec<Poly> {
    let deg = f.degree().unwrap_or(0);
    if deg <= 1 {
        return vec![f.monic()];
    }
    // Strip factors of t first; keeps the modular image squarefree more often.
    if f.coeff(0).is_zero() {
        let rest = f.divrem(&Poly::x()).0;
        let mut v = vec![Poly::x()];
        v.extend(factor_squarefree(&rest));
        return v;
    }
    let zf = primitive_integer(f);
    let lc = zf.last().unwrap().clone();
    let norm2 = zf.iter().fold(BigInt::zero(), |acc, c| acc + c * c);
    let norm = norm2.sqrt() + BigInt::one();
    let bound = (BigInt::one() << deg) * norm * lc.abs();
    let mut p: BigInt = bound * 2 + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    loop {
        p = next_prime(&p);
        if (&lc % &p).is_zero() {
            p += 1;
            continue;
        }
        let fp = ModPoly::from_ints(&zf, &p);
        let dfp = fp.derivative();
        if fp.gcd(&dfp).degree() != 0 {
            p += 1;
            continue;
        }
        let modular = fp.monic().factor(&mut rng);
        return recombine(&zf, &modular, &p);
    }
}

/// Integer coefficients with content 1 and positive leading coefficient.
fn primitive_integer(f: &Poly) -> Vec<BigInt> {
    let den = f.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = f.coeffs().iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
    let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if ints.last().unwrap().is_negative() {
        g = -g;
    }
    ints.into_iter().map(|c| c / &g).collect()
}

fn recombine(f: &[BigInt], modular: &[ModPoly], p: &BigInt) -> Vec<Poly> {
    let mut f: Vec<BigInt> = f.to_vec();
    let mut remaining: Vec<ModPoly> = modular.to_vec();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut progressed = false;
        for subset in subsets(remaining.len(), size) {
            let lc = f.last().unwrap().clone();
            let mut g = ModPoly::constant(lc.clone(), p);
            for &i in &subset {
                g = g.mul(&remaining[i]);
            }
            let cand = primitive_of(&g.symmetric());
            if let Some(qf) = int_divide(&f, &cand) {
                found.push(cand);
                f = qf;
                remaining = remaining
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, m)| m.clone())
                    .collect();
                progressed = true;
                break;
            }
        }
        if !progressed {
            size += 1;
        }
    }
    found.push(f);
    found.into_iter().map(|z| ints_to_poly(&z).monic()).collect()
}

fn primitive_of(v: &[BigInt]) -> Vec<BigInt> {
    let mut g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return v.to_vec();
    }
    if v.last().unwrap().is_negative() {
        g = -g;
    }
    v.iter().map(|c| c / &g).collect()
}

fn ints_to_poly(v: &[BigInt]) -> Poly {
    Poly::new(v.iter().cloned().map(Rational::from_integer).collect())
}

/// Exact quotient `f / g` over the integers, if `g` divides `f`.
fn int_divide(f: &[BigInt], g: &[BigInt]) -> Option<Vec<BigInt>> {
    let (qq, r) = ints_to_poly(f).divrem(&ints_to_poly(g));
    if !r.is_zero() || qq.coeffs().iter().any(|c| !c.is_integer()) {
        return None;
    }
    Some(qq.coeffs().iter().map(|c| c.to_integer()).collect())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn is_probable_prime(n: &BigInt) -> bool {
    let two = BigInt::from(2);
    if n < &two {
        return false;
    }
    const SMALL: [u32; 20] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];
    for &sp in &SMALL {
        let sp = BigInt::from(sp);
        if n == &sp {
            return true;
        }
        if (n % &sp).is_zero() {
            return false;
        }
    }
    let nm1: BigInt = n - 1;
    let mut d = nm1.clone();
    let mut s = 0;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn next_prime(n: &BigInt) -> BigInt {
    let mut c = n.clone();
    if c.is_even() {
        c += 1;
    }
    while !is_probable_prime(&c) {
        c += 2;
    }
    c
}

/// Polynomial over `Z/p`, coefficients in `[0, p)`, low to high, trimmed.
#[derive(Clone, Debug, PartialEq)]
struct ModPoly {
    c: Vec<BigInt>,
    p: BigInt,
}

impl ModPoly {
    fn new(mut c: Vec<BigInt>, p: &BigInt) -> Self {
        for x in c.iter_mut() {
            *x = x.mod_floor(p);
        }
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        ModPoly { c, p: p.clone() }
    }

    fn from_ints(v: &[BigInt], p: &BigInt) -> Self {
        Self::new(v.to_vec(), p)
    }

    fn constant(a: BigInt, p: &BigInt) -> Self {
        Self::new(vec![a], p)
    }

    fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn inv(&self, a: &BigInt) -> BigInt {
        a.modpow(&(&self.p - 2), &self.p)
    }

    fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.inv(self.c.last().unwrap());
        Self::new(self.c.iter().map(|x| x * &l).collect(), &self.p)
    }

    fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let z = BigInt::zero();
        Self::new(
            (0..n).map(|i| self.c.get(i).unwrap_or(&z) - o.c.get(i).unwrap_or(&z)).collect(),
            &self.p,
        )
    }

    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::new(Vec::new(), &self.p);
        }
        let mut out = vec![BigInt::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out, &self.p)
    }

    fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::new(Vec::new(), &self.p), self.clone());
        }
        let inv = self.inv(d.c.last().unwrap());
        let mut qv = vec![BigInt::zero(); r.len() - dd];
        for k in (0..qv.len()).rev() {
            let c = (&r[k + dd] * &inv).mod_floor(&self.p);
            if !c.is_zero() {
                for (j, dc) in d.c.iter().enumerate() {
                    r[k + j] = (&r[k + j] - &c * dc).mod_floor(&self.p);
                }
            }
            qv[k] = c;
        }
        r.truncate(dd);
        (Self::new(qv, &self.p), Self::new(r, &self.p))
    }

    fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    fn derivative(&self) -> Self {
        Self::new(self.c.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect(), &self.p)
    }

    fn powmod(&self, e: &BigInt, m: &Self) -> Self {
        let mut acc = Self::constant(BigInt::one(), &self.p);
        let mut base = self.rem(m);
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
            if i + 1 < bits {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }

    fn x(p: &BigInt) -> Self {
        Self::new(vec![BigInt::zero(), BigInt::one()], p)
    }

    /// Symmetric representatives in `(-p/2, p/2]`.
    fn symmetric(&self) -> Vec<BigInt> {
        let half = &self.p >> 1;
        self.c.iter().map(|x| if x > &half { x - &self.p } else { x.clone() }).collect()
    }

    fn random_below(&self, deg: usize, rng: &mut ChaCha8Rng) -> Self {
        let bytes = (self.p.bits() as usize / 8) + 8;
        let c = (0..deg)
            .map(|_| {
                let mut buf = vec![0u8; bytes];
                rng.fill_bytes(&mut buf);
                BigInt::from_bytes_le(Sign::Plus, &buf)
            })
            .collect();
        Self::new(c, &self.p)
    }

    /// Full factorization of a monic squarefree polynomial.
    fn factor(&self, rng: &mut ChaCha8Rng) -> Vec<Self> {
        let mut out = Vec::new();
        // Distinct-degree factorization.
        let mut f = self.clone();
        let x = Self::x(&self.p);
        let mut h = x.clone();
        let mut d = 1;
        while f.degree() >= 2 * d {
            h = h.powmod(&self.p, &f);
            let g = f.gcd(&h.sub(&x));
            if g.degree() > 0 {
                out.extend(g.equal_degree(d, rng));
                f = f.divrem(&g).0;
                h = h.rem(&f);
            }
            d += 1;
        }
        if f.degree() > 0 {
            out.push(f.monic());
        }
        out
    }

    fn equal_degree(&self, d: usize, rng: &mut ChaCha8Rng) -> Vec<Self> {
        let n = self.degree();
        if n == d {
            return vec![self.monic()];
        }
        let e = (self.p.pow(d as u32) - 1u32) / 2u32;
        loop {
            let a = self.random_below(n, rng);
            if a.degree() == 0 {
                continue;
            }
            let b = a.powmod(&e, self).sub(&Self::constant(BigInt::one(), &self.p));
            let g = self.gcd(&b);
            if g.degree() > 0 && g.degree() < n {
                let rest = self.divrem(&g).0.monic();
                let mut v = g.equal_degree(d, rng);
                v.extend(rest.equal_degree(d, rng));
                return v;
            }
        }
    }
}
