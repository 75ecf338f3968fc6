//! Dense univariate polynomials over F_q and their factorization.

use crate::gf::Fq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use std::sync::atomic::{self, AtomicU64};

/// Seed for the equal-degree splitting step; any seed gives the same sorted output.
pub const DEFAULT_FACTOR_SEED: u64 = 0x5eed_2c4a;

static FACTOR_SEED: AtomicU64 = AtomicU64::new(DEFAULT_FACTOR_SEED);

/// Sets the seed used by `factor`. Results are sorted, so only the internal
/// splitting order depends on it.
pub fn set_factor_seed(seed: u64) {
    FACTOR_SEED.store(seed, atomic::Ordering::Relaxed);
}

/// Dense polynomial; `coeffs[i]` is the coefficient of t^i, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    k: u8,
    coeffs: Vec<Fq>,
}

impl Poly {
    pub fn new(k: u8, mut coeffs: Vec<Fq>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { k, coeffs }
    }

    pub fn from_bits(k: u8, bits: &[u32]) -> Poly {
        Poly::new(k, bits.iter().map(|&b| Fq::new(b, k)).collect())
    }

    pub fn zero(k: u8) -> Poly {
        Poly { k, coeffs: Vec::new() }
    }

    pub fn one(k: u8) -> Poly {
        Poly::constant(Fq::one(k))
    }

    pub fn constant(c: Fq) -> Poly {
        Poly::new(c.k(), vec![c])
    }

    /// The monomial c * t^n.
    pub fn monomial(c: Fq, n: usize) -> Poly {
        let mut v = vec![Fq::zero(c.k()); n + 1];
        v[n] = c;
        Poly::new(c.k(), v)
    }

    /// The variable t.
    pub fn var(k: u8) -> Poly {
        Poly::monomial(Fq::one(k), 1)
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or(Fq::zero(self.k))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to -1.
    pub fn deg_i(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lead(&self) -> Fq {
        self.coeffs.last().copied().unwrap_or(Fq::zero(self.k))
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(self.k, (0..n).map(|i| self.coeff(i).add(other.coeff(i))).collect())
    }

    pub fn scale(&self, c: Fq) -> Poly {
        Poly::new(self.k, self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.k);
        }
        let mut out = vec![Fq::zero(self.k); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(a.mul(*b));
            }
        }
        Poly::new(self.k, out)
    }

    pub fn square(&self) -> Poly {
        let mut out = vec![Fq::zero(self.k); (2 * self.coeffs.len()).saturating_sub(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            out[2 * i] = a.square();
        }
        Poly::new(self.k, out)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.k);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// Multiply by t^n.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![Fq::zero(self.k); n];
        v.extend_from_slice(&self.coeffs);
        Poly::new(self.k, v)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.lead().inv().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(self.k), self.clone());
        }
        let mut q = vec![Fq::zero(self.k); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = r[i].mul(inv);
            if c.is_zero() {
                continue;
            }
            q[i - dd] = c;
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i - dd + j] = r[i - dd + j].add(c.mul(*dc));
            }
        }
        (Poly::new(self.k, q), Poly::new(self.k, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Exact quotient; debug-asserts a zero remainder.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.lead().inv().unwrap())
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns (g, s, u) with s*self + u*other = g, g monic.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let k = self.k;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(k), Poly::zero(k));
        let (mut u0, mut u1) = (Poly::zero(k), Poly::one(k));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.add(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let u = u0.add(&q.mul(&u1));
            u0 = std::mem::replace(&mut u1, u);
        }
        if r0.is_zero() {
            return (r0, s0, u0);
        }
        let inv = r0.lead().inv().unwrap();
        (r0.scale(inv), s0.scale(inv), u0.scale(inv))
    }

    /// Inverse modulo `m`, if coprime.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, s, _) = self.rem(m).ext_gcd(m);
        g.is_one().then(|| s.rem(m))
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Poly {
        self.mul(other).rem(m)
    }

    pub fn pow_mod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::one(self.k).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            base = base.mul_mod(&base, m);
            e >>= 1;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| if i % 2 == 1 { *c } else { Fq::zero(self.k) })
            .collect();
        Poly::new(self.k, v)
    }

    pub fn eval(&self, x: Fq) -> Fq {
        self.coeffs.iter().rev().fold(Fq::zero(self.k), |acc, c| acc.mul(x).add(*c))
    }

    /// Applies x -> x^2 to every coefficient.
    pub fn frobenius_coeffs(&self) -> Poly {
        Poly::new(self.k, self.coeffs.iter().map(|c| c.square()).collect())
    }

    /// Applies x -> sqrt(x) to every coefficient.
    pub fn sqrt_coeffs(&self) -> Poly {
        Poly::new(self.k, self.coeffs.iter().map(|c| c.sqrt()).collect())
    }

    /// Splits p(t) = even(t^2) + t * odd(t^2).
    pub fn even_odd(&self) -> (Poly, Poly) {
        let even = self.coeffs.iter().step_by(2).copied().collect();
        let odd = self.coeffs.iter().skip(1).step_by(2).copied().collect();
        (Poly::new(self.k, even), Poly::new(self.k, odd))
    }

    /// p(t) -> p(t^2).
    pub fn inflate(&self) -> Poly {
        let mut v = vec![Fq::zero(self.k); (2 * self.coeffs.len()).saturating_sub(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[2 * i] = *c;
        }
        Poly::new(self.k, v)
    }

    /// The g with g^2 = self, if self is a square.
    pub fn sqrt(&self) -> Option<Poly> {
        let (even, odd) = self.even_odd();
        odd.is_zero().then(|| even.sqrt_coeffs())
    }

    /// Coefficient list reversed and padded to length n + 1: t^n p(1/t).
    pub fn reverse(&self, n: usize) -> Poly {
        let mut v: Vec<Fq> = (0..=n).map(|i| self.coeff(i)).collect();
        v.reverse();
        Poly::new(self.k, v)
    }

    /// Index of the polynomial in a fixed enumeration of all polynomials
    /// (base-q digits, constant coefficient least significant).
    pub fn from_index(k: u8, mut idx: u64) -> Poly {
        let q = 1u64 << k;
        let mut v = Vec::new();
        while idx > 0 {
            v.push(Fq::new((idx % q) as u32, k));
            idx /= q;
        }
        Poly::new(k, v)
    }

    /// Whether the polynomial is irreducible, by the gcd(x^{q^d} - x) criterion.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        let m = self.monic();
        let x = Poly::var(self.k);
        let mut h = x.clone();
        for _ in 1..=n / 2 {
            h = frobenius_q(&h, &m);
            if !m.gcd(&h.add(&x)).is_one() {
                return false;
            }
        }
        true
    }

    /// Factorization into monic irreducibles with multiplicities (leading unit dropped),
    /// sorted canonically.
    pub fn factor(&self) -> Vec<(Poly, u32)> {
        self.factor_seeded(FACTOR_SEED.load(atomic::Ordering::Relaxed))
    }

    pub fn factor_seeded(&self, seed: u64) -> Vec<(Poly, u32)> {
        assert!(!self.is_zero(), "cannot factor the zero polynomial");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for (sqf, mult) in squarefree(&self.monic()) {
            for (g, d) in distinct_degree(&sqf) {
                for f in equal_degree(&g, d, &mut rng) {
                    out.push((f, mult));
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

impl Ord for Poly {
    /// Degree first, then coefficients from the leading term down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// h^q mod m.
fn frobenius_q(h: &Poly, m: &Poly) -> Poly {
    let mut r = h.rem(m);
    for _ in 0..h.k() {
        r = r.mul_mod(&r, m);
    }
    r
}

/// Squarefree decomposition of a monic polynomial: pairs (squarefree part, multiplicity).
fn squarefree(f: &Poly) -> Vec<(Poly, u32)> {
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let d = f.derivative();
    if d.is_zero() {
        let g = f.sqrt().expect("zero derivative implies a square in characteristic 2");
        return squarefree(&g).into_iter().map(|(p, m)| (p, 2 * m)).collect();
    }
    let mut out = Vec::new();
    let mut c = f.gcd(&d);
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_exact(&y);
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w);
    }
    if !c.is_one() {
        let g = c.sqrt().expect("leftover cofactor is a square");
        out.extend(squarefree(&g).into_iter().map(|(p, m)| (p, 2 * m)));
    }
    out
}

/// Groups the irreducible factors of a squarefree monic polynomial by degree.
fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let x = Poly::var(f.k());
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = frobenius_q(&h, &rest);
        let g = rest.gcd(&h.add(&x));
        if !g.is_one() {
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        let n = rest.degree().unwrap();
        out.push((rest, n));
    }
    out
}

/// Splits a product of distinct irreducibles of degree d (trace-map splitting, characteristic 2).
fn equal_degree(g: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = g.degree().unwrap();
    if n == d {
        return vec![g.clone()];
    }
    let k = g.k();
    let q = 1u32 << k;
    let bits = k as usize * d;
    loop {
        let a = Poly::new(k, (0..n).map(|_| Fq::new(rng.gen_range(0..q), k)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let mut acc = a.clone();
        let mut x = a.clone();
        for _ in 1..bits {
            x = x.mul_mod(&x, g);
            acc = acc.add(&x);
        }
        let h = g.gcd(&acc);
        let hd = h.degree().unwrap_or(0);
        if hd > 0 && hd < n {
            let mut out = equal_degree(&h, d, rng);
            out.extend(equal_degree(&g.div_exact(&h), d, rng));
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(bits: &[u32]) -> Poly {
        Poly::from_bits(1, bits)
    }

    #[test]
    fn factor_examples() {
        // t^2 + t
        assert_eq!(p(&[0, 1, 1]).factor(), vec![(p(&[0, 1]), 1), (p(&[1, 1]), 1)]);
        // t^2 + t + 1
        assert_eq!(p(&[1, 1, 1]).factor(), vec![(p(&[1, 1, 1]), 1)]);
        // t^4 + t^2
        assert_eq!(p(&[0, 0, 1, 0, 1]).factor(), vec![(p(&[0, 1]), 2), (p(&[1, 1]), 2)]);
    }

    #[test]
    fn factor_reconstructs_and_is_irreducible() {
        for k in [1u8, 2, 3] {
            for idx in 1..400u64 {
                let f = Poly::from_index(k, idx * 7 + 3);
                if f.degree().unwrap_or(0) == 0 {
                    continue;
                }
                let fs = f.factor();
                let prod = fs.iter().fold(Poly::one(k), |acc, (g, m)| acc.mul(&g.pow(*m as u64)));
                assert_eq!(prod, f.monic(), "k={k} f={f:?}");
                for (g, _) in &fs {
                    assert!(g.is_monic() && g.is_irreducible(), "{g:?}");
                }
                assert!(fs.windows(2).all(|w| w[0].0 < w[1].0));
            }
        }
    }

    #[test]
    fn factor_independent_of_seed() {
        let f = Poly::from_index(2, 123_456);
        assert_eq!(f.factor_seeded(1), f.factor_seeded(99));
    }

    #[test]
    fn ext_gcd_identity() {
        let a = p(&[1, 0, 1, 1, 0, 1]);
        let b = p(&[1, 1, 0, 1]);
        let (g, s, u) = a.ext_gcd(&b);
        assert_eq!(s.mul(&a).add(&u.mul(&b)), g);
        assert_eq!(g, a.gcd(&b));
    }

    #[test]
    fn sqrt_and_even_odd() {
        let f = p(&[1, 1, 0, 1]);
        assert_eq!(f.square().sqrt(), Some(f.clone()));
        assert_eq!(f.sqrt(), None);
        let (e, o) = f.even_odd();
        assert_eq!(e.inflate().add(&o.inflate().shift(1)), f);
    }
}
