//! The constant field F_q, q = 2^k with k <= 8.

use std::fmt;

/// Largest supported extension degree of the constant field over F_2.
pub const MAX_K: u8 = 8;

/// Irreducible moduli over F_2, indexed by k, as bit masks including the leading term.
const MODULI: [u16; 9] = [0, 0b11, 0b111, 0b1011, 0x13, 0x25, 0x43, 0x83, 0x11d];

/// An element of F_{2^k}: a polynomial over F_2 of degree < k, reduced modulo
/// a fixed irreducible of degree k.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq {
    bits: u8,
    k: u8,
}

impl Fq {
    pub fn new(bits: u32, k: u8) -> Fq {
        assert!((1..=MAX_K).contains(&k), "constant field degree {k} out of range");
        assert!(bits < (1u32 << k), "bit pattern {bits} does not fit F_2^{k}");
        Fq { bits: bits as u8, k }
    }

    pub fn zero(k: u8) -> Fq {
        Fq::new(0, k)
    }

    pub fn one(k: u8) -> Fq {
        Fq::new(1, k)
    }

    pub fn bits(self) -> u32 {
        self.bits as u32
    }

    pub fn k(self) -> u8 {
        self.k
    }

    /// Size of the field.
    pub fn order(self) -> u32 {
        1u32 << self.k
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    pub fn is_one(self) -> bool {
        self.bits == 1
    }

    pub fn add(self, other: Fq) -> Fq {
        debug_assert_eq!(self.k, other.k);
        Fq { bits: self.bits ^ other.bits, k: self.k }
    }

    pub fn mul(self, other: Fq) -> Fq {
        debug_assert_eq!(self.k, other.k);
        let (mut a, mut b) = (self.bits as u16, other.bits as u16);
        let mut acc = 0u16;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
        }
        let m = MODULI[self.k as usize];
        for i in (self.k as u32..16).rev() {
            if acc & (1 << i) != 0 {
                acc ^= m << (i - self.k as u32);
            }
        }
        Fq { bits: acc as u8, k: self.k }
    }

    pub fn square(self) -> Fq {
        self.mul(self)
    }

    pub fn pow(self, mut e: u64) -> Fq {
        let mut base = self;
        let mut acc = Fq::one(self.k);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(self) -> Option<Fq> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow(self.order() as u64 - 2))
        }
    }

    /// The unique square root; Frobenius is a bijection on a finite field of characteristic 2.
    pub fn sqrt(self) -> Fq {
        let mut r = self;
        for _ in 1..self.k {
            r = r.square();
        }
        r
    }

    /// Absolute trace Tr_{F_q/F_2}, returned as 0 or 1.
    pub fn abs_trace(self) -> u8 {
        let mut acc = self;
        let mut x = self;
        for _ in 1..self.k {
            x = x.square();
            acc = acc.add(x);
        }
        debug_assert!(acc.bits <= 1);
        acc.bits
    }

    /// Every element of F_q in increasing bit order.
    pub fn all(k: u8) -> impl Iterator<Item = Fq> {
        (0..(1u32 << k)).map(move |b| Fq::new(b, k))
    }

    /// Solves x^2 + x = c in F_q; the smaller of the two roots when one exists.
    pub fn solve_wp(self) -> Option<Fq> {
        Fq::all(self.k).find(|x| x.square().add(*x) == self)
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bits)
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_small_cases() {
        assert_eq!(Fq::one(2).sqrt(), Fq::one(2));
        assert_eq!(Fq::zero(2).sqrt(), Fq::zero(2));
        // omega = x in F_4 with omega^2 = omega + 1
        let w = Fq::new(2, 2);
        assert_eq!(w.square(), Fq::new(3, 2));
        assert_eq!(w.sqrt(), Fq::new(3, 2));
        assert_eq!(Fq::new(3, 2).square(), w);
    }

    #[test]
    fn sqrt_exhaustive_all_k() {
        for k in 1..=MAX_K {
            for x in Fq::all(k) {
                assert_eq!(x.sqrt().square(), x, "k={k} x={x}");
            }
        }
    }

    #[test]
    fn moduli_give_fields() {
        for k in 1..=MAX_K {
            for x in Fq::all(k).skip(1) {
                assert!(x.inv().unwrap().mul(x).is_one(), "k={k} x={x}");
            }
        }
    }

    #[test]
    fn trace_values() {
        assert_eq!(Fq::zero(1).abs_trace(), 0);
        assert_eq!(Fq::one(1).abs_trace(), 1);
        assert_eq!(Fq::new(2, 2).abs_trace(), 1);
        assert_eq!(Fq::one(2).abs_trace(), 0);
        for k in 1..=MAX_K {
            let ones = Fq::all(k).filter(|x| x.abs_trace() == 1).count();
            assert_eq!(ones, 1 << (k - 1));
            for c in Fq::all(k) {
                assert_eq!(c.solve_wp().is_some(), c.abs_trace() == 0);
            }
        }
    }
}
