//! Residue fields of places: k_v = F_q[x]/(p), optionally extended by a root
//! of rho^2 + rho = c (the residue field above an inert place).

use crate::gf::Fq;
use crate::poly::Poly;

/// An element, stored as coordinates: the first `d` over the power basis of
/// F_q[x]/(p), then (for a quadratic extension) `d` more for the rho-part.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ResElem(pub Vec<Fq>);

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResField {
    modulus: Poly,
    quad: Option<Poly>,
}

impl ResField {
    /// F_q[x]/(p) for a monic irreducible p.
    pub fn base(modulus: Poly) -> ResField {
        debug_assert!(modulus.is_monic() && modulus.degree().unwrap() >= 1);
        ResField { modulus, quad: None }
    }

    /// The constant field F_q itself.
    pub fn constants(k: u8) -> ResField {
        ResField::base(Poly::var(k))
    }

    /// Adjoins a root rho of rho^2 + rho = c, where c is an element of this base field
    /// with absolute trace 1.
    pub fn quadratic(&self, c: &ResElem) -> ResField {
        assert!(self.quad.is_none(), "only one quadratic layer is supported");
        debug_assert_eq!(self.abs_trace(c), 1);
        ResField { modulus: self.modulus.clone(), quad: Some(self.to_poly(&c.0[..self.d()])) }
    }

    pub fn k(&self) -> u8 {
        self.modulus.k()
    }

    /// Degree of the base layer over F_q.
    pub fn d(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    /// Degree over F_q.
    pub fn degree(&self) -> usize {
        self.d() * if self.quad.is_some() { 2 } else { 1 }
    }

    /// Dimension over F_2.
    pub fn f2_dim(&self) -> usize {
        self.degree() * self.k() as usize
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn is_quadratic(&self) -> bool {
        self.quad.is_some()
    }

    pub fn zero(&self) -> ResElem {
        ResElem(vec![Fq::zero(self.k()); self.degree()])
    }

    pub fn one(&self) -> ResElem {
        self.from_fq(Fq::one(self.k()))
    }

    pub fn from_fq(&self, c: Fq) -> ResElem {
        let mut v = self.zero();
        v.0[0] = c;
        v
    }

    /// The class of a polynomial in F_q[t] modulo p.
    pub fn from_poly(&self, p: &Poly) -> ResElem {
        let r = p.rem(&self.modulus);
        let mut v = self.zero();
        for (i, c) in r.coeffs().iter().enumerate() {
            v.0[i] = *c;
        }
        v
    }

    /// The root rho of the quadratic layer.
    pub fn rho(&self) -> ResElem {
        assert!(self.quad.is_some());
        let mut v = self.zero();
        v.0[self.d()] = Fq::one(self.k());
        v
    }

    /// Lifts the base-layer part of an element to a polynomial of degree < d.
    pub fn lift(&self, x: &ResElem) -> Poly {
        debug_assert!(x.0[self.d()..].iter().all(|c| c.is_zero()), "element not in the base layer");
        self.to_poly(&x.0[..self.d()])
    }

    /// Embeds an element of the base layer field (as produced by a base `ResField`).
    pub fn embed_base(&self, x: &ResElem) -> ResElem {
        let mut v = self.zero();
        v.0[..x.0.len()].copy_from_slice(&x.0);
        v
    }

    fn to_poly(&self, c: &[Fq]) -> Poly {
        Poly::new(self.k(), c.to_vec())
    }

    fn split(&self, x: &ResElem) -> (Poly, Poly) {
        let d = self.d();
        let hi = if self.quad.is_some() { self.to_poly(&x.0[d..]) } else { Poly::zero(self.k()) };
        (self.to_poly(&x.0[..d]), hi)
    }

    fn join(&self, lo: &Poly, hi: &Poly) -> ResElem {
        let mut v = self.zero();
        let d = self.d();
        for (i, c) in lo.coeffs().iter().enumerate() {
            v.0[i] = *c;
        }
        if self.quad.is_some() {
            for (i, c) in hi.coeffs().iter().enumerate() {
                v.0[d + i] = *c;
            }
        }
        v
    }

    pub fn is_zero(&self, x: &ResElem) -> bool {
        x.0.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, a: &ResElem, b: &ResElem) -> ResElem {
        ResElem(a.0.iter().zip(&b.0).map(|(x, y)| x.add(*y)).collect())
    }

    pub fn mul(&self, a: &ResElem, b: &ResElem) -> ResElem {
        let m = &self.modulus;
        let (a0, a1) = self.split(a);
        let (b0, b1) = self.split(b);
        match &self.quad {
            None => self.join(&a0.mul_mod(&b0, m), &Poly::zero(self.k())),
            Some(c) => {
                let bb = a1.mul_mod(&b1, m);
                let lo = a0.mul_mod(&b0, m).add(&bb.mul_mod(c, m));
                let hi = a0.mul_mod(&b1, m).add(&a1.mul_mod(&b0, m)).add(&bb);
                self.join(&lo, &hi)
            }
        }
    }

    pub fn square(&self, a: &ResElem) -> ResElem {
        self.mul(a, a)
    }

    pub fn inv(&self, a: &ResElem) -> Option<ResElem> {
        let m = &self.modulus;
        let (a0, a1) = self.split(a);
        match &self.quad {
            None => Some(self.join(&a0.inv_mod(m)?, &Poly::zero(self.k()))),
            Some(c) => {
                let norm = a0.mul_mod(&a0, m).add(&a0.mul_mod(&a1, m)).add(&a1.mul_mod(&a1, m).mul_mod(c, m));
                let ni = norm.inv_mod(m)?;
                Some(self.join(&a0.add(&a1).mul_mod(&ni, m), &a1.mul_mod(&ni, m)))
            }
        }
    }

    pub fn pow(&self, a: &ResElem, mut e: u128) -> ResElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.square(&base);
            e >>= 1;
        }
        acc
    }

    /// Unique square root (inverse Frobenius).
    pub fn sqrt(&self, a: &ResElem) -> ResElem {
        let mut r = a.clone();
        for _ in 1..self.f2_dim() {
            r = self.square(&r);
        }
        r
    }

    /// Tr_{k/F_2}, as 0 or 1.
    pub fn abs_trace(&self, a: &ResElem) -> u8 {
        let mut acc = a.clone();
        let mut x = a.clone();
        for _ in 1..self.f2_dim() {
            x = self.square(&x);
            acc = self.add(&acc, &x);
        }
        debug_assert!(acc.0[1..].iter().all(|c| c.is_zero()) && acc.0[0].bits() <= 1);
        acc.0[0].bits() as u8
    }

    fn to_bits(&self, a: &ResElem) -> Vec<bool> {
        let k = self.k() as usize;
        a.0.iter().flat_map(|c| (0..k).map(move |i| c.bits() >> i & 1 == 1)).collect()
    }

    fn from_bits(&self, bits: &[bool]) -> ResElem {
        let k = self.k() as usize;
        ResElem(
            bits.chunks(k)
                .map(|ch| Fq::new(ch.iter().enumerate().map(|(i, &b)| (b as u32) << i).sum(), self.k()))
                .collect(),
        )
    }

    /// Solves x^2 + x = c by F_2-linear algebra; `None` iff Tr(c) = 1.
    pub fn solve_wp(&self, c: &ResElem) -> Option<ResElem> {
        let n = self.f2_dim();
        // augmented rows: equation i is bit i of wp(x) = bit i of c
        let cols: Vec<Vec<bool>> = (0..n)
            .map(|j| {
                let mut e = vec![false; n];
                e[j] = true;
                let x = self.from_bits(&e);
                self.to_bits(&self.add(&self.square(&x), &x))
            })
            .collect();
        let target = self.to_bits(c);
        let mut rows: Vec<Vec<bool>> =
            (0..n).map(|i| (0..n).map(|j| cols[j][i]).chain([target[i]]).collect()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..n {
            let Some(p) = (r..n).find(|&i| rows[i][col]) else { continue };
            rows.swap(r, p);
            for i in 0..n {
                if i != r && rows[i][col] {
                    let pr = rows[r].clone();
                    rows[i].iter_mut().zip(&pr).for_each(|(a, b)| *a ^= b);
                }
            }
            pivots.push(col);
            r += 1;
        }
        if rows[r..].iter().any(|row| row[n]) {
            return None;
        }
        let mut x = vec![false; n];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = rows[i][n];
        }
        let sol = self.from_bits(&x);
        debug_assert_eq!(self.add(&self.square(&sol), &sol), *c);
        Some(sol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_layer_is_a_field() {
        // F_2[x]/(x^2+x+1) = F_4, then rho^2 + rho = omega gives F_16
        let base = ResField::base(Poly::from_bits(1, &[1, 1, 1]));
        let w = base.from_poly(&Poly::var(1));
        assert_eq!(base.abs_trace(&w), 1);
        let ext = base.quadratic(&w);
        assert_eq!(ext.f2_dim(), 4);
        let rho = ext.rho();
        let lhs = ext.add(&ext.square(&rho), &rho);
        assert_eq!(lhs, ext.embed_base(&w));
        // all 15 nonzero elements invertible, x^16 = x
        for bits in 1u32..16 {
            let b: Vec<bool> = (0..4).map(|i| bits >> i & 1 == 1).collect();
            let x = ext.from_bits(&b);
            assert_eq!(ext.mul(&x, &ext.inv(&x).unwrap()), ext.one());
            assert_eq!(ext.pow(&x, 16), x);
            assert_eq!(ext.square(&ext.sqrt(&x)), x);
        }
    }

    #[test]
    fn wp_solvable_iff_trace_zero() {
        let f = ResField::base(Poly::from_bits(2, &[2, 1, 1]));
        let mut count = 0;
        for a in Fq::all(2) {
            for b in Fq::all(2) {
                let c = ResElem(vec![a, b]);
                let s = f.solve_wp(&c);
                assert_eq!(s.is_some(), f.abs_trace(&c) == 0);
                count += s.is_some() as usize;
            }
        }
        assert_eq!(count, 8);
    }
}
