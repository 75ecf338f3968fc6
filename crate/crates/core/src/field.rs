//! The field abstraction shared by F = F_q(t) and its quadratic extensions,
//! plus dense linear algebra over any such field.

use crate::error::{Error, Result};
use crate::gf::Fq;
use crate::parse;
use crate::places;
use crate::ratfun::{enumerate_ratfun, RatFun};
use rand::RngCore;
use std::fmt::Debug;
use std::hash::Hash;

/// A field of characteristic 2 with [E : E^2] = 2 and a distinguished
/// element `tau` with E = E^2(tau).
pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn k(&self) -> u8;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn constant(&self, c: Fq) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Square root, if `a` is a square.
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Roots (r0, r1) with a = r0^2 + tau * r1^2.
    fn square_split(&self, a: &Self::Elem) -> (Self::Elem, Self::Elem);
    fn tau(&self) -> Self::Elem;
    /// Some g with g^2 + g = a, if one exists.
    fn wp_preimage(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn render(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;
    fn random(&self, height: usize, rng: &mut dyn RngCore) -> Self::Elem;
    /// Finite deterministic list of elements of bounded height.
    fn enumerate(&self, height: usize) -> Vec<Self::Elem>;

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn wp(&self, a: &Self::Elem) -> Self::Elem {
        self.add(&self.square(a), a)
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        Some(self.mul(a, &self.inv(b)?))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn random_nonzero(&self, height: usize, rng: &mut dyn RngCore) -> Self::Elem {
        loop {
            let x = self.random(height, rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }

    fn sum<'a, I: IntoIterator<Item = &'a Self::Elem>>(&self, items: I) -> Self::Elem
    where
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    fn product<'a, I: IntoIterator<Item = &'a Self::Elem>>(&self, items: I) -> Self::Elem
    where
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }
}

/// The rational function field F_q(var).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatField {
    pub k: u8,
    pub var: String,
}

impl RatField {
    pub fn new(k: u8, var: &str) -> RatField {
        assert!((1..=crate::gf::MAX_K).contains(&k));
        RatField { k, var: var.to_string() }
    }

    /// q = 2^k.
    pub fn q(&self) -> u32 {
        1 << self.k
    }

    pub fn gen(&self) -> RatFun {
        RatFun::var(self.k)
    }
}

impl Field for RatField {
    type Elem = RatFun;

    fn k(&self) -> u8 {
        self.k
    }
    fn zero(&self) -> RatFun {
        RatFun::zero(self.k)
    }
    fn one(&self) -> RatFun {
        RatFun::one(self.k)
    }
    fn constant(&self, c: Fq) -> RatFun {
        RatFun::constant(c)
    }
    fn add(&self, a: &RatFun, b: &RatFun) -> RatFun {
        a.add(b)
    }
    fn mul(&self, a: &RatFun, b: &RatFun) -> RatFun {
        a.mul(b)
    }
    fn inv(&self, a: &RatFun) -> Option<RatFun> {
        a.inv()
    }
    fn is_zero(&self, a: &RatFun) -> bool {
        a.is_zero()
    }
    fn square(&self, a: &RatFun) -> RatFun {
        a.square()
    }
    fn sqrt(&self, a: &RatFun) -> Option<RatFun> {
        a.sqrt()
    }
    fn square_split(&self, a: &RatFun) -> (RatFun, RatFun) {
        a.square_split()
    }
    fn tau(&self) -> RatFun {
        self.gen()
    }
    fn wp_preimage(&self, a: &RatFun) -> Option<RatFun> {
        places::is_in_wp_global(a).witness
    }
    fn render(&self, a: &RatFun) -> String {
        a.render(&self.var)
    }
    fn parse(&self, s: &str) -> Result<RatFun> {
        let var = self.var.clone();
        let k = self.k;
        parse::parse_expr(self, s, &|name: &str| (name == var).then(|| RatFun::var(k)))
    }
    fn random(&self, height: usize, rng: &mut dyn RngCore) -> RatFun {
        RatFun::random(self.k, height, rng)
    }
    fn enumerate(&self, height: usize) -> Vec<RatFun> {
        enumerate_ratfun(self.k, height).collect()
    }
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn row_reduce<E: Field>(field: &E, rows: &mut Vec<Vec<E::Elem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][c])) else { continue };
        rows.swap(r, p);
        let inv = field.inv(&rows[r][c]).unwrap();
        rows[r] = rows[r].iter().map(|x| field.mul(x, &inv)).collect();
        for i in 0..rows.len() {
            if i != r && !field.is_zero(&rows[i][c]) {
                let f = rows[i][c].clone();
                let new: Vec<_> =
                    rows[i].iter().zip(&rows[r]).map(|(a, b)| field.add(a, &field.mul(&f, b))).collect();
                rows[i] = new;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank<E: Field>(field: &E, rows: &[Vec<E::Elem>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(field, &mut m).len()
}

/// Basis of the right kernel {x : M x = 0} of a matrix given by rows with `ncols` columns.
pub fn kernel<E: Field>(field: &E, rows: &[Vec<E::Elem>], ncols: usize) -> Vec<Vec<E::Elem>> {
    let mut m = rows.to_vec();
    let pivots = row_reduce(field, &mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); ncols];
            v[f] = field.one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = row[f].clone();
            }
            v
        })
        .collect()
}

/// Whether `v` lies in the row span of `rows`.
pub fn in_span<E: Field>(field: &E, rows: &[Vec<E::Elem>], v: &[E::Elem]) -> bool {
    let r = rank(field, rows);
    let mut ext = rows.to_vec();
    ext.push(v.to_vec());
    rank(field, &ext) == r
}

/// Parses an element, mapping positioned errors.
pub fn parse_nonzero<E: Field>(field: &E, s: &str) -> Result<E::Elem> {
    let x = field.parse(s)?;
    if field.is_zero(&x) {
        return Err(Error::ZeroSlot);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_rank() {
        let f = RatField::new(1, "t");
        let t = f.gen();
        let one = f.one();
        let z = f.zero();
        // row: [1, t, t, t^2]
        let rows = vec![vec![one.clone(), t.clone(), t.clone(), t.square()]];
        let ker = kernel(&f, &rows, 4);
        assert_eq!(ker.len(), 3);
        for v in &ker {
            let s = f.sum(rows[0].iter().zip(v).map(|(a, b)| f.mul(a, b)).collect::<Vec<_>>().iter());
            assert_eq!(s, z);
        }
        assert_eq!(rank(&f, &[vec![one.clone(), t.clone()], vec![t.clone(), t.square()]]), 1);
    }
}
