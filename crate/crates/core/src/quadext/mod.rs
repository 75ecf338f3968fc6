//! The quadratic extensions of F = F_q(t): separable K = F(eta) with
//! eta^2 + eta = delta, and inseparable K = F(sqrt t) = F_q(s), t = s^2.

mod above;

pub use above::{places_above, Behavior, PlaceAbove, PlaceId};

use crate::error::{Error, Result};
use crate::field::{Field, RatField};
use crate::gf::Fq;
use crate::parse;
use crate::places::{is_in_wp_global, Place};
use crate::ratfun::RatFun;
use rand::RngCore;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// x + y * eta.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct KElem {
    pub x: RatFun,
    pub y: RatFun,
}

impl KElem {
    pub fn new(x: RatFun, y: RatFun) -> KElem {
        KElem { x, y }
    }

    pub fn in_base(&self) -> Option<&RatFun> {
        self.y.is_zero().then_some(&self.x)
    }
}

/// K = F(eta), eta^2 + eta = delta, delta not in wp(F).
///
/// Places above each base place are computed once and shared by clones.
#[derive(Clone, Debug)]
pub struct SepExt {
    base: RatField,
    delta: RatFun,
    above: Arc<Mutex<HashMap<Place, Vec<PlaceAbove>>>>,
}

impl PartialEq for SepExt {
    fn eq(&self, o: &SepExt) -> bool {
        self.base == o.base && self.delta == o.delta
    }
}

impl Eq for SepExt {}

impl std::hash::Hash for SepExt {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.base.hash(h);
        self.delta.hash(h);
    }
}

impl SepExt {
    pub fn new(base: RatField, delta: RatFun) -> Result<SepExt> {
        if is_in_wp_global(&delta).holds() {
            return Err(Error::DeltaInWp);
        }
        Ok(SepExt { base, delta, above: Arc::default() })
    }

    /// The places above v, in branch order.
    pub fn places_above(&self, v: &Place) -> Vec<PlaceAbove> {
        if let Some(ps) = self.above.lock().unwrap().get(v) {
            return ps.clone();
        }
        let ps = above::compute_places_above(self, v);
        self.above.lock().unwrap().insert(v.clone(), ps.clone());
        ps
    }

    pub fn base(&self) -> &RatField {
        &self.base
    }

    pub fn delta(&self) -> &RatFun {
        &self.delta
    }

    pub fn eta(&self) -> KElem {
        KElem::new(RatFun::zero(self.base.k), RatFun::one(self.base.k))
    }

    pub fn embed(&self, f: &RatFun) -> KElem {
        KElem::new(f.clone(), RatFun::zero(self.base.k))
    }

    /// The nontrivial automorphism: eta -> eta + 1.
    pub fn conj(&self, z: &KElem) -> KElem {
        KElem::new(z.x.add(&z.y), z.y.clone())
    }

    /// T_{K/F}(x + y eta) = y.
    pub fn trace(&self, z: &KElem) -> RatFun {
        z.y.clone()
    }

    pub fn norm(&self, z: &KElem) -> RatFun {
        z.x.square().add(&z.x.mul(&z.y)).add(&z.y.square().mul(&self.delta))
    }

    /// Square root in K, if z is a square.
    pub fn is_square_k(&self, z: &KElem) -> Option<KElem> {
        let ry = z.y.sqrt()?;
        let rx = z.x.add(&z.y.mul(&self.delta)).sqrt()?;
        Some(KElem::new(rx, ry))
    }

    /// Some w with w^2 + w = z, if one exists.
    pub fn is_in_wp_k(&self, z: &KElem) -> Option<KElem> {
        let v0 = is_in_wp_global(&z.y).witness?;
        for v in [v0.clone(), v0.add(&RatFun::one(self.base.k))] {
            if let Some(u) = is_in_wp_global(&z.x.add(&v.square().mul(&self.delta))).witness {
                let w = KElem::new(u, v);
                debug_assert_eq!(self.wp(&w), *z);
                return Some(w);
            }
        }
        None
    }

    /// Writes z = z0 + t * z1 with z0, z1 in K^2, returning their square roots.
    pub fn decompose_over_square_subfield(&self, z: &KElem) -> (KElem, KElem) {
        self.square_split(z)
    }

    /// Multiplies by an element of F.
    pub fn scale(&self, z: &KElem, f: &RatFun) -> KElem {
        KElem::new(z.x.mul(f), z.y.mul(f))
    }
}

impl Field for SepExt {
    type Elem = KElem;

    fn k(&self) -> u8 {
        self.base.k
    }
    fn zero(&self) -> KElem {
        self.embed(&RatFun::zero(self.base.k))
    }
    fn one(&self) -> KElem {
        self.embed(&RatFun::one(self.base.k))
    }
    fn constant(&self, c: Fq) -> KElem {
        self.embed(&RatFun::constant(c))
    }
    fn add(&self, a: &KElem, b: &KElem) -> KElem {
        KElem::new(a.x.add(&b.x), a.y.add(&b.y))
    }
    fn mul(&self, a: &KElem, b: &KElem) -> KElem {
        let yy = a.y.mul(&b.y);
        KElem::new(a.x.mul(&b.x).add(&yy.mul(&self.delta)), a.x.mul(&b.y).add(&a.y.mul(&b.x)).add(&yy))
    }
    fn inv(&self, a: &KElem) -> Option<KElem> {
        let n = self.norm(a).inv()?;
        Some(self.scale(&self.conj(a), &n))
    }
    fn is_zero(&self, a: &KElem) -> bool {
        a.x.is_zero() && a.y.is_zero()
    }
    fn square(&self, a: &KElem) -> KElem {
        let y2 = a.y.square();
        KElem::new(a.x.square().add(&y2.mul(&self.delta)), y2)
    }
    fn sqrt(&self, a: &KElem) -> Option<KElem> {
        self.is_square_k(a)
    }
    fn square_split(&self, z: &KElem) -> (KElem, KElem) {
        // eta = eta^2 + delta, so z = (x + y delta) + y eta^2
        let (a0, a1) = z.x.add(&z.y.mul(&self.delta)).square_split();
        let (y0, y1) = z.y.square_split();
        (KElem::new(a0, y0), KElem::new(a1, y1))
    }
    fn tau(&self) -> KElem {
        self.embed(&self.base.gen())
    }
    fn wp_preimage(&self, a: &KElem) -> Option<KElem> {
        self.is_in_wp_k(a)
    }
    fn render(&self, a: &KElem) -> String {
        let var = &self.base.var;
        let yterm = if a.y.is_one() { "eta".to_string() } else { format!("({})*eta", a.y.render(var)) };
        match (a.x.is_zero(), a.y.is_zero()) {
            (_, true) => a.x.render(var),
            (true, false) => yterm,
            (false, false) => format!("{} + {}", a.x.render(var), yterm),
        }
    }
    fn parse(&self, s: &str) -> Result<KElem> {
        let var = self.base.var.clone();
        let k = self.base.k;
        let eta = self.eta();
        parse::parse_expr(self, s, &|name: &str| {
            if name == var {
                Some(self.embed(&RatFun::var(k)))
            } else if name == "eta" {
                Some(eta.clone())
            } else {
                None
            }
        })
    }
    fn random(&self, height: usize, rng: &mut dyn RngCore) -> KElem {
        KElem::new(self.base.random(height, rng), self.base.random(height, rng))
    }
    fn enumerate(&self, height: usize) -> Vec<KElem> {
        let base = self.base.enumerate(height);
        base.iter().flat_map(|x| base.iter().map(move |y| KElem::new(x.clone(), y.clone()))).collect()
    }
}

/// K = F(sqrt t), realized as F_q(s) with t = s^2.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct InsepExt {
    k: u8,
}

impl InsepExt {
    pub fn new(k: u8) -> InsepExt {
        InsepExt { k }
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    /// K itself, as rational functions in s.
    pub fn field(&self) -> RatField {
        RatField::new(self.k, "s")
    }

    pub fn base(&self) -> RatField {
        RatField::new(self.k, "t")
    }

    /// f(t) -> f(s^2).
    pub fn embed(&self, f: &RatFun) -> RatFun {
        f.inflate()
    }

    /// sqrt(f) in K for f in F.
    pub fn sqrt_of_base(&self, f: &RatFun) -> RatFun {
        f.sqrt_coeffs()
    }

    /// The preimage in F of an element of K lying in F.
    pub fn in_base(&self, z: &RatFun) -> Option<RatFun> {
        let (x, y) = z.even_odd();
        y.is_zero().then_some(x)
    }

    /// z = x + y * s with x, y in F.
    pub fn coordinates(&self, z: &RatFun) -> (RatFun, RatFun) {
        z.even_odd()
    }
}
