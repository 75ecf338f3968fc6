//! Random instance builders shared by tests, benches and the CLI.

use crate::descent::slot_convert;
use crate::field::{Field, RatField};
use crate::involution::TDInvolution;
use crate::places::is_in_wp_global;
use crate::quadext::{InsepExt, KElem, SepExt};
use crate::ratfun::RatFun;
use rand::{Rng, RngCore};

/// A random delta outside wp(F) and the extension it defines.
pub fn random_sep_ext(f: &RatField, height: usize, rng: &mut dyn RngCore) -> SepExt {
    loop {
        let d = f.random_nonzero(height, rng);
        if !is_in_wp_global(&d).holds() {
            return SepExt::new(f.clone(), d).expect("delta is outside wp(F)");
        }
    }
}

pub fn random_nonsquare(f: &RatField, height: usize, rng: &mut dyn RngCore) -> RatFun {
    loop {
        let b = f.random_nonzero(height.max(1), rng);
        if b.sqrt().is_none() {
            return b;
        }
    }
}

/// n random factors over F with nonzero slots.
pub fn random_td(f: &RatField, n: usize, height: usize, rng: &mut dyn RngCore) -> TDInvolution<RatFun> {
    TDInvolution::new((0..n).map(|_| (f.random(height, rng), f.random_nonzero(height, rng))).collect())
}

/// beta + lambda eta with [beta + lambda eta, b) isomorphic to [c, b) over K:
/// lambda = d^2 + d + e^2 b and beta = c + (d^2 + e^2 b) delta.
pub fn disguise_factor(ext: &SepExt, c: &RatFun, b: &RatFun, height: usize, rng: &mut dyn RngCore) -> KElem {
    let f = ext.base();
    let (d, e) = (f.random(height, rng), f.random(height, rng));
    let e2b = e.square().mul(b);
    KElem::new(c.add(&d.square().add(&e2b).mul(ext.delta())), d.wp().add(&e2b))
}

/// An algebra over K with the same slots and Brauer class as B over K, with
/// factors disguised individually and, when possible, a random element moved
/// between the first two factors.
pub fn disguised_base_change(
    ext: &SepExt,
    b: &TDInvolution<RatFun>,
    height: usize,
    rng: &mut dyn RngCore,
) -> TDInvolution<KElem> {
    let mut factors: Vec<(KElem, KElem)> =
        b.factors.iter().map(|(c, s)| (disguise_factor(ext, c, s, height, rng), ext.embed(s))).collect();
    if factors.len() >= 2 && rng.gen_bool(0.5) {
        let z = ext.random(height, rng);
        let (b0, b1) = (factors[0].1.clone(), factors[1].1.clone());
        if let Some(moved) = slot_convert(ext, &z, &b0, &b1) {
            factors[0].0 = ext.add(&factors[0].0, &z);
            factors[1].0 = ext.add(&factors[1].0, &moved);
        }
    }
    TDInvolution::new(factors)
}

/// n random factors over K = F(sqrt t); each slot lies in F with probability 3/4.
pub fn random_insep(ext: &InsepExt, n: usize, height: usize, rng: &mut dyn RngCore) -> TDInvolution<RatFun> {
    let kf = ext.field();
    let factors = (0..n)
        .map(|_| {
            let a = kf.random(height, rng);
            let b = if rng.gen_bool(0.75) {
                ext.embed(&ext.base().random_nonzero(height, rng))
            } else {
                kf.random_nonzero(height, rng)
            };
            (a, b)
        })
        .collect();
    TDInvolution::new(factors)
}
