//! Places of F_q(t), completions, residues of logarithmic differentials and
//! Artin-Schreier reduction.

use crate::error::{Error, Result};
use crate::gf::Fq;
use crate::poly::Poly;
use crate::ratfun::{render_poly, RatFun};
use crate::residue::{ResElem, ResField};
use crate::series::Laurent;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A place of F_q(t): a monic irreducible polynomial or the infinite place.
/// Ordered by polynomial (degree first), with infinity last.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Place {
    Finite(#[serde(with = "poly_bits")] Poly),
    Infinity,
}

mod poly_bits {
    use crate::gf::Fq;
    use crate::poly::Poly;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(p: &Poly, s: S) -> Result<S::Ok, S::Error> {
        (p.k(), p.coeffs().iter().map(|c| c.bits()).collect::<Vec<_>>()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Poly, D::Error> {
        let (k, bits): (u8, Vec<u32>) = Deserialize::deserialize(d)?;
        Ok(Poly::new(k, bits.into_iter().map(|b| Fq::new(b, k)).collect()))
    }
}

impl Place {
    pub fn finite(p: Poly) -> Place {
        assert!(p.is_monic() && p.is_irreducible(), "places need monic irreducible polynomials");
        Place::Finite(p)
    }

    /// Degree of the residue field over F_q.
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.degree().unwrap(),
            Place::Infinity => 1,
        }
    }

    pub fn residue_field(&self, k: u8) -> ResField {
        match self {
            Place::Finite(p) => ResField::base(p.clone()),
            Place::Infinity => ResField::constants(k),
        }
    }

    pub fn render(&self, var: &str) -> String {
        match self {
            Place::Finite(p) => render_poly(p, var),
            Place::Infinity => "inf".to_string(),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("t"))
    }
}

/// Splits g = p^m * g0 with p not dividing g0.
fn poly_val(g: &Poly, p: &Poly) -> (i64, Poly) {
    let mut m = 0;
    let mut g = g.clone();
    loop {
        let (q, r) = g.div_rem(p);
        if !r.is_zero() {
            return (m, g);
        }
        g = q;
        m += 1;
    }
}

/// v(f), or `None` for f = 0.
pub fn valuation(f: &RatFun, v: &Place) -> Option<i64> {
    if f.is_zero() {
        return None;
    }
    Some(match v {
        Place::Finite(p) => poly_val(f.num(), p).0 - poly_val(f.den(), p).0,
        Place::Infinity => f.den().deg_i() - f.num().deg_i(),
    })
}

/// Places where f has nonzero valuation, in place order.
pub fn support(f: &RatFun) -> Vec<Place> {
    let mut out: Vec<Place> = f
        .num()
        .factor()
        .into_iter()
        .chain(f.den().factor())
        .map(|(p, _)| Place::Finite(p))
        .collect();
    if !f.is_zero() && f.num().deg_i() != f.den().deg_i() {
        out.push(Place::Infinity);
    }
    out.sort();
    out.dedup();
    out
}

/// Poles of f (finite factors of the denominator, and infinity if deg num > deg den).
pub fn poles(f: &RatFun) -> Vec<Place> {
    let mut out: Vec<Place> = f.den().factor().into_iter().map(|(p, _)| Place::Finite(p)).collect();
    if f.num().deg_i() > f.den().deg_i() {
        out.push(Place::Infinity);
    }
    out
}

/// The completion of F_q(t) at a place, with residue field k_v.
#[derive(Clone, Debug)]
pub struct Completion {
    pub place: Place,
    pub field: ResField,
    k: u8,
}

impl Completion {
    pub fn new(k: u8, place: Place) -> Completion {
        let field = place.residue_field(k);
        Completion { place, field, k }
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    fn constant_series(&self, c: ResElem, prec: i64) -> Laurent {
        Laurent::monomial(&self.field, c, 0, prec)
    }

    /// Horner evaluation of a polynomial over F_q at a series.
    pub fn eval_poly(&self, g: &Poly, s: &Laurent) -> Laurent {
        let prec = s.prec.max(1);
        let mut acc = Laurent::zero(prec);
        for c in g.coeffs().iter().rev() {
            acc = acc.mul(&self.field, s).add(&self.field, &self.constant_series(self.field.from_fq(*c), prec));
        }
        acc
    }

    /// The image T of t at a finite place: p(T) = pi, T = x mod pi.
    pub fn t_series(&self, prec: i64) -> Laurent {
        let Place::Finite(p) = &self.place else {
            panic!("t_series is only defined at finite places");
        };
        let f = &self.field;
        let pi = Laurent::monomial(f, f.one(), 1, prec);
        let dp = p.derivative();
        let mut x = self.constant_series(f.from_poly(&Poly::var(self.k)), prec);
        let mut known = 1;
        loop {
            let err = self.eval_poly(p, &x).add(f, &pi);
            if err.is_zero() {
                return x;
            }
            let step = err.div(f, &self.eval_poly(&dp, &x)).expect("p is separable");
            x = x.add(f, &step);
            known *= 2;
            if known > 2 * prec + 2 {
                debug_assert!(self.eval_poly(p, &x).add(f, &pi).is_zero());
                return x;
            }
        }
    }

    /// Expansion of a polynomial that is a unit at this place, to relative precision n.
    fn unit_poly(&self, g: &Poly, t: Option<&Laurent>, n: i64) -> Laurent {
        match (&self.place, t) {
            (Place::Finite(_), Some(t)) => self.eval_poly(g, &t.truncate(&self.field, n)),
            _ => {
                let d = g.degree().unwrap();
                let rev = g.reverse(d);
                let coeffs = rev.coeffs().iter().map(|c| self.field.from_fq(*c)).collect();
                Laurent::new(&self.field, 0, coeffs, n)
            }
        }
    }

    /// Laurent expansion of f in the local uniformizer (p(t), or 1/t at infinity)
    /// to absolute precision `prec`.
    pub fn expand_abs(&self, f: &RatFun, prec: i64) -> Laurent {
        let Some(val) = valuation(f, &self.place) else {
            return Laurent::zero(prec);
        };
        let n = prec - val;
        if n <= 0 {
            return Laurent::zero(prec);
        }
        let (num0, den0) = match &self.place {
            Place::Finite(p) => (poly_val(f.num(), p).1, poly_val(f.den(), p).1),
            Place::Infinity => (f.num().clone(), f.den().clone()),
        };
        let t = matches!(self.place, Place::Finite(_)).then(|| self.t_series(n));
        let a = self.unit_poly(&num0, t.as_ref(), n);
        let b = self.unit_poly(&den0, t.as_ref(), n);
        a.div(&self.field, &b).expect("unit denominator").shift(val)
    }

    /// Like [`Completion::expand_abs`], rejecting nonpositive precision.
    pub fn expand(&self, f: &RatFun, prec: i64) -> Result<Laurent> {
        if prec <= 0 {
            return Err(Error::BadPrecision(prec));
        }
        Ok(self.expand_abs(f, prec))
    }

    fn residue_at(&self, a: &RatFun, b: &RatFun, n: i64) -> Option<ResElem> {
        let va = valuation(a, &self.place)?;
        let vb = valuation(b, &self.place).expect("b is nonzero");
        let sa = self.expand_abs(a, va + n);
        let sb = self.expand_abs(b, vb + n);
        let dlog = sb.derivative(&self.field).div(&self.field, &sb).ok()?;
        sa.mul(&self.field, &dlog).residue(&self.field)
    }

    /// Coefficient of pi^-1 in a * db/b.
    pub fn residue_a_dlog_b(&self, a: &RatFun, b: &RatFun) -> ResElem {
        assert!(!b.is_zero(), "b must be nonzero");
        if a.is_zero() {
            return self.field.zero();
        }
        let va = valuation(a, &self.place).unwrap();
        let vb = valuation(b, &self.place).unwrap();
        let mut n = va.abs() + vb.abs() + self.place.degree() as i64 + 4;
        let r = loop {
            if let Some(r) = self.residue_at(a, b, n) {
                break r;
            }
            n *= 2;
        };
        let check = self.residue_at(a, b, 2 * n).expect("doubled precision suffices");
        assert_eq!(r, check, "residue changed under precision doubling");
        r
    }

    /// One step of local reduction: if v(f) = -2m < 0, returns g with
    /// v(f + wp(g)) > -2m and g having poles only at this place.
    fn reduction_step(&self, f: &RatFun) -> Option<RatFun> {
        let val = valuation(f, &self.place)?;
        if val >= 0 || val % 2 != 0 {
            return None;
        }
        let m = (-val / 2) as u32;
        let lead = self.expand_abs(f, val + 1).lead().cloned().unwrap();
        let s = self.field.sqrt(&lead);
        Some(match &self.place {
            Place::Finite(p) => RatFun::new(self.field.lift(&s), p.pow(m as u64)).unwrap(),
            Place::Infinity => RatFun::from_poly(Poly::monomial(s.0[0], m as usize)),
        })
    }

    /// Reduces f modulo wp of functions with poles only at this place.
    pub fn wp_reduce(&self, f: &RatFun) -> LocalReduction {
        let mut reduced = f.clone();
        let mut g = RatFun::zero(self.k);
        let mut steps = Vec::new();
        while let Some(h) = self.reduction_step(&reduced) {
            reduced = reduced.add(&h.wp());
            g = g.add(&h);
            steps.push(h);
        }
        LocalReduction { reduced, g, steps }
    }
}

/// Result of local reduction: `reduced = f + wp(g)`, with `g` the sum of `steps`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalReduction {
    pub reduced: RatFun,
    pub g: RatFun,
    pub steps: Vec<RatFun>,
}

pub fn expand(f: &RatFun, v: &Place, prec: i64) -> Result<Laurent> {
    Completion::new(f.k(), v.clone()).expand(f, prec)
}

pub fn residue_a_dlog_b(a: &RatFun, b: &RatFun, v: &Place) -> ResElem {
    Completion::new(b.k(), v.clone()).residue_a_dlog_b(a, b)
}

pub fn wp_reduce_local(f: &RatFun, v: &Place) -> LocalReduction {
    Completion::new(f.k(), v.clone()).wp_reduce(f)
}

/// Why f is not in wp(F): poles of odd order remain after reduction, or the
/// reduced function is a constant of absolute trace 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WpObstruction {
    pub odd_poles: Vec<(Place, i64)>,
    pub residual: Option<Fq>,
    pub reduced: RatFun,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WpWitness {
    pub witness: Option<RatFun>,
    pub obstruction: Option<WpObstruction>,
}

impl WpWitness {
    pub fn holds(&self) -> bool {
        self.witness.is_some()
    }
}

/// Decides f in wp(F), returning g with g^2 + g = f or an obstruction.
pub fn is_in_wp_global(f: &RatFun) -> WpWitness {
    let k = f.k();
    let mut reduced = f.clone();
    let mut g = RatFun::zero(k);
    let mut odd_poles = Vec::new();
    let mut pole_places = poles(f);
    pole_places.sort();
    for v in pole_places {
        let red = Completion::new(k, v.clone()).wp_reduce(&reduced);
        reduced = red.reduced;
        g = g.add(&red.g);
        let val = valuation(&reduced, &v).unwrap_or(0);
        if val < 0 {
            odd_poles.push((v, -val));
        }
    }
    if !odd_poles.is_empty() {
        return WpWitness { witness: None, obstruction: Some(WpObstruction { odd_poles, residual: None, reduced }) };
    }
    let c0 = reduced.as_constant().unwrap_or_else(|| Fq::zero(k));
    match c0.solve_wp() {
        Some(r) => {
            let w = g.add(&RatFun::constant(r));
            debug_assert_eq!(w.wp(), *f);
            WpWitness { witness: Some(w), obstruction: None }
        }
        None => WpWitness {
            witness: None,
            obstruction: Some(WpObstruction { odd_poles, residual: Some(c0), reduced }),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rf(k: u8, num: &[u32], den: &[u32]) -> RatFun {
        RatFun::new(Poly::from_bits(k, num), Poly::from_bits(k, den)).unwrap()
    }

    fn pl(bits: &[u32]) -> Place {
        Place::finite(Poly::from_bits(1, bits))
    }

    fn bits_of(s: &Laurent) -> Vec<u32> {
        s.coeffs.iter().map(|c| c.0[0].bits()).collect()
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&rf(1, &[0, 0, 0, 1], &[1, 1]), &pl(&[0, 1])), Some(3));
        assert_eq!(valuation(&RatFun::var(1), &Place::Infinity), Some(-1));
        assert_eq!(valuation(&rf(1, &[1, 0, 1], &[1]), &pl(&[1, 1])), Some(2));
        assert_eq!(valuation(&RatFun::zero(1), &Place::Infinity), None);
    }

    #[test]
    fn expansions() {
        let s = expand(&rf(1, &[1], &[1, 1]), &pl(&[0, 1]), 3).unwrap();
        assert_eq!((s.val, bits_of(&s), s.prec), (0, vec![1, 1, 1], 3));
        let s = expand(&RatFun::var(1), &Place::Infinity, 2).unwrap();
        assert_eq!((s.val, bits_of(&s), s.prec), (-1, vec![1, 0, 0], 2));
        let f = rf(1, &[1], &[0, 1, 1]);
        let s = expand(&f, &pl(&[0, 1]), 2).unwrap();
        assert_eq!((s.val, bits_of(&s), s.prec), (-1, vec![1, 1, 1], 2));
        assert_eq!(expand(&f, &pl(&[0, 1]), 0), Err(Error::BadPrecision(0)));
    }

    #[test]
    fn degree_two_place_root() {
        let c = Completion::new(1, pl(&[1, 1, 1]));
        let t = c.t_series(12);
        let p = Poly::from_bits(1, &[1, 1, 1]);
        let img = c.eval_poly(&p, &t);
        assert_eq!(img, Laurent::monomial(&c.field, c.field.one(), 1, 12));
    }

    #[test]
    fn residue_examples() {
        let t = RatFun::var(1);
        let one = RatFun::one(1);
        assert_eq!(residue_a_dlog_b(&one, &t, &pl(&[0, 1])).0[0].bits(), 1);
        assert_eq!(residue_a_dlog_b(&one, &t, &Place::Infinity).0[0].bits(), 1);
        assert_eq!(residue_a_dlog_b(&t.inv().unwrap(), &t, &pl(&[0, 1])).0[0].bits(), 0);
    }

    #[test]
    fn dlog_residues_sum_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in [1u8, 2, 3] {
            for _ in 0..15 {
                let f = RatFun::random_nonzero(k, 3, &mut rng);
                let one = RatFun::one(k);
                let mut places = support(&f);
                if !places.contains(&Place::Infinity) {
                    places.push(Place::Infinity);
                }
                let total: u8 = places
                    .iter()
                    .map(|v| {
                        let c = Completion::new(k, v.clone());
                        c.field.abs_trace(&c.residue_a_dlog_b(&one, &f))
                    })
                    .fold(0, |a, b| a ^ b);
                assert_eq!(total, 0, "f = {f}");
            }
        }
    }

    #[test]
    fn expand_is_homomorphic() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let places = [pl(&[0, 1]), pl(&[1, 1, 1]), pl(&[1, 1, 0, 1]), Place::Infinity];
        for _ in 0..20 {
            let f = RatFun::random_nonzero(1, 3, &mut rng);
            let g = RatFun::random_nonzero(1, 3, &mut rng);
            for v in &places {
                let c = Completion::new(1, v.clone());
                let lhs = c.expand_abs(&f.mul(&g), 6);
                let rhs = c.expand_abs(&f, 12).mul(&c.field, &c.expand_abs(&g, 12)).truncate(&c.field, 6);
                assert_eq!(lhs.truncate(&c.field, rhs.prec), rhs.truncate(&c.field, lhs.prec));
            }
        }
    }

    #[test]
    fn residue_is_coordinate_free() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let c = Completion::new(2, Place::finite(Poly::from_bits(2, &[2, 1, 1])));
        let f = &c.field;
        let phi = Laurent::new(f, 1, vec![f.one(), f.one()], 40);
        for _ in 0..10 {
            let a = RatFun::random_nonzero(2, 2, &mut rng);
            let b = RatFun::random_nonzero(2, 2, &mut rng);
            let direct = c.residue_a_dlog_b(&a, &b);
            let sa = c.expand_abs(&a, 10).compose(f, &phi).unwrap();
            let sb = c.expand_abs(&b, 12).compose(f, &phi).unwrap();
            let dlog = sb.derivative(f).div(f, &sb).unwrap();
            assert_eq!(sa.mul(f, &dlog).residue(f).unwrap(), direct);
        }
    }

    #[test]
    fn wp_examples() {
        let t = RatFun::var(1);
        assert_eq!(is_in_wp_global(&t.wp()).witness, Some(t.clone()));
        let r = is_in_wp_global(&t);
        assert!(!r.holds());
        assert_eq!(r.obstruction.unwrap().odd_poles, vec![(Place::Infinity, 1)]);
        // wp(t^2 + t) = t^4 + t, while t^4 itself reduces to t
        let t4 = t.pow(4).unwrap();
        let w = is_in_wp_global(&t4.add(&t)).witness.unwrap();
        assert_eq!(w.wp(), t4.add(&t));
        assert_eq!(is_in_wp_global(&t4).obstruction.unwrap().odd_poles, vec![(Place::Infinity, 1)]);
        assert!(!is_in_wp_global(&RatFun::one(1)).holds());
    }

    #[test]
    fn local_reduction_examples() {
        let t = RatFun::var(1);
        let ti = t.inv().unwrap();
        let v = pl(&[0, 1]);
        assert_eq!(wp_reduce_local(&ti.square(), &v).reduced, ti);
        assert_eq!(wp_reduce_local(&ti, &v).reduced, ti);
        assert_eq!(wp_reduce_local(&t, &v).reduced, t);
    }

    #[test]
    fn wp_roundtrip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for i in 0..200 {
            let k = 1 + (i % 3) as u8;
            let g = RatFun::random(k, 3, &mut rng);
            let w = is_in_wp_global(&g.wp());
            assert_eq!(w.witness.expect("wp(g) is in wp").wp(), g.wp());
        }
    }
}
