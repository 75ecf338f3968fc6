//! Rational functions over F_q in canonical form.

use crate::gf::Fq;
use crate::poly::Poly;
use rand::Rng;
use std::fmt;

/// A rational function num/den with gcd(num, den) = 1 and den monic.
/// Equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    /// Builds num/den in canonical form; `None` when den is zero.
    pub fn new(num: Poly, den: Poly) -> Option<RatFun> {
        if den.is_zero() {
            return None;
        }
        let k = den.k();
        if num.is_zero() {
            return Some(RatFun { num, den: Poly::one(k) });
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() { (num, den) } else { (num.div_exact(&g), den.div_exact(&g)) };
        let inv = den.lead().inv().unwrap();
        Some(RatFun { num: num.scale(inv), den: den.scale(inv) })
    }

    pub fn from_poly(p: Poly) -> RatFun {
        let k = p.k();
        RatFun { num: p, den: Poly::one(k) }
    }

    pub fn constant(c: Fq) -> RatFun {
        RatFun::from_poly(Poly::constant(c))
    }

    pub fn zero(k: u8) -> RatFun {
        RatFun::from_poly(Poly::zero(k))
    }

    pub fn one(k: u8) -> RatFun {
        RatFun::from_poly(Poly::one(k))
    }

    pub fn var(k: u8) -> RatFun {
        RatFun::from_poly(Poly::var(k))
    }

    /// Shorthand used heavily in tests: polynomial from coefficient bit patterns.
    pub fn poly_bits(k: u8, bits: &[u32]) -> RatFun {
        RatFun::from_poly(Poly::from_bits(k, bits))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn k(&self) -> u8 {
        self.den.k()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// Constant value, if the function is constant.
    pub fn as_constant(&self) -> Option<Fq> {
        (self.den.is_one() && self.num.degree().unwrap_or(0) == 0).then(|| self.num.coeff(0))
    }

    /// max(deg num, deg den), with deg 0 = 0.
    pub fn height(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn add(&self, o: &RatFun) -> RatFun {
        if self.den == o.den {
            return RatFun::new(self.num.add(&o.num), self.den.clone()).unwrap();
        }
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        RatFun::new(num, self.den.mul(&o.den)).unwrap()
    }

    pub fn mul(&self, o: &RatFun) -> RatFun {
        RatFun::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }

    pub fn square(&self) -> RatFun {
        // squares of coprime polynomials stay coprime and monic stays monic
        RatFun { num: self.num.square(), den: self.den.square() }
    }

    pub fn inv(&self) -> Option<RatFun> {
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFun) -> Option<RatFun> {
        Some(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Option<RatFun> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let n = e.unsigned_abs();
        Some(RatFun { num: base.num.pow(n), den: base.den.pow(n) }.renormalized())
    }

    fn renormalized(self) -> RatFun {
        RatFun::new(self.num, self.den).unwrap()
    }

    /// Artin-Schreier map x -> x^2 + x.
    pub fn wp(&self) -> RatFun {
        self.square().add(self)
    }

    /// The g with g^2 = self, if any. Over a perfect constant field,
    /// num/den is a square iff both coprime parts are squares.
    pub fn sqrt(&self) -> Option<RatFun> {
        Some(RatFun { num: self.num.sqrt()?, den: self.den.sqrt()? })
    }

    /// f(t) -> f(t^2).
    pub fn inflate(&self) -> RatFun {
        RatFun { num: self.num.inflate(), den: self.den.inflate() }
    }

    /// Square roots of all constant coefficients, variable untouched.
    pub fn sqrt_coeffs(&self) -> RatFun {
        RatFun { num: self.num.sqrt_coeffs(), den: self.den.sqrt_coeffs() }
    }

    /// Squares of all constant coefficients, variable untouched.
    pub fn frobenius_coeffs(&self) -> RatFun {
        RatFun { num: self.num.frobenius_coeffs(), den: self.den.frobenius_coeffs() }
    }

    /// Writes f(t) = A(t^2) + t * B(t^2) and returns (A, B) as functions of the same variable.
    pub fn even_odd(&self) -> (RatFun, RatFun) {
        let (e, o) = self.num.mul(&self.den).even_odd();
        let d2 = self.den.frobenius_coeffs();
        (RatFun::new(e, d2.clone()).unwrap(), RatFun::new(o, d2).unwrap())
    }

    /// Roots (r0, r1) with f = r0^2 + t * r1^2.
    pub fn square_split(&self) -> (RatFun, RatFun) {
        let (a, b) = self.even_odd();
        (a.sqrt_coeffs(), b.sqrt_coeffs())
    }

    /// Derivative with respect to the variable.
    pub fn derivative(&self) -> RatFun {
        let num = self.num.derivative().mul(&self.den).add(&self.num.mul(&self.den.derivative()));
        RatFun::new(num, self.den.square()).unwrap()
    }

    /// Substitutes a rational function for the variable.
    pub fn compose(&self, g: &RatFun) -> Option<RatFun> {
        let ev = |p: &Poly| {
            p.coeffs()
                .iter()
                .rev()
                .fold(RatFun::zero(self.k()), |acc, c| acc.mul(g).add(&RatFun::constant(*c)))
        };
        ev(&self.num).div(&ev(&self.den))
    }

    pub fn render(&self, var: &str) -> String {
        if self.den.is_one() {
            render_poly(&self.num, var)
        } else {
            format!("({})/({})", render_poly(&self.num, var), render_poly(&self.den, var))
        }
    }

    /// Uniformly random function with numerator and denominator degrees at most `height`.
    pub fn random<R: Rng + ?Sized>(k: u8, height: usize, rng: &mut R) -> RatFun {
        let q = 1u32 << k;
        let mut rand_poly =
            |n: usize| Poly::new(k, (0..=n).map(|_| Fq::new(rng.gen_range(0..q), k)).collect());
        loop {
            let num = rand_poly(height);
            let den = rand_poly(height);
            if let Some(f) = RatFun::new(num, den) {
                return f;
            }
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(k: u8, height: usize, rng: &mut R) -> RatFun {
        loop {
            let f = RatFun::random(k, height, rng);
            if !f.is_zero() {
                return f;
            }
        }
    }
}

pub fn render_poly(p: &Poly, var: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut terms = Vec::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        terms.push(match (c.is_one(), i) {
            (_, 0) => c.to_string(),
            (true, _) => mono,
            (false, _) => format!("{c}*{mono}"),
        });
    }
    terms.join("+")
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("t"))
    }
}

/// Every monic polynomial of degree exactly `d`.
fn monic_of_degree(k: u8, d: usize) -> impl Iterator<Item = Poly> {
    let q = 1u64 << k;
    (0..q.pow(d as u32)).map(move |i| Poly::from_index(k, i).add(&Poly::monomial(Fq::one(k), d)))
}

/// All rational functions whose height is exactly `h`, in a fixed order.
pub fn ratfuns_of_height(k: u8, h: usize) -> Vec<RatFun> {
    let q = 1u64 << k;
    let mut out = Vec::new();
    for dd in 0..=h {
        for den in monic_of_degree(k, dd) {
            let max_num = q.pow(h as u32 + 1);
            for ni in 0..max_num {
                let num = Poly::from_index(k, ni);
                let nd = num.degree().unwrap_or(0);
                if nd.max(dd) != h {
                    continue;
                }
                if num.is_zero() && !den.is_one() {
                    continue;
                }
                if !num.gcd(&den).is_one() && !num.is_zero() {
                    continue;
                }
                out.push(RatFun::new(num, den.clone()).unwrap());
            }
        }
    }
    out
}

/// All rational functions of height at most `bound`, height-major; a prefix of the
/// stream for any larger bound.
pub fn enumerate_ratfun(k: u8, bound: usize) -> impl Iterator<Item = RatFun> {
    (0..=bound).flat_map(move |h| ratfuns_of_height(k, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn t() -> RatFun {
        RatFun::var(1)
    }

    #[test]
    fn square_examples() {
        assert_eq!(t().square().sqrt(), Some(t()));
        assert_eq!(t().sqrt(), None);
        let f = RatFun::poly_bits(1, &[1, 0, 1]).div(&t().pow(4).unwrap()).unwrap();
        let g = RatFun::poly_bits(1, &[1, 1]).div(&t().square()).unwrap();
        assert_eq!(f.sqrt(), Some(g));
    }

    #[test]
    fn enumeration_small_bounds() {
        let e0: Vec<_> = enumerate_ratfun(1, 0).collect();
        assert_eq!(e0, vec![RatFun::zero(1), RatFun::one(1)]);
        let e1: Vec<_> = enumerate_ratfun(1, 1).collect();
        assert_eq!(e1.len(), 8);
        assert!(e1.contains(&t().inv().unwrap()));
        assert!(e1.contains(&t().div(&t().add(&RatFun::one(1))).unwrap()));
        let e3: Vec<_> = enumerate_ratfun(1, 3).collect();
        assert_eq!(&e3[..8], &e1[..]);
        let set: HashSet<_> = e3.iter().cloned().collect();
        assert_eq!(set.len(), e3.len());
        assert!(e3.iter().all(|f| f.height() <= 3));
    }

    #[test]
    fn enumeration_counts_match_brute_force() {
        for (k, h) in [(1u8, 2usize), (2, 1)] {
            let mut brute = HashSet::new();
            let q = 1u64 << k;
            for ni in 0..q.pow(h as u32 + 1) {
                for di in 1..q.pow(h as u32 + 1) {
                    let f = RatFun::new(Poly::from_index(k, ni), Poly::from_index(k, di)).unwrap();
                    brute.insert(f);
                }
            }
            let ours: HashSet<_> = enumerate_ratfun(k, h).collect();
            assert_eq!(ours, brute);
        }
    }

    #[test]
    fn field_axioms_height_two() {
        let all: Vec<_> = enumerate_ratfun(1, 2).step_by(3).collect();
        for f in &all {
            for g in &all {
                assert_eq!(f.add(g), g.add(f));
                assert_eq!(f.mul(g), g.mul(f));
                assert_eq!(f.add(g).add(g), *f);
                if !g.is_zero() {
                    assert_eq!(f.mul(g).div(g).unwrap(), *f);
                }
                for h in all.iter().take(6) {
                    assert_eq!(f.mul(&g.add(h)), f.mul(g).add(&f.mul(h)));
                }
            }
        }
    }

    #[test]
    fn even_odd_roundtrip() {
        let mut rng = rand::thread_rng();
        for _ in 0..50 {
            let f = RatFun::random(2, 3, &mut rng);
            let (r0, r1) = f.square_split();
            assert_eq!(r0.square().add(&RatFun::var(2).mul(&r1.square())), f);
        }
    }

    #[test]
    fn render_forms() {
        let f = RatFun::poly_bits(2, &[3, 0, 2]).div(&RatFun::poly_bits(2, &[1, 1])).unwrap();
        assert_eq!(f.render("t"), "(2*t^2+3)/(t+1)");
    }
}
