//! Places of the separable extension K = F(eta) above a place of F, with
//! embeddings of K into the completions.

use super::{KElem, SepExt};
use crate::places::{valuation, Completion, Place};
use crate::ratfun::RatFun;
use crate::residue::{ResElem, ResField};
use crate::series::Laurent;
use serde::{Deserialize, Serialize};
use std::sync::{Arc, Mutex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Behavior {
    Split,
    Inert,
    Ramified,
}

/// A place of F (branch 0) or of K, identified by the place below and a branch index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlaceId {
    pub base: Place,
    pub branch: u8,
}

impl PlaceId {
    pub fn of_base(base: Place) -> PlaceId {
        PlaceId { base, branch: 0 }
    }

    pub fn render(&self, var: &str) -> String {
        format!("{}#{}", self.base.render(var), self.branch)
    }
}

#[derive(Debug, Default)]
struct Cache {
    eta_red: Option<Laurent>,
    pi: Option<Laurent>,
}

#[derive(Clone, Debug)]
enum Local {
    /// eta + g is a root of y^2 + y = delta_red congruent to `seed`.
    Unramified { seed: ResElem, const_term: ResElem },
    /// v(delta_red) = -(2m+1); uniformizer pi^(m+1) (eta + g).
    Ramified { m: i64 },
}

#[derive(Clone, Debug)]
pub struct PlaceAbove {
    pub id: PlaceId,
    pub behavior: Behavior,
    pub e: u8,
    pub f: u8,
    /// Residue field of the place above.
    pub field: ResField,
    below: Completion,
    g: RatFun,
    delta_red: RatFun,
    local: Local,
    cache: Arc<Mutex<Cache>>,
}

/// The places of K above v, in branch order.
pub fn places_above(ext: &SepExt, v: &Place) -> Vec<PlaceAbove> {
    ext.places_above(v)
}

pub(super) fn compute_places_above(ext: &SepExt, v: &Place) -> Vec<PlaceAbove> {
    let k = ext.k_const();
    let below = Completion::new(k, v.clone());
    let red = below.wp_reduce(ext.delta());
    let (g, delta_red) = (red.g, red.reduced);
    let val = valuation(&delta_red, v).unwrap_or(i64::MAX);
    let bf = below.field.clone();
    let make = |branch: u8, behavior, e, f, field: ResField, local| PlaceAbove {
        id: PlaceId { base: v.clone(), branch },
        behavior,
        e,
        f,
        field,
        below: below.clone(),
        g: g.clone(),
        delta_red: delta_red.clone(),
        local,
        cache: Arc::new(Mutex::new(Cache::default())),
    };
    if val < 0 {
        debug_assert!(val % 2 != 0);
        return vec![make(0, Behavior::Ramified, 2, 1, bf, Local::Ramified { m: (-val - 1) / 2 })];
    }
    let c = if val == 0 { below.expand_abs(&delta_red, 1).coeffs[0].clone() } else { bf.zero() };
    match bf.solve_wp(&c) {
        Some(r) => {
            let r1 = bf.add(&r, &bf.one());
            vec![
                make(0, Behavior::Split, 1, 1, bf.clone(), Local::Unramified { seed: r, const_term: c.clone() }),
                make(1, Behavior::Split, 1, 1, bf.clone(), Local::Unramified { seed: r1, const_term: c }),
            ]
        }
        None => {
            let ext_field = bf.quadratic(&c);
            let rho = ext_field.rho();
            let ct = ext_field.embed_base(&c);
            vec![make(0, Behavior::Inert, 1, 2, ext_field, Local::Unramified { seed: rho, const_term: ct })]
        }
    }
}

impl SepExt {
    fn k_const(&self) -> u8 {
        self.base().k
    }
}

impl PlaceAbove {
    pub fn base(&self) -> &Place {
        &self.id.base
    }

    /// Uniformizer of the place below as a rational function.
    fn base_uniformizer(&self) -> RatFun {
        match self.base() {
            Place::Finite(p) => RatFun::from_poly(p.clone()),
            Place::Infinity => RatFun::var(self.below.k()).inv().unwrap(),
        }
    }

    fn lift_series(&self, s: &Laurent) -> Laurent {
        if self.behavior == Behavior::Inert {
            s.map_coeffs(&self.field, |c| self.field.embed_base(c))
        } else {
            s.clone()
        }
    }

    /// Series of pi (the uniformizer below) in the uniformizer above, ramified case.
    fn pi_series(&self, prec: i64) -> Laurent {
        let Local::Ramified { m } = self.local else { unreachable!() };
        if let Some(p) = &self.cache.lock().unwrap().pi {
            if p.prec >= prec {
                return p.truncate(&self.field, prec);
            }
        }
        let f = &self.field;
        // h(pi) = pi^(2m+2) delta_red has valuation 1; solve h(P) + w P^(m+1) + w^2 = 0
        let h = self.base_uniformizer().pow(2 * m + 2).unwrap().mul(&self.delta_red);
        let work = prec + 4;
        let hs = self.below.expand_abs(&h, work / 2 + 2);
        let dh = hs.derivative(f);
        let h1 = hs.coeff(f, 1).unwrap();
        let w = Laurent::monomial(f, f.one(), 1, work + 2);
        let w2 = Laurent::monomial(f, f.one(), 2, work + 2);
        let mut p = Laurent::monomial(f, f.inv(&h1).unwrap(), 2, work);
        for _ in 0..64 {
            let g = hs.compose(f, &p).unwrap().add(f, &w.mul(f, &p.pow(f, m + 1).unwrap())).add(f, &w2);
            if g.is_zero() && g.prec >= work {
                break;
            }
            let mut dg = dh.compose(f, &p).unwrap();
            if m % 2 == 0 {
                dg = dg.add(f, &w.mul(f, &p.pow(f, m).unwrap()));
            }
            let next = p.add(f, &g.div(f, &dg).unwrap()).truncate(f, work);
            if next == p {
                break;
            }
            p = next;
        }
        p = p.truncate(f, prec);
        self.cache.lock().unwrap().pi = Some(p.clone());
        p
    }

    /// Image of an element of F, to absolute precision about `prec`.
    pub fn embed_base(&self, f: &RatFun, prec: i64) -> Laurent {
        match self.local {
            Local::Unramified { .. } => self.lift_series(&self.below.expand_abs(f, prec)),
            Local::Ramified { .. } => {
                let Some(v) = valuation(f, self.base()) else { return Laurent::zero(prec) };
                let s = self.below.expand_abs(f, prec.div_euclid(2) + 2);
                let p = self.pi_series(prec + 2 * v.abs() + 4);
                s.compose(&self.field, &p).unwrap().truncate(&self.field, prec)
            }
        }
    }

    /// Image of eta + g, to absolute precision about `prec`.
    fn eta_red_series(&self, prec: i64) -> Laurent {
        if let Some(s) = &self.cache.lock().unwrap().eta_red {
            if s.prec >= prec {
                return s.truncate(&self.field, prec);
            }
        }
        let f = &self.field;
        let s = match &self.local {
            Local::Unramified { seed, const_term } => {
                let d = self.lift_series(&self.below.expand_abs(&self.delta_red, prec));
                let d1 = d.add(f, &Laurent::monomial(f, const_term.clone(), 0, prec));
                let mut eps = Laurent::zero(prec);
                loop {
                    let next = d1.add(f, &eps.square(f));
                    if next == eps {
                        break;
                    }
                    eps = next;
                }
                eps.add(f, &Laurent::monomial(f, seed.clone(), 0, prec))
            }
            Local::Ramified { m } => {
                let extra = 2 * (m + 1) + 4;
                let p = self.pi_series(prec + 2 * extra);
                let w = Laurent::monomial(f, f.one(), 1, prec + 2 * extra);
                w.mul(f, &p.pow(f, -(m + 1)).unwrap()).truncate(f, prec)
            }
        };
        self.cache.lock().unwrap().eta_red = Some(s.clone());
        s
    }

    pub fn eta_series(&self, prec: i64) -> Laurent {
        let vg = valuation(&self.g, self.base()).unwrap_or(0).min(0).abs() * self.e as i64;
        let er = self.eta_red_series(prec + vg);
        er.add(&self.field, &self.embed_base(&self.g, prec + vg)).truncate(&self.field, prec)
    }

    /// Image of x + y eta, to absolute precision at most `prec`.
    pub fn embed_abs(&self, z: &KElem, prec: i64) -> Laurent {
        let f = &self.field;
        let e = self.e as i64;
        let vy = valuation(&z.y, self.base()).map(|v| v * e);
        let x = self.embed_base(&z.x, prec);
        let Some(vy) = vy else { return x };
        let slack = (4 + 2 * e * (self.delta_red_pole() + 1)).max(0);
        let y = self.embed_base(&z.y, prec + slack + vy.abs());
        let eta = self.eta_series(prec + slack + vy.abs());
        x.add(f, &y.mul(f, &eta)).truncate(f, prec)
    }

    fn delta_red_pole(&self) -> i64 {
        match self.local {
            Local::Ramified { m } => 2 * m + 1,
            _ => 0,
        }
        .max(valuation(&self.g, self.base()).unwrap_or(0).min(0).abs())
    }

    /// Image of z with at least `n` known terms after the leading one; `None` for z = 0.
    pub fn embed_rel(&self, z: &KElem, n: i64) -> Option<Laurent> {
        if z.x.is_zero() && z.y.is_zero() {
            return None;
        }
        let mut prec = n;
        for _ in 0..24 {
            let s = self.embed_abs(z, prec);
            if !s.is_zero() && s.rel_prec() >= n {
                return Some(s);
            }
            prec += n.max(8);
        }
        panic!("nonzero element vanished to high precision at {}", self.id.render("t"));
    }

    /// Local invariant of [a, b) at this place: Tr Res(a db/b) after reducing a.
    pub fn local_invariant(&self, a: &KElem, b: &KElem) -> u8 {
        let Some(probe) = self.embed_rel(a, 1) else { return 0 };
        let vb = self.embed_rel(b, 1).expect("b is nonzero").val;
        let mut n = probe.val.abs() + vb.abs() + 6;
        let r = loop {
            if let Some(r) = self.residue_at(a, b, n) {
                break r;
            }
            n *= 2;
        };
        debug_assert_eq!(self.residue_at(a, b, 2 * n), Some(r), "residue changed under precision doubling");
        r
    }

    fn residue_at(&self, a: &KElem, b: &KElem, n: i64) -> Option<u8> {
        let f = &self.field;
        let mut sa = self.embed_rel(a, n)?;
        let sb = self.embed_rel(b, n)?;
        sa = reduce_series(f, &sa);
        let dlog = sb.derivative(f).div(f, &sb).ok()?;
        let r = sa.mul(f, &dlog).residue(f)?;
        Some(f.abs_trace(&r))
    }
}

/// Removes even-order poles by adding wp of monomials.
fn reduce_series(f: &ResField, s: &Laurent) -> Laurent {
    let mut s = s.clone();
    while !s.is_zero() && s.val < 0 && s.val % 2 == 0 {
        let root = f.sqrt(s.lead().unwrap());
        let mono = Laurent::monomial(f, root, s.val / 2, s.prec);
        s = s.add(f, &mono.wp(f));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, RatField};
    use crate::poly::Poly;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ext(k: u8, delta: &str) -> SepExt {
        let f = RatField::new(k, "t");
        let d = f.parse(delta).unwrap();
        SepExt::new(f, d).unwrap()
    }

    fn place(k: u8, bits: &[u32]) -> Place {
        Place::finite(Poly::from_bits(k, bits))
    }

    #[test]
    fn classification_examples() {
        let e = ext(1, "t");
        let b = |v: &Place| places_above(&e, v).iter().map(|p| p.behavior).collect::<Vec<_>>();
        assert_eq!(b(&place(1, &[0, 1])), vec![Behavior::Split, Behavior::Split]);
        assert_eq!(b(&place(1, &[1, 1])), vec![Behavior::Inert]);
        assert_eq!(b(&Place::Infinity), vec![Behavior::Ramified]);
    }

    fn check_eta_relation(e: &SepExt, v: &Place) {
        for p in places_above(e, v) {
            let f = &p.field;
            let eta = p.eta_series(12);
            let d = p.embed_base(e.delta(), 12);
            let lhs = eta.wp(f);
            let prec = lhs.prec.min(d.prec);
            assert!(prec >= 4, "precision collapsed at {}", p.id.render("t"));
            assert_eq!(lhs.truncate(f, prec), d.truncate(f, prec), "eta relation fails at {}", p.id.render("t"));
        }
    }

    #[test]
    fn eta_relation_and_degrees() {
        for (k, delta) in [(1, "t"), (1, "t^3"), (1, "1/(t^2+t+1)"), (2, "t^3 + 1/t"), (1, "t^5/(t+1)^3 + t")] {
            let e = ext(k, delta);
            let mut places: Vec<Place> = [&[0, 1][..], &[1, 1], &[1, 1, 1]]
                .into_iter()
                .map(|b| Poly::from_bits(k, b))
                .filter(|q| q.is_irreducible())
                .map(Place::Finite)
                .collect();
            places.push(Place::Infinity);
            for v in &places {
                let ps = places_above(&e, v);
                let total: u8 = ps.iter().map(|p| p.e * p.f).sum();
                assert_eq!(total, 2);
                check_eta_relation(&e, v);
            }
        }
    }

    #[test]
    fn embedding_is_homomorphic() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let e = ext(1, "t^3 + 1/(t+1)");
        for v in [place(1, &[0, 1]), place(1, &[1, 1]), Place::Infinity] {
            for p in places_above(&e, &v) {
                let f = &p.field;
                for _ in 0..5 {
                    let a = e.random_nonzero(2, &mut rng);
                    let b = e.random_nonzero(2, &mut rng);
                    let lhs = p.embed_abs(&e.mul(&a, &b), 8);
                    let rhs = p.embed_abs(&a, 30).mul(f, &p.embed_abs(&b, 30));
                    let prec = lhs.prec.min(rhs.prec);
                    assert_eq!(lhs.truncate(f, prec), rhs.truncate(f, prec));
                }
            }
        }
    }
}
