//! Bilinear Pfister forms <<a_1, ..., a_n>> = <1, a_1> x ... x <1, a_n>:
//! Q-sets, Arason index and isometry.
//!
//! A Q-set is a subspace of E over the square subfield E^2. Since E = E^2 + tau E^2,
//! an element z = r0^2 + tau r1^2 is recorded by its root vector (r0, r1), and
//! E^2-linear combinations of elements become E-linear combinations of root
//! vectors. Q-sets are stored as reduced echelon bases of root vectors.

use crate::error::{Error, Result};
use crate::field::{in_span, row_reduce, Field};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PfisterForm<T> {
    pub slots: Vec<T>,
}

impl<T: Clone> PfisterForm<T> {
    pub fn new(slots: Vec<T>) -> PfisterForm<T> {
        PfisterForm { slots }
    }

    pub fn fold(&self) -> usize {
        self.slots.len()
    }

    /// <<1>>^s x self.
    pub fn with_hyperbolic_ones(&self, one: T, s: usize) -> PfisterForm<T> {
        let mut slots = vec![one; s];
        slots.extend(self.slots.iter().cloned());
        PfisterForm { slots }
    }
}

/// The 2^n products of slot subsets; bit i of the index selects slot i.
pub fn subset_products<E: Field>(field: &E, slots: &[E::Elem]) -> Vec<E::Elem> {
    let mut out = vec![field.one()];
    for s in slots {
        let ext: Vec<E::Elem> = out.iter().map(|p| field.mul(p, s)).collect();
        out.extend(ext);
    }
    out
}

/// A subspace over the square subfield, as an echelon basis of root vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSet<T> {
    pub rows: Vec<Vec<T>>,
}

impl<T> QSet<T> {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
}

fn root_vector<E: Field>(field: &E, z: &E::Elem) -> Vec<E::Elem> {
    let (r0, r1) = field.square_split(z);
    vec![r0, r1]
}

/// Span over the square subfield of the given elements.
pub fn span<E: Field>(field: &E, elems: &[E::Elem]) -> QSet<E::Elem> {
    let mut rows: Vec<Vec<E::Elem>> = elems.iter().map(|z| root_vector(field, z)).collect();
    if rows.is_empty() {
        return QSet { rows };
    }
    row_reduce(field, &mut rows);
    QSet { rows }
}

impl<T: Clone> QSet<T> {
    pub fn contains<E: Field<Elem = T>>(&self, field: &E, z: &T) -> bool {
        in_span(field, &self.rows, &root_vector(field, z))
    }

    /// Basis elements r0^2 + tau r1^2.
    pub fn basis<E: Field<Elem = T>>(&self, field: &E) -> Vec<T> {
        self.rows
            .iter()
            .map(|r| field.add(&field.square(&r[0]), &field.mul(&field.tau(), &field.square(&r[1]))))
            .collect()
    }
}

pub fn qset<E: Field>(field: &E, form: &PfisterForm<E::Elem>) -> QSet<E::Elem> {
    let q = span(field, &subset_products(field, &form.slots));
    assert!(q.dim().is_power_of_two(), "Q-set of a Pfister form has dimension {}", q.dim());
    q
}

/// n - log2 dim Q(b); zero iff the form is anisotropic.
pub fn arason_index<E: Field>(field: &E, form: &PfisterForm<E::Elem>) -> usize {
    form.fold() - qset(field, form).dim().trailing_zeros() as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

/// Isometry of Pfister forms over the same field.
pub fn pfister_isometric<E: Field>(field: &E, b: &PfisterForm<E::Elem>, c: &PfisterForm<E::Elem>) -> Tri {
    if b.fold() != c.fold() {
        return Tri::No;
    }
    let (qb, qc) = (qset(field, b), qset(field, c));
    if qb != qc {
        return Tri::No;
    }
    let s = b.fold() - qb.dim().trailing_zeros() as usize;
    if s >= 1 || b.fold() == 0 {
        return Tri::Yes;
    }
    match b.fold() {
        1 => {
            let ratio = field.div(&b.slots[0], &c.slots[0]).expect("slots are nonzero");
            if field.sqrt(&ratio).is_some() {
                Tri::Yes
            } else {
                Tri::No
            }
        }
        _ => Tri::Unknown,
    }
}

/// b(v, v) = sum over subsets S of c_S^2 * prod_{i in S} a_i.
pub fn form_value<E: Field>(field: &E, form: &PfisterForm<E::Elem>, coords: &[E::Elem]) -> Result<E::Elem> {
    let prods = subset_products(field, &form.slots);
    if coords.len() != prods.len() {
        return Err(Error::Precondition(format!("expected {} coordinates, got {}", prods.len(), coords.len())));
    }
    Ok(field.sum(prods.iter().zip(coords).map(|(p, c)| field.mul(&field.square(c), p)).collect::<Vec<_>>().iter()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::RatField;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f2() -> RatField {
        RatField::new(1, "t")
    }

    fn pf(f: &RatField, slots: &[&str]) -> PfisterForm<crate::ratfun::RatFun> {
        PfisterForm::new(slots.iter().map(|s| f.parse(s).unwrap()).collect())
    }

    #[test]
    fn qset_examples() {
        let f = f2();
        let q = qset(&f, &pf(&f, &["t"]));
        assert_eq!(q.dim(), 2);
        assert_eq!(q.basis(&f), vec![f.one(), f.gen()]);
        assert_eq!(qset(&f, &pf(&f, &["1", "t"])), q);
        assert_eq!(qset(&f, &pf(&f, &["t", "t+1"])).dim(), 2);
    }

    #[test]
    fn arason_examples() {
        let f = f2();
        for n in 0..=4 {
            assert_eq!(arason_index(&f, &pf(&f, &vec!["1"; n])), n);
        }
        assert_eq!(arason_index(&f, &pf(&f, &["t"])), 0);
        assert_eq!(arason_index(&f, &pf(&f, &["t", "t+1"])), 1);
    }

    #[test]
    fn isometry_examples() {
        let f = f2();
        assert_eq!(pfister_isometric(&f, &pf(&f, &["1", "t"]), &pf(&f, &["1", "t+1"])), Tri::Yes);
        assert_eq!(pfister_isometric(&f, &pf(&f, &["t"]), &pf(&f, &["t"])), Tri::Yes);
        assert_eq!(pfister_isometric(&f, &pf(&f, &["t"]), &pf(&f, &["t+1"])), Tri::No);
        assert_eq!(pfister_isometric(&f, &pf(&f, &["t"]), &pf(&f, &["t", "1"])), Tri::No);
    }

    #[test]
    fn form_value_examples() {
        let f = f2();
        let b = pf(&f, &["t", "t+1"]);
        let ones = vec![f.one(); 4];
        assert_eq!(form_value(&f, &b, &ones).unwrap(), f.parse("t^2+t").unwrap());
        let mut unit = vec![f.zero(); 4];
        unit[3] = f.one();
        assert_eq!(form_value(&f, &b, &unit).unwrap(), f.parse("t^2+t").unwrap());
        assert!(f.is_zero(&form_value(&f, &b, &vec![f.zero(); 4]).unwrap()));
        assert!(form_value(&f, &b, &ones[..3]).is_err());
    }

    #[test]
    fn values_lie_in_qset_and_index_is_additive() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = RatField::new(2, "t");
        for _ in 0..40 {
            let n = 1 + (rand::Rng::gen_range(&mut rng, 0..3usize));
            let b = PfisterForm::new((0..n).map(|_| f.random_nonzero(2, &mut rng)).collect());
            let q = qset(&f, &b);
            let coords: Vec<_> = (0..1 << n).map(|_| f.random(2, &mut rng)).collect();
            assert!(q.contains(&f, &form_value(&f, &b, &coords).unwrap()));
            let s = rand::Rng::gen_range(&mut rng, 0..3usize);
            let bs = b.with_hyperbolic_ones(f.one(), s);
            assert_eq!(arason_index(&f, &bs), s + arason_index(&f, &b));
        }
    }
}
