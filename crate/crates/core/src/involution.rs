//! Totally decomposable algebras with orthogonal involution, presented as
//! tensor products of quaternion factors ([a_i, b_i), sigma_0), where sigma_0
//! fixes u and v and sends w to w + v. The Alt-generator of factor i is v_i,
//! with v_i^2 = b_i.

use crate::biforms::{arason_index, qset, span, subset_products, PfisterForm};
use crate::brauer::{class_vector, InvariantVector, SymbolField};
use crate::error::{Error, Result};
use crate::field::{kernel, Field};
use crate::quadext::{InsepExt, KElem, SepExt};
use crate::ratfun::RatFun;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TDInvolution<T> {
    /// (a_i, b_i) for each quaternion factor.
    pub factors: Vec<(T, T)>,
}

impl<T: Clone> TDInvolution<T> {
    pub fn new(factors: Vec<(T, T)>) -> TDInvolution<T> {
        TDInvolution { factors }
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn slots(&self) -> Vec<T> {
        self.factors.iter().map(|(_, b)| b.clone()).collect()
    }

    pub fn a_params(&self) -> Vec<T> {
        self.factors.iter().map(|(a, _)| a.clone()).collect()
    }
}

pub fn validate<E: Field>(field: &E, a: &TDInvolution<E::Elem>) -> Result<()> {
    if a.factors.is_empty() {
        return Err(Error::Precondition("an algebra needs at least one factor".into()));
    }
    if a.factors.iter().any(|(_, b)| field.is_zero(b)) {
        return Err(Error::ZeroSlot);
    }
    Ok(())
}

/// <<b_1, ..., b_n>>.
pub fn pfister_invariant<T: Clone>(a: &TDInvolution<T>) -> PfisterForm<T> {
    PfisterForm::new(a.slots())
}

/// K[x_1, ..., x_n] / (x_i^2 - q_i), with basis the monomials x_S indexed by bitmask.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiAlgebra<T> {
    pub constants: Vec<T>,
}

impl<T: Clone> PhiAlgebra<T> {
    pub fn dim(&self) -> usize {
        1 << self.constants.len()
    }
}

pub fn phi<T: Clone>(a: &TDInvolution<T>) -> PhiAlgebra<T> {
    PhiAlgebra { constants: a.slots() }
}

/// Product of basis monomials: x_S x_T = (prod_{S and T} q_i) x_{S xor T}.
pub fn phi_mul<E: Field>(field: &E, p: &PhiAlgebra<E::Elem>, x: &[E::Elem], y: &[E::Elem]) -> Vec<E::Elem> {
    let mut out = vec![field.zero(); p.dim()];
    for (s, xs) in x.iter().enumerate() {
        if field.is_zero(xs) {
            continue;
        }
        for (t, yt) in y.iter().enumerate() {
            if field.is_zero(yt) {
                continue;
            }
            let common = s & t;
            let coeff = (0..p.constants.len())
                .filter(|i| common >> i & 1 == 1)
                .fold(field.mul(xs, yt), |acc, i| field.mul(&acc, &p.constants[i]));
            out[s ^ t] = field.add(&out[s ^ t], &coeff);
        }
    }
    out
}

/// Squares of the basis monomials, q_S = prod_{i in S} q_i.
pub fn monomial_squares<E: Field>(field: &E, p: &PhiAlgebra<E::Elem>) -> Vec<E::Elem> {
    subset_products(field, &p.constants)
}

pub fn phi_is_field<E: Field>(field: &E, p: &PhiAlgebra<E::Elem>) -> bool {
    span(field, &monomial_squares(field, p)).dim() == p.dim()
}

/// Basis (in monomial coordinates) of {x : x^2 = 0}. Since
/// (sum d_S x_S)^2 = sum d_S^2 q_S, this is the kernel of the root-vector map.
pub fn maximal_ideal_basis<E: Field>(field: &E, p: &PhiAlgebra<E::Elem>) -> Vec<Vec<E::Elem>> {
    let sq = monomial_squares(field, p);
    let roots: Vec<(E::Elem, E::Elem)> = sq.iter().map(|q| field.square_split(q)).collect();
    let rows = vec![
        roots.iter().map(|r| r.0.clone()).collect::<Vec<_>>(),
        roots.iter().map(|r| r.1.clone()).collect::<Vec<_>>(),
    ];
    kernel(field, &rows, p.dim())
}

pub fn isotropy_index<E: Field>(field: &E, a: &TDInvolution<E::Elem>) -> usize {
    arason_index(field, &pfister_invariant(a))
}

pub fn is_anisotropic<E: Field>(field: &E, a: &TDInvolution<E::Elem>) -> bool {
    isotropy_index(field, a) == 0
}

pub fn brauer_class<E: SymbolField>(field: &E, a: &TDInvolution<E::Elem>) -> InvariantVector {
    class_vector(field, &a.factors)
}

pub fn base_change_sep(ext: &SepExt, a: &TDInvolution<RatFun>) -> TDInvolution<KElem> {
    TDInvolution::new(a.factors.iter().map(|(x, b)| (ext.embed(x), ext.embed(b))).collect())
}

pub fn base_change_insep(ext: &InsepExt, a: &TDInvolution<RatFun>) -> TDInvolution<RatFun> {
    TDInvolution::new(a.factors.iter().map(|(x, b)| (ext.embed(x), ext.embed(b))).collect())
}

/// Phi re-presented with generators whose squares are `field_part` (admissible and
/// independent over the square subfield), plus `radical` generators squaring to 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiPresentation<T> {
    pub field_part: Vec<T>,
    pub radical: usize,
}

/// Picks field-part constants greedily among the monomial squares accepted by
/// `admissible`; fails if they do not generate the whole Q-set.
pub fn normalize_phi_presentation<E: Field>(
    field: &E,
    p: &PhiAlgebra<E::Elem>,
    admissible: impl Fn(&E::Elem) -> bool,
) -> Result<PhiPresentation<E::Elem>> {
    let target = span(field, &monomial_squares(field, p));
    let mut chosen: Vec<E::Elem> = Vec::new();
    for q in monomial_squares(field, p) {
        if !admissible(&q) {
            continue;
        }
        let mut trial = chosen.clone();
        trial.push(q);
        if span(field, &subset_products(field, &trial)).dim() > 1 << chosen.len() {
            chosen = trial;
        }
    }
    let got = qset(field, &PfisterForm::new(chosen.clone()));
    if got != target {
        return Err(Error::Precondition("admissible constants do not generate the Phi-algebra".into()));
    }
    let radical = p.constants.len() - chosen.len();
    Ok(PhiPresentation { field_part: chosen, radical })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biforms::form_value;
    use crate::field::RatField;

    fn f2() -> RatField {
        RatField::new(1, "t")
    }

    fn alg(f: &RatField, factors: &[(&str, &str)]) -> TDInvolution<RatFun> {
        TDInvolution::new(factors.iter().map(|(a, b)| (f.parse(a).unwrap(), f.parse(b).unwrap())).collect())
    }

    #[test]
    fn pfister_invariant_ignores_a() {
        let f = f2();
        let a = alg(&f, &[("1", "t"), ("t", "t+1")]);
        let b = alg(&f, &[("0", "t"), ("1/t", "t+1")]);
        assert_eq!(pfister_invariant(&a), pfister_invariant(&b));
        assert_eq!(pfister_invariant(&a).slots, vec![f.gen(), f.parse("t+1").unwrap()]);
    }

    #[test]
    fn phi_examples() {
        let f = f2();
        let p = phi(&alg(&f, &[("1", "t")]));
        assert!(phi_is_field(&f, &p));
        assert!(maximal_ideal_basis(&f, &p).is_empty());
        let p2 = phi(&alg(&f, &[("1", "t"), ("1", "t+1")]));
        assert!(!phi_is_field(&f, &p2));
        let p1 = phi(&alg(&f, &[("0", "1")]));
        assert!(!phi_is_field(&f, &p1));
        assert_eq!(maximal_ideal_basis(&f, &p1), vec![vec![f.one(), f.one()]]);
    }

    #[test]
    fn nilradical_of_t_t() {
        let f = f2();
        let p = phi(&alg(&f, &[("0", "t"), ("0", "t")]));
        let m = maximal_ideal_basis(&f, &p);
        assert_eq!(m.len(), 2);
        let x1_plus_x2 = vec![f.zero(), f.one(), f.one(), f.zero()];
        let mut rows = m.clone();
        rows.push(x1_plus_x2);
        assert_eq!(crate::field::rank(&f, &rows), 2);
        for v in &m {
            assert!(phi_mul(&f, &p, v, v).iter().all(|c| c.is_zero()));
        }
    }

    #[test]
    fn pfister_represents_squares_on_monomials() {
        let f = f2();
        let a = alg(&f, &[("1", "t"), ("t", "t^2+t+1")]);
        let p = phi(&a);
        for s in 0..p.dim() {
            let mut e = vec![f.zero(); p.dim()];
            e[s] = f.one();
            let sq = phi_mul(&f, &p, &e, &e);
            assert!(sq[1..].iter().all(|c| c.is_zero()));
            assert_eq!(form_value(&f, &pfister_invariant(&a), &e).unwrap(), sq[0]);
        }
    }

    #[test]
    fn isotropy_examples() {
        let f = f2();
        assert_eq!(isotropy_index(&f, &alg(&f, &[("1", "t")])), 0);
        assert_eq!(isotropy_index(&f, &alg(&f, &[("1", "t"), ("0", "t+1")])), 1);
        assert_eq!(isotropy_index(&f, &alg(&f, &[("t", "1")])), 1);
    }

    #[test]
    fn normalized_presentations() {
        let f = f2();
        let p = phi(&alg(&f, &[("0", "t"), ("0", "1")]));
        let n = normalize_phi_presentation(&f, &p, |_| true).unwrap();
        assert_eq!((n.field_part, n.radical), (vec![f.gen()], 1));
        let p = phi(&alg(&f, &[("0", "t"), ("0", "t")]));
        let n = normalize_phi_presentation(&f, &p, |_| true).unwrap();
        assert_eq!((n.field_part, n.radical), (vec![f.gen()], 1));
        let p = phi(&alg(&f, &[("0", "t")]));
        assert!(normalize_phi_presentation(&f, &p, |q| q.is_one()).is_err());
    }
}
