//! Quaternion symbols [a, b): local invariants, splitting, same-slot
//! isomorphism and corestriction.

use crate::error::{Error, Result};
use crate::field::{Field, RatField};
use crate::par;
use crate::places::{is_in_wp_global, poles, support, wp_reduce_local, Completion, Place};
use crate::quadext::{KElem, PlaceAbove, PlaceId, SepExt};
use crate::ratfun::{enumerate_ratfun, RatFun};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// The places where a Brauer class has invariant 1. Addition is symmetric difference.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InvariantVector(pub BTreeSet<PlaceId>);

impl InvariantVector {
    pub fn zero() -> InvariantVector {
        InvariantVector::default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, o: &InvariantVector) -> InvariantVector {
        InvariantVector(self.0.symmetric_difference(&o.0).cloned().collect())
    }

    pub fn get(&self, p: &PlaceId) -> u8 {
        self.0.contains(p) as u8
    }

    pub fn render(&self, var: &str) -> Vec<String> {
        self.0.iter().map(|p| p.render(var)).collect()
    }
}

/// Fields over which quaternion symbols have computable local invariants.
pub trait SymbolField: Field {
    /// Places where [a, b) can have a nonzero invariant, in canonical order.
    fn candidate_places(&self, a: &Self::Elem, b: &Self::Elem) -> Vec<PlaceId>;
    fn local_invariant(&self, a: &Self::Elem, b: &Self::Elem, v: &PlaceId) -> u8;

    /// Invariants at all candidate places.
    fn local_invariants(&self, a: &Self::Elem, b: &Self::Elem) -> Vec<(PlaceId, u8)> {
        let places = self.candidate_places(a, b);
        let inv = par::map(&places, |v| self.local_invariant(a, b, v));
        places.into_iter().zip(inv).collect()
    }
}

impl SymbolField for RatField {
    fn candidate_places(&self, a: &RatFun, b: &RatFun) -> Vec<PlaceId> {
        let mut ps: Vec<Place> = poles(a).into_iter().chain(support(b)).collect();
        ps.push(Place::Infinity);
        ps.sort();
        ps.dedup();
        ps.into_iter().map(PlaceId::of_base).collect()
    }

    fn local_invariant(&self, a: &RatFun, b: &RatFun, v: &PlaceId) -> u8 {
        assert!(!b.is_zero(), "symbol slot must be nonzero");
        let red = wp_reduce_local(a, &v.base).reduced;
        let c = Completion::new(self.k, v.base.clone());
        c.field.abs_trace(&c.residue_a_dlog_b(&red, b))
    }
}

impl SepExt {
    fn base_candidates(&self, a: &KElem, b: &KElem) -> Vec<Place> {
        let mut ps: Vec<Place> = [&a.x, &a.y, self.delta(), &b.x, &b.y]
            .into_iter()
            .flat_map(poles)
            .chain(support(&self.norm(b)))
            .collect();
        ps.push(Place::Infinity);
        ps.sort();
        ps.dedup();
        ps
    }

    fn above(&self, id: &PlaceId) -> PlaceAbove {
        self.places_above(&id.base).into_iter().find(|p| p.id == *id).expect("place id above its base")
    }
}

impl SymbolField for SepExt {
    fn candidate_places(&self, a: &KElem, b: &KElem) -> Vec<PlaceId> {
        self.base_candidates(a, b).iter().flat_map(|v| self.places_above(v).into_iter().map(|p| p.id)).collect()
    }

    fn local_invariant(&self, a: &KElem, b: &KElem, v: &PlaceId) -> u8 {
        assert!(!self.is_zero(b), "symbol slot must be nonzero");
        self.above(v).local_invariant(a, b)
    }

    fn local_invariants(&self, a: &KElem, b: &KElem) -> Vec<(PlaceId, u8)> {
        assert!(!self.is_zero(b), "symbol slot must be nonzero");
        let places: Vec<PlaceAbove> =
            self.base_candidates(a, b).iter().flat_map(|v| self.places_above(v)).collect();
        let inv = par::map(&places, |p| p.local_invariant(a, b));
        places.into_iter().map(|p| p.id).zip(inv).collect()
    }
}

/// Invariant vector of [a, b). Asserts reciprocity.
pub fn invariant_vector<E: SymbolField>(field: &E, a: &E::Elem, b: &E::Elem) -> InvariantVector {
    if field.is_zero(a) {
        return InvariantVector::zero();
    }
    let out = InvariantVector(
        field.local_invariants(a, b).into_iter().filter(|(_, i)| *i == 1).map(|(p, _)| p).collect(),
    );
    assert!(out.0.len() % 2 == 0, "reciprocity violated for a symbol");
    out
}

/// Sum of the invariant vectors of a list of symbols.
pub fn class_vector<E: SymbolField>(field: &E, symbols: &[(E::Elem, E::Elem)]) -> InvariantVector {
    symbols.iter().fold(InvariantVector::zero(), |acc, (a, b)| acc.add(&invariant_vector(field, a, b)))
}

pub fn is_split<E: SymbolField>(field: &E, a: &E::Elem, b: &E::Elem) -> bool {
    invariant_vector(field, a, b).is_zero()
}

/// Whether [a, b) and [c, b) are isomorphic.
pub fn is_isomorphic_same_slot<E: SymbolField>(field: &E, a: &E::Elem, c: &E::Elem, b: &E::Elem) -> bool {
    if field.sqrt(b).is_some() {
        return true;
    }
    is_split(field, &field.add(a, c), b)
}

/// [T(a), b)_F, the corestriction of [a, b)_K for b in F.
pub fn cor_symbol(ext: &SepExt, a: &KElem, b: &KElem) -> Result<(RatFun, RatFun)> {
    let bf = b.in_base().ok_or_else(|| Error::SlotOutsideBase(ext.render(b)))?;
    Ok((ext.trace(a), bf.clone()))
}

/// Invariant vector over F of the corestriction of a list of symbols over K.
pub fn cor_class(ext: &SepExt, symbols: &[(KElem, KElem)]) -> Result<InvariantVector> {
    let cors = symbols.iter().map(|(a, b)| cor_symbol(ext, a, b)).collect::<Result<Vec<_>>>()?;
    Ok(class_vector(ext.base(), &cors))
}

/// Finds d, e with lambda = d^2 + d + e^2 b, searching e by height.
pub fn solve_wp_quadratic(lambda: &RatFun, b: &RatFun, height_bound: usize) -> Option<(RatFun, RatFun)> {
    let es: Vec<RatFun> = enumerate_ratfun(lambda.k(), height_bound).collect();
    let found = par::find_map_first(&es, |e| {
        is_in_wp_global(&lambda.add(&e.square().mul(b))).witness.map(|d| (d, e.clone()))
    });
    if let Some((d, e)) = &found {
        debug_assert_eq!(d.wp().add(&e.square().mul(b)), *lambda);
    }
    found
}

/// Some a with invariant_vector([a, b)) = target: the zero class, then the
/// given candidates, then all elements up to the height bound.
pub fn find_symbol_with_slot<E: SymbolField>(
    field: &E,
    target: &InvariantVector,
    b: &E::Elem,
    candidates: &[E::Elem],
    height_bound: usize,
) -> Option<E::Elem> {
    if target.is_zero() {
        return Some(field.zero());
    }
    let hit = |a: &E::Elem| (invariant_vector(field, a, b) == *target).then(|| a.clone());
    if let Some(a) = candidates.iter().find_map(hit) {
        return Some(a);
    }
    par::find_map_first(&field.enumerate(height_bound), hit)
}
