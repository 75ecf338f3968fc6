//! Descent along a separable K = F(eta).

use super::cert::{sep_certificate, verify_certificate};
use super::example::{square_class_meets_base, square_class_residual};
use super::{FactorWitness, Obstruction, Verdict, MAX_FACTORS};
use crate::biforms::{pfister_isometric, PfisterForm, Tri};
use crate::brauer::{cor_class, invariant_vector, solve_wp_quadratic};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::involution::{brauer_class, pfister_invariant, validate, TDInvolution};
use crate::par;
use crate::quadext::{KElem, SepExt};
use crate::ratfun::RatFun;

/// d/dt extended to K: eta' = delta'.
pub fn k_derivative(ext: &SepExt, z: &KElem) -> KElem {
    KElem::new(z.x.derivative().add(&z.y.mul(&ext.delta().derivative())), z.y.derivative())
}

/// x with [x, c) = [a, b), from a db/b = x dc/c. None if c is a square in K.
pub fn slot_convert(ext: &SepExt, a: &KElem, b: &KElem, c: &KElem) -> Option<KElem> {
    let dc = k_derivative(ext, c);
    if ext.is_zero(&dc) {
        return None;
    }
    let num = ext.mul(&ext.mul(a, &k_derivative(ext, b)), c);
    ext.div(&num, &ext.mul(b, &dc))
}

enum FactorOutcome {
    Found(RatFun, FactorWitness),
    Obstructed(Obstruction),
    Exhausted,
}

fn descend_factor(ext: &SepExt, a: &KElem, b: &RatFun, height_bound: usize) -> FactorOutcome {
    let f = ext.base();
    if b.sqrt().is_some() {
        return FactorOutcome::Found(f.zero(), FactorWitness::SplitSlot);
    }
    if a.y.is_zero() {
        return FactorOutcome::Found(a.x.clone(), FactorWitness::Identity);
    }
    let cor = invariant_vector(f, &a.y, b);
    if !cor.is_zero() {
        return FactorOutcome::Obstructed(Obstruction::CorNonsplit { invariants: cor.render("t") });
    }
    match solve_wp_quadratic(&a.y, b, height_bound) {
        Some((d, e)) => {
            let c = a.x.add(&d.square().add(&e.square().mul(b)).mul(ext.delta()));
            FactorOutcome::Found(c, FactorWitness::WpQuadratic { d: f.render(&d), e: f.render(&e) })
        }
        None => FactorOutcome::Exhausted,
    }
}

fn unknown(stage: &str, bound: usize) -> Verdict {
    Verdict::Unknown { stage: stage.into(), bound }
}

fn finish(
    ext: &SepExt,
    algebra: &TDInvolution<KElem>,
    presentation: &TDInvolution<KElem>,
    descended: Vec<(RatFun, RatFun)>,
    witnesses: Vec<FactorWitness>,
) -> Result<Verdict> {
    let cert = sep_certificate(ext, algebra, presentation, &TDInvolution::new(descended), witnesses);
    verify_certificate(&cert)?;
    Ok(Verdict::Descends { certificate: Box::new(cert) })
}

/// Descent of the single factor [a, b) with b in F.
pub fn quat_sep_descent(ext: &SepExt, a: &KElem, b: &RatFun, height_bound: usize) -> Result<Verdict> {
    if b.is_zero() {
        return Err(Error::ZeroSlot);
    }
    let alg = TDInvolution::new(vec![(a.clone(), ext.embed(b))]);
    match descend_factor(ext, a, b, height_bound) {
        FactorOutcome::Found(c, w) => finish(ext, &alg, &alg, vec![(c, b.clone())], vec![w]),
        FactorOutcome::Obstructed(obstruction) => Ok(Verdict::NoDescent { obstruction }),
        FactorOutcome::Exhausted => Ok(unknown("quaternion witness", height_bound)),
    }
}

fn slots_in_base(a: &TDInvolution<KElem>) -> Option<Vec<RatFun>> {
    a.factors.iter().map(|(_, b)| b.in_base().cloned()).collect()
}

/// An isomorphic presentation with slots in F: slots whose square class meets F
/// are rescaled, the others are replaced from `candidates` and their
/// a-parameters moved onto a non-square slot.
pub fn reslot(ext: &SepExt, a: &TDInvolution<KElem>, candidates: &[RatFun]) -> Option<TDInvolution<KElem>> {
    let mut factors = a.factors.clone();
    let mut pending = Vec::new();
    for (i, (_, b)) in a.factors.iter().enumerate() {
        if b.in_base().is_some() {
            continue;
        }
        match square_class_meets_base(ext, b) {
            Some(z) => factors[i].1 = ext.mul(&ext.square(&z), b),
            None => pending.push(i),
        }
    }
    if pending.is_empty() {
        return Some(TDInvolution::new(factors));
    }
    let target_pf = pfister_invariant(a);
    let target = brauer_class(ext, a);
    let one = ext.base().one();
    for cand in candidates.iter().filter(|c| !c.is_zero()) {
        let mut trial = factors.clone();
        for (j, &i) in pending.iter().enumerate() {
            trial[i] = (ext.zero(), ext.embed(if j == 0 { cand } else { &one }));
        }
        let pf = PfisterForm::new(trial.iter().map(|(_, b)| b.clone()).collect());
        if pfister_isometric(ext, &pf, &target_pf) != Tri::Yes {
            continue;
        }
        let Some(m) = trial.iter().position(|(_, b)| b.x.sqrt().is_none()) else {
            continue;
        };
        let anchor = trial[m].1.clone();
        let moved = pending.iter().map(|&i| slot_convert(ext, &a.factors[i].0, &a.factors[i].1, &anchor));
        let moved: Option<Vec<KElem>> = moved.collect();
        let Some(moved) = moved else {
            continue;
        };
        trial[m].0 = moved.iter().fold(trial[m].0.clone(), |acc, x| ext.add(&acc, x));
        let out = TDInvolution::new(trial);
        if brauer_class(ext, &out) == target {
            return Some(out);
        }
    }
    None
}

fn default_candidates(ext: &SepExt) -> Vec<RatFun> {
    ext.base().enumerate(1)
}

/// Decides descent of A over K to F: a certified descent, a certified
/// obstruction, or an exhausted bounded search.
pub fn sep_descent(ext: &SepExt, a: &TDInvolution<KElem>, height_bound: usize) -> Result<Verdict> {
    validate(ext, a)?;
    if a.n() > MAX_FACTORS {
        return Err(Error::TooManyFactors(a.n(), MAX_FACTORS));
    }
    let pres = if slots_in_base(a).is_some() {
        a.clone()
    } else {
        match reslot(ext, a, &default_candidates(ext)) {
            Some(p) => p,
            None if a.n() == 1 => {
                let b = &a.factors[0].1;
                return Ok(match square_class_residual(ext, b) {
                    Some(r) if r.sqrt().is_none() => Verdict::NoDescent {
                        obstruction: Obstruction::SquareClass { slot: ext.render(b), residual: ext.base().render(&r) },
                    },
                    _ => unknown("reslot", height_bound),
                });
            }
            None => return Ok(unknown("reslot", height_bound)),
        }
    };
    let slots = slots_in_base(&pres).expect("presentation slots lie in F");
    let cor = cor_class(ext, &pres.factors)?;
    if !cor.is_zero() {
        return Ok(Verdict::NoDescent { obstruction: Obstruction::CorNonsplit { invariants: cor.render("t") } });
    }
    let idx: Vec<usize> = (0..pres.n()).collect();
    let outcomes = par::map(&idx, |&i| descend_factor(ext, &pres.factors[i].0, &slots[i], height_bound));
    let mut descended = Vec::new();
    let mut witnesses = Vec::new();
    for (i, o) in outcomes.iter().enumerate() {
        let (c, w) = match o {
            FactorOutcome::Found(c, w) => (c.clone(), w.clone()),
            _ => (ext.base().zero(), FactorWitness::Global),
        };
        descended.push((c, slots[i].clone()));
        witnesses.push(w);
    }
    if outcomes.iter().all(|o| matches!(o, FactorOutcome::Found(..))) {
        return finish(ext, a, &pres, descended, witnesses);
    }
    if pres.n() == 1 {
        return Ok(match outcomes.into_iter().next() {
            Some(FactorOutcome::Obstructed(obstruction)) => Verdict::NoDescent { obstruction },
            _ => unknown("quaternion witness", height_bound),
        });
    }
    let m = (0..pres.n()).rev().find(|&i| slots[i].sqrt().is_none()).expect("some slot is not a square");
    let anchor = &pres.factors[m].1;
    let mut x = pres.factors[m].0.clone();
    for i in (0..pres.n()).filter(|&i| i != m) {
        let rest = ext.add(&pres.factors[i].0, &ext.embed(&descended[i].0));
        let moved = slot_convert(ext, &rest, &pres.factors[i].1, anchor).expect("anchor slot is not a square");
        x = ext.add(&x, &moved);
    }
    match descend_factor(ext, &x, &slots[m], height_bound) {
        FactorOutcome::Found(c, w) => {
            descended[m].0 = c;
            witnesses[m] = if x == pres.factors[m].0 { w } else { FactorWitness::Global };
            finish(ext, a, &pres, descended, witnesses)
        }
        FactorOutcome::Obstructed(_) => Err(Error::Precondition("corestriction of the residual factor is not split".into())),
        FactorOutcome::Exhausted => Ok(unknown("last factor witness", height_bound)),
    }
}
