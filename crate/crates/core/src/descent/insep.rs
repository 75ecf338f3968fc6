//! Descent along K = F(sqrt t) = F_q(s). Here K^2 = F, so the Q-set of the
//! Pfister invariant is an F-subspace of K.

use super::cert::{insep_certificate, verify_certificate};
use super::{FactorWitness, Obstruction, Verdict, MAX_FACTORS};
use crate::biforms::{qset, subset_products};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::involution::{pfister_invariant, validate, TDInvolution};
use crate::quadext::InsepExt;
use crate::ratfun::RatFun;

/// The first subset of factors (as indices) whose slot product is not in F.
pub fn insep_violation(ext: &InsepExt, a: &TDInvolution<RatFun>) -> Option<(Vec<usize>, RatFun)> {
    let prods = subset_products(&ext.field(), &a.slots());
    prods.into_iter().enumerate().find(|(_, p)| ext.in_base(p).is_none()).map(|(mask, p)| {
        ((0..a.n()).filter(|i| mask >> i & 1 == 1).collect(), p)
    })
}

/// Every product of slots over a subset of factors lies in F.
pub fn insep_descent_test(ext: &InsepExt, a: &TDInvolution<RatFun>) -> bool {
    insep_violation(ext, a).is_none()
}

/// The Q-set of the Pfister invariant has a spanning set inside F. Since K^2 = F,
/// this holds iff its echelon basis lies in F.
pub fn insep_pfister_descent_test(ext: &InsepExt, a: &TDInvolution<RatFun>) -> bool {
    let kf = ext.field();
    qset(&kf, &pfister_invariant(a)).basis(&kf).iter().all(|z| ext.in_base(z).is_some())
}

/// Per factor, a = x + y s descends to (x + y^2 t, b).
pub fn insep_descent_construct(ext: &InsepExt, a: &TDInvolution<RatFun>) -> Result<Verdict> {
    let kf = ext.field();
    validate(&kf, a)?;
    if a.n() > MAX_FACTORS {
        return Err(Error::TooManyFactors(a.n(), MAX_FACTORS));
    }
    if let Some((subset, product)) = insep_violation(ext, a) {
        return Ok(Verdict::NoDescent {
            obstruction: Obstruction::InseparableSlot { subset, product: kf.render(&product) },
        });
    }
    let t = ext.base().gen();
    let mut descended = Vec::new();
    let mut witnesses = Vec::new();
    for (x, b) in &a.factors {
        let (x0, y) = ext.coordinates(x);
        let b0 = ext.in_base(b).expect("slots lie in F");
        descended.push((x0.add(&y.square().mul(&t)), b0));
        witnesses.push(if y.is_zero() {
            FactorWitness::Identity
        } else {
            FactorWitness::InsepWp { y: ext.base().render(&y) }
        });
    }
    let cert = insep_certificate(ext, a, &TDInvolution::new(descended), witnesses);
    verify_certificate(&cert)?;
    Ok(Verdict::Descends { certificate: Box::new(cert) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(ext: &InsepExt, factors: &[(&str, &str)]) -> TDInvolution<RatFun> {
        let kf = ext.field();
        TDInvolution::new(factors.iter().map(|(a, b)| (kf.parse(a).unwrap(), kf.parse(b).unwrap())).collect())
    }

    #[test]
    fn test_examples() {
        let ext = InsepExt::new(1);
        for (slots, expect) in [(("s^2", "s^4+1"), true), (("s", "s"), false), (("s", "s^3"), false)] {
            let a = alg(&ext, &[("1", slots.0), ("0", slots.1)]);
            assert_eq!(insep_descent_test(&ext, &a), expect);
            assert_eq!(insep_pfister_descent_test(&ext, &a), expect);
        }
        let a = alg(&ext, &[("1", "s"), ("0", "s^3")]);
        assert_eq!(insep_violation(&ext, &a).unwrap().0, vec![0]);
    }

    #[test]
    fn construct_examples() {
        let ext = InsepExt::new(1);
        let a = alg(&ext, &[("s^3+s", "s^2")]);
        let v = insep_descent_construct(&ext, &a).unwrap();
        let cert = v.certificate().unwrap();
        assert_eq!(cert.descended[0].a, "t^3+t");
        assert_eq!(cert.witnesses[0], FactorWitness::InsepWp { y: "t+1".into() });
        let a = alg(&ext, &[("s^2+1", "s^2")]);
        let cert = insep_descent_construct(&ext, &a).unwrap();
        assert_eq!(cert.certificate().unwrap().witnesses[0], FactorWitness::Identity);
        let a = alg(&ext, &[("1", "s")]);
        assert!(matches!(
            insep_descent_construct(&ext, &a).unwrap(),
            Verdict::NoDescent { obstruction: Obstruction::InseparableSlot { .. } }
        ));
    }
}
