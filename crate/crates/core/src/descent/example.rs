//! The F-algebra S with Phi = S x K, the square-class test for Alt lines, and
//! the algebra that satisfies the Pfister condition without descending.

use super::sep::sep_descent;
use super::Verdict;
use crate::biforms::{qset, PfisterForm};
use crate::error::{Error, Result};
use crate::field::{Field, RatField};
use crate::involution::{pfister_invariant, TDInvolution};
use crate::quadext::{KElem, SepExt};
use crate::ratfun::RatFun;
use serde::{Deserialize, Serialize};

/// For beta = p + q eta with q != 0: (p + q + q delta) / q.
pub(crate) fn square_class_residual(ext: &SepExt, beta: &KElem) -> Option<RatFun> {
    let (p, q) = (&beta.x, &beta.y);
    p.add(q).add(&q.mul(ext.delta())).div(q)
}

/// Some z with z^2 beta in F, if one exists.
pub fn square_class_meets_base(ext: &SepExt, beta: &KElem) -> Option<KElem> {
    if ext.is_zero(beta) {
        return None;
    }
    if beta.y.is_zero() {
        return Some(ext.one());
    }
    let rho = square_class_residual(ext, beta)?.sqrt()?;
    let z = KElem::new(rho, RatFun::one(ext.k()));
    assert!(ext.mul(&ext.square(&z), beta).y.is_zero(), "square-class witness failed");
    Some(z)
}

/// Square constants of S over F and whether S x K matches Phi.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiS {
    pub constants: Vec<RatFun>,
    pub descends: bool,
}

/// Writing each slot as beta_i + gamma_i eta, S has square constants gamma_i
/// and beta_i + gamma_i delta; valid iff the Q-sets over K agree.
pub fn phi_s_construct(ext: &SepExt, a: &TDInvolution<KElem>) -> PhiS {
    let gammas = a.factors.iter().map(|(_, b)| b.y.clone());
    let betas = a.factors.iter().map(|(_, b)| b.x.add(&b.y.mul(ext.delta())));
    let constants: Vec<RatFun> = gammas.chain(betas).collect();
    let embedded = PfisterForm::new(constants.iter().map(|c| ext.embed(c)).collect());
    let descends = qset(ext, &embedded) == qset(ext, &pfister_invariant(a));
    PhiS { constants, descends }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub lambda: String,
    pub delta: String,
    pub slot: String,
    pub cor_splits: bool,
    pub phi_descends: bool,
    pub s_constants: Vec<String>,
    pub square_class_witness: Option<String>,
    pub verdict: Verdict,
}

impl CounterexampleReport {
    pub fn descends(&self) -> bool {
        self.verdict.descends()
    }
}

/// The split algebra [0, lambda + delta + eta) over K = F(eta), eta^2 + eta = delta.
pub fn paper_counterexample(lambda: &RatFun, delta: &RatFun, height_bound: usize) -> Result<CounterexampleReport> {
    if lambda.sqrt().is_some() {
        return Err(Error::Precondition("lambda is a square in F".into()));
    }
    let f = RatField::new(lambda.k(), "t");
    let ext = SepExt::new(f.clone(), delta.clone())?;
    let slot = KElem::new(lambda.add(delta), f.one());
    let a = TDInvolution::new(vec![(ext.zero(), slot.clone())]);
    let cor_splits = crate::involution::brauer_class(&ext, &a).is_zero();
    let phi = phi_s_construct(&ext, &a);
    let verdict = sep_descent(&ext, &a, height_bound)?;
    Ok(CounterexampleReport {
        lambda: f.render(lambda),
        delta: f.render(delta),
        slot: ext.render(&slot),
        cor_splits,
        phi_descends: phi.descends,
        s_constants: phi.constants.iter().map(|c| f.render(c)).collect(),
        square_class_witness: square_class_meets_base(&ext, &slot).map(|z| ext.render(&z)),
        verdict,
    })
}
