use crate::biforms::{pfister_isometric, Tri};
use crate::brauer::{is_isomorphic_same_slot, SymbolField};
use crate::error::{Error, Result};
use crate::field::{Field, RatField};
use crate::involution::{base_change_insep, base_change_sep, brauer_class, pfister_invariant, TDInvolution};
use crate::par;
use crate::quadext::{InsepExt, KElem, SepExt};
use crate::ratfun::RatFun;
use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExtensionSpec {
    Separable { delta: String },
    Inseparable,
}

/// One quaternion factor [a, b) in the string grammar.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertAlgebra {
    pub a: String,
    pub b: String,
}

/// How a descended factor (c, b) relates to its factor (a, b) over K.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FactorWitness {
    /// a = c already lies in F.
    Identity,
    /// b is a square in F, so both factors are split.
    SplitSlot,
    /// a = beta + lambda eta with lambda = d^2 + d + e^2 b and c = beta + d^2 delta + e^2 delta b.
    WpQuadratic { d: String, e: String },
    /// a + c = wp(y sqrt t) with y in F.
    InsepWp { y: String },
    /// Only the whole algebra is matched, through its invariant vector.
    Global,
}

/// Everything needed to re-check a descent without repeating the search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentCertificate {
    pub schema: u32,
    pub q: u32,
    pub extension: ExtensionSpec,
    /// The input algebra over K.
    pub algebra: Vec<CertAlgebra>,
    /// An isomorphic presentation over K whose slots lie in F.
    pub presentation: Vec<CertAlgebra>,
    /// The descended algebra over F.
    pub descended: Vec<CertAlgebra>,
    pub witnesses: Vec<FactorWitness>,
    /// Invariant vector of the input algebra over K.
    pub invariants: Vec<String>,
    /// Descended factor i has the slot of presentation factor slot_pairing[i].
    pub slot_pairing: Vec<usize>,
}

pub(crate) fn render_alg<E: Field>(field: &E, a: &TDInvolution<E::Elem>) -> Vec<CertAlgebra> {
    a.factors.iter().map(|(x, b)| CertAlgebra { a: field.render(x), b: field.render(b) }).collect()
}

fn parse_alg<E: Field>(field: &E, a: &[CertAlgebra]) -> Result<TDInvolution<E::Elem>> {
    Ok(TDInvolution::new(
        a.iter().map(|f| Ok((field.parse(&f.a)?, field.parse(&f.b)?))).collect::<Result<Vec<_>>>()?,
    ))
}

fn reject<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Certificate(msg.into()))
}

pub(crate) fn k_of_q(q: u32) -> Result<u8> {
    if q.is_power_of_two() && (2..=256).contains(&q) {
        Ok(q.trailing_zeros() as u8)
    } else {
        Err(Error::Precondition(format!("q = {q} is not a power of 2 between 2 and 256")))
    }
}

pub(crate) fn sep_certificate(
    ext: &SepExt,
    algebra: &TDInvolution<KElem>,
    presentation: &TDInvolution<KElem>,
    descended: &TDInvolution<RatFun>,
    witnesses: Vec<FactorWitness>,
) -> DescentCertificate {
    DescentCertificate {
        schema: SCHEMA,
        q: 1 << ext.k(),
        extension: ExtensionSpec::Separable { delta: ext.base().render(ext.delta()) },
        algebra: render_alg(ext, algebra),
        presentation: render_alg(ext, presentation),
        descended: render_alg(ext.base(), descended),
        witnesses,
        invariants: brauer_class(ext, algebra).render("t"),
        slot_pairing: (0..descended.n()).collect(),
    }
}

pub(crate) fn insep_certificate(
    ext: &InsepExt,
    algebra: &TDInvolution<RatFun>,
    descended: &TDInvolution<RatFun>,
    witnesses: Vec<FactorWitness>,
) -> DescentCertificate {
    let kf = ext.field();
    DescentCertificate {
        schema: SCHEMA,
        q: 1 << ext.k(),
        extension: ExtensionSpec::Inseparable,
        algebra: render_alg(&kf, algebra),
        presentation: render_alg(&kf, algebra),
        descended: render_alg(&ext.base(), descended),
        witnesses,
        invariants: brauer_class(&kf, algebra).render("s"),
        slot_pairing: (0..descended.n()).collect(),
    }
}

/// Shared checks over K: slot pairing, Pfister isometry and invariant vectors.
fn verify_common<E: SymbolField>(
    kf: &E,
    var: &str,
    cert: &DescentCertificate,
    a: &TDInvolution<E::Elem>,
    p: &TDInvolution<E::Elem>,
    bk: &TDInvolution<E::Elem>,
) -> Result<()> {
    let n = a.n();
    if p.n() != n || bk.n() != n || cert.witnesses.len() != n || cert.slot_pairing.len() != n {
        return reject("factor counts differ");
    }
    let mut seen = vec![false; n];
    for &j in &cert.slot_pairing {
        if j >= n || std::mem::replace(&mut seen[j], true) {
            return reject("slot pairing is not a permutation");
        }
    }
    for (i, &j) in cert.slot_pairing.iter().enumerate() {
        if bk.factors[i].1 != p.factors[j].1 {
            return reject(format!("slot of descended factor {i} differs from presentation slot {j}"));
        }
    }
    if pfister_isometric(kf, &pfister_invariant(p), &pfister_invariant(a)) != Tri::Yes {
        return reject("Pfister invariants of presentation and algebra differ");
    }
    let va = brauer_class(kf, a);
    if va.render(var) != cert.invariants {
        return reject("recorded invariant vector does not match the algebra");
    }
    if brauer_class(kf, p) != va {
        return reject("presentation has a different Brauer class");
    }
    if brauer_class(kf, bk) != va {
        return reject("base change of the descended algebra has a different Brauer class");
    }
    Ok(())
}

fn verify_sep(cert: &DescentCertificate, k: u8, delta: &str) -> Result<()> {
    let f = RatField::new(k, "t");
    let ext = SepExt::new(f.clone(), f.parse(delta)?)?;
    let a = parse_alg(&ext, &cert.algebra)?;
    let p = parse_alg(&ext, &cert.presentation)?;
    let b = parse_alg(&f, &cert.descended)?;
    let bk = base_change_sep(&ext, &b);
    verify_common(&ext, "t", cert, &a, &p, &bk)?;
    let checks = par::map(&(0..b.n()).collect::<Vec<_>>(), |&i| {
        let (c, slot) = &b.factors[i];
        let pa = &p.factors[cert.slot_pairing[i]].0;
        match &cert.witnesses[i] {
            FactorWitness::Identity => {
                if pa.in_base() != Some(c) {
                    return reject(format!("factor {i}: a-parameter is not the descended one"));
                }
            }
            FactorWitness::SplitSlot => {
                if f.sqrt(slot).is_none() {
                    return reject(format!("factor {i}: slot is not a square"));
                }
            }
            FactorWitness::WpQuadratic { d, e } => {
                let (d, e) = (f.parse(d)?, f.parse(e)?);
                let e2b = e.square().mul(slot);
                if d.wp().add(&e2b) != pa.y {
                    return reject(format!("factor {i}: d, e do not solve the trace equation"));
                }
                let expect = pa.x.add(&d.square().add(&e2b).mul(ext.delta()));
                if expect != *c {
                    return reject(format!("factor {i}: descended parameter does not match d, e"));
                }
                if !is_isomorphic_same_slot(&ext, pa, &ext.embed(c), &ext.embed(slot)) {
                    return reject(format!("factor {i}: factors are not isomorphic"));
                }
            }
            FactorWitness::Global => {}
            FactorWitness::InsepWp { .. } => return reject("inseparable witness in a separable certificate"),
        }
        Ok(())
    });
    checks.into_iter().collect()
}

fn verify_insep(cert: &DescentCertificate, k: u8) -> Result<()> {
    let ext = InsepExt::new(k);
    let (kf, f) = (ext.field(), ext.base());
    let a = parse_alg(&kf, &cert.algebra)?;
    let p = parse_alg(&kf, &cert.presentation)?;
    let b = parse_alg(&f, &cert.descended)?;
    let bk = base_change_insep(&ext, &b);
    verify_common(&kf, "s", cert, &a, &p, &bk)?;
    let checks = par::map(&(0..b.n()).collect::<Vec<_>>(), |&i| {
        let (c, slot) = &b.factors[i];
        let pa = &p.factors[cert.slot_pairing[i]].0;
        let ck = ext.embed(c);
        match &cert.witnesses[i] {
            FactorWitness::Identity => {
                if *pa != ck {
                    return reject(format!("factor {i}: a-parameter is not the descended one"));
                }
            }
            FactorWitness::InsepWp { y } => {
                let ys = ext.embed(&f.parse(y)?).mul(&kf.gen());
                if pa.add(&ck) != ys.wp() {
                    return reject(format!("factor {i}: a + c is not wp(y s)"));
                }
            }
            FactorWitness::SplitSlot => {
                if f.sqrt(slot).is_none() {
                    return reject(format!("factor {i}: slot is not a square"));
                }
            }
            FactorWitness::Global => {}
            FactorWitness::WpQuadratic { .. } => return reject("separable witness in an inseparable certificate"),
        }
        if !is_isomorphic_same_slot(&kf, pa, &ck, &ext.embed(slot)) {
            return reject(format!("factor {i}: factors are not isomorphic"));
        }
        Ok(())
    });
    checks.into_iter().collect()
}

/// Re-checks a certificate from its contents alone.
pub fn verify_certificate(cert: &DescentCertificate) -> Result<()> {
    if cert.schema != SCHEMA {
        return reject(format!("unsupported schema {}", cert.schema));
    }
    if cert.algebra.is_empty() {
        return reject("empty algebra");
    }
    let k = k_of_q(cert.q)?;
    match &cert.extension {
        ExtensionSpec::Separable { delta } => verify_sep(cert, k, delta),
        ExtensionSpec::Inseparable => verify_insep(cert, k),
    }
}
