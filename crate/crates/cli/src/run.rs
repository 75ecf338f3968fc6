//! Verb dispatch. Every verb yields a JSON report and an exit code:
//! 0 = descends / yes, 1 = no, 2 = unknown.

use crate::error::CliError;
use crate::scenario::{Kind, Scenario, Verb};
use descent_core::biforms::{arason_index, pfister_isometric, qset, PfisterForm, Tri};
use descent_core::brauer::{class_vector, cor_class, cor_symbol, invariant_vector, SymbolField};
use descent_core::descent::{
    insep_descent_construct, paper_counterexample, sep_descent, verify_certificate, DescentCertificate, Verdict,
    SCHEMA,
};
use descent_core::field::Field;
use descent_core::involution::{maximal_ideal_basis, monomial_squares, phi, phi_is_field, pfister_invariant};
use descent_core::involution::TDInvolution;
use descent_core::quadext::{InsepExt, SepExt};
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug)]
pub struct Flags {
    pub height_bound: usize,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub body: Value,
    pub exit: i32,
    pub certificate: Option<DescentCertificate>,
}

impl Report {
    fn new(verb: &str, fields: Value, exit: i32) -> Report {
        let mut body = Map::new();
        body.insert("schema".into(), json!(SCHEMA));
        body.insert("verb".into(), json!(verb));
        if let Value::Object(m) = fields {
            body.extend(m);
        }
        Report { body: Value::Object(body), exit, certificate: None }
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            return serde_json::to_string_pretty(&self.body).expect("reports serialize") + "\n";
        }
        let mut out = String::new();
        for (k, v) in self.body.as_object().expect("reports are objects") {
            match v {
                Value::String(s) => out += &format!("{k}: {s}\n"),
                v => out += &format!("{k}: {v}\n"),
            }
        }
        out
    }
}

fn tri_exit(t: Tri) -> i32 {
    match t {
        Tri::Yes => 0,
        Tri::No => 1,
        Tri::Unknown => 2,
    }
}

fn check_flags(sc: &Scenario, allowed: &[&str]) -> Result<(), CliError> {
    let Some(c) = &sc.command else { return Ok(()) };
    match c.flags.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        Some((k, _)) => Err(CliError::Usage(format!("verb '{}' does not take --{k}", c.verb.name()))),
        None => Ok(()),
    }
}

fn elems<E: Field>(field: &E, items: &[&str]) -> Vec<E::Elem> {
    items.iter().map(|s| field.parse(s).expect("scenario elements are canonical")).collect()
}

fn symbols<E: Field>(field: &E, sc: &Scenario) -> Vec<(E::Elem, E::Elem)> {
    sc.quats()
        .into_iter()
        .map(|(a, b)| (field.parse(a).expect("canonical"), field.parse(b).expect("canonical")))
        .collect()
}

fn need_quats(sc: &Scenario, verb: Verb, at_least: usize) -> Result<(), CliError> {
    if sc.quats().len() < at_least {
        return Err(CliError::Usage(format!("verb '{}' needs at least {at_least} quat statement(s)", verb.name())));
    }
    Ok(())
}

fn place_var(sc: &Scenario) -> &'static str {
    match sc.kind {
        Kind::Insep => "s",
        _ => "t",
    }
}

fn symbol_record<E: SymbolField>(field: &E, a: &E::Elem, b: &E::Elem, var: &str) -> Value {
    let inv = invariant_vector(field, a, b);
    let support: Vec<String> = field.candidate_places(a, b).iter().map(|p| p.render(var)).collect();
    json!({
        "a": field.render(a),
        "b": field.render(b),
        "support": support,
        "invariants": inv.render(var),
        "split": inv.is_zero(),
    })
}

fn split<E: SymbolField>(field: &E, sc: &Scenario) -> Result<Report, CliError> {
    need_quats(sc, Verb::Split, 1)?;
    let syms = symbols(field, sc);
    let records: Vec<Value> = syms.iter().map(|(a, b)| symbol_record(field, a, b, place_var(sc))).collect();
    let all = records.iter().all(|r| r["split"] == json!(true));
    Ok(Report::new("split", json!({ "symbols": records, "split": all }), if all { 0 } else { 1 }))
}

fn iso<E: SymbolField>(field: &E, sc: &Scenario) -> Result<Report, CliError> {
    let syms = symbols(field, sc);
    if syms.len() != 2 {
        return Err(CliError::Usage("verb 'iso' needs exactly 2 quat statements".into()));
    }
    let var = place_var(sc);
    let mut support: Vec<String> = Vec::new();
    for (a, b) in &syms {
        support.extend(field.candidate_places(a, b).iter().map(|p| p.render(var)));
    }
    support.sort();
    support.dedup();
    let diff = class_vector(field, &syms);
    let same = diff.is_zero();
    let body = json!({ "support": support, "invariants": diff.render(var), "split": same, "isomorphic": same });
    Ok(Report::new("iso", body, if same { 0 } else { 1 }))
}

fn cor(ext: &SepExt, sc: &Scenario) -> Result<Report, CliError> {
    need_quats(sc, Verb::Cor, 1)?;
    let syms = symbols(ext, sc);
    let f = ext.base();
    let mut support: Vec<String> = Vec::new();
    let mut cors = Vec::new();
    for (a, b) in &syms {
        let (x, y) = cor_symbol(ext, a, b)?;
        support.extend(f.candidate_places(&x, &y).iter().map(|p| p.render("t")));
        cors.push(json!({ "a": f.render(&x), "b": f.render(&y) }));
    }
    support.sort();
    support.dedup();
    let class = cor_class(ext, &syms)?;
    let split = class.is_zero();
    let body = json!({ "symbols": cors, "support": support, "invariants": class.render("t"), "split": split });
    Ok(Report::new("cor", body, if split { 0 } else { 1 }))
}

/// The `pfister` statements, or the Pfister invariant of the algebra.
fn forms<E: Field>(field: &E, sc: &Scenario, verb: Verb) -> Result<Vec<PfisterForm<E::Elem>>, CliError> {
    let stated: Vec<PfisterForm<E::Elem>> = sc
        .pfisters()
        .into_iter()
        .map(|slots| PfisterForm::new(elems(field, &slots.iter().map(String::as_str).collect::<Vec<_>>())))
        .collect();
    if !stated.is_empty() {
        return Ok(stated);
    }
    need_quats(sc, verb, 1)?;
    Ok(vec![pfister_invariant(&TDInvolution::new(symbols(field, sc)))])
}

fn form_record<E: Field>(field: &E, form: &PfisterForm<E::Elem>) -> Value {
    let q = qset(field, form);
    let basis: Vec<String> = q.basis(field).iter().map(|x| field.render(x)).collect();
    let index = arason_index(field, form);
    json!({
        "slots": form.slots.iter().map(|x| field.render(x)).collect::<Vec<_>>(),
        "qset_basis": basis,
        "qset_dim": q.dim(),
        "index": index,
        "anisotropic": index == 0,
    })
}

fn pf<E: Field>(field: &E, sc: &Scenario) -> Result<Report, CliError> {
    let fs = forms(field, sc, Verb::Pf)?;
    let records: Vec<Value> = fs.iter().map(|f| form_record(field, f)).collect();
    match fs.as_slice() {
        [b, c] => {
            let t = pfister_isometric(field, b, c);
            Ok(Report::new("pf", json!({ "forms": records, "isometric": t }), tri_exit(t)))
        }
        _ => Ok(Report::new("pf", json!({ "forms": records }), 0)),
    }
}

fn iwitt<E: Field>(field: &E, sc: &Scenario) -> Result<Report, CliError> {
    let fs = forms(field, sc, Verb::Iwitt)?;
    let records: Vec<Value> = fs
        .iter()
        .map(|f| {
            let index = arason_index(field, f);
            json!({
                "slots": f.slots.iter().map(|x| field.render(x)).collect::<Vec<_>>(),
                "index": index,
                "isotropic": index > 0,
            })
        })
        .collect();
    Ok(Report::new("iwitt", json!({ "forms": records }), 0))
}

fn phi_report<E: Field>(field: &E, sc: &Scenario) -> Result<Report, CliError> {
    need_quats(sc, Verb::Phi, 1)?;
    let p = phi(&TDInvolution::new(symbols(field, sc)));
    let render = |v: &[E::Elem]| v.iter().map(|x| field.render(x)).collect::<Vec<_>>();
    let body = json!({
        "constants": render(&p.constants),
        "dim": p.dim(),
        "monomial_squares": render(&monomial_squares(field, &p)),
        "is_field": phi_is_field(field, &p),
        "radical_dim": maximal_ideal_basis(field, &p).len(),
    });
    Ok(Report::new("phi", body, 0))
}

fn verdict_report(verdict: Verdict) -> Report {
    let exit = verdict.exit_code();
    let certificate = verdict.certificate().cloned();
    let mut r = Report::new("descend", json!({ "verdict": verdict }), exit);
    r.certificate = certificate;
    r
}

fn descend(sc: &Scenario, flags: Flags) -> Result<Report, CliError> {
    need_quats(sc, Verb::Descend, 1)?;
    match &sc.kind {
        Kind::Sep { .. } => {
            let ext = sc.sep_ext().expect("validated by the parser");
            let a = TDInvolution::new(symbols(&ext, sc));
            Ok(verdict_report(sep_descent(&ext, &a, flags.height_bound)?))
        }
        Kind::Insep => {
            let ext = InsepExt::new(sc.k());
            let a = TDInvolution::new(symbols(&ext.field(), sc));
            Ok(verdict_report(insep_descent_construct(&ext, &a)?))
        }
        Kind::Base => Err(CliError::Usage("descend needs a 'sep' or 'insep' field header".into())),
    }
}

fn paper_example(sc: &Scenario, flags: Flags) -> Result<Report, CliError> {
    let f = sc.base();
    let c = sc.command.as_ref().expect("dispatched on a command");
    let parse = |name: &str, s: &str| {
        f.parse(s).map_err(|e| CliError::Usage(format!("--{name}: {e}")))
    };
    let lambda = parse("lambda", c.flag("lambda").ok_or_else(|| CliError::Usage("paper-example needs --lambda".into()))?)?;
    let delta = match (c.flag("delta"), &sc.kind) {
        (Some(d), _) => parse("delta", d)?,
        (None, Kind::Sep { delta }) => f.parse(delta).expect("canonical"),
        (None, _) => return Err(CliError::Usage("paper-example needs --delta or a 'sep' header".into())),
    };
    let report = paper_counterexample(&lambda, &delta, flags.height_bound)?;
    let exit = report.verdict.exit_code();
    Ok(Report::new("paper-example", json!({ "report": report }), exit))
}

pub fn run(sc: &Scenario, flags: Flags) -> Result<Report, CliError> {
    let Some(cmd) = &sc.command else {
        return Err(CliError::Usage("the scenario has no command line".into()));
    };
    let verb = cmd.verb;
    check_flags(sc, if verb == Verb::PaperExample { &["lambda", "delta"] } else { &[] })?;
    let base = || sc.base();
    let insep = || InsepExt::new(sc.k()).field();
    match verb {
        Verb::Descend => descend(sc, flags),
        Verb::PaperExample => paper_example(sc, flags),
        Verb::Cor => match sc.sep_ext() {
            Some(ext) => cor(&ext, sc),
            None => Err(CliError::Usage("cor needs a 'sep' field header".into())),
        },
        _ => match &sc.kind {
            Kind::Base => dispatch(&base(), sc, verb),
            Kind::Sep { .. } => dispatch(&sc.sep_ext().expect("validated"), sc, verb),
            Kind::Insep => dispatch(&insep(), sc, verb),
        },
    }
}

fn dispatch<E: SymbolField>(field: &E, sc: &Scenario, verb: Verb) -> Result<Report, CliError> {
    match verb {
        Verb::Split => split(field, sc),
        Verb::Iso => iso(field, sc),
        Verb::Pf => pf(field, sc),
        Verb::Iwitt => iwitt(field, sc),
        Verb::Phi => phi_report(field, sc),
        _ => unreachable!("handled by run"),
    }
}

/// Accepts a bare certificate or any report embedding one.
pub fn extract_certificate(text: &str) -> Result<DescentCertificate, CliError> {
    let v: Value = serde_json::from_str(text)?;
    let found = [&v, &v["verdict"]["certificate"], &v["certificate"], &v["report"]["verdict"]["certificate"]]
        .into_iter()
        .find(|c| c.get("extension").is_some())
        .ok_or_else(|| CliError::Json("no certificate found".into()))?;
    Ok(serde_json::from_value(found.clone())?)
}

pub fn verify(cert: &DescentCertificate) -> Report {
    match verify_certificate(cert) {
        Ok(()) => Report::new("verify-cert", json!({ "verified": true }), 0),
        Err(e) => Report::new("verify-cert", json!({ "verified": false, "reason": e.to_string() }), 1),
    }
}

