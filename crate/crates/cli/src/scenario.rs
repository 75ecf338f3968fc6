//! Scenario files:
//!
//! ```text
//! field q=<2^k> [sep delta=<rf> | insep]
//! quat a=<elem> b=<elem>
//! pfister <elem>, <elem>, ...
//! descend|split|iso|cor|pf|iwitt|phi|paper-example [--flag value ...]
//! ```
//!
//! `#` starts a comment. Elements are written in t (and eta for sep), or in s
//! for insep, where t = s^2.

use crate::error::CliError;
use descent_core::field::{Field, RatField};
use descent_core::quadext::{InsepExt, SepExt};
use descent_core::Error;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kind {
    Base,
    Sep { delta: String },
    Insep,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    Quat { a: String, b: String },
    Pfister(Vec<String>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verb {
    Descend,
    Split,
    Iso,
    Cor,
    Pf,
    Iwitt,
    Phi,
    PaperExample,
}

impl Verb {
    const ALL: [(Verb, &'static str); 8] = [
        (Verb::Descend, "descend"),
        (Verb::Split, "split"),
        (Verb::Iso, "iso"),
        (Verb::Cor, "cor"),
        (Verb::Pf, "pf"),
        (Verb::Iwitt, "iwitt"),
        (Verb::Phi, "phi"),
        (Verb::PaperExample, "paper-example"),
    ];

    pub fn name(self) -> &'static str {
        Verb::ALL.iter().find(|(v, _)| *v == self).map(|(_, n)| *n).unwrap()
    }

    fn from_name(s: &str) -> Option<Verb> {
        Verb::ALL.iter().find(|(_, n)| *n == s).map(|(v, _)| *v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Command {
    pub verb: Verb,
    pub flags: Vec<(String, String)>,
}

impl Command {
    pub fn flag(&self, name: &str) -> Option<&str> {
        self.flags.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub q: u32,
    pub kind: Kind,
    pub statements: Vec<Statement>,
    pub command: Option<Command>,
}

impl Scenario {
    pub fn k(&self) -> u8 {
        self.q.trailing_zeros() as u8
    }

    pub fn base(&self) -> RatField {
        RatField::new(self.k(), "t")
    }

    pub fn sep_ext(&self) -> Option<SepExt> {
        match &self.kind {
            Kind::Sep { delta } => {
                let f = self.base();
                Some(SepExt::new(f.clone(), f.parse(delta).ok()?).ok()?)
            }
            _ => None,
        }
    }

    pub fn quats(&self) -> Vec<(&str, &str)> {
        self.statements
            .iter()
            .filter_map(|s| match s {
                Statement::Quat { a, b } => Some((a.as_str(), b.as_str())),
                _ => None,
            })
            .collect()
    }

    pub fn pfisters(&self) -> Vec<&[String]> {
        self.statements
            .iter()
            .filter_map(|s| match s {
                Statement::Pfister(v) => Some(v.as_slice()),
                _ => None,
            })
            .collect()
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Base => writeln!(f, "field q={}", self.q)?,
            Kind::Sep { delta } => writeln!(f, "field q={} sep delta={delta}", self.q)?,
            Kind::Insep => writeln!(f, "field q={} insep", self.q)?,
        }
        for s in &self.statements {
            match s {
                Statement::Quat { a, b } => writeln!(f, "quat a={a} b={b}")?,
                Statement::Pfister(v) => writeln!(f, "pfister {}", v.join(", "))?,
            }
        }
        if let Some(c) = &self.command {
            write!(f, "{}", c.verb.name())?;
            for (k, v) in &c.flags {
                write!(f, " --{k} {v}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> CliError {
    CliError::Syntax { line, column, message: message.into() }
}

fn semantic(line: usize, message: impl Into<String>) -> CliError {
    CliError::Semantic { line, message: message.into() }
}

/// Canonicalizes an element; `col` is the 1-based column where it starts.
struct ElemParser {
    parse: Box<dyn Fn(&str) -> Result<(String, bool), Error>>,
}

impl ElemParser {
    fn new<E: Field + 'static>(field: E) -> ElemParser {
        ElemParser {
            parse: Box::new(move |s| {
                let x = field.parse(s)?;
                Ok((field.render(&x), field.is_zero(&x)))
            }),
        }
    }

    fn elem(&self, raw: &str, line: usize, col: usize) -> Result<(String, bool), CliError> {
        let lead = raw.len() - raw.trim_start().len();
        let text = raw.trim();
        if text.is_empty() {
            return Err(syntax(line, col, "expected an element"));
        }
        (self.parse)(text).map_err(|e| match e {
            Error::Parse { column, message } => syntax(line, col + lead + column - 1, message),
            e => semantic(line, e.to_string()),
        })
    }

    fn nonzero(&self, raw: &str, line: usize, col: usize) -> Result<String, CliError> {
        let (s, zero) = self.elem(raw, line, col)?;
        if zero {
            return Err(semantic(line, "zero slot"));
        }
        Ok(s)
    }
}

fn is_key_char(c: u8) -> bool {
    c.is_ascii_lowercase() || c == b'_'
}

/// Splits `key=value key=value ...` starting at byte offset `start`; values run
/// to the next key. Returns (key, value, 1-based value column).
fn key_values(line: &str, start: usize, lineno: usize) -> Result<Vec<(String, String, usize)>, CliError> {
    let bytes = line.as_bytes();
    let mut keys = Vec::new();
    let mut i = start;
    while let Some(off) = line[i..].find('=') {
        let eq = i + off;
        let mut k = eq;
        while k > start && is_key_char(bytes[k - 1]) {
            k -= 1;
        }
        if k == eq || (k > start && !bytes[k - 1].is_ascii_whitespace()) {
            return Err(syntax(lineno, eq + 1, "expected key before '='"));
        }
        keys.push((k, eq));
        i = eq + 1;
    }
    if keys.is_empty() || !line[start..keys[0].0].trim().is_empty() {
        let col = start + line[start..].len() - line[start..].trim_start().len() + 1;
        return Err(syntax(lineno, col, "expected key=value"));
    }
    Ok(keys
        .iter()
        .enumerate()
        .map(|(j, &(k, eq))| {
            let end = keys.get(j + 1).map_or(line.len(), |n| n.0);
            (line[k..eq].to_string(), line[eq + 1..end].to_string(), eq + 2)
        })
        .collect())
}

fn parse_header(line: &str, lineno: usize) -> Result<(u32, Kind, Option<ElemParser>), CliError> {
    let rest = &line["field".len()..];
    let toks: Vec<(usize, &str)> = rest
        .split_whitespace()
        .map(|t| (t.as_ptr() as usize - line.as_ptr() as usize, t))
        .collect();
    let Some(&(qcol, qtok)) = toks.first() else {
        return Err(syntax(lineno, line.len() + 1, "expected q=<2^k>"));
    };
    let q: u32 = qtok
        .strip_prefix("q=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| syntax(lineno, qcol + 1, "expected q=<2^k>"))?;
    if !q.is_power_of_two() || !(2..=256).contains(&q) {
        return Err(semantic(lineno, format!("q = {q} must be a power of 2 between 2 and 256")));
    }
    let k = q.trailing_zeros() as u8;
    let f = RatField::new(k, "t");
    match toks.get(1) {
        None => Ok((q, Kind::Base, Some(ElemParser::new(f)))),
        Some((_, "insep")) if toks.len() == 2 => Ok((q, Kind::Insep, Some(ElemParser::new(InsepExt::new(k).field())))),
        Some((col, "sep")) => {
            let start = col + 3;
            let kv = key_values(line, start, lineno)?;
            let [(key, value, vcol)] = kv.as_slice() else {
                return Err(syntax(lineno, start + 1, "expected a single delta=<rf>"));
            };
            if key != "delta" {
                return Err(syntax(lineno, vcol - key.len() - 1, format!("unknown key '{key}'")));
            }
            let (delta, _) = ElemParser::new(f.clone()).elem(value, lineno, *vcol)?;
            let ext = SepExt::new(f.clone(), f.parse(&delta).unwrap())
                .map_err(|_| semantic(lineno, "delta in wp(F): the extension is not a field"))?;
            Ok((q, Kind::Sep { delta }, Some(ElemParser::new(ext))))
        }
        Some((col, tok)) => Err(syntax(lineno, col + 1, format!("expected 'sep' or 'insep', found '{tok}'"))),
    }
}

fn parse_command(verb: Verb, line: &str, start: usize, lineno: usize) -> Result<Command, CliError> {
    let toks: Vec<(usize, &str)> = line[start..]
        .split_whitespace()
        .map(|t| (t.as_ptr() as usize - line.as_ptr() as usize, t))
        .collect();
    let mut flags = Vec::new();
    let mut it = toks.into_iter();
    while let Some((col, tok)) = it.next() {
        let Some(name) = tok.strip_prefix("--") else {
            return Err(syntax(lineno, col + 1, format!("expected a --flag, found '{tok}'")));
        };
        let Some((_, value)) = it.next() else {
            return Err(syntax(lineno, col + tok.len() + 1, format!("flag --{name} needs a value")));
        };
        flags.push((name.to_string(), value.to_string()));
    }
    Ok(Command { verb, flags })
}

pub fn parse_scenario(text: &str) -> Result<Scenario, CliError> {
    let mut header: Option<(u32, Kind, ElemParser)> = None;
    let mut statements = Vec::new();
    let mut command = None;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim_end();
        let body = line.trim_start();
        if body.is_empty() {
            continue;
        }
        let start = line.len() - body.len();
        let word_len = body.find(char::is_whitespace).unwrap_or(body.len());
        let word = &body[..word_len];
        if word == "field" {
            if header.is_some() {
                return Err(semantic(lineno, "duplicate field header"));
            }
            let (q, kind, p) = parse_header(&line[start..], lineno).map_err(|e| shift(e, start))?;
            header = Some((q, kind, p.unwrap()));
            continue;
        }
        let Some((_, _, elems)) = &header else {
            return Err(semantic(lineno, "the first statement must be the field header"));
        };
        if command.is_some() {
            return Err(semantic(lineno, "statements after the command"));
        }
        let after = start + word_len;
        match word {
            "quat" => {
                let kv = key_values(line, after, lineno)?;
                let get = |key: &str| kv.iter().find(|(k, _, _)| k == key);
                if let Some((k, _, c)) = kv.iter().find(|(k, _, _)| k != "a" && k != "b") {
                    return Err(syntax(lineno, c - k.len() - 1, format!("unknown key '{k}'")));
                }
                let (Some((_, a, ca)), Some((_, b, cb))) = (get("a"), get("b")) else {
                    return Err(syntax(lineno, line.len() + 1, "quat needs a=<elem> and b=<elem>"));
                };
                let (a, _) = elems.elem(a, lineno, *ca)?;
                let b = elems.nonzero(b, lineno, *cb)?;
                statements.push(Statement::Quat { a, b });
            }
            "pfister" => {
                let mut slots = Vec::new();
                let mut col = after;
                for part in line[after..].split(',') {
                    slots.push(elems.nonzero(part, lineno, col + 1)?);
                    col += part.len() + 1;
                }
                statements.push(Statement::Pfister(slots));
            }
            w => match Verb::from_name(w) {
                Some(verb) => command = Some(parse_command(verb, line, after, lineno)?),
                None => return Err(syntax(lineno, start + 1, format!("unknown statement '{w}'"))),
            },
        }
    }
    let Some((q, kind, _)) = header else {
        return Err(semantic(1, "missing field header"));
    };
    Ok(Scenario { q, kind, statements, command })
}

fn shift(e: CliError, by: usize) -> CliError {
    match e {
        CliError::Syntax { line, column, message } => CliError::Syntax { line, column: column + by, message },
        e => e,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "field q=2 sep delta=t^3\nquat a=1 + t*eta b=t\ndescend\n";

    #[test]
    fn minimal_roundtrip() {
        let s = parse_scenario(MINIMAL).unwrap();
        assert_eq!(s.q, 2);
        assert_eq!(s.kind, Kind::Sep { delta: "t^3".into() });
        assert_eq!(s.command.as_ref().unwrap().verb, Verb::Descend);
        assert_eq!(parse_scenario(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn full_grammar() {
        let text = "# comment\nfield q=4 insep\nquat a=s^3 b=s^2 # trailing\npfister s, s^2+1\npf --x 1\n";
        let s = parse_scenario(text).unwrap();
        assert_eq!(s.kind, Kind::Insep);
        assert_eq!(s.statements.len(), 2);
        assert_eq!(s.command.as_ref().unwrap().flag("x"), Some("1"));
        assert_eq!(parse_scenario(&s.to_string()).unwrap(), s);
        let base = parse_scenario("field q=2\npfister t, t+1\niwitt\n").unwrap();
        assert_eq!(base.kind, Kind::Base);
    }

    #[test]
    fn semantic_errors() {
        let e = parse_scenario("field q=2 sep delta=t^2+t\n").unwrap_err();
        assert!(matches!(e, CliError::Semantic { line: 1, ref message } if message.contains("delta in wp")));
        assert!(matches!(parse_scenario("field q=3\n"), Err(CliError::Semantic { .. })));
        assert!(matches!(parse_scenario("field q=2\nquat a=1 b=0\n"), Err(CliError::Semantic { line: 2, .. })));
        assert!(matches!(parse_scenario("quat a=1 b=t\n"), Err(CliError::Semantic { line: 1, .. })));
    }

    #[test]
    fn syntax_errors_are_positioned() {
        let e = parse_scenario("field q=2\nquat a= b=t\n").unwrap_err();
        assert_eq!(e, CliError::Syntax { line: 2, column: 8, message: "expected an element".into() });
        let e = parse_scenario("field q=2\nquat a=t+ b=t\n").unwrap_err();
        assert!(matches!(e, CliError::Syntax { line: 2, column: 10, .. }), "{e:?}");
        let e = parse_scenario("field q=2\nfrobnicate\n").unwrap_err();
        assert!(matches!(e, CliError::Syntax { line: 2, column: 1, .. }));
        let e = parse_scenario("field q=2 sep delta=t^3\nquat a=zeta b=t\n").unwrap_err();
        assert!(matches!(e, CliError::Syntax { line: 2, column: 8, .. }), "{e:?}");
    }
}
