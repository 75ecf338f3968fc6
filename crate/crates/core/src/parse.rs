//! Element grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ['^' uint]
//! atom   := ident | uint | '(' expr ')'
//! ```
//!
//! An unsigned integer n < q denotes the constant of F_q with bit pattern n.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gf::Fq;

struct Parser<'a, E: Field> {
    field: &'a E,
    src: &'a [u8],
    pos: usize,
    ident: &'a dyn Fn(&str) -> Option<E::Elem>,
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { column: pos + 1, message: msg.into() }
}

impl<E: Field> Parser<'_, E> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(err(start, "expected unsigned integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| err(start, "integer too large"))
    }

    fn expr(&mut self) -> Result<E::Elem> {
        let mut acc = self.term()?;
        while let Some(b'+' | b'-') = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = self.field.add(&acc, &rhs);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<E::Elem> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = self.field.mul(&acc, &rhs);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let rhs = self.factor()?;
                    acc = self.field.div(&acc, &rhs).ok_or_else(|| err(at, "division by zero"))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<E::Elem> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.uint()?;
            let mut acc = self.field.one();
            let mut b = base;
            let mut e = e;
            while e > 0 {
                if e & 1 == 1 {
                    acc = self.field.mul(&acc, &b);
                }
                b = self.field.square(&b);
                e >>= 1;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<E::Elem> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(err(self.pos, "expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let at = self.pos;
                let n = self.uint()?;
                let q = 1u64 << self.field.k();
                if n >= q {
                    return Err(err(at, format!("constant {n} is not an element of F_{q}")));
                }
                Ok(self.field.constant(Fq::new(n as u32, self.field.k())))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                (self.ident)(name).ok_or_else(|| err(start, format!("unknown identifier '{name}'")))
            }
            Some(c) => Err(err(self.pos, format!("unexpected character '{}'", c as char))),
            None => Err(err(self.pos, "unexpected end of input")),
        }
    }
}

/// Parses a full expression; `ident` resolves variable names.
pub fn parse_expr<E: Field>(
    field: &E,
    s: &str,
    ident: &dyn Fn(&str) -> Option<E::Elem>,
) -> Result<E::Elem> {
    let mut p = Parser { field, src: s.as_bytes(), pos: 0, ident };
    let v = p.expr()?;
    if let Some(c) = p.peek() {
        return Err(err(p.pos, format!("unexpected trailing '{}'", c as char)));
    }
    Ok(v)
}
