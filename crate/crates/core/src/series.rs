//! Truncated Laurent series over a residue field, with tracked absolute precision.

use crate::error::{Error, Result};
use crate::residue::{ResElem, ResField};

/// sum_{i} coeffs[i] * pi^(val + i) + O(pi^prec).
///
/// Normalized: either `coeffs` is empty (the series is zero to precision,
/// and `val == prec`) or `coeffs[0]` is nonzero. `val + coeffs.len() == prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent {
    pub val: i64,
    pub coeffs: Vec<ResElem>,
    pub prec: i64,
}

impl Laurent {
    pub fn new(field: &ResField, val: i64, mut coeffs: Vec<ResElem>, prec: i64) -> Laurent {
        coeffs.truncate((prec - val).max(0) as usize);
        while (coeffs.len() as i64) < prec - val {
            coeffs.push(field.zero());
        }
        let lead = coeffs.iter().position(|c| !field.is_zero(c));
        match lead {
            None => Laurent { val: prec, coeffs: Vec::new(), prec },
            Some(i) => Laurent { val: val + i as i64, coeffs: coeffs.split_off(i), prec },
        }
    }

    pub fn zero(prec: i64) -> Laurent {
        Laurent { val: prec, coeffs: Vec::new(), prec }
    }

    /// c * pi^e + O(pi^prec).
    pub fn monomial(field: &ResField, c: ResElem, e: i64, prec: i64) -> Laurent {
        Laurent::new(field, e, vec![c], prec)
    }

    pub fn one(field: &ResField, prec: i64) -> Laurent {
        Laurent::monomial(field, field.one(), 0, prec)
    }

    /// Whether the series is zero to its precision (valuation unknown).
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of known coefficients after the leading one.
    pub fn rel_prec(&self) -> i64 {
        self.prec - self.val
    }

    pub fn lead(&self) -> Option<&ResElem> {
        self.coeffs.first()
    }

    /// Coefficient of pi^e, `None` when beyond the precision.
    pub fn coeff(&self, field: &ResField, e: i64) -> Option<ResElem> {
        if e >= self.prec {
            return None;
        }
        if e < self.val {
            return Some(field.zero());
        }
        Some(self.coeffs[(e - self.val) as usize].clone())
    }

    pub fn truncate(&self, field: &ResField, prec: i64) -> Laurent {
        if prec >= self.prec {
            return self.clone();
        }
        Laurent::new(field, self.val, self.coeffs.clone(), prec)
    }

    pub fn add(&self, field: &ResField, o: &Laurent) -> Laurent {
        let prec = self.prec.min(o.prec);
        let val = self.val.min(o.val).min(prec);
        let coeffs = (val..prec)
            .map(|e| field.add(&self.coeff(field, e).unwrap(), &o.coeff(field, e).unwrap()))
            .collect();
        Laurent::new(field, val, coeffs, prec)
    }

    pub fn scale(&self, field: &ResField, c: &ResElem) -> Laurent {
        Laurent::new(field, self.val, self.coeffs.iter().map(|x| field.mul(x, c)).collect(), self.prec)
    }

    /// Multiplies by pi^n.
    pub fn shift(&self, n: i64) -> Laurent {
        Laurent { val: self.val + n, coeffs: self.coeffs.clone(), prec: self.prec + n }
    }

    pub fn mul(&self, field: &ResField, o: &Laurent) -> Laurent {
        let prec = (self.val + o.prec).min(o.val + self.prec);
        if self.is_zero() || o.is_zero() {
            return Laurent::zero(prec);
        }
        let val = self.val + o.val;
        let n = (prec - val).max(0) as usize;
        let mut out = vec![field.zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if field.is_zero(a) {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n - i) {
                out[i + j] = field.add(&out[i + j], &field.mul(a, b));
            }
        }
        Laurent::new(field, val, out, prec)
    }

    pub fn square(&self, field: &ResField) -> Laurent {
        self.mul(field, self)
    }

    /// Multiplicative inverse; fails if the series is zero to its precision.
    pub fn inv(&self, field: &ResField) -> Result<Laurent> {
        let Some(lead) = self.lead() else {
            return Err(Error::PrecisionExhausted(self.prec.max(0) as usize));
        };
        let n = self.rel_prec() as usize;
        let li = field.inv(lead).unwrap();
        // unit part u = coeffs / pi^val; solve u * w = 1 term by term
        let mut w = Vec::with_capacity(n);
        w.push(li.clone());
        for m in 1..n {
            let mut s = field.zero();
            for i in 1..=m {
                s = field.add(&s, &field.mul(&self.coeffs[i], &w[m - i]));
            }
            w.push(field.mul(&s, &li));
        }
        Ok(Laurent::new(field, -self.val, w, -self.val + n as i64))
    }

    pub fn div(&self, field: &ResField, o: &Laurent) -> Result<Laurent> {
        Ok(self.mul(field, &o.inv(field)?))
    }

    pub fn pow(&self, field: &ResField, e: i64) -> Result<Laurent> {
        let base = if e < 0 { self.inv(field)? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Laurent::one(field, base.rel_prec().max(1) + base.val.abs() * n as i64 + 64);
        let mut b = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(field, &b);
            }
            b = b.square(field);
            n >>= 1;
        }
        Ok(acc)
    }

    /// Formal derivative d/dpi.
    pub fn derivative(&self, field: &ResField) -> Laurent {
        let coeffs: Vec<ResElem> = (self.val..self.prec)
            .map(|e| if e.rem_euclid(2) == 1 { self.coeff(field, e).unwrap() } else { field.zero() })
            .collect();
        Laurent::new(field, self.val - 1, coeffs, self.prec - 1)
    }

    /// Artin-Schreier map.
    pub fn wp(&self, field: &ResField) -> Laurent {
        self.square(field).add(field, self)
    }

    /// Maps coefficients through an embedding of residue fields.
    pub fn map_coeffs(&self, to: &ResField, f: impl Fn(&ResElem) -> ResElem) -> Laurent {
        Laurent::new(to, self.val, self.coeffs.iter().map(f).collect(), self.prec)
    }

    /// Substitutes a series `p` of positive valuation for the uniformizer.
    pub fn compose(&self, field: &ResField, p: &Laurent) -> Result<Laurent> {
        if p.is_zero() || p.val < 1 {
            return Err(Error::Precondition("substituted series must have positive valuation".into()));
        }
        if self.is_zero() {
            return Ok(Laurent::zero(self.prec * p.val));
        }
        // absolute precision of self in the new uniformizer
        let target = self.prec * p.val;
        let unit_terms = self.coeffs.len();
        let mut acc = Laurent::zero(target - self.val * p.val);
        for c in self.coeffs.iter().rev().take(unit_terms) {
            acc = acc.mul(field, p).add(field, &Laurent::monomial(field, c.clone(), 0, acc.prec.max(1)));
        }
        let scale = p.pow(field, self.val)?;
        Ok(acc.mul(field, &scale).truncate(field, target))
    }

    /// Coefficient of pi^-1, `None` if unknown at this precision.
    pub fn residue(&self, field: &ResField) -> Option<ResElem> {
        self.coeff(field, -1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Fq;

    fn f2() -> ResField {
        ResField::constants(1)
    }

    fn ser(bits: &[u32], val: i64, prec: i64) -> Laurent {
        let f = f2();
        Laurent::new(&f, val, bits.iter().map(|&b| f.from_fq(Fq::new(b, 1))).collect(), prec)
    }

    #[test]
    fn geometric_series_inverse() {
        let f = f2();
        let one_plus_pi = ser(&[1, 1], 0, 10);
        let inv = one_plus_pi.inv(&f).unwrap();
        assert_eq!(inv, ser(&[1; 10], 0, 10));
        assert_eq!(inv.mul(&f, &one_plus_pi), Laurent::one(&f, 10));
    }

    #[test]
    fn precision_tracking() {
        let f = f2();
        let a = ser(&[1, 0, 1], -2, 5);
        let b = ser(&[1, 1], 1, 4);
        let p = a.mul(&f, &b);
        assert_eq!(p.val, -1);
        assert_eq!(p.prec, (-2 + 4).min(1 + 5));
        assert!(a.add(&f, &a).is_zero());
        assert_eq!(a.add(&f, &a).prec, 5);
    }

    #[test]
    fn derivative_of_dlog() {
        let f = f2();
        // pi^3 (1 + pi): d/dpi = pi^2 (1) + 0 ... coefficient rule e mod 2
        let s = ser(&[1, 1], 3, 8);
        let d = s.derivative(&f);
        assert_eq!(d.val, 2);
        assert_eq!(d.coeff(&f, 3), Some(f.zero()));
    }

    #[test]
    fn compose_is_homomorphic() {
        let f = f2();
        let p = ser(&[1, 1, 0, 1], 2, 20);
        let a = ser(&[1, 0, 1, 1], -1, 8);
        let b = ser(&[1, 1, 1], 0, 8);
        let lhs = a.mul(&f, &b).compose(&f, &p).unwrap();
        let rhs = a.compose(&f, &p).unwrap().mul(&f, &b.compose(&f, &p).unwrap());
        let prec = lhs.prec.min(rhs.prec);
        assert_eq!(lhs.truncate(&f, prec), rhs.truncate(&f, prec));
    }
}
