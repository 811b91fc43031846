//! Canonical text and JSON forms of polynomials.
//!
//! Text: terms in grlex-descending order joined by `" + "`, each written
//! `c*m` with the coefficient omitted when it is 1 and the monomial is not
//! constant; the zero polynomial is `0`. The parser is more lenient: it
//! accepts any order, repeated monomials, coefficients anywhere in a term
//! and a leading `-` on a term.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ff::{Elem, Field};

use super::monomial::Monomial;
use super::poly::Poly;
use super::var::VarId;
use super::PolyError;

/// Largest exponent accepted by the parser.
pub const MAX_PARSED_EXPONENT: u32 = 1 << 16;

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let field = self.field();
        for (k, (m, c)) in self.terms().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write_term(f, field, m, c)?;
        }
        Ok(())
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, field: &Field, m: &Monomial, c: &Elem) -> fmt::Result {
    if m.is_one() {
        f.write_str(&field.format_elem(c))
    } else if field.is_one(c) {
        write!(f, "{m}")
    } else {
        write!(f, "{}*{m}", field.format_elem(c))
    }
}

fn parse_factor(s: &str) -> Result<(VarId, u32), PolyError> {
    let bad = || PolyError::Parse(format!("bad factor {s:?}"));
    let (name, e) = match s.rsplit_once('^') {
        Some((n, e)) if !e.is_empty() && e.bytes().all(|b| b.is_ascii_digit()) => {
            let e: u32 = e.parse().map_err(|_| bad())?;
            if e > MAX_PARSED_EXPONENT {
                return Err(PolyError::Parse(format!("exponent too large in {s:?}")));
            }
            (n, e)
        }
        _ => (s, 1),
    };
    let v: VarId = name.parse().map_err(|_| bad())?;
    Ok((v, e))
}

fn parse_term(field: &Field, s: &str) -> Result<(Monomial, Elem), PolyError> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        // "-3" and "-1/2" are plain coefficients, "-x_1" is a negated term
        Some(rest) if !rest.starts_with(|c: char| c.is_ascii_digit()) => (true, rest.trim_start()),
        _ => (false, s),
    };
    if body.is_empty() {
        return Err(PolyError::Parse(format!("empty term in {s:?}")));
    }
    let mut coef = if neg { field.from_i64(-1) } else { field.one() };
    let mut factors: Vec<(VarId, u32)> = Vec::new();
    for part in body.split('*') {
        let part = part.trim();
        if part.is_empty() {
            return Err(PolyError::Parse(format!("empty factor in {s:?}")));
        }
        if let Ok(c) = field.parse_elem(part) {
            coef = field.mul(&coef, &c);
        } else {
            factors.push(parse_factor(part)?);
        }
    }
    factors.sort_by_key(|&(v, _)| v);
    let mut merged: Vec<(VarId, u32)> = Vec::with_capacity(factors.len());
    for (v, e) in factors {
        match merged.last_mut() {
            Some((w, f)) if *w == v => {
                *f = f
                    .checked_add(e)
                    .filter(|&t| t <= MAX_PARSED_EXPONENT)
                    .ok_or_else(|| PolyError::Parse(format!("exponent too large in {s:?}")))?;
            }
            _ => merged.push((v, e)),
        }
    }
    Ok((Monomial::from_factors(merged), coef))
}

/// Parses the text form over `field`.
pub fn parse_poly(field: &Field, s: &str) -> Result<Poly, PolyError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(PolyError::Parse("empty polynomial".into()));
    }
    let mut terms = Vec::new();
    for t in s.split('+') {
        terms.push(parse_term(field, t)?);
    }
    Ok(Poly::from_terms(field, terms))
}

impl Poly {
    pub fn parse(field: &Field, s: &str) -> Result<Poly, PolyError> {
        parse_poly(field, s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub c: String,
    pub m: String,
}

/// `{"field": spec, "terms": [{"c": coeff, "m": monomial}, ...]}` with terms
/// in grlex-descending order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub field: String,
    pub terms: Vec<TermJson>,
}

impl PolyJson {
    pub fn from_poly(p: &Poly) -> PolyJson {
        let f = p.field();
        PolyJson {
            field: f.spec(),
            terms: p
                .terms()
                .rev()
                .map(|(m, c)| TermJson {
                    c: f.format_elem(c),
                    m: m.to_string(),
                })
                .collect(),
        }
    }

    pub fn to_poly(&self) -> Result<Poly, PolyError> {
        let field = Field::parse(&self.field)?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let c = field.parse_elem(&t.c)?;
            let m = if t.m.trim() == "1" {
                Monomial::one()
            } else {
                let (m, c1) = parse_term(&field, &t.m)?;
                if !field.is_one(&c1) {
                    return Err(PolyError::Parse(format!("monomial {:?} carries a coefficient", t.m)));
                }
                m
            };
            terms.push((m, c));
        }
        Ok(Poly::from_terms(&field, terms))
    }
}

pub fn poly_to_json(p: &Poly) -> String {
    serde_json::to_string(&PolyJson::from_poly(p)).expect("serializable")
}

pub fn poly_from_json(s: &str) -> Result<Poly, PolyError> {
    let j: PolyJson = serde_json::from_str(s).map_err(|e| PolyError::Parse(e.to_string()))?;
    j.to_poly()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_text() {
        let f = Field::prime(5).unwrap();
        let p = parse_poly(&f, "2 + x_1*x_2 + 3*x_1^2 + x_2").unwrap();
        assert_eq!(p.to_string(), "x_1*x_2 + 3*x_1^2 + x_2 + 2");
        assert_eq!(parse_poly(&f, &p.to_string()).unwrap(), p);
        assert_eq!(parse_poly(&f, "x_1 + 4*x_1").unwrap().to_string(), "0");
        assert_eq!(parse_poly(&f, "-x_1").unwrap().to_string(), "4*x_1");
        let q = Field::rationals();
        let r = parse_poly(&q, "-1/2*x^(1)_01^2 + y^(2)_1").unwrap();
        assert_eq!(r.to_string(), "-1/2*x^(1)_01^2 + y^(2)_1");
    }

    #[test]
    fn json_round_trip() {
        let f = Field::extension(3, 2).unwrap();
        let p = parse_poly(&f, "[1,2]*x_1*z_{1,2} + [0,1]").unwrap();
        let s = poly_to_json(&p);
        assert_eq!(poly_from_json(&s).unwrap(), p);
    }

    #[test]
    fn rejects() {
        let f = Field::prime(5).unwrap();
        for s in ["", "x_1 +", "x_1**x_2", "q_3", "x_1^99999999"] {
            assert!(parse_poly(&f, s).is_err(), "{s}");
        }
    }
}
