//! Exact linear algebra: matrix rank over any field, fraction-free rank over
//! the rationals, symbolic rank over `F[z̄]`, and incremental echelon bases of
//! polynomial spans.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::ff::{Elem, FieldKind, Field};
use crate::mpoly::{Monomial, Poly};

/// Rank of a dense matrix given as rows.
///
/// Finite fields use plain Gaussian elimination; over the rationals each row
/// is cleared of denominators and the integer matrix is reduced by Bareiss's
/// fraction-free elimination.
pub fn rank(field: &Field, rows: &[Vec<Elem>]) -> usize {
    if field.kind() == FieldKind::Rational {
        let ints: Vec<Vec<BigInt>> = rows.iter().map(|r| clear_denominators(field, r)).collect();
        return bareiss_rank(ints);
    }
    gauss_rank(field, rows.to_vec())
}

fn clear_denominators(field: &Field, row: &[Elem]) -> Vec<BigInt> {
    let qs: Vec<_> = row
        .iter()
        .map(|e| field.lift_to_rational(e).expect("rational element"))
        .collect();
    let l = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    qs.iter().map(|q| q.numer() * (&l / q.denom())).collect()
}

fn gauss_rank(field: &Field, mut m: Vec<Vec<Elem>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| !field.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, piv);
        let inv = field.inv(&m[r][c]).expect("nonzero pivot");
        for i in (r + 1)..m.len() {
            if field.is_zero(&m[i][c]) {
                continue;
            }
            let factor = field.mul(&m[i][c], &inv);
            for k in c..cols {
                let t = field.mul(&factor, &m[r][k]);
                m[i][k] = field.sub(&m[i][k], &t);
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Fraction-free elimination over the integers.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        for i in (r + 1)..rows {
            for k in (c + 1)..cols {
                let v = &m[r][c] * &m[i][k] - &m[i][c] * &m[r][k];
                debug_assert!((&v % &prev).is_zero());
                m[i][k] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Rank over the fraction field `F(z̄)` of a matrix with polynomial entries,
/// by Bareiss elimination with exact polynomial division.
pub fn symbolic_rank(field: &Field, m: &[Vec<Poly>]) -> usize {
    let mut m: Vec<Vec<Poly>> = m.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = Poly::one(field);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        for i in (r + 1)..rows {
            for k in (c + 1)..cols {
                let v = m[r][c].mul(&m[i][k]).sub(&m[i][c].mul(&m[r][k]));
                m[i][k] = v
                    .div_exact(&prev)
                    .expect("nonzero divisor")
                    .expect("Bareiss quotients are exact");
            }
            m[i][c] = Poly::zero(field);
        }
        prev = m[r][c].clone();
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Incremental echelon basis of a span of polynomials, with coordinates.
///
/// Every stored row has a distinct leading monomial (its pivot). Each row is
/// also recorded as a combination of the accepted generators, so membership
/// queries can return coordinates with respect to those generators.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    field: Field,
    rows: Vec<Poly>,
    combos: Vec<Vec<Elem>>,
    pivots: BTreeMap<Monomial, usize>,
    members: Vec<Poly>,
}

impl SpanBasis {
    pub fn new(field: &Field) -> SpanBasis {
        SpanBasis {
            field: field.clone(),
            rows: Vec::new(),
            combos: Vec::new(),
            pivots: BTreeMap::new(),
            members: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.members.len()
    }

    /// Accepted generators, in insertion order.
    pub fn members(&self) -> &[Poly] {
        &self.members
    }

    /// Reduces `p` by the rows; returns the remainder and the multiplier of
    /// each row.
    fn reduce(&self, p: &Poly) -> (Poly, Vec<Elem>) {
        let f = &self.field;
        let mut mult = vec![f.zero(); self.rows.len()];
        let mut rem = p.clone();
        let mut cursor: Option<Monomial> = None;
        loop {
            let next = match &cursor {
                None => rem.term_map().iter().next_back(),
                Some(c) => rem.term_map().range(..c.clone()).next_back(),
            };
            let Some((m, c)) = next.map(|(m, c)| (m.clone(), c.clone())) else {
                break;
            };
            match self.pivots.get(&m) {
                Some(&k) => {
                    let lc = self.rows[k].coeff(&m);
                    let t = f.div(&c, &lc).expect("pivot coefficient is nonzero");
                    rem = rem.sub(&self.rows[k].scale(&t));
                    mult[k] = f.add(&mult[k], &t);
                }
                None => cursor = Some(m),
            }
        }
        (rem, mult)
    }

    /// Adds `p` to the spanning set; returns whether it was independent.
    pub fn insert(&mut self, p: &Poly) -> bool {
        let f = self.field.clone();
        let (rem, mult) = self.reduce(p);
        if rem.is_zero() {
            return false;
        }
        let n = self.members.len();
        let mut combo = vec![f.zero(); n + 1];
        combo[n] = f.one();
        for (k, t) in mult.iter().enumerate() {
            if f.is_zero(t) {
                continue;
            }
            for (j, c) in self.combos[k].iter().enumerate() {
                combo[j] = f.sub(&combo[j], &f.mul(t, c));
            }
        }
        for c in &mut self.combos {
            c.push(f.zero());
        }
        let (lm, _) = rem.term_map().iter().next_back().expect("nonzero");
        self.pivots.insert(lm.clone(), self.rows.len());
        self.rows.push(rem);
        self.combos.push(combo);
        self.members.push(p.clone());
        true
    }

    /// Coordinates of `p` with respect to [`SpanBasis::members`], or `None`
    /// when `p` is outside the span.
    pub fn coords(&self, p: &Poly) -> Option<Vec<Elem>> {
        let f = &self.field;
        let (rem, mult) = self.reduce(p);
        if !rem.is_zero() {
            return None;
        }
        let mut out = vec![f.zero(); self.members.len()];
        for (k, t) in mult.iter().enumerate() {
            if f.is_zero(t) {
                continue;
            }
            for (j, c) in self.combos[k].iter().enumerate() {
                out[j] = f.add(&out[j], &f.mul(t, c));
            }
        }
        Some(out)
    }
}

/// Dimension of the span of the given polynomials.
pub fn span_dim<'a, I: IntoIterator<Item = &'a Poly>>(field: &Field, polys: I) -> usize {
    let mut b = SpanBasis::new(field);
    for p in polys {
        b.insert(p);
    }
    b.dim()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::parse_poly;

    #[test]
    fn small_ranks() {
        let q = Field::rationals();
        let m = |r: &[&[i64]]| -> Vec<Vec<Elem>> {
            r.iter().map(|row| row.iter().map(|&v| q.from_i64(v)).collect()).collect()
        };
        assert_eq!(rank(&q, &m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&q, &m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])), 3);
        assert_eq!(rank(&q, &m(&[&[0, 0], &[0, 0]])), 0);
        let f = Field::prime(3).unwrap();
        let r: Vec<Vec<Elem>> = [[1, 1], [1, 4]]
            .iter()
            .map(|row| row.iter().map(|&v| f.from_i64(v)).collect())
            .collect();
        assert_eq!(rank(&f, &r), 1);
    }

    #[test]
    fn symbolic() {
        let f = Field::prime(5).unwrap();
        let p = |s: &str| parse_poly(&f, s).unwrap();
        let m = vec![vec![p("x_1"), p("0")], vec![p("0"), p("x_1")]];
        assert_eq!(symbolic_rank(&f, &m), 2);
        let m = vec![vec![p("x_1"), p("x_1*x_2")], vec![p("1"), p("x_2")]];
        assert_eq!(symbolic_rank(&f, &m), 1);
    }

    #[test]
    fn span_coordinates() {
        let f = Field::prime(7).unwrap();
        let p = |s: &str| parse_poly(&f, s).unwrap();
        let mut b = SpanBasis::new(&f);
        assert!(b.insert(&p("x_1 + x_2")));
        assert!(b.insert(&p("x_2 + 1")));
        assert!(!b.insert(&p("x_1 + 6")));
        let c = b.coords(&p("2*x_1 + 5*x_2 + 3")).unwrap();
        assert_eq!(c, vec![f.from_i64(2), f.from_i64(3)]);
        assert_eq!(b.coords(&p("x_3")), None);
    }
}
