use std::cmp::Ordering;
use std::fmt;

use super::var::VarId;

/// A monomial as a sorted list of `(variable, exponent ≥ 1)` pairs.
///
/// `Ord` is graded lexicographic over the canonical variable order, with a
/// larger [`VarId`] being a larger variable: compare total degree, then the
/// exponent of the largest variable on which the two differ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId) -> Monomial {
        Monomial(vec![(v, 1)])
    }

    pub fn var_pow(v: VarId, e: u32) -> Monomial {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    /// Builds a monomial from arbitrary factors, merging repeats and
    /// dropping zero exponents.
    pub fn from_factors<I: IntoIterator<Item = (VarId, u32)>>(factors: I) -> Monomial {
        let mut v: Vec<(VarId, u32)> = factors.into_iter().filter(|&(_, e)| e > 0).collect();
        v.sort_by_key(|&(x, _)| x);
        let mut out: Vec<(VarId, u32)> = Vec::with_capacity(v.len());
        for (x, e) in v {
            match out.last_mut() {
                Some((y, f)) if *y == x => *f += e,
                _ => out.push((x, e)),
            }
        }
        Monomial(out)
    }

    /// Product of distinct variables.
    pub fn from_vars<I: IntoIterator<Item = VarId>>(vars: I) -> Monomial {
        Monomial::from_factors(vars.into_iter().map(|v| (v, 1)))
    }

    pub fn factors(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&(_, e)| u64::from(e)).sum()
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        match self.0.binary_search_by_key(&v, |&(x, _)| x) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }

    pub fn is_multilinear(&self) -> bool {
        self.0.iter().all(|&(_, e)| e == 1)
    }

    /// Collapses every exponent to 1.
    pub fn support(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(v, _)| (v, 1)).collect())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                if f > e {
                    return None;
                }
                if e > f {
                    out.push((v, e - f));
                }
                j += 1;
            } else if j < other.0.len() && other.0[j].0 < v {
                return None;
            } else {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        other.div(self).is_some()
    }

    /// Splits into the part over variables satisfying `pred` and the rest.
    pub fn split<F: Fn(VarId) -> bool>(&self, pred: F) -> (Monomial, Monomial) {
        let (a, b): (Vec<_>, Vec<_>) = self.0.iter().partition(|&&(v, _)| pred(v));
        (Monomial(a), Monomial(b))
    }

    /// Removes the given variable.
    pub fn without(&self, v: VarId) -> Monomial {
        Monomial(self.0.iter().copied().filter(|&(x, _)| x != v).collect())
    }

    pub(crate) fn from_sorted_unchecked(v: Vec<(VarId, u32)>) -> Monomial {
        debug_assert!(v.windows(2).all(|w| w[0].0 < w[1].0) && v.iter().all(|&(_, e)| e > 0));
        Monomial(v)
    }

    /// Lexicographic comparison scanning from the largest variable.
    fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (a.len(), b.len());
        while i > 0 && j > 0 {
            let (va, ea) = a[i - 1];
            let (vb, eb) = b[j - 1];
            match va.cmp(&vb) {
                Ordering::Greater => return Ordering::Greater,
                Ordering::Less => return Ordering::Less,
                Ordering::Equal => match ea.cmp(&eb) {
                    Ordering::Equal => {
                        i -= 1;
                        j -= 1;
                    }
                    o => return o,
                },
            }
        }
        (i > 0).cmp(&(j > 0))
    }

    /// Lexicographic comparison scanning from the smallest variable, where a
    /// smaller [`VarId`] is the larger variable.
    fn revlex_vars_cmp(&self, other: &Monomial) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        for (x, y) in a.iter().zip(b.iter()) {
            match x.0.cmp(&y.0) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => match x.1.cmp(&y.1) {
                    Ordering::Equal => {}
                    o => return o,
                },
            }
        }
        a.len().cmp(&b.len())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Monomial) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, &(v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Graded lexicographic order, optionally over the reversed variable order.
///
/// The default (`reversed = false`) agrees with `Ord for Monomial`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MonomialOrder {
    pub reversed: bool,
}

impl MonomialOrder {
    pub const GRLEX: MonomialOrder = MonomialOrder { reversed: false };
    pub const GRLEX_REVERSED_VARS: MonomialOrder = MonomialOrder { reversed: true };

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        if !self.reversed {
            return a.cmp(b);
        }
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.revlex_vars_cmp(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u32) -> VarId {
        VarId::Plain(i)
    }

    #[test]
    fn grlex_examples() {
        let x1 = Monomial::var(x(1));
        let x2 = Monomial::var(x(2));
        let x1x2 = x1.mul(&x2);
        assert!(x2 > x1);
        assert!(x1x2 > x2);
        assert!(Monomial::one() < x1);
        let x1sq = Monomial::var_pow(x(1), 2);
        assert!(x1x2 > x1sq);
        let rev = MonomialOrder::GRLEX_REVERSED_VARS;
        assert_eq!(rev.cmp(&x1, &x2), Ordering::Greater);
        assert_eq!(rev.cmp(&x1sq, &x1x2), Ordering::Greater);
    }

    #[test]
    fn mul_div() {
        let a = Monomial::from_factors([(x(1), 2), (x(3), 1)]);
        let b = Monomial::from_factors([(x(3), 2), (x(2), 1)]);
        let ab = a.mul(&b);
        assert_eq!(ab, Monomial::from_factors([(x(1), 2), (x(2), 1), (x(3), 3)]));
        assert_eq!(ab.div(&a), Some(b.clone()));
        assert_eq!(a.div(&b), None);
        assert_eq!(ab.to_string(), "x_1^2*x_2*x_3^3");
        assert_eq!(Monomial::from_factors([(x(2), 1), (x(2), 2), (x(1), 0)]), Monomial::var_pow(x(2), 3));
    }
}
