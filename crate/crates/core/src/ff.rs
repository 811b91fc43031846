//! Exact field arithmetic behind a single runtime field handle.
//!
//! A [`Field`] is a cheap, shareable handle to one of three contexts: a prime
//! field `F_p`, an extension `F_{p^k}` given by a monic irreducible modulus, or
//! the rationals. Raw [`Elem`] values carry no tag and are always interpreted
//! through the field that owns them (polynomials store the field once). The
//! tagged [`FieldElem`] wrapper is the checked public surface: mixing elements
//! of different fields is an error, never a coercion.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

/// Largest admissible prime. Products of two residues must fit in a `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds the supported bound {MAX_PRIME}")]
    PrimeTooLarge(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field size p^k overflows 63 bits")]
    FieldTooLarge,
    #[error("attempted to invert zero")]
    ZeroInversion,
    #[error("operands belong to different fields ({0} vs {1})")]
    MixedContexts(String, String),
    #[error("cannot parse field spec {0:?}")]
    BadFieldSpec(String),
    #[error("cannot parse field element {0:?}")]
    BadElement(String),
    #[error("rational {0} has a denominator divisible by the characteristic")]
    DenominatorVanishes(String),
    #[error("field {0} is not a subfield of {1}")]
    NotASubfield(String, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldKind {
    Prime,
    Extension,
    Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct FieldCtx {
    kind: FieldKind,
    p: u64,
    k: u32,
    /// Monic modulus, coefficients low to high, length `k + 1` (extension only).
    modulus: Vec<u64>,
}

/// Handle to a field context. Equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Field(Arc<FieldCtx>);

/// Untagged canonical field element.
///
/// Residues live in `[0, p)`, extension elements are coefficient vectors of
/// length `k` reduced modulo the field modulus, rationals are in lowest terms
/// with positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Fp(u64),
    Ext(Box<[u64]>),
    Q(Box<BigRational>),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

// Univariate helpers over F_p used for modulus search and extension arithmetic.
// Coefficient vectors are low to high; trailing zeros are trimmed.

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn upoly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_pow(m[dm], p - 2, p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &mc) in m.iter().enumerate() {
            let t = c * mc % p;
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        trim(&mut r);
    }
    r
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-`p`
/// digits of `index` (least significant digit = constant term).
fn monic_from_index(mut index: u64, deg: usize, p: u64) -> Vec<u64> {
    let mut v = Vec::with_capacity(deg + 1);
    for _ in 0..deg {
        v.push(index % p);
        index /= p;
    }
    v.push(1);
    v
}

/// Exhaustive irreducibility test: no monic factor of degree `1..=deg/2`.
fn is_irreducible(m: &[u64], p: u64) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let cand = monic_from_index(idx, d, p);
            if upoly_rem(m, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Read the leading integer (with optional sign) of a decimal string.
fn parse_u64(s: &str) -> Option<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl Field {
    pub fn prime(p: u64) -> Result<Field, FfError> {
        if !is_prime(p) {
            return Err(FfError::NotPrime(p));
        }
        if p > MAX_PRIME {
            return Err(FfError::PrimeTooLarge(p));
        }
        Ok(Field(Arc::new(FieldCtx {
            kind: FieldKind::Prime,
            p,
            k: 1,
            modulus: Vec::new(),
        })))
    }

    /// Builds `F_{p^k}` with the lexicographically least monic irreducible
    /// modulus of degree `k`; `k = 1` returns the prime field itself.
    ///
    /// Candidates are enumerated by the integer whose base-`p` digits are the
    /// non-leading coefficients, most significant digit = `x^{k-1}`.
    pub fn extension(p: u64, k: u32) -> Result<Field, FfError> {
        if k == 0 {
            return Err(FfError::ZeroDegree);
        }
        let base = Field::prime(p)?;
        if k == 1 {
            return Ok(base);
        }
        let size = (p as u128).checked_pow(k).ok_or(FfError::FieldTooLarge)?;
        if size >= 1u128 << 63 {
            return Err(FfError::FieldTooLarge);
        }
        let count = p.pow(k);
        for idx in 0..count {
            let cand = monic_from_index(idx, k as usize, p);
            if cand[0] == 0 {
                continue;
            }
            if is_irreducible(&cand, p) {
                return Field::with_modulus(p, cand);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// Extension field with an explicit monic modulus (low to high). The
    /// modulus is verified irreducible.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Field, FfError> {
        Field::prime(p)?;
        let k = modulus.len().saturating_sub(1);
        if k == 0 {
            return Err(FfError::ZeroDegree);
        }
        if modulus[k] != 1 || modulus.iter().any(|&c| c >= p) || !is_irreducible(&modulus, p) {
            return Err(FfError::BadFieldSpec(format!("{p}: {modulus:?}")));
        }
        if k == 1 {
            return Field::prime(p);
        }
        Ok(Field(Arc::new(FieldCtx {
            kind: FieldKind::Extension,
            p,
            k: k as u32,
            modulus,
        })))
    }

    pub fn rationals() -> Field {
        Field(Arc::new(FieldCtx {
            kind: FieldKind::Rational,
            p: 0,
            k: 1,
            modulus: Vec::new(),
        }))
    }

    /// Parses `"p"`, `"p^k"` or `"Q"`.
    pub fn parse(spec: &str) -> Result<Field, FfError> {
        let s = spec.trim();
        if s == "Q" {
            return Ok(Field::rationals());
        }
        let bad = || FfError::BadFieldSpec(spec.to_string());
        match s.split_once('^') {
            Some((p, k)) => {
                let p = parse_u64(p).ok_or_else(bad)?;
                let k = parse_u64(k).ok_or_else(bad)?;
                let k = u32::try_from(k).map_err(|_| bad())?;
                if k > 62 {
                    return Err(FfError::FieldTooLarge);
                }
                Field::extension(p, k)
            }
            None => Field::prime(parse_u64(s).ok_or_else(bad)?),
        }
    }

    /// Canonical spec string; `parse(spec())` reproduces the field.
    pub fn spec(&self) -> String {
        match self.0.kind {
            FieldKind::Prime => self.0.p.to_string(),
            FieldKind::Extension => format!("{}^{}", self.0.p, self.0.k),
            FieldKind::Rational => "Q".to_string(),
        }
    }

    pub fn kind(&self) -> FieldKind {
        self.0.kind
    }

    /// The characteristic; 0 for the rationals.
    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.k
    }

    /// Modulus coefficients, low to high (empty unless an extension).
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    /// Number of elements, `None` for the rationals.
    pub fn size(&self) -> Option<u64> {
        match self.0.kind {
            FieldKind::Rational => None,
            _ => Some(self.0.p.pow(self.0.k)),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.0.kind != FieldKind::Rational
    }

    pub fn zero(&self) -> Elem {
        match self.0.kind {
            FieldKind::Prime => Elem::Fp(0),
            FieldKind::Extension => Elem::Ext(vec![0; self.0.k as usize].into_boxed_slice()),
            FieldKind::Rational => Elem::Q(Box::new(BigRational::zero())),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Elem {
        match self.0.kind {
            FieldKind::Prime => Elem::Fp(v.rem_euclid(self.0.p as i64) as u64),
            FieldKind::Extension => {
                let mut c = vec![0; self.0.k as usize];
                c[0] = v.rem_euclid(self.0.p as i64) as u64;
                Elem::Ext(c.into_boxed_slice())
            }
            FieldKind::Rational => Elem::Q(Box::new(BigRational::from_integer(BigInt::from(v)))),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Elem {
        match self.0.kind {
            FieldKind::Rational => Elem::Q(Box::new(BigRational::from_integer(v.clone()))),
            _ => {
                let r = v.mod_floor(&BigInt::from(self.0.p)).to_u64().unwrap_or(0);
                self.from_i64(r as i64)
            }
        }
    }

    /// Maps a rational into the field (its image under the prime-subfield map).
    pub fn from_rational(&self, q: &BigRational) -> Result<Elem, FfError> {
        if self.0.kind == FieldKind::Rational {
            return Ok(Elem::Q(Box::new(q.clone())));
        }
        let den = self.from_bigint(q.denom());
        if self.is_zero(&den) {
            return Err(FfError::DenominatorVanishes(q.to_string()));
        }
        let num = self.from_bigint(q.numer());
        Ok(self.mul(&num, &self.inv(&den)?))
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Fp(v) => *v == 0,
            Elem::Ext(c) => c.iter().all(|&x| x == 0),
            Elem::Q(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        *a == self.one()
    }

    /// Whether `a` is a canonical representative of an element of this field.
    pub fn contains(&self, a: &Elem) -> bool {
        match (self.0.kind, a) {
            (FieldKind::Prime, Elem::Fp(v)) => *v < self.0.p,
            (FieldKind::Extension, Elem::Ext(c)) => {
                c.len() == self.0.k as usize && c.iter().all(|&x| x < self.0.p)
            }
            (FieldKind::Rational, Elem::Q(q)) => q.denom().is_positive(),
            _ => false,
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Fp(x), Elem::Fp(y)) => {
                let s = x + y;
                Elem::Fp(if s >= self.0.p { s - self.0.p } else { s })
            }
            (Elem::Ext(x), Elem::Ext(y)) => {
                let p = self.0.p;
                Elem::Ext(x.iter().zip(y.iter()).map(|(u, v)| (u + v) % p).collect())
            }
            (Elem::Q(x), Elem::Q(y)) => Elem::Q(Box::new(&**x + &**y)),
            _ => panic!("field element kinds disagree"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match a {
            Elem::Fp(x) => Elem::Fp(if *x == 0 { 0 } else { self.0.p - x }),
            Elem::Ext(c) => {
                let p = self.0.p;
                Elem::Ext(c.iter().map(|&x| (p - x) % p).collect())
            }
            Elem::Q(q) => Elem::Q(Box::new(-&**q)),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Fp(x), Elem::Fp(y)) => Elem::Fp(x * y % self.0.p),
            (Elem::Ext(x), Elem::Ext(y)) => Elem::Ext(self.ext_mul(x, y)),
            (Elem::Q(x), Elem::Q(y)) => Elem::Q(Box::new(&**x * &**y)),
            _ => panic!("field element kinds disagree"),
        }
    }

    fn ext_mul(&self, x: &[u64], y: &[u64]) -> Box<[u64]> {
        let p = self.0.p;
        let k = self.0.k as usize;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % p;
            }
        }
        let m = &self.0.modulus;
        for top in (k..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &mc) in m.iter().take(k).enumerate() {
                let t = c * mc % p;
                let at = top - k + i;
                prod[at] = (prod[at] + p - t) % p;
            }
        }
        prod.truncate(k);
        prod.into_boxed_slice()
    }

    pub fn pow(&self, a: &Elem, mut exp: u64) -> Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Inverse via `a^{q-2}` in finite fields, reciprocal over the rationals.
    pub fn inv(&self, a: &Elem) -> Result<Elem, FfError> {
        if self.is_zero(a) {
            return Err(FfError::ZeroInversion);
        }
        Ok(match a {
            Elem::Q(q) => Elem::Q(Box::new(q.recip())),
            _ => self.pow(a, self.size().expect("finite") - 2),
        })
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem, FfError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Inverts every entry with a single field inversion (prefix products).
    /// On a zero entry returns its index.
    pub fn batch_inv(&self, xs: &[Elem]) -> Result<Vec<Elem>, usize> {
        let mut prefix = Vec::with_capacity(xs.len());
        let mut acc = self.one();
        for (i, x) in xs.iter().enumerate() {
            if self.is_zero(x) {
                return Err(i);
            }
            prefix.push(acc.clone());
            acc = self.mul(&acc, x);
        }
        let mut inv = self.inv(&acc).expect("product of nonzero elements");
        let mut out = vec![self.zero(); xs.len()];
        for i in (0..xs.len()).rev() {
            out[i] = self.mul(&inv, &prefix[i]);
            inv = self.mul(&inv, &xs[i]);
        }
        Ok(out)
    }

    /// Element with index `idx` in the canonical enumeration of a finite
    /// field: base-`p` digits of `idx` are the coefficients, low to high.
    pub fn elem_from_index(&self, mut idx: u64) -> Elem {
        match self.0.kind {
            FieldKind::Prime => Elem::Fp(idx % self.0.p),
            FieldKind::Extension => {
                let p = self.0.p;
                let mut c = Vec::with_capacity(self.0.k as usize);
                for _ in 0..self.0.k {
                    c.push(idx % p);
                    idx /= p;
                }
                Elem::Ext(c.into_boxed_slice())
            }
            FieldKind::Rational => self.from_i64(idx as i64),
        }
    }

    /// Inverse of [`Field::elem_from_index`]; `None` over the rationals.
    pub fn index_of(&self, a: &Elem) -> Option<u64> {
        match a {
            Elem::Fp(v) => Some(*v),
            Elem::Ext(c) => Some(c.iter().rev().fold(0u64, |acc, &x| acc * self.0.p + x)),
            Elem::Q(_) => None,
        }
    }

    /// All elements of a finite field in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        let n = self.size().unwrap_or(0);
        (0..n).map(move |i| self.elem_from_index(i))
    }

    /// Uniform sample from a finite field; over the rationals an integer
    /// drawn uniformly from `[0, rational_bound)`.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R, rational_bound: u64) -> Elem {
        match self.size() {
            Some(q) => self.elem_from_index(rng.gen_range(0..q)),
            None => self.from_i64(rng.gen_range(0..rational_bound.max(1)) as i64),
        }
    }

    /// Image of an element of `sub` under the inclusion `sub ⊆ self`.
    /// Supported inclusions: identity, and `F_p ⊆ F_{p^k}`.
    pub fn embed(&self, sub: &Field, a: &Elem) -> Result<Elem, FfError> {
        if sub == self {
            return Ok(a.clone());
        }
        match (sub.kind(), self.kind(), a) {
            (FieldKind::Prime, FieldKind::Extension, Elem::Fp(v)) if sub.0.p == self.0.p => {
                Ok(self.from_i64(*v as i64))
            }
            _ => Err(FfError::NotASubfield(sub.spec(), self.spec())),
        }
    }

    /// Rational lift of an element: residues map to their representative in
    /// `[0, p)`; only prime fields and the rationals lift.
    pub fn lift_to_rational(&self, a: &Elem) -> Option<BigRational> {
        match a {
            Elem::Fp(v) => Some(BigRational::from_integer(BigInt::from(*v))),
            Elem::Q(q) => Some((**q).clone()),
            Elem::Ext(_) => None,
        }
    }

    pub fn format_elem(&self, a: &Elem) -> String {
        match a {
            Elem::Fp(v) => v.to_string(),
            Elem::Ext(c) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("[{}]", parts.join(","))
            }
            Elem::Q(q) => {
                if q.is_integer() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
        }
    }

    /// Parses an element: a (signed) integer or fraction reduced into the
    /// field, or `[c0,c1,...]` for extension fields.
    pub fn parse_elem(&self, s: &str) -> Result<Elem, FfError> {
        let bad = || FfError::BadElement(s.to_string());
        let t = s.trim();
        if let Some(inner) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            if self.kind() != FieldKind::Extension {
                return Err(bad());
            }
            let coeffs: Vec<u64> = inner
                .split(',')
                .map(|c| parse_u64(c.trim()).filter(|&v| v < self.0.p))
                .collect::<Option<_>>()
                .ok_or_else(bad)?;
            if coeffs.len() != self.0.k as usize {
                return Err(bad());
            }
            return Ok(Elem::Ext(coeffs.into_boxed_slice()));
        }
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let parse_int = |x: &str| -> Option<BigInt> {
            if x.is_empty() || x.len() > 4096 || !x.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            x.parse::<BigInt>().ok()
        };
        let q = match body.split_once('/') {
            Some((n, d)) => {
                let n = parse_int(n).ok_or_else(bad)?;
                let d = parse_int(d).ok_or_else(bad)?;
                if d.is_zero() {
                    return Err(bad());
                }
                BigRational::new(n, d)
            }
            None => BigRational::from_integer(parse_int(body).ok_or_else(bad)?),
        };
        let q = if neg { -q } else { q };
        self.from_rational(&q)
    }

    pub fn tag(&self, value: Elem) -> FieldElem {
        FieldElem {
            field: self.clone(),
            value,
        }
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.spec())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec())
    }
}

/// A field element bound to its field. Binary operations check that both
/// operands come from the same field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    field: Field,
    value: Elem,
}

impl FieldElem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> &Elem {
        &self.value
    }

    pub fn into_value(self) -> Elem {
        self.value
    }

    fn same(&self, other: &FieldElem) -> Result<(), FfError> {
        if self.field != other.field {
            return Err(FfError::MixedContexts(self.field.spec(), other.field.spec()));
        }
        Ok(())
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem, FfError> {
        self.same(other)?;
        Ok(self.field.tag(self.field.add(&self.value, &other.value)))
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem, FfError> {
        self.same(other)?;
        Ok(self.field.tag(self.field.sub(&self.value, &other.value)))
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem, FfError> {
        self.same(other)?;
        Ok(self.field.tag(self.field.mul(&self.value, &other.value)))
    }

    pub fn neg(&self) -> FieldElem {
        self.field.tag(self.field.neg(&self.value))
    }

    pub fn pow(&self, exp: u64) -> FieldElem {
        self.field.tag(self.field.pow(&self.value, exp))
    }

    pub fn inv(&self) -> Result<FieldElem, FfError> {
        Ok(self.field.tag(self.field.inv(&self.value)?))
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero(&self.value)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format_elem(&self.value))
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.field)
    }
}

/// `binom(n, k)` as an exact big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn inverse_examples() {
        let f5 = fp(5);
        assert_eq!(f5.inv(&Elem::Fp(2)).unwrap(), Elem::Fp(3));
        let f7 = fp(7);
        assert_eq!(f7.inv(&Elem::Fp(3)).unwrap(), Elem::Fp(5));
        for f in [fp(5), Field::rationals(), Field::extension(3, 2).unwrap()] {
            assert_eq!(f.inv(&f.one()).unwrap(), f.one());
            assert_eq!(f.inv(&f.zero()), Err(FfError::ZeroInversion));
        }
    }

    #[test]
    fn moduli() {
        assert_eq!(Field::extension(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(Field::extension(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(Field::extension(7, 1).unwrap(), fp(7));
        assert_eq!(Field::extension(4, 2), Err(FfError::NotPrime(4)));
        let a = Field::extension(5, 3).unwrap();
        let b = Field::extension(5, 3).unwrap();
        assert_eq!(a.modulus(), b.modulus());
    }

    #[test]
    fn ring_examples() {
        let f5 = fp(5);
        assert_eq!(f5.add(&Elem::Fp(4), &Elem::Fp(3)), Elem::Fp(2));
        let q = Field::rationals();
        let half = q.parse_elem("1/2").unwrap();
        let third = q.parse_elem("1/3").unwrap();
        assert_eq!(q.format_elem(&q.add(&half, &third)), "5/6");
        let f9 = Field::extension(3, 2).unwrap();
        let x = f9.parse_elem("[0,1]").unwrap();
        assert_eq!(f9.mul(&x, &x), f9.from_i64(2));
    }

    #[test]
    fn mixed_contexts_rejected() {
        let a = fp(5).tag(Elem::Fp(1));
        let b = fp(7).tag(Elem::Fp(1));
        assert!(matches!(a.add(&b), Err(FfError::MixedContexts(_, _))));
        assert_eq!(a.add(&a).unwrap().value(), &Elem::Fp(2));
    }

    #[test]
    fn fermat_exhaustive_small_fields() {
        for (p, k) in [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (7, 2), (3, 3)] {
            let f = Field::extension(p, k).unwrap();
            let q = f.size().unwrap();
            assert!(q <= 49);
            for a in f.elements().skip(1) {
                assert_eq!(f.pow(&a, q - 1), f.one(), "field {f} element {a:?}");
                let ai = f.inv(&a).unwrap();
                assert_eq!(f.mul(&a, &ai), f.one());
            }
        }
    }

    #[test]
    fn rational_inverse_random() {
        let q = Field::rationals();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n: i64 = rng.gen_range(-1000..1000);
            let d: i64 = rng.gen_range(1..1000);
            if n == 0 {
                continue;
            }
            let a = q.from_rational(&BigRational::new(n.into(), d.into())).unwrap();
            assert_eq!(q.mul(&a, &q.inv(&a).unwrap()), q.one());
        }
    }

    #[test]
    fn spec_round_trip() {
        for s in ["5", "2^3", "Q", "13"] {
            assert_eq!(Field::parse(s).unwrap().spec(), s);
        }
        assert_eq!(Field::parse("7^1").unwrap().spec(), "7");
        for s in ["", "x", "4", "2^0", "-3", "5^", "^2"] {
            assert!(Field::parse(s).is_err(), "{s}");
        }
    }

    #[test]
    fn index_round_trip() {
        let f = Field::extension(3, 2).unwrap();
        for i in 0..9 {
            assert_eq!(f.index_of(&f.elem_from_index(i)), Some(i));
        }
        assert_eq!(fp(5).parse_elem("-1").unwrap(), Elem::Fp(4));
        assert_eq!(fp(5).parse_elem("1/2").unwrap(), Elem::Fp(3));
        assert!(fp(5).parse_elem("1/5").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(8, 3), BigInt::from(56));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(10, 0), BigInt::one());
    }
}
