use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::ff::{Elem, Field};

use super::dense::{cube_values, scan_cube, DenseMl, DENSE_VAR_CAP};
use super::monomial::{Monomial, MonomialOrder};
use super::var::VarId;
use super::PolyError;

/// Default cap on the number of variables for Boolean-cube enumeration.
pub const CUBE_CAP: usize = 24;

/// Sparse polynomial over a runtime field.
///
/// Terms are kept in grlex-ascending order with no zero coefficients, so two
/// polynomials are equal iff their term maps are identical and the leading
/// monomial is the last key.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    terms: BTreeMap<Monomial, Elem>,
}

/// `input = remainder + Σ_v quotients[v] · (v² − v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolReduction {
    pub remainder: Poly,
    pub quotients: BTreeMap<VarId, Poly>,
}

impl BoolReduction {
    /// Re-expands the identity's right-hand side.
    pub fn reexpand(&self) -> Poly {
        let field = self.remainder.field();
        let mut acc = self.remainder.clone();
        for (&v, h) in &self.quotients {
            acc = acc.add(&h.mul(&Poly::boolean_axiom(field, v)));
        }
        acc
    }
}

impl Poly {
    pub fn zero(field: &Field) -> Poly {
        Poly {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Field, c: Elem) -> Poly {
        Poly::monomial(field, Monomial::one(), c)
    }

    pub fn from_i64(field: &Field, c: i64) -> Poly {
        Poly::constant(field, field.from_i64(c))
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, field.one())
    }

    pub fn var(field: &Field, v: VarId) -> Poly {
        Poly::monomial(field, Monomial::var(v), field.one())
    }

    pub fn monomial(field: &Field, m: Monomial, c: Elem) -> Poly {
        let mut terms = BTreeMap::new();
        if !field.is_zero(&c) {
            terms.insert(m, c);
        }
        Poly {
            field: field.clone(),
            terms,
        }
    }

    /// Sums the given terms, merging repeated monomials.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Elem)>>(field: &Field, terms: I) -> Poly {
        let mut acc: HashMap<Monomial, Elem> = HashMap::new();
        for (m, c) in terms {
            accumulate(field, &mut acc, m, c);
        }
        Poly::from_hash(field, acc)
    }

    fn from_hash(field: &Field, acc: HashMap<Monomial, Elem>) -> Poly {
        Poly {
            field: field.clone(),
            terms: acc.into_iter().filter(|(_, c)| !field.is_zero(c)).collect(),
        }
    }

    /// `v² − v`.
    pub fn boolean_axiom(field: &Field, v: VarId) -> Poly {
        Poly::from_terms(
            field,
            [
                (Monomial::var_pow(v, 2), field.one()),
                (Monomial::var(v), field.from_i64(-1)),
            ],
        )
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Terms in grlex-ascending order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Elem)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn term_map(&self) -> &BTreeMap<Monomial, Elem> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.field.is_one(&self.coeff(&Monomial::one()))
    }

    pub fn coeff(&self, m: &Monomial) -> Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term(&self) -> Elem {
        self.coeff(&Monomial::one())
    }

    /// Total degree; `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Largest exponent of any single variable (0 for constants).
    pub fn ideg(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|&(_, e)| e))
            .max()
            .unwrap_or(0)
    }

    /// Degree in the single variable `v`.
    pub fn degree_in(&self, v: VarId) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(Monomial::is_multilinear)
    }

    fn check_field(&self, other: &Poly) {
        assert!(
            self.field == other.field,
            "polynomials over different fields ({} vs {})",
            self.field,
            other.field
        );
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check_field(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly {
            field: f.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(c))).collect(),
        }
    }

    /// Adds `c · m` in place.
    pub fn add_term(&mut self, m: Monomial, c: Elem) {
        let f = &self.field;
        if f.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = f.add(old, &c);
                if f.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &Elem) -> Poly {
        let f = &self.field;
        if f.is_zero(c) {
            return Poly::zero(f);
        }
        Poly {
            field: f.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), f.mul(a, c))).collect(),
        }
    }

    pub fn add_const(&self, c: &Elem) -> Poly {
        let mut out = self.clone();
        out.add_term(Monomial::one(), c.clone());
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check_field(other);
        self.mul_with(other, |m| m)
    }

    fn mul_with<F: Fn(Monomial) -> Monomial>(&self, other: &Poly, reduce: F) -> Poly {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Poly::zero(f);
        }
        let mut acc: HashMap<Monomial, Elem> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                accumulate(f, &mut acc, reduce(ma.mul(mb)), f.mul(ca, cb));
            }
        }
        Poly::from_hash(f, acc)
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Elem) -> Poly {
        let f = &self.field;
        if f.is_zero(c) {
            return Poly::zero(f);
        }
        Poly {
            field: f.clone(),
            terms: self.terms.iter().map(|(a, b)| (a.mul(m), f.mul(b, c))).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multilinearization: every positive exponent collapses to 1.
    pub fn ml(&self) -> Poly {
        Poly::from_terms(&self.field, self.terms.iter().map(|(m, c)| (m.support(), c.clone())))
    }

    /// `ml(self · other)` without materializing the full product.
    pub fn ml_mul(&self, other: &Poly) -> Poly {
        self.check_field(other);
        self.mul_with(other, |m| m.support())
    }

    /// `ml(self^e)`.
    ///
    /// With at most [`DENSE_VAR_CAP`] variables this goes through cube values
    /// (pointwise power, then interpolation); otherwise it is iterated
    /// squaring with multilinearization after every product.
    pub fn ml_pow(&self, e: u64) -> Poly {
        if e == 0 {
            return Poly::one(&self.field);
        }
        let vars: Vec<VarId> = self.vars().into_iter().collect();
        if vars.len() <= DENSE_VAR_CAP {
            let f = &self.field;
            let vals = cube_values(self, &vars);
            let powered: Vec<Elem> = vals.iter().map(|v| f.pow(v, e)).collect();
            return DenseMl::from_values(f, vars, powered).to_poly();
        }
        self.ml_pow_sparse(e)
    }

    /// Iterated multiply-then-multilinearize; the reference route for
    /// [`Poly::ml_pow`].
    pub fn ml_pow_sparse(&self, mut e: u64) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut base = self.ml();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.ml_mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.ml_mul(&base);
            }
        }
        acc
    }

    /// Reduction modulo the Boolean ideal with explicit quotients.
    ///
    /// Each exponent `e ≥ 2` of a variable `v` is lowered via
    /// `v^e − v = (v^{e−2} + … + v + 1)(v² − v)`, charging the cofactor to
    /// `quotients[v]`.
    pub fn bool_reduce(&self) -> BoolReduction {
        let f = &self.field;
        let mut rem: HashMap<Monomial, Elem> = HashMap::new();
        let mut quo: BTreeMap<VarId, HashMap<Monomial, Elem>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut cur: Vec<(VarId, u32)> = m.factors().to_vec();
            for idx in 0..cur.len() {
                let (v, e) = cur[idx];
                if e < 2 {
                    continue;
                }
                let rest = Monomial::from_sorted_unchecked(
                    cur.iter().copied().filter(|&(x, _)| x != v).collect(),
                );
                let q = quo.entry(v).or_default();
                for k in 0..=(e - 2) {
                    accumulate(f, q, rest.mul(&Monomial::var_pow(v, k)), c.clone());
                }
                cur[idx].1 = 1;
            }
            accumulate(f, &mut rem, Monomial::from_sorted_unchecked(cur), c.clone());
        }
        BoolReduction {
            remainder: Poly::from_hash(f, rem),
            quotients: quo
                .into_iter()
                .map(|(v, q)| (v, Poly::from_hash(f, q)))
                .filter(|(_, q)| !q.is_zero())
                .collect(),
        }
    }

    pub fn leading_monomial(&self, ord: MonomialOrder) -> Result<Monomial, PolyError> {
        self.leading_term(ord).map(|(m, _)| m)
    }

    pub fn leading_term(&self, ord: MonomialOrder) -> Result<(Monomial, Elem), PolyError> {
        let best = if ord == MonomialOrder::GRLEX {
            self.terms.iter().next_back()
        } else {
            self.terms.iter().max_by(|a, b| ord.cmp(a.0, b.0))
        };
        best.map(|(m, c)| (m.clone(), c.clone())).ok_or(PolyError::ZeroPolynomial)
    }

    /// Evaluates with values supplied by `asg`; every variable of the
    /// polynomial must be assigned.
    pub fn eval_with<F: Fn(VarId) -> Option<Elem>>(&self, asg: F) -> Result<Elem, PolyError> {
        let f = &self.field;
        let mut cache: HashMap<VarId, Elem> = HashMap::new();
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.factors() {
                let val = match cache.get(&v) {
                    Some(x) => x.clone(),
                    None => {
                        let x = asg(v).ok_or(PolyError::MissingVariable(v))?;
                        cache.insert(v, x.clone());
                        x
                    }
                };
                t = f.mul(&t, &f.pow(&val, u64::from(e)));
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }

    pub fn eval(&self, asg: &BTreeMap<VarId, Elem>) -> Result<Elem, PolyError> {
        self.eval_with(|v| asg.get(&v).cloned())
    }

    /// Evaluates at a point of a field containing this polynomial's field.
    pub fn eval_in<F: Fn(VarId) -> Option<Elem>>(&self, target: &Field, asg: F) -> Result<Elem, PolyError> {
        self.embed(target)?.eval_with(asg)
    }

    /// Image of the polynomial under the inclusion into `target`.
    pub fn embed(&self, target: &Field) -> Result<Poly, PolyError> {
        if *target == self.field {
            return Ok(self.clone());
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.clone(), target.embed(&self.field, c)?);
        }
        Ok(Poly {
            field: target.clone(),
            terms,
        })
    }

    /// Simultaneous substitution of polynomials for variables; unmapped
    /// variables are left alone.
    pub fn subst(&self, map: &BTreeMap<VarId, Poly>) -> Poly {
        let f = &self.field;
        let mut powers: HashMap<(VarId, u32), Poly> = HashMap::new();
        let mut acc: HashMap<Monomial, Elem> = HashMap::new();
        for (m, c) in &self.terms {
            let mut keep: Vec<(VarId, u32)> = Vec::new();
            let mut t = Poly::constant(f, c.clone());
            for &(v, e) in m.factors() {
                match map.get(&v) {
                    Some(p) => {
                        let pe = powers.entry((v, e)).or_insert_with(|| p.pow(u64::from(e)));
                        t = t.mul(pe);
                    }
                    None => keep.push((v, e)),
                }
            }
            let rest = Monomial::from_sorted_unchecked(keep);
            for (tm, tc) in &t.terms {
                accumulate(f, &mut acc, tm.mul(&rest), tc.clone());
            }
        }
        Poly::from_hash(f, acc)
    }

    /// Substitutes field constants for some variables.
    pub fn subst_consts(&self, asg: &BTreeMap<VarId, Elem>) -> Poly {
        let f = &self.field;
        let mut acc: HashMap<Monomial, Elem> = HashMap::new();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut keep = Vec::new();
            for &(v, e) in m.factors() {
                match asg.get(&v) {
                    Some(val) => coef = f.mul(&coef, &f.pow(val, u64::from(e))),
                    None => keep.push((v, e)),
                }
            }
            accumulate(f, &mut acc, Monomial::from_sorted_unchecked(keep), coef);
        }
        Poly::from_hash(f, acc)
    }

    /// Renames variables; the map must be injective on this polynomial's
    /// variables.
    pub fn rename<F: Fn(VarId) -> VarId>(&self, map: F) -> Poly {
        Poly::from_terms(
            &self.field,
            self.terms.iter().map(|(m, c)| {
                (Monomial::from_factors(m.factors().iter().map(|&(v, e)| (map(v), e))), c.clone())
            }),
        )
    }

    /// The set of values taken on `{0,1}^vars(f)`.
    pub fn boolean_image(&self, cap: usize) -> Result<BTreeSet<Elem>, PolyError> {
        let vars: Vec<VarId> = self.vars().into_iter().collect();
        if vars.len() > cap {
            return Err(PolyError::TooManyVariables { n: vars.len(), cap });
        }
        let mut image = BTreeSet::new();
        scan_cube(std::slice::from_ref(self), &vars, |_, vals| {
            image.extend(vals[0].iter().cloned());
            true
        });
        Ok(image)
    }

    /// Splits `f = Σ_m g_m · m` by the monomial part over variables
    /// satisfying `pred`; keys are those monomials.
    pub fn group_by<P: Fn(VarId) -> bool>(&self, pred: P) -> BTreeMap<Monomial, Poly> {
        let f = &self.field;
        let mut out: BTreeMap<Monomial, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (key, rest) = m.split(&pred);
            out.entry(key)
                .or_insert_with(|| Poly::zero(f))
                .add_term(rest, c.clone());
        }
        out
    }

    /// Keeps only the terms whose monomial satisfies `keep`.
    pub fn filter_terms<P: Fn(&Monomial) -> bool>(&self, keep: P) -> Poly {
        Poly {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Division with remainder by a single divisor in grlex order. The
    /// remainder is zero iff `d` divides `self`.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly), PolyError> {
        self.check_field(d);
        let f = &self.field;
        let (lm, lc) = d.leading_term(MonomialOrder::GRLEX)?;
        let lc_inv = f.inv(&lc)?;
        let mut p = self.clone();
        let mut q = Poly::zero(f);
        let mut r = Poly::zero(f);
        while let Some((m, c)) = p.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            match m.div(&lm) {
                Some(t) => {
                    let coef = f.mul(&c, &lc_inv);
                    p = p.sub(&d.mul_monomial(&t, &coef));
                    q.add_term(t, coef);
                }
                None => {
                    p.terms.remove(&m);
                    r.add_term(m, c);
                }
            }
        }
        Ok((q, r))
    }

    /// `self / d` when the division is exact.
    pub fn div_exact(&self, d: &Poly) -> Result<Option<Poly>, PolyError> {
        let (q, r) = self.div_rem(d)?;
        Ok(r.is_zero().then_some(q))
    }

    /// Reduction modulo the field equations `v^q − v` for every variable.
    pub fn reduce_field(&self, q: u64) -> Poly {
        assert!(q >= 2);
        let q1 = (q - 1) as u32;
        Poly::from_terms(
            &self.field,
            self.terms.iter().map(|(m, c)| {
                let m = Monomial::from_factors(
                    m.factors().iter().map(|&(v, e)| (v, if e == 0 { 0 } else { (e - 1) % q1 + 1 })),
                );
                (m, c.clone())
            }),
        )
    }
}

pub(crate) fn accumulate(field: &Field, acc: &mut HashMap<Monomial, Elem>, m: Monomial, c: Elem) {
    if field.is_zero(&c) {
        return;
    }
    match acc.get_mut(&m) {
        Some(old) => *old = field.add(old, &c),
        None => {
            acc.insert(m, c);
        }
    }
}

/// `e_d(vars)`: the sum over all `d`-subsets of the product of their
/// variables.
pub fn e_sym(field: &Field, d: usize, vars: &[VarId]) -> Result<Poly, PolyError> {
    if d > vars.len() {
        return Err(PolyError::DegreeOutOfRange { d, n: vars.len() });
    }
    e_sym_of(field, d, &vars.iter().map(|&v| Poly::var(field, v)).collect::<Vec<_>>())
}

/// `e_d` applied to arbitrary polynomials (no multilinearization).
pub fn e_sym_of(field: &Field, d: usize, items: &[Poly]) -> Result<Poly, PolyError> {
    if d > items.len() {
        return Err(PolyError::DegreeOutOfRange { d, n: items.len() });
    }
    // table[k] = e_k of the items seen so far
    let mut table: Vec<Poly> = vec![Poly::one(field)];
    table.extend((0..d).map(|_| Poly::zero(field)));
    for it in items {
        for k in (1..=d).rev() {
            let t = table[k - 1].mul(it);
            table[k] = table[k].add(&t);
        }
    }
    Ok(table.swap_remove(d))
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poly[{}]({})", self.field, self)
    }
}
