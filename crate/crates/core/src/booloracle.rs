//! Brute-force oracles for the degree, rank and counting facts behind the
//! lower bounds, computed exactly at desk scale.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dims::{coeff_dim, coeff_matrix, poly_entry_rank, word_matrix_projected, DimError, RankMode, RankStrategy};
use crate::ff::{binomial, is_prime, Elem, FfError, Field, FieldKind};
use crate::instances::{
    anyorder_gadget, anyorder_pre, indicator, ks_modp, lift_xy, lift_y, roabp_hard_poly, x, z, InstanceError,
};
use crate::mpoly::{cube_values, e_sym, DenseMl, Monomial, MonomialOrder, Poly, PolyError, VarId, DENSE_VAR_CAP};
use crate::wordspec::{derive_blocks, is_balanced, restrict, sml_monomials, Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("polynomial vanishes at the Boolean point {0}")]
    BooleanRoot(String),
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("β = {0} is a pole of the identity")]
    BetaPole(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} exceeds the configured cap")]
    TooLarge(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Dim(#[from] DimError),
    #[error(transparent)]
    Field(#[from] FfError),
}

/// Size limits for the exponential-time oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Variables in an interpolation.
    pub interp: usize,
    /// Total variables in a rank-lemma word.
    pub rank_vars: usize,
    /// `2n` in the leading-monomial census.
    pub census: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            interp: 20,
            rank_vars: 14,
            census: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub lemma: String,
    pub params: BTreeMap<String, String>,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
    /// Number of individual checks behind the verdict.
    pub cases: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

impl OracleReport {
    pub fn new(lemma: &str) -> OracleReport {
        OracleReport {
            lemma: lemma.to_string(),
            params: BTreeMap::new(),
            expected: String::new(),
            computed: String::new(),
            pass: true,
            cases: 0,
            failures: Vec::new(),
        }
    }

    pub fn param(mut self, k: &str, v: impl ToString) -> OracleReport {
        self.params.insert(k.to_string(), v.to_string());
        self
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.pass = false;
            if self.failures.len() < 20 {
                self.failures.push(what());
            }
        }
    }

    /// Folds several reports into one summary.
    pub fn aggregate(lemma: &str, parts: &[OracleReport]) -> OracleReport {
        let mut r = OracleReport::new(lemma);
        r.cases = parts.iter().map(|p| p.cases).sum();
        r.pass = parts.iter().all(|p| p.pass);
        r.expected = format!("{} passing reports", parts.len());
        r.computed = format!("{} passing", parts.iter().filter(|p| p.pass).count());
        for p in parts.iter().filter(|p| !p.pass) {
            r.failures.push(format!("{} {:?}: {}", p.lemma, p.params, p.failures.join("; ")));
        }
        r
    }
}

fn format_point(vars: &[VarId], mask: usize) -> String {
    vars.iter()
        .enumerate()
        .map(|(t, v)| format!("{v}={}", mask >> t & 1))
        .collect::<Vec<_>>()
        .join(",")
}

/// Dense ml-inverse over an explicit variable list.
pub fn ml_inverse_dense(f: &Poly, vars: &[VarId]) -> Result<DenseMl, OracleError> {
    if vars.len() > DENSE_VAR_CAP {
        return Err(OracleError::TooLarge(format!("interpolation over {} variables", vars.len())));
    }
    let field = f.field();
    let vals = cube_values(f, vars);
    let inv = field
        .batch_inv(&vals)
        .map_err(|mask| OracleError::BooleanRoot(format_point(vars, mask)))?;
    Ok(DenseMl::from_values(field, vars.to_vec(), inv))
}

/// The multilinear `g` with `g·F ≡ 1` on the cube, interpolated from the
/// values `F(𝟙_T)^{−1}`.
pub fn ml_inverse(f: &Poly) -> Result<Poly, OracleError> {
    let vars: Vec<VarId> = f.vars().into_iter().collect();
    Ok(ml_inverse_dense(f, &vars)?.to_poly())
}

/// Which degree statement to check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DegLemma {
    /// `Σ x_i − β`.
    SubsetSum { n: u32, beta: Elem },
    /// `Σ ψ_i − β` for multilinear full-degree Boolean `ψ_i` on disjoint
    /// variable sets.
    GeneralPsi { psis: Vec<Poly>, beta: Elem },
    /// `Σ_i ∏_{x∈part_i} (1 − x) − β`.
    Partition { parts: Vec<Vec<VarId>>, beta: Elem },
    /// `e₂(x_1..x_n) − β` over characteristic 0.
    E2Char0 { n: u32, beta: Elem },
}

fn char_allows(field: &Field, bound: usize) -> bool {
    let c = field.characteristic();
    c == 0 || c as usize > bound
}

fn beta_avoids(field: &Field, beta: &Elem, top: usize) -> bool {
    (0..=top).all(|i| field.from_i64(i as i64) != *beta)
}

/// Full-degree check for the ml-inverse of one of the degree lemmas.
pub fn deg_check(field: &Field, lemma: &DegLemma, caps: &Caps) -> Result<OracleReport, OracleError> {
    let (name, poly, n) = match lemma {
        DegLemma::SubsetSum { n, beta } => {
            let n = *n as usize;
            if !char_allows(field, n) {
                return Err(OracleError::ConstraintViolated(format!("char {} ≤ n = {n}", field.characteristic())));
            }
            if !beta_avoids(field, beta, n) {
                return Err(OracleError::ConstraintViolated(format!("β ∈ {{0..{n}}}")));
            }
            let f = (1..=n as u32)
                .fold(Poly::zero(field), |a, i| a.add(&Poly::var(field, x(i))))
                .add_const(&field.neg(beta));
            ("subset-sum", f, n)
        }
        DegLemma::GeneralPsi { psis, beta } => {
            check_psis(field, psis)?;
            let k = psis.len();
            if !char_allows(field, k) {
                return Err(OracleError::ConstraintViolated(format!("char {} ≤ |I| = {k}", field.characteristic())));
            }
            if !beta_avoids(field, beta, k) {
                return Err(OracleError::ConstraintViolated(format!("β ∈ {{0..{k}}}")));
            }
            let f = psis.iter().fold(Poly::zero(field), |a, p| a.add(p)).add_const(&field.neg(beta));
            let n = psis.iter().map(|p| p.vars().len()).sum();
            ("general-psi", f, n)
        }
        DegLemma::Partition { parts, beta } => {
            let psis: Vec<Poly> = parts.iter().map(|p| indicator(field, p)).collect();
            let mut r = deg_check(field, &DegLemma::GeneralPsi { psis, beta: beta.clone() }, caps)?;
            r.lemma = "partition".into();
            return Ok(r);
        }
        DegLemma::E2Char0 { n, beta } => {
            if field.characteristic() != 0 {
                return Err(OracleError::ConstraintViolated("needs characteristic 0".into()));
            }
            if *n < 2 {
                return Err(OracleError::ConstraintViolated("needs n > 1".into()));
            }
            let vars: Vec<VarId> = (1..=*n).map(x).collect();
            let f = e_sym(field, 2, &vars)?.add_const(&field.neg(beta));
            ("e2-char0", f, *n as usize)
        }
    };
    let vars: Vec<VarId> = poly.vars().into_iter().collect();
    if vars.len() > caps.interp {
        return Err(OracleError::TooLarge(format!("{} variables", vars.len())));
    }
    let g = ml_inverse_dense(&poly, &vars)?;
    let deg = g.degree().unwrap_or(0) as usize;
    let mut r = OracleReport::new(name).param("field", field.spec()).param("n", n);
    r.expected = format!("deg {n}");
    r.computed = format!("deg {deg}");
    r.check(deg == n, || format!("degree {deg} ≠ {n}"));
    // Symbolic product for small n, pointwise on the cube beyond that.
    let one = if vars.len() <= 8 {
        g.to_poly().mul(&poly).bool_reduce().remainder.is_one()
    } else {
        let fv = cube_values(&poly, &vars);
        g.values().iter().zip(&fv).all(|(a, b)| field.mul(a, b) == field.one())
    };
    r.check(one, || "g·F ≠ 1 on the cube".into());
    Ok(r)
}

fn check_psis(field: &Field, psis: &[Poly]) -> Result<(), OracleError> {
    let mut seen = BTreeSet::new();
    for p in psis {
        let vs = p.vars();
        if !vs.is_disjoint(&seen) {
            return Err(OracleError::ConstraintViolated("ψ variable sets overlap".into()));
        }
        if !p.is_multilinear() || p.degree().unwrap_or(0) as usize != vs.len() {
            return Err(OracleError::ConstraintViolated(format!("ψ = {p} is not multilinear of full degree")));
        }
        let img = p.boolean_image(DENSE_VAR_CAP)?;
        if !img.iter().all(|e| field.is_zero(e) || field.is_one(e)) {
            return Err(OracleError::ConstraintViolated(format!("ψ = {p} is not Boolean-valued")));
        }
        seen.extend(vs);
    }
    Ok(())
}

/// `Σ_{j=0}^{k} C(k,j) (−1)^{k−j} / (j − β) = −k! / ∏_{j=0}^{k} (β − j)`.
pub fn leadcoef_identities(k: u32, beta: &BigRational) -> Result<OracleReport, OracleError> {
    if beta.is_integer() && !beta.is_negative() && beta.to_integer() <= BigInt::from(k) {
        return Err(OracleError::BetaPole(beta.to_string()));
    }
    let mut lhs = BigRational::zero();
    let mut prod = BigRational::one();
    for j in 0..=k {
        let jr = BigRational::from_integer(j.into());
        let sign = if (k - j) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        lhs += BigRational::from_integer(binomial(u64::from(k), u64::from(j)) * sign) / (&jr - beta);
        prod *= beta - &jr;
    }
    let fact: BigInt = (1..=u64::from(k)).map(BigInt::from).product();
    let rhs = -BigRational::from_integer(fact) / prod;
    let mut r = OracleReport::new("leadcoef").param("k", k).param("beta", beta);
    r.expected = rhs.to_string();
    r.computed = lhs.to_string();
    r.check(lhs == rhs, || format!("{lhs} ≠ {rhs}"));
    Ok(r)
}

/// Base-`p` digits, least significant first.
pub fn digits(mut m: u64, p: u64) -> Vec<u64> {
    let mut d = Vec::new();
    while m > 0 {
        d.push(m % p);
        m /= p;
    }
    d
}

/// `C(m, n) mod p` by the digit product.
pub fn lucas_residue(m: u64, n: u64, p: u64) -> Result<u64, OracleError> {
    if !is_prime(p) {
        return Err(OracleError::NotPrime(p));
    }
    let (dm, dn) = (digits(m, p), digits(n, p));
    let mut acc = BigInt::one();
    for (i, &ni) in dn.iter().enumerate() {
        let mi = dm.get(i).copied().unwrap_or(0);
        acc *= binomial(mi, ni);
    }
    let r: BigInt = acc % BigInt::from(p);
    Ok(u64::try_from(r).expect("residue fits"))
}

/// Lucas residues against exact binomials on the grid `m, n ≤ bound`, for
/// each prime in `primes`. Exact values come from Pascal's rule.
pub fn lucas_grid(bound: u64, primes: &[u64]) -> Result<Vec<OracleReport>, OracleError> {
    let mut reps: Vec<OracleReport> = primes
        .iter()
        .map(|&p| OracleReport::new("lucas").param("bound", bound).param("p", p))
        .collect();
    let mut row: Vec<BigInt> = vec![BigInt::one()];
    for m in 0..=bound {
        for (rep, &p) in reps.iter_mut().zip(primes) {
            let bp = BigInt::from(p);
            for n in 0..=bound {
                let exact = row.get(n as usize).map_or_else(BigInt::zero, |c| c % &bp);
                let lr = lucas_residue(m, n, p)?;
                rep.check(BigInt::from(lr) == exact, || format!("C({m},{n}) mod {p}: {lr} vs {exact}"));
            }
        }
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigInt::one());
        for k in 1..row.len() {
            next.push(&row[k - 1] + &row[k]);
        }
        next.push(BigInt::one());
        row = next;
    }
    for rep in &mut reps {
        rep.expected = "all residues agree".into();
        rep.computed = format!("{} of {} agree", rep.cases - rep.failures.len() as u64, rep.cases);
    }
    Ok(reps)
}

pub fn lucas(bound: u64, p: u64) -> Result<OracleReport, OracleError> {
    Ok(lucas_grid(bound, &[p])?.remove(0))
}

/// `∏_{d_i ≠ 0} (p − d_i) + 1`.
pub fn sym_bound(d: u64, p: u64) -> u64 {
    digits(d, p).into_iter().filter(|&di| di != 0).map(|di| p - di).product::<u64>() + 1
}

/// Whether `d` has a single nonzero base-`p` digit and it is at least 2.
pub fn single_digit_case(d: u64, p: u64) -> bool {
    let nz: Vec<u64> = digits(d, p).into_iter().filter(|&x| x != 0).collect();
    nz.len() == 1 && nz[0] >= 2
}

/// Image of `e_d` on `{0,1}^n` over `F_p` (it depends only on the weight).
pub fn sym_image_set(d: u64, n: u64, p: u64) -> BTreeSet<u64> {
    (0..=n)
        .map(|m| u64::try_from(binomial(m, d) % BigInt::from(p)).expect("residue"))
        .collect()
}

pub fn sym_image(d: u64, n: u64, p: u64) -> Result<OracleReport, OracleError> {
    if !is_prime(p) {
        return Err(OracleError::NotPrime(p));
    }
    let img = sym_image_set(d, n, p);
    let bound = sym_bound(d, p);
    let mut r = OracleReport::new("sym-image").param("d", d).param("n", n).param("p", p);
    r.expected = format!("|image| ≤ {bound}");
    r.computed = format!("image {img:?}");
    r.check(img.len() as u64 <= bound, || format!("|image| = {} > {bound}", img.len()));
    if single_digit_case(d, p) {
        let beta = (0..p).find(|b| !img.contains(b));
        r.params.insert("beta".into(), beta.map_or("none".into(), |b| b.to_string()));
        r.check(beta.is_some(), || "no β outside the image".into());
    }
    // Cross-check the weight shortcut by evaluating e_d itself on small cubes.
    if n <= 8 && d <= n {
        let f = Field::prime(p)?;
        let vars: Vec<VarId> = (1..=n as u32).map(x).collect();
        let direct: BTreeSet<u64> = cube_values(&e_sym(&f, d as usize, &vars)?, &vars)
            .iter()
            .map(|e| f.index_of(e).expect("prime field element"))
            .collect();
        r.check(direct == img, || format!("enumerated image {direct:?}"));
    }
    Ok(r)
}

/// `ml(e_l · e_d) = Σ_{i=k}^{d} C(l+d−i, l) C(l, i) e_{l+d−i}` with
/// `k = max(0, l+d−n)`.
pub fn el_ed_identity(l: usize, d: usize, n: usize, field: &Field) -> Result<OracleReport, OracleError> {
    if !(n >= l && l >= d) {
        return Err(OracleError::ConstraintViolated(format!("need n ≥ l ≥ d, got {n}, {l}, {d}")));
    }
    let vars: Vec<VarId> = (1..=n as u32).map(x).collect();
    let lhs = e_sym(field, l, &vars)?.ml_mul(&e_sym(field, d, &vars)?);
    let k = (l + d).saturating_sub(n);
    let mut rhs = Poly::zero(field);
    for i in k..=d {
        let c = binomial((l + d - i) as u64, l as u64) * binomial(l as u64, i as u64);
        rhs = rhs.add(&e_sym(field, l + d - i, &vars)?.scale(&field.from_bigint(&c)));
    }
    let mut r = OracleReport::new("el-ed")
        .param("l", l)
        .param("d", d)
        .param("n", n)
        .param("field", field.spec());
    r.expected = rhs.to_string();
    r.computed = lhs.to_string();
    r.check(lhs == rhs, || "expansions differ".into());
    Ok(r)
}

/// Decomposition `f = Σ_m g_m(x̄)·m` over y-role monomials `m`.
pub fn y_decomposition(f: &Poly, layout: &crate::wordspec::BlockLayout) -> BTreeMap<Monomial, Poly> {
    let ys: BTreeSet<VarId> = layout.y_vars().into_iter().collect();
    f.group_by(|v| ys.contains(&v))
}

/// Rank lemma at one word: with `f` the ml-inverse of `ks_{w,p}`,
/// (a) `LM(g_m) = m(σ(m)|_A)` for every set-multilinear `m` over the
/// y-role blocks, and `g_1 = 1/(r−β)`; (b) `M_w(f)` has full rank;
/// (c) `relrk² · 2^b ≥ 1`.
pub fn rank_lemma_oracle(w: &Word, p: u64, caps: &Caps) -> Result<OracleReport, OracleError> {
    if !is_balanced(w) {
        return Err(WordError::NotBalanced(w.to_string()).into());
    }
    let nv = w.num_vars() as usize;
    if nv > caps.rank_vars {
        return Err(OracleError::TooLarge(format!("word with {nv} variables")));
    }
    let field = Field::prime(p)?;
    let built = ks_modp(w, &field, None, None)?;
    let ks = &built.instance.axioms[0];
    let layout = derive_blocks(w);
    let all = layout.all_vars();
    let f = ml_inverse_dense(ks, &all)?.to_poly();
    let r_parts: usize = built.instance.meta.params["r"].parse().expect("numeric r");
    let beta = field.parse_elem(built.instance.meta.beta.as_deref().expect("β recorded"))?;
    let mut rep = OracleReport::new("rank-lemma")
        .param("word", w)
        .param("p", p)
        .param("r", r_parts)
        .param("beta", field.format_elem(&beta));

    let dec = y_decomposition(&f, &layout);
    let g1 = dec.get(&Monomial::one()).cloned().unwrap_or_else(|| Poly::zero(&field));
    let want = field.inv(&field.sub(&field.from_i64(r_parts as i64), &beta))?;
    rep.check(g1 == Poly::constant(&field, want.clone()), || {
        format!("g_1 = {g1}, expected {}", field.format_elem(&want))
    });
    for m in sml_monomials(&layout, layout.y_blocks()) {
        let target = restrict(&layout, &m, layout.x_blocks())?;
        let got = dec.get(&m).map(|g| g.leading_monomial(MonomialOrder::GRLEX));
        rep.check(matches!(&got, Some(Ok(lm)) if *lm == target), || {
            format!("LM(g_{m}) = {got:?}, expected {target}")
        });
    }

    let wm = word_matrix_projected(&f, w)?;
    let rr = wm.relrank();
    let full = wm.rows.len().min(wm.cols.len());
    rep.check(rr.rank == full, || format!("rank {} < {full}", rr.rank));
    let xs: BTreeSet<VarId> = layout.pos.iter().flat_map(|&i| layout.block_vars(i)).collect();
    let ys: BTreeSet<VarId> = layout.neg.iter().flat_map(|&i| layout.block_vars(i)).collect();
    let proj = crate::dims::sml_project(&f, w);
    let cd = coeff_dim(&proj, &xs, &ys)?;
    rep.check(cd == rr.rank, || format!("coefficient dimension {cd} ≠ word-matrix rank {}", rr.rank));
    rep.check(rr.at_least_pow2_neg_half(w.bound()), || {
        format!("relrk² = {} below 2^-{}", rr.squared(), w.bound())
    });
    rep.expected = format!("rank {full}, relrk² ≥ 2^-{}", w.bound());
    rep.computed = format!("rank {}, relrk² = {}", rr.rank, rr.squared());
    Ok(rep)
}

/// All balanced words over `{a, −k}` with at most `max_vars` variables.
pub fn balanced_words(a: u32, k: u32, max_vars: u64) -> Vec<Word> {
    let (ca, ck) = (1u64 << a, 1u64 << k);
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<i64>, u64)> = vec![(Vec::new(), 0)];
    while let Some((w, used)) = stack.pop() {
        if !w.is_empty() {
            if let Ok(word) = Word::new(&w) {
                if is_balanced(&word) {
                    out.push(word);
                }
            }
        }
        for (e, c) in [(a as i64, ca), (-(k as i64), ck)] {
            if used + c <= max_vars {
                let mut nw = w.clone();
                nw.push(e);
                stack.push((nw, used + c));
            }
        }
    }
    out.sort_by_key(|w| w.entries());
    out.dedup();
    out
}

/// Census of leading monomials of `ml(g(x̄, 𝟙_S))`, `g` the ml-inverse of
/// `f(x̄∘ȳ)` for `f = ∏(1−x_i) − 2`.
pub fn lm_census(n: u32, field: &Field, caps: &Caps) -> Result<OracleReport, OracleError> {
    if 2 * n as usize > caps.census {
        return Err(OracleError::TooLarge(format!("census with 2n = {}", 2 * n)));
    }
    let lifted = lift_xy(&roabp_hard_poly(field, n));
    let mut vars: Vec<VarId> = (1..=n).map(x).collect();
    vars.extend((1..=n).map(lift_y));
    let g = ml_inverse_dense(&lifted, &vars)?;
    let mut rep = OracleReport::new("lm-census").param("n", n).param("field", field.spec());
    let mut lms = BTreeSet::new();
    for s in 0..(1u32 << n) {
        let mut d = g.clone();
        for i in 1..=n {
            d = d.subst_boolean(lift_y(i), s >> (i - 1) & 1 == 1);
        }
        let gs = d.to_poly();
        let want = Monomial::from_vars((1..=n).filter(|i| s >> (i - 1) & 1 == 1).map(x));
        match gs.leading_monomial(MonomialOrder::GRLEX) {
            Ok(lm) => {
                rep.check(lm == want, || format!("S = {s:b}: LM {lm}, expected {want}"));
                lms.insert(lm);
            }
            Err(_) => rep.check(false, || format!("S = {s:b}: zero polynomial")),
        }
    }
    rep.expected = format!("{} distinct", 1u64 << n);
    rep.computed = format!("{} distinct", lms.len());
    rep.check(lms.len() == 1usize << n, || format!("{} distinct leading monomials", lms.len()));
    Ok(rep)
}

/// All splits of `x_1..x_{2n}` into two halves `(ū, v̄)` with `x_1 ∈ ū`.
pub fn balanced_partitions(n: u32) -> Vec<(Vec<u32>, Vec<u32>)> {
    let m = 2 * n;
    let mut out = Vec::new();
    for mask in 0u32..(1 << m) {
        if mask.count_ones() != n || (m > 0 && mask & 1 == 0) {
            continue;
        }
        let u: Vec<u32> = (1..=m).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        let v: Vec<u32> = (1..=m).filter(|i| mask >> (i - 1) & 1 == 0).collect();
        out.push((u, v));
    }
    if n == 0 {
        out.push((Vec::new(), Vec::new()));
    }
    out
}

/// The matching `z`-assignment: `z_{i,j} = 1` exactly for pairs `{u_k, v_k}`.
pub fn matching_assignment(n: u32, u: &[u32], v: &[u32]) -> BTreeMap<VarId, bool> {
    let pairs: BTreeSet<(u32, u32)> = u.iter().zip(v).map(|(&a, &b)| (a.min(b), a.max(b))).collect();
    let mut out = BTreeMap::new();
    for i in 1..=2 * n {
        for j in (i + 1)..=2 * n {
            out.insert(z(i, j), pairs.contains(&(i, j)));
        }
    }
    out
}

/// For each balanced partition: the matching restriction of the ml-inverse
/// of `f*` equals the ml-inverse of `f(ū∘v̄)`, and its coefficient
/// dimension across `ū | v̄` is `2^n`. For `n ≤ 2` the dimension over
/// `F(z̄)` is also lower-bounded by random evaluation.
pub fn anyorder_dim_oracle(n: u32, field: &Field) -> Result<OracleReport, OracleError> {
    if n > 3 {
        return Err(OracleError::TooLarge(format!("any-order oracle at n = {n}")));
    }
    let mut rep = OracleReport::new("anyorder-dim").param("n", n).param("field", field.spec());
    let want = 1usize << n;
    if n == 0 {
        rep.check(true, String::new);
        rep.expected = "dim 1".into();
        rep.computed = "dim 1".into();
        return Ok(rep);
    }
    let fstar = anyorder_gadget(&anyorder_pre(field, n));
    let mut vars: Vec<VarId> = (1..=2 * n).map(x).collect();
    for i in 1..=2 * n {
        for j in (i + 1)..=2 * n {
            vars.push(z(i, j));
        }
    }
    let g = ml_inverse_dense(&fstar, &vars)?;
    let gpoly = (n <= 2).then(|| g.to_poly());
    let mut dims = BTreeSet::new();
    for (u, v) in balanced_partitions(n) {
        let asg = matching_assignment(n, &u, &v);
        let mut d = g.clone();
        for (&zv, &bit) in &asg {
            d = d.subst_boolean(zv, bit);
        }
        let restricted = d.to_poly();
        let direct = (1..=n as usize)
            .fold(Poly::one(field), |a, k| {
                let t = Poly::var(field, x(u[k - 1])).mul(&Poly::var(field, x(v[k - 1])));
                a.mul(&Poly::one(field).sub(&t))
            })
            .add_const(&field.from_i64(-2));
        let inv = ml_inverse(&direct)?;
        rep.check(restricted == inv, || format!("partition {u:?}|{v:?}: restriction differs"));
        let us: BTreeSet<VarId> = u.iter().map(|&i| x(i)).collect();
        let vs: BTreeSet<VarId> = v.iter().map(|&i| x(i)).collect();
        let cd = coeff_dim(&restricted, &us, &vs)?;
        dims.insert(cd);
        rep.check(cd == want, || format!("partition {u:?}|{v:?}: dim {cd}"));
        if let Some(gp) = &gpoly {
            let cm = coeff_matrix(gp, &us, &vs)?;
            let bound = (cm.rows.len().min(cm.cols.len()) as u64)
                * cm.entries.iter().flatten().filter_map(Poly::degree).max().unwrap_or(0);
            let ext = sz_extension(field, bound);
            let rr = poly_entry_rank(field, &cm.entries, RankStrategy::Random { trials: 3, ext, seed: 1 })?;
            rep.check(rr.rank >= want, || format!("partition {u:?}|{v:?}: F(z)-rank {} < {want}", rr.rank));
            if let RankMode::Random { sample_field, .. } = &rr.mode {
                rep.params.entry("sample_field".into()).or_insert_with(|| sample_field.clone());
            }
        }
    }
    rep.expected = format!("dim {want} for every partition");
    rep.computed = format!("dims {dims:?}");
    Ok(rep)
}

/// Smallest extension degree with `p^k > bound` (1 over `ℚ`).
pub fn sz_extension(field: &Field, bound: u64) -> u32 {
    if field.kind() == FieldKind::Rational {
        return 1;
    }
    let p = field.characteristic() as u128;
    let mut k = 1;
    let mut q = p;
    while q <= u128::from(bound) {
        k += 1;
        q *= p;
    }
    k
}

/// The suite run by `oracle sweep`: every oracle at sizes up to `cap_n`.
pub fn sweep(cap_n: u32, caps: &Caps) -> Result<Vec<OracleReport>, OracleError> {
    let q = Field::rationals();
    let mut out = Vec::new();
    for n in 2..=cap_n.min(12) {
        out.push(deg_check(&q, &DegLemma::SubsetSum { n, beta: q.from_i64(i64::from(n) + 3) }, caps)?);
        out.push(deg_check(&q, &DegLemma::E2Char0 { n, beta: q.from_i64(2) }, caps)?);
        let parts = chunked_parts(n);
        out.push(deg_check(&q, &DegLemma::Partition { parts, beta: q.from_i64(-1) }, caps)?);
    }
    for p in [5u64, 7] {
        for w in balanced_words(1, 1, 10.min(caps.rank_vars as u64))
            .into_iter()
            .chain(balanced_words(1, 2, 10.min(caps.rank_vars as u64)))
        {
            out.push(rank_lemma_oracle(&w, p, caps)?);
        }
    }
    for p in [2u64, 3, 5] {
        out.push(lucas(60, p)?);
    }
    for p in [3u64, 5, 7] {
        for d in 0..=6 {
            out.push(sym_image(d, u64::from(cap_n), p)?);
        }
    }
    for n in 0..=cap_n.min(5) as usize {
        for l in 0..=n {
            for d in 0..=l {
                out.push(el_ed_identity(l, d, n, &q)?);
            }
        }
    }
    for k in 0..=4 {
        out.push(leadcoef_identities(k, &BigRational::new(11.into(), 2.into()))?);
    }
    let f5 = Field::prime(5)?;
    for n in 1..=cap_n.min(4) {
        out.push(lm_census(n, &f5, caps)?);
    }
    for n in 1..=cap_n.min(2) {
        out.push(anyorder_dim_oracle(n, &f5)?);
    }
    Ok(out)
}

/// Splits `x_1..x_n` into consecutive parts of sizes 1, 2, 3, … .
pub fn chunked_parts(n: u32) -> Vec<Vec<VarId>> {
    let mut parts = Vec::new();
    let mut i = 1;
    let mut size = 1;
    while i <= n {
        let hi = (i + size - 1).min(n);
        parts.push((i..=hi).map(x).collect());
        i = hi + 1;
        size += 1;
    }
    parts
}

/// The ml-inverse coefficient of `x_1⋯x_n` for `e₂ − β`, from the
/// weight-sum formula over `ℚ`.
pub fn e2_lead_coefficient(n: u32, beta: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for j in 0..=u64::from(n) {
        let sign = if (u64::from(n) - j) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        let denom = BigRational::from_integer(binomial(j, 2)) - beta;
        acc += BigRational::from_integer(binomial(u64::from(n), j) * sign) / denom;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::parse_poly;

    #[test]
    fn inverses() {
        let f5 = Field::prime(5).unwrap();
        let g = ml_inverse(&roabp_hard_poly(&f5, 2)).unwrap();
        assert_eq!(g, parse_poly(&f5, "2*x_1*x_2 + 3*x_1 + 3*x_2 + 4").unwrap());
        let q = Field::rationals();
        let g = ml_inverse(&parse_poly(&q, "x_1 + -2").unwrap()).unwrap();
        assert_eq!(g, parse_poly(&q, "-1/2*x_1 + -1/2").unwrap());
        assert!(matches!(ml_inverse(&parse_poly(&q, "x_1").unwrap()), Err(OracleError::BooleanRoot(_))));
        assert_eq!(ml_inverse(&Poly::one(&q)).unwrap(), Poly::one(&q));
    }

    #[test]
    fn degree_lemmas() {
        let caps = Caps::default();
        let q = Field::rationals();
        assert!(deg_check(&q, &DegLemma::SubsetSum { n: 6, beta: q.from_i64(9) }, &caps).unwrap().pass);
        let f5 = Field::prime(5).unwrap();
        let parts = chunked_parts(6);
        assert_eq!(parts.len(), 3);
        assert!(deg_check(&f5, &DegLemma::Partition { parts, beta: f5.from_i64(4) }, &caps).unwrap().pass);
        assert!(deg_check(&q, &DegLemma::E2Char0 { n: 4, beta: q.from_i64(2) }, &caps).unwrap().pass);
        assert!(matches!(
            deg_check(&q, &DegLemma::E2Char0 { n: 4, beta: q.from_i64(3) }, &caps),
            Err(OracleError::BooleanRoot(_))
        ));
        assert_eq!(e2_lead_coefficient(2, &BigRational::from_integer(3.into())), BigRational::new((-1).into(), 6.into()));
    }

    #[test]
    fn counting() {
        assert_eq!(lucas_residue(8, 3, 5).unwrap(), 1);
        assert_eq!(lucas_residue(7, 3, 5).unwrap(), 0);
        assert!(lucas(40, 3).unwrap().pass);
        let r = sym_image(2, 5, 3).unwrap();
        assert!(r.pass);
        assert_eq!(r.params["beta"], "2");
        assert_eq!(sym_bound(1, 5), 5);
        assert!(el_ed_identity(2, 1, 3, &Field::rationals()).unwrap().pass);
        let half = BigRational::from_integer(2.into());
        assert_eq!(leadcoef_identities(1, &half).unwrap().computed, "-1/2");
        assert!(leadcoef_identities(1, &BigRational::one()).is_err());
    }

    #[test]
    fn rank_small() {
        let caps = Caps::default();
        let r = rank_lemma_oracle(&Word::parse("1,-1").unwrap(), 5, &caps).unwrap();
        assert!(r.pass, "{r:?}");
        let words = balanced_words(1, 2, 8);
        assert!(words.contains(&Word::parse("1,1,-2").unwrap()));
        let r = rank_lemma_oracle(&Word::parse("1,1,-2").unwrap(), 5, &caps).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn census_and_anyorder() {
        let f5 = Field::prime(5).unwrap();
        assert!(lm_census(3, &f5, &Caps::default()).unwrap().pass);
        let r = anyorder_dim_oracle(1, &f5).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(anyorder_dim_oracle(2, &f5).unwrap().pass);
    }
}
