//! IPS certificates: linear-combination and placeholder-circuit forms,
//! exact and randomized verification, Fermat refutations and the
//! multiples extraction.
//!
//! Placeholder `ya_i` stands for axiom `i` (0-based) and `zb_k` for the
//! Boolean axiom `x_k² − x_k` of the `k`-th instance variable in canonical
//! order.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnfbridge::{AlgCircuit, CircuitBuilder, CircuitJson, CnfError};
use crate::ff::{binomial, Elem, FfError, Field, FieldKind};
use crate::instances::{linear_factor, Instance};
use crate::mpoly::{common_boolean_root, Gadget, MonomialOrder, Poly, PolyError, VarId, CUBE_CAP};
use crate::roabp::{nisan_build, MAX_NISAN_VARS};

/// Default term budget for exact expansion before switching to random
/// evaluation.
pub const DEFAULT_TERM_CAP: usize = 2_000_000;
/// Sample range for random integers when verifying over `ℚ`.
pub const RATIONAL_SAMPLE: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertError {
    #[error("certificate names axiom {0} but the instance has {1}")]
    AxiomOutOfRange(usize, usize),
    #[error("placeholder {0} does not match the instance")]
    PlaceholderArity(String),
    #[error("degree bound {bound} is not below the sample space size {size}; use a larger extension")]
    DegreeExceedsSampleSpace { bound: String, size: String },
    #[error("axioms have a common Boolean root at {0}")]
    HasBooleanRoot(String),
    #[error("{0} is too large")]
    TooLarge(String),
    #[error("Fermat refutations need a finite field, got {0}")]
    NotFinite(String),
    #[error("M = 1 − C(x̄, 0, g, x̄²−x̄) is zero")]
    ZeroMultiple,
    #[error("certificate parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FfError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Cnf(#[from] CnfError),
}

pub fn axiom_ph(i: usize) -> VarId {
    VarId::Gadget(Gadget::AxiomPh(i as u32))
}

pub fn bool_ph(k: usize) -> VarId {
    VarId::Gadget(Gadget::BoolPh(k as u32))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IpsForm {
    /// `Σ_i g_i f_i + Σ_v h_v (v² − v)`.
    LinearComb {
        g: BTreeMap<usize, Poly>,
        h: BTreeMap<VarId, Poly>,
    },
    /// `C(x̄, ȳ, z̄)` over instance variables and placeholders.
    PlaceholderCircuit { circuit: AlgCircuit },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub linear_in_y: bool,
    pub linear_in_yz: bool,
    pub multilinear_in_xy: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IpsCert {
    pub field: Field,
    pub form: IpsForm,
    /// Claimed properties.
    pub flags: Flags,
    /// Hash of the instance this refutes; empty when unbound.
    pub instance_hash: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Exact formal identity check passed.
    Verified,
    /// Random evaluation passed; carries a nonzero error bound.
    Probabilistic,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ModeReport {
    Exact,
    Randomized {
        trials: u32,
        sample_field: String,
        sample_size: String,
        degree_bound: u64,
        seed: u64,
        /// `(degree_bound / sample_size)^trials`.
        error_bound: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub mode: ModeReport,
    pub verdict: Verdict,
    pub witnesses: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Failed
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Sz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub mode: Mode,
    pub term_cap: usize,
    pub trials: u32,
    /// Extension degree of the sample field over a prime base field.
    pub ext: u32,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mode: Mode::Exact,
            term_cap: DEFAULT_TERM_CAP,
            trials: 20,
            ext: 1,
            seed: 0,
        }
    }
}

struct Sampler {
    field: Field,
    rat_bound: u64,
    size: BigInt,
}

fn sampler(base: &Field, ext: u32, degree: u64) -> Result<Sampler, CertError> {
    let (field, rat_bound, size) = match base.kind() {
        FieldKind::Rational => (base.clone(), RATIONAL_SAMPLE, BigInt::from(RATIONAL_SAMPLE)),
        FieldKind::Prime if ext > 1 => {
            let f = Field::extension(base.characteristic(), ext)?;
            let q = f.size().expect("finite");
            (f, 0, BigInt::from(q))
        }
        _ => {
            let q = base.size().expect("finite");
            (base.clone(), 0, BigInt::from(q))
        }
    };
    if size <= BigInt::from(degree) {
        return Err(CertError::DegreeExceedsSampleSpace {
            bound: degree.to_string(),
            size: size.to_string(),
        });
    }
    Ok(Sampler { field, rat_bound, size })
}

fn error_bound(degree: u64, size: &BigInt, trials: u32) -> String {
    let r = BigRational::new(BigInt::from(degree), size.clone());
    num_traits::pow::pow(r, trials as usize).to_string()
}

fn trial_rng(seed: u64, t: u32) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed ^ u64::from(t).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Runs `trials` random checks; `check(field, rng)` returns a failure
/// description.
fn randomized<F>(s: &Sampler, opts: &VerifyOptions, degree: u64, check: F) -> VerifyReport
where
    F: Fn(&Field, &mut ChaCha20Rng, u64) -> Result<(), String> + Sync,
{
    let failures: Vec<String> = (0..opts.trials)
        .into_par_iter()
        .filter_map(|t| {
            let mut rng = trial_rng(opts.seed, t);
            check(&s.field, &mut rng, s.rat_bound).err().map(|e| format!("trial {t}: {e}"))
        })
        .collect();
    VerifyReport {
        mode: ModeReport::Randomized {
            trials: opts.trials,
            sample_field: s.field.spec(),
            sample_size: s.size.to_string(),
            degree_bound: degree,
            seed: opts.seed,
            error_bound: error_bound(degree, &s.size, opts.trials),
        },
        verdict: if failures.is_empty() {
            Verdict::Probabilistic
        } else {
            Verdict::Failed
        },
        witnesses: failures,
        notes: Vec::new(),
    }
}

fn residual_witness(r: &Poly) -> String {
    match r.leading_term(MonomialOrder::GRLEX) {
        Ok((m, c)) => format!("residual has {} terms, leading {}*{}", r.num_terms(), r.field().format_elem(&c), m),
        Err(_) => "zero residual".into(),
    }
}

fn exact_report(ok: bool, witnesses: Vec<String>) -> VerifyReport {
    VerifyReport {
        mode: ModeReport::Exact,
        verdict: if ok { Verdict::Verified } else { Verdict::Failed },
        witnesses,
        notes: Vec::new(),
    }
}

fn check_hash(cert: &IpsCert, inst: &Instance) -> Option<String> {
    (!cert.instance_hash.is_empty() && cert.instance_hash != inst.hash())
        .then(|| format!("certificate is bound to instance {}", cert.instance_hash))
}

fn boolean_axiom(field: &Field, v: VarId) -> Poly {
    Poly::boolean_axiom(field, v)
}

/// Checks `Σ g_i f_i + Σ h_v (v² − v) = 1`.
pub fn verify_lin(
    g: &BTreeMap<usize, Poly>,
    h: &BTreeMap<VarId, Poly>,
    inst: &Instance,
    opts: &VerifyOptions,
) -> Result<VerifyReport, CertError> {
    let field = &inst.field;
    let m = inst.axioms.len();
    if let Some(&i) = g.keys().find(|&&i| i >= m) {
        return Err(CertError::AxiomOutOfRange(i, m));
    }
    let budget: usize = g
        .iter()
        .map(|(&i, gi)| gi.num_terms().saturating_mul(inst.axioms[i].num_terms()))
        .chain(h.values().map(|hv| hv.num_terms().saturating_mul(2)))
        .fold(0usize, usize::saturating_add);
    let mut forced = false;
    if opts.mode == Mode::Exact && budget <= opts.term_cap {
        let mut sum = Poly::zero(field);
        for (&i, gi) in g {
            sum = sum.add(&gi.mul(&inst.axioms[i]));
        }
        for (&v, hv) in h {
            sum = sum.add(&hv.mul(&boolean_axiom(field, v)));
        }
        let r = sum.add_const(&field.neg(&field.one()));
        let ok = r.is_zero();
        return Ok(exact_report(ok, if ok { vec![] } else { vec![residual_witness(&r)] }));
    }
    if opts.mode == Mode::Exact {
        forced = true;
    }
    let degree = g
        .iter()
        .map(|(&i, gi)| gi.degree().unwrap_or(0) + inst.axioms[i].degree().unwrap_or(0))
        .chain(h.values().map(|hv| hv.degree().unwrap_or(0) + 2))
        .max()
        .unwrap_or(0);
    let vars: BTreeSet<VarId> = g
        .values()
        .chain(h.values())
        .chain(inst.axioms.iter())
        .flat_map(Poly::vars)
        .chain(h.keys().copied())
        .collect();
    let s = sampler(field, opts.ext, degree)?;
    let mut rep = randomized(&s, opts, degree, |sf, rng, rb| {
        let pt: BTreeMap<VarId, Elem> = vars.iter().map(|&v| (v, sf.random(rng, rb))).collect();
        let at = |p: &Poly| p.eval_in(sf, |v| pt.get(&v).cloned()).expect("all variables sampled");
        let mut acc = sf.zero();
        for (&i, gi) in g {
            acc = sf.add(&acc, &sf.mul(&at(gi), &at(&inst.axioms[i])));
        }
        for (v, hv) in h {
            let a = &pt[v];
            let b = sf.sub(&sf.mul(a, a), a);
            acc = sf.add(&acc, &sf.mul(&at(hv), &b));
        }
        if sf.is_one(&acc) {
            Ok(())
        } else {
            Err(format!("value {} at a random point", sf.format_elem(&acc)))
        }
    });
    if forced {
        rep.notes.push(format!("term budget {budget} exceeds cap {}; switched to random evaluation", opts.term_cap));
    }
    Ok(rep)
}

/// Substitution `ȳ ↦ f̄`, `z̄ ↦ x̄² − x̄` (or zeros).
fn placeholder_map(inst: &Instance, zero: bool) -> BTreeMap<VarId, Poly> {
    let field = &inst.field;
    let mut map = BTreeMap::new();
    for (i, f) in inst.axioms.iter().enumerate() {
        map.insert(axiom_ph(i), if zero { Poly::zero(field) } else { f.clone() });
    }
    for (k, v) in inst.vars().into_iter().enumerate() {
        map.insert(bool_ph(k), if zero { Poly::zero(field) } else { boolean_axiom(field, v) });
    }
    map
}

fn check_placeholders(c: &AlgCircuit, inst: &Instance) -> Result<(), CertError> {
    let nvars = inst.vars();
    let known: BTreeSet<VarId> = nvars.iter().copied().collect();
    for v in c.inputs() {
        match v {
            VarId::Gadget(Gadget::AxiomPh(i)) if (i as usize) < inst.axioms.len() => {}
            VarId::Gadget(Gadget::BoolPh(k)) if (k as usize) < nvars.len() => {}
            VarId::Gadget(Gadget::AxiomPh(_) | Gadget::BoolPh(_)) => {
                return Err(CertError::PlaceholderArity(v.to_string()))
            }
            _ if known.contains(&v) => {}
            // Extra variables are allowed: the identity must hold for all of them.
            _ => {}
        }
    }
    Ok(())
}

/// Number of monomials of degree ≤ d in n variables, saturated.
fn term_estimate(n: usize, d: u64) -> usize {
    let b = binomial(n as u64 + d, d.min(n as u64));
    usize::try_from(b).unwrap_or(usize::MAX)
}

/// Checks `Ĉ(x̄, 0̄, 0̄) = 0` and `Ĉ(x̄, f̄, x̄² − x̄) = 1`.
pub fn verify_ips_circuit(c: &AlgCircuit, inst: &Instance, opts: &VerifyOptions) -> Result<VerifyReport, CertError> {
    check_placeholders(c, inst)?;
    let field = &inst.field;
    let metrics = c.metrics();
    let max_ax = inst.axioms.iter().filter_map(Poly::degree).max().unwrap_or(0).max(2);
    let degree = metrics.formal_degree.saturating_mul(max_ax);
    let xs = inst.vars();
    let extra: BTreeSet<VarId> = c
        .inputs()
        .into_iter()
        .filter(|v| !matches!(v, VarId::Gadget(Gadget::AxiomPh(_) | Gadget::BoolPh(_))))
        .chain(xs.iter().copied())
        .collect();
    let est = term_estimate(extra.len(), degree);
    if opts.mode == Mode::Exact && est <= opts.term_cap {
        let c0 = c.expand_subst(&placeholder_map(inst, true));
        let c1 = c.expand_subst(&placeholder_map(inst, false));
        let mut w = Vec::new();
        if !c0.is_zero() {
            w.push(format!("condition 1: C(x,0,0) ≠ 0; {}", residual_witness(&c0)));
        }
        let r1 = c1.add_const(&field.neg(&field.one()));
        if !r1.is_zero() {
            w.push(format!("condition 2: C(x,f,x²−x) ≠ 1; {}", residual_witness(&r1)));
        }
        return Ok(exact_report(w.is_empty(), w));
    }
    let s = sampler(field, opts.ext, degree)?;
    let nax = inst.axioms.len();
    let mut rep = randomized(&s, opts, degree, |sf, rng, rb| {
        let pt: BTreeMap<VarId, Elem> = extra.iter().map(|&v| (v, sf.random(rng, rb))).collect();
        let zero = c
            .eval_in(sf, |v| match v {
                VarId::Gadget(Gadget::AxiomPh(_) | Gadget::BoolPh(_)) => Some(sf.zero()),
                _ => pt.get(&v).cloned(),
            })
            .map_err(|e| e.to_string())?;
        if !sf.is_zero(&zero) {
            return Err(format!("condition 1 value {}", sf.format_elem(&zero)));
        }
        let fx: Vec<Elem> = (0..nax)
            .map(|i| inst.axioms[i].eval_in(sf, |v| pt.get(&v).cloned()).expect("sampled"))
            .collect();
        let one = c
            .eval_in(sf, |v| match v {
                VarId::Gadget(Gadget::AxiomPh(i)) => Some(fx[i as usize].clone()),
                VarId::Gadget(Gadget::BoolPh(k)) => {
                    let a = &pt[&xs[k as usize]];
                    Some(sf.sub(&sf.mul(a, a), a))
                }
                _ => pt.get(&v).cloned(),
            })
            .map_err(|e| e.to_string())?;
        if !sf.is_one(&one) {
            return Err(format!("condition 2 value {}", sf.format_elem(&one)));
        }
        Ok(())
    });
    if opts.mode == Mode::Exact {
        rep.notes.push(format!("estimated {est} terms exceed cap {}; switched to random evaluation", opts.term_cap));
    }
    Ok(rep)
}

/// Verifies a certificate of either form against an instance.
pub fn verify(cert: &IpsCert, inst: &Instance, opts: &VerifyOptions) -> Result<VerifyReport, CertError> {
    if let Some(w) = check_hash(cert, inst) {
        return Ok(exact_report(false, vec![w]));
    }
    if cert.field != inst.field {
        return Ok(exact_report(false, vec![format!("certificate over {}, instance over {}", cert.field.spec(), inst.field.spec())]));
    }
    match &cert.form {
        IpsForm::LinearComb { g, h } => verify_lin(g, h, inst, opts),
        IpsForm::PlaceholderCircuit { circuit } => verify_ips_circuit(circuit, inst, opts),
    }
}

fn is_placeholder(v: VarId) -> bool {
    matches!(v, VarId::Gadget(Gadget::AxiomPh(_) | Gadget::BoolPh(_)))
}

fn flags_of(p_y: &Poly, p_yz: &Poly) -> Flags {
    let y_deg = |p: &Poly, pred: &dyn Fn(VarId) -> bool| {
        p.terms()
            .map(|(m, _)| m.factors().iter().filter(|(v, _)| pred(*v)).map(|&(_, e)| e).sum::<u32>())
            .max()
            .unwrap_or(0)
    };
    let is_y = |v: VarId| matches!(v, VarId::Gadget(Gadget::AxiomPh(_)));
    Flags {
        linear_in_y: y_deg(p_y, &is_y) <= 1,
        linear_in_yz: y_deg(p_yz, &|v| is_placeholder(v)) <= 1,
        multilinear_in_xy: p_y.is_multilinear(),
    }
}

/// Computes the flags from the certificate itself.
pub fn check_flags(cert: &IpsCert, term_cap: usize) -> Result<Flags, CertError> {
    match &cert.form {
        IpsForm::LinearComb { g, .. } => Ok(Flags {
            linear_in_y: true,
            linear_in_yz: true,
            multilinear_in_xy: g.values().all(Poly::is_multilinear),
        }),
        IpsForm::PlaceholderCircuit { circuit } => {
            let m = circuit.metrics();
            let est = term_estimate(circuit.inputs().len(), m.formal_degree);
            if est > term_cap {
                return Err(CertError::TooLarge(format!("symbolic expansion of about {est} terms")));
            }
            let full = circuit.expand();
            let zs: BTreeMap<VarId, Poly> = circuit
                .inputs()
                .into_iter()
                .filter(|v| matches!(v, VarId::Gadget(Gadget::BoolPh(_))))
                .map(|v| (v, Poly::zero(&cert.field)))
                .collect();
            let p_y = full.subst(&zs);
            Ok(flags_of(&p_y, &full))
        }
    }
}

impl IpsCert {
    pub fn linear(field: &Field, g: BTreeMap<usize, Poly>, h: BTreeMap<VarId, Poly>, inst: Option<&Instance>) -> IpsCert {
        let mut c = IpsCert {
            field: field.clone(),
            form: IpsForm::LinearComb { g, h },
            flags: Flags::default(),
            instance_hash: inst.map(Instance::hash).unwrap_or_default(),
        };
        c.flags = check_flags(&c, usize::MAX).expect("linear forms need no expansion");
        c
    }

    pub fn circuit(circuit: AlgCircuit, inst: Option<&Instance>) -> IpsCert {
        IpsCert {
            field: circuit.field().clone(),
            form: IpsForm::PlaceholderCircuit { circuit },
            flags: Flags::default(),
            instance_hash: inst.map(Instance::hash).unwrap_or_default(),
        }
    }

    /// The placeholder circuit `Σ g_i·ya_i + Σ h_v·zb_k`.
    pub fn to_circuit(&self, inst: &Instance) -> Result<AlgCircuit, CertError> {
        match &self.form {
            IpsForm::PlaceholderCircuit { circuit } => Ok(circuit.clone()),
            IpsForm::LinearComb { g, h } => {
                let vars = inst.vars();
                let mut cb = CircuitBuilder::new(&self.field);
                let mut terms = Vec::new();
                for (&i, gi) in g {
                    let a = cb.poly(gi);
                    let y = cb.input(axiom_ph(i));
                    terms.push(cb.mul(vec![a, y]));
                }
                for (v, hv) in h {
                    let k = vars
                        .iter()
                        .position(|u| u == v)
                        .ok_or_else(|| CertError::PlaceholderArity(v.to_string()))?;
                    let a = cb.poly(hv);
                    let z = cb.input(bool_ph(k));
                    terms.push(cb.mul(vec![a, z]));
                }
                if terms.is_empty() {
                    terms.push(cb.constant(self.field.zero()));
                }
                let out = cb.add(terms);
                Ok(cb.finish(out))
            }
        }
    }
}

/// `bool_reduce(g · F).remainder = 1`.
pub fn functional_inverse_check(g: &Poly, f: &Poly) -> bool {
    g.mul(f).bool_reduce().remainder.is_one()
}

/// Fermat refutation over a finite field `F_q`: with `u_i = f_i^{q−1}`
/// (which is 0/1-valued off and on the roots of `f_i`),
/// `1 − ∏ (1 − u_i) = Σ_i u_i ∏_{j<i} (1 − u_j)` vanishes nowhere on the
/// cube, so `g_i = ml(f_i^{q−2} ∏_{j<i} (1 − u_j))` and the Boolean
/// quotients of `Σ g_i f_i` give the certificate. For one axiom this is
/// `g = ml(f^{q−2})`.
pub fn fermat_refute(inst: &Instance) -> Result<IpsCert, CertError> {
    let field = &inst.field;
    let q = field.size().ok_or_else(|| CertError::NotFinite(field.spec()))?;
    let vars = inst.vars();
    if vars.len() > CUBE_CAP {
        return Err(CertError::TooLarge(format!("cube of {} variables", vars.len())));
    }
    if let Some(mask) = common_boolean_root(&inst.axioms, &vars) {
        let pt: Vec<String> = vars.iter().enumerate().map(|(t, v)| format!("{v}={}", mask >> t & 1)).collect();
        return Err(CertError::HasBooleanRoot(pt.join(",")));
    }
    let mut g = BTreeMap::new();
    let mut prefix = Poly::one(field);
    for (i, f) in inst.axioms.iter().enumerate() {
        let fi = f.ml();
        let pw = fi.ml_pow(q - 2);
        g.insert(i, pw.ml_mul(&prefix));
        if i + 1 < inst.axioms.len() {
            let u = pw.ml_mul(&fi);
            prefix = prefix.ml_mul(&Poly::one(field).sub(&u));
        }
    }
    let mut sum = Poly::zero(field);
    for (&i, gi) in &g {
        sum = sum.add(&gi.mul(&inst.axioms[i]));
    }
    let red = sum.bool_reduce();
    debug_assert!(red.remainder.is_one());
    let h: BTreeMap<VarId, Poly> = red.quotients.into_iter().map(|(v, p)| (v, p.neg())).collect();
    Ok(IpsCert::linear(field, g, h, Some(inst)))
}

/// Output of [`extract_multiple`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extraction {
    /// `M = 1 − Ĉ(x̄, 0, g, x̄² − x̄)`.
    pub multiple: Poly,
    /// `M / f` when every linear factor divided exactly.
    pub quotient: Option<Poly>,
    /// Linear factors `(i, j)` divided out before the first failure.
    pub divided: Vec<(u32, u32)>,
    /// roABP width of `M` in the order `x_1 < … < x_n`, when small enough.
    pub multiple_width: Option<usize>,
    /// Circuit size of the certificate.
    pub cert_size: usize,
}

impl Extraction {
    pub fn divisible(&self) -> bool {
        self.quotient.is_some()
    }
}

/// Extracts the multiple `M` of `f = ∏ (x_i + x_j + 1)` from a refutation
/// of the system `(f, g)` plus Boolean axioms, and tests `f | M` by exact
/// division by each linear factor in turn.
pub fn extract_multiple(
    cert: &IpsCert,
    inst: &Instance,
    factors: &[(u32, u32)],
) -> Result<Extraction, CertError> {
    let field = &inst.field;
    if inst.axioms.len() != 2 {
        return Err(CertError::PlaceholderArity(format!("expected 2 axioms, got {}", inst.axioms.len())));
    }
    let c = cert.to_circuit(inst)?;
    check_placeholders(&c, inst)?;
    let mut map = placeholder_map(inst, false);
    map.insert(axiom_ph(0), Poly::zero(field));
    let m = Poly::one(field).sub(&c.expand_subst(&map));
    if m.is_zero() {
        return Err(CertError::ZeroMultiple);
    }
    let mut rest = m.clone();
    let mut divided = Vec::new();
    let mut ok = true;
    for &(i, j) in factors {
        match rest.div_exact(&linear_factor(field, i, j))? {
            Some(q) => {
                rest = q;
                divided.push((i, j));
            }
            None => {
                ok = false;
                break;
            }
        }
    }
    let order: Vec<VarId> = inst.vars();
    let multiple_width = (order.len() <= MAX_NISAN_VARS && !order.is_empty())
        .then(|| nisan_build(&m, &order).ok().map(|a| a.width()))
        .flatten();
    Ok(Extraction {
        multiple: m,
        quotient: ok.then_some(rest),
        divided,
        multiple_width,
        cert_size: c.metrics().size,
    })
}

/// Certificate file layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum CertForm {
    LinearComb {
        g: BTreeMap<String, String>,
        h: BTreeMap<String, String>,
    },
    PlaceholderCircuit { circuit: CircuitJson },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertJson {
    pub field: String,
    #[serde(flatten)]
    pub form: CertForm,
    pub flags: Flags,
    pub instance_hash: String,
}

impl CertJson {
    pub fn from_cert(c: &IpsCert) -> CertJson {
        let form = match &c.form {
            IpsForm::LinearComb { g, h } => CertForm::LinearComb {
                g: g.iter().map(|(i, p)| (i.to_string(), p.to_string())).collect(),
                h: h.iter().map(|(v, p)| (v.to_string(), p.to_string())).collect(),
            },
            IpsForm::PlaceholderCircuit { circuit } => CertForm::PlaceholderCircuit {
                circuit: CircuitJson::from_circuit(circuit),
            },
        };
        CertJson {
            field: c.field.spec(),
            form,
            flags: c.flags,
            instance_hash: c.instance_hash.clone(),
        }
    }

    pub fn to_cert(&self) -> Result<IpsCert, CertError> {
        let field = Field::parse(&self.field)?;
        let form = match &self.form {
            CertForm::LinearComb { g, h } => {
                let g = g
                    .iter()
                    .map(|(i, p)| {
                        let i: usize = i.parse().map_err(|_| CertError::Parse(format!("bad axiom index {i:?}")))?;
                        Ok((i, Poly::parse(&field, p)?))
                    })
                    .collect::<Result<BTreeMap<_, _>, CertError>>()?;
                let h = h
                    .iter()
                    .map(|(v, p)| {
                        let v: VarId = v.parse().map_err(|_| CertError::Parse(format!("bad variable {v:?}")))?;
                        Ok((v, Poly::parse(&field, p)?))
                    })
                    .collect::<Result<BTreeMap<_, _>, CertError>>()?;
                IpsForm::LinearComb { g, h }
            }
            CertForm::PlaceholderCircuit { circuit } => {
                let c = circuit.to_circuit()?;
                if *c.field() != field {
                    return Err(CertError::Parse("circuit field differs from certificate field".into()));
                }
                IpsForm::PlaceholderCircuit { circuit: c }
            }
        };
        Ok(IpsCert {
            field,
            form,
            flags: self.flags,
            instance_hash: self.instance_hash.clone(),
        })
    }
}

pub fn cert_to_json(c: &IpsCert) -> String {
    serde_json::to_string_pretty(&CertJson::from_cert(c)).expect("serializable")
}

pub fn cert_from_json(s: &str) -> Result<IpsCert, CertError> {
    let j: CertJson = serde_json::from_str(s).map_err(|e| CertError::Parse(e.to_string()))?;
    j.to_cert()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{multiples_factors, multiples_system, roabp_hard_fixed, subset_sum};

    #[test]
    fn fermat_and_lin() {
        let f = Field::prime(5).unwrap();
        let inst = roabp_hard_fixed(&f, 3).unwrap();
        let cert = fermat_refute(&inst).unwrap();
        let opts = VerifyOptions::default();
        assert_eq!(verify(&cert, &inst, &opts).unwrap().verdict, Verdict::Verified);
        let sz = VerifyOptions { mode: Mode::Sz, ext: 2, ..opts };
        assert_eq!(verify(&cert, &inst, &sz).unwrap().verdict, Verdict::Probabilistic);
        let IpsForm::LinearComb { g, h } = &cert.form else { unreachable!() };
        let g2: BTreeMap<usize, Poly> = g.iter().map(|(&i, p)| (i, p.scale(&f.from_i64(2)))).collect();
        let rep = verify_lin(&g2, h, &inst, &opts).unwrap();
        assert_eq!(rep.verdict, Verdict::Failed);
        assert!(!rep.witnesses.is_empty());
        assert!(functional_inverse_check(&g[&0], &inst.axioms[0]));
        let back = cert_from_json(&cert_to_json(&cert)).unwrap();
        assert_eq!(back, cert);
        let circ = IpsCert::circuit(cert.to_circuit(&inst).unwrap(), Some(&inst));
        assert_eq!(verify(&circ, &inst, &opts).unwrap().verdict, Verdict::Verified);
        assert!(check_flags(&circ, DEFAULT_TERM_CAP).unwrap().multilinear_in_xy);
    }

    #[test]
    fn rational_circuit() {
        let q = Field::rationals();
        let inst = subset_sum(&q, 2, q.from_i64(5)).unwrap();
        let inv = crate::booloracle::ml_inverse(&inst.axioms[0]).unwrap();
        let mut cb = CircuitBuilder::new(&q);
        let a = cb.poly(&inv);
        let y = cb.input(axiom_ph(0));
        let mut terms = vec![cb.mul(vec![a, y])];
        let red = inv.mul(&inst.axioms[0]).bool_reduce();
        let vars = inst.vars();
        for (v, p) in &red.quotients {
            let k = vars.iter().position(|u| u == v).unwrap();
            let hp = cb.poly(&p.neg());
            let z = cb.input(bool_ph(k));
            terms.push(cb.mul(vec![hp, z]));
        }
        let out = cb.add(terms);
        let c = cb.finish(out);
        let opts = VerifyOptions::default();
        assert_eq!(verify_ips_circuit(&c, &inst, &opts).unwrap().verdict, Verdict::Verified);
        let sz = VerifyOptions { mode: Mode::Sz, ..opts };
        assert_eq!(verify_ips_circuit(&c, &inst, &sz).unwrap().verdict, Verdict::Probabilistic);
        let mut cb = CircuitBuilder::new(&q);
        let x = cb.input(VarId::Plain(1));
        let bad = cb.finish(x);
        let rep = verify_ips_circuit(&bad, &inst, &opts).unwrap();
        assert!(rep.witnesses[0].starts_with("condition 1"));
    }

    #[test]
    fn multiples() {
        let f = Field::prime(5).unwrap();
        let inst = multiples_system(&f, 2).unwrap();
        let cert = fermat_refute(&inst).unwrap();
        assert!(verify(&cert, &inst, &VerifyOptions::default()).unwrap().passed());
        let ex = extract_multiple(&cert, &inst, &multiples_factors(2)).unwrap();
        assert!(ex.divisible());
        let fpoly = &inst.axioms[0];
        assert_eq!(ex.quotient.unwrap().mul(fpoly), ex.multiple);
        let bad = IpsCert::linear(&f, [(1, Poly::one(&f))].into(), BTreeMap::new(), Some(&inst));
        assert!(!verify(&bad, &inst, &VerifyOptions::default()).unwrap().passed());
        let ex = extract_multiple(&bad, &inst, &multiples_factors(2)).unwrap();
        assert!(!ex.divisible());
        assert!(matches!(
            fermat_refute(&Instance { axioms: vec![Poly::var(&f, VarId::Plain(1))], ..inst.clone() }),
            Err(CertError::HasBooleanRoot(_))
        ));
    }
}
