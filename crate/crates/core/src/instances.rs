//! Generators for the hard instances, with β selection, desk-scale
//! unsatisfiability certificates and circuit forms.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cnfbridge::{AlgCircuit, CircuitBuilder, CircuitMetrics};
use crate::ff::{Elem, FfError, Field, FieldKind};
use crate::mpoly::{common_boolean_root, Gadget, Monomial, Poly, PolyError, VarId, CUBE_CAP};
use crate::wordspec::{derive_blocks, is_balanced, overlap_graph, scattered_partition, BlockLayout, ScatteredPartition, Word, WordError};

/// Largest block width for which the agreement filter enumerates strings.
pub const MAX_KS_WIDTH: u8 = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("β = {0} lies in the attainable range {{0..{1}}}")]
    BetaInRange(String, usize),
    #[error("β = {0} lies in the Boolean image of the sum")]
    BetaInImage(String),
    #[error("partition is not a scattered partition of the x-role blocks")]
    NotScattered,
    #[error("partition has {r} parts, need fewer than p = {p}")]
    TooManyParts { r: usize, p: u64 },
    #[error("no field element lies outside the Boolean image")]
    NoValidBeta,
    #[error("field {0} is too small for this instance")]
    FieldTooSmall(String),
    #[error("block width {0} exceeds the supported {MAX_KS_WIDTH}")]
    BlockTooWide(u8),
    #[error("axioms have a common Boolean root at {0}")]
    HasBooleanRoot(String),
    #[error("stored certificate does not re-verify: {0}")]
    CertificateMismatch(String),
    #[error("{0} needs a field of characteristic other than 2")]
    CharTwo(String),
    #[error("instance parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FfError),
}

/// How unsatisfiability over `{0,1}^n` was established.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum UnsatStatus {
    /// Every Boolean point was evaluated.
    Enumerated { vars: usize, points: u64 },
    /// Too many variables to enumerate; β rests on a counting argument.
    CitedUnverified { vars: usize, note: String },
    /// Too many variables and no argument recorded.
    NotChecked { vars: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub generator: String,
    pub params: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub unsat: UnsatStatus,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Meta {
    fn new(generator: &str) -> Meta {
        Meta {
            generator: generator.to_string(),
            params: BTreeMap::new(),
            beta: None,
            seed: None,
            unsat: UnsatStatus::NotChecked { vars: 0 },
            notes: Vec::new(),
        }
    }

    fn param(mut self, k: &str, v: impl ToString) -> Meta {
        self.params.insert(k.to_string(), v.to_string());
        self
    }
}

/// A set of non-Boolean axioms over one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub field: Field,
    pub axioms: Vec<Poly>,
    pub meta: Meta,
}

/// A circuit computing an axiom together with its metrics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitForm {
    pub circuit: AlgCircuit,
    pub metrics: CircuitMetrics,
}

impl CircuitForm {
    pub fn new(circuit: AlgCircuit) -> CircuitForm {
        let metrics = circuit.metrics();
        CircuitForm { circuit, metrics }
    }

    /// Whether the circuit expands to `p`.
    pub fn computes(&self, p: &Poly) -> bool {
        self.circuit.expand() == *p
    }
}

impl Instance {
    pub fn vars(&self) -> Vec<VarId> {
        let set: BTreeSet<VarId> = self.axioms.iter().flat_map(Poly::vars).collect();
        set.into_iter().collect()
    }

    /// Certifies by enumeration (when within `cap` variables) that the axioms
    /// have no common Boolean root.
    pub fn certify_unsat(&mut self, cap: usize) -> Result<(), InstanceError> {
        let vars = self.vars();
        if vars.len() > cap {
            if !matches!(self.meta.unsat, UnsatStatus::CitedUnverified { .. }) {
                self.meta.unsat = UnsatStatus::NotChecked { vars: vars.len() };
            }
            return Ok(());
        }
        if let Some(mask) = common_boolean_root(&self.axioms, &vars) {
            return Err(InstanceError::HasBooleanRoot(format_point(&vars, mask)));
        }
        self.meta.unsat = UnsatStatus::Enumerated {
            vars: vars.len(),
            points: 1u64 << vars.len(),
        };
        Ok(())
    }

    /// Re-runs the stored certificate.
    pub fn reverify(&self) -> Result<(), InstanceError> {
        if let UnsatStatus::Enumerated { vars, .. } = self.meta.unsat {
            let vs = self.vars();
            if vs.len() != vars {
                return Err(InstanceError::CertificateMismatch(format!(
                    "{} variables, certificate says {vars}",
                    vs.len()
                )));
            }
            if vars > 32 {
                return Err(InstanceError::CertificateMismatch("too many variables".into()));
            }
            if let Some(mask) = common_boolean_root(&self.axioms, &vs) {
                return Err(InstanceError::CertificateMismatch(format!(
                    "root at {}",
                    format_point(&vs, mask)
                )));
            }
        }
        Ok(())
    }

    /// SHA-256 over the canonical `{field, axioms}` JSON.
    pub fn hash(&self) -> String {
        let canon = serde_json::json!({
            "field": self.field.spec(),
            "axioms": self.axioms.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
        });
        hex::encode(Sha256::digest(canon.to_string().as_bytes()))
    }

    pub fn to_json(&self) -> InstanceJson {
        InstanceJson {
            field: self.field.spec(),
            variables: self.vars().iter().map(|v| v.to_string()).collect(),
            axioms: self.axioms.iter().map(|a| a.to_string()).collect(),
            meta: self.meta.clone(),
            hash: self.hash(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    /// Parses an instance file and re-verifies its certificate.
    pub fn from_json_str(s: &str) -> Result<Instance, InstanceError> {
        let j: InstanceJson = serde_json::from_str(s).map_err(|e| InstanceError::Parse(e.to_string()))?;
        j.to_instance()
    }
}

fn format_point(vars: &[VarId], mask: u64) -> String {
    let parts: Vec<String> = vars
        .iter()
        .enumerate()
        .map(|(t, v)| format!("{v}={}", mask >> t & 1))
        .collect();
    parts.join(",")
}

/// Instance file layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub field: String,
    pub variables: Vec<String>,
    pub axioms: Vec<String>,
    pub meta: Meta,
    pub hash: String,
}

impl InstanceJson {
    pub fn to_instance(&self) -> Result<Instance, InstanceError> {
        let field = Field::parse(&self.field)?;
        let axioms = self
            .axioms
            .iter()
            .map(|a| Poly::parse(&field, a))
            .collect::<Result<Vec<_>, _>>()?;
        for v in &self.variables {
            v.parse::<VarId>()
                .map_err(|_| InstanceError::Parse(format!("bad variable {v:?}")))?;
        }
        let inst = Instance {
            field,
            axioms,
            meta: self.meta.clone(),
        };
        if inst.hash() != self.hash {
            return Err(InstanceError::CertificateMismatch("hash does not match the axioms".into()));
        }
        inst.reverify()?;
        Ok(inst)
    }
}

fn finish(field: &Field, axioms: Vec<Poly>, meta: Meta) -> Result<Instance, InstanceError> {
    let mut inst = Instance {
        field: field.clone(),
        axioms,
        meta,
    };
    inst.certify_unsat(CUBE_CAP)?;
    Ok(inst)
}

fn int_elem_in(field: &Field, v: u64) -> Elem {
    field.from_i64(v as i64)
}

/// Whether `β` equals one of `0, 1, …, n` in the field.
fn beta_in_range(field: &Field, beta: &Elem, n: usize) -> bool {
    match field.size() {
        Some(_) => {
            let p = field.characteristic() as usize;
            (0..=n.min(p.saturating_sub(1))).any(|i| int_elem_in(field, i as u64) == *beta)
        }
        None => (0..=n).any(|i| int_elem_in(field, i as u64) == *beta),
    }
}

/// `1 − ∏ (1 − y_τ)` over the strings τ of block `j` agreeing with σ
/// (a string over the interval of x-block `i`) on the overlap.
pub fn f_sigma_ij(layout: &BlockLayout, field: &Field, i: usize, sigma: u32, j: usize) -> Poly {
    let a = layout.string_of(i, sigma);
    let jv = layout.interval(j);
    let width = layout.word.width(j);
    let mut prod = Poly::one(field);
    for tau in 0..(1u32 << width) {
        let agrees = (0..u32::from(width)).all(|t| {
            let pos = jv.lo + t;
            let bit = (tau >> (u32::from(width) - 1 - t)) & 1 == 1;
            a.get(&pos).is_none_or(|&b| b == bit)
        });
        if agrees {
            let one_minus = Poly::one(field).sub(&Poly::var(field, layout.var(j, tau)));
            prod = prod.mul(&one_minus);
        }
    }
    Poly::one(field).sub(&prod)
}

/// `f_σ^{(i)}`: the product of `f_σ^{(i,j)}` over the y-blocks `j`
/// overlapping block `i`.
pub fn f_sigma(layout: &BlockLayout, field: &Field, i: usize, sigma: u32) -> Poly {
    let iv = layout.interval(i);
    layout
        .y_blocks()
        .iter()
        .filter(|&&j| layout.interval(j).intersects(&iv))
        .fold(Poly::one(field), |acc, &j| acc.mul(&f_sigma_ij(layout, field, i, sigma, j)))
}

/// `Σ_σ x_σ^{(i)} f_σ^{(i)}`.
pub fn block_sum(layout: &BlockLayout, field: &Field, i: usize) -> Poly {
    (0..(1u32 << layout.word.width(i))).fold(Poly::zero(field), |acc, s| {
        acc.add(&Poly::var(field, layout.var(i, s)).mul(&f_sigma(layout, field, i, s)))
    })
}

/// `ks^{(i)} = 1 − ml((Σ_σ x_σ f_σ)^{p−1})`.
pub fn ks_block(layout: &BlockLayout, field: &Field, i: usize) -> Poly {
    let p = field.characteristic();
    Poly::one(field).sub(&block_sum(layout, field, i).ml_pow(p - 1))
}

fn check_word(w: &Word) -> Result<BlockLayout, InstanceError> {
    if !is_balanced(w) {
        return Err(WordError::NotBalanced(w.to_string()).into());
    }
    if w.bound() > u32::from(MAX_KS_WIDTH) {
        return Err(InstanceError::BlockTooWide(w.bound() as u8));
    }
    Ok(derive_blocks(w))
}

/// Result of a generator that also emits a circuit form.
#[derive(Debug, Clone)]
pub struct WithCircuit {
    pub instance: Instance,
    pub circuit: CircuitForm,
}

/// Knapsack mod p: `Σ_parts ∏_{i ∈ part} ks^{(i)} − β` over a field of
/// characteristic `p`.
pub fn ks_modp(
    w: &Word,
    field: &Field,
    partition: Option<ScatteredPartition>,
    beta: Option<Elem>,
) -> Result<WithCircuit, InstanceError> {
    let p = field.characteristic();
    if p == 0 {
        return Err(InstanceError::FieldTooSmall(field.spec()));
    }
    let layout = check_word(w)?;
    let part = match partition {
        Some(sp) => sp,
        None => scattered_partition(w)?,
    };
    let g = overlap_graph(&layout);
    if !part.covers(layout.x_blocks()) || !part.is_scattered(&g) {
        return Err(InstanceError::NotScattered);
    }
    let r = part.r();
    if r as u64 >= p {
        return Err(InstanceError::TooManyParts { r, p });
    }
    let beta = match beta {
        Some(b) => b,
        None => {
            if r as u64 + 1 > p - 1 {
                return Err(InstanceError::NoValidBeta);
            }
            int_elem_in(field, r as u64 + 1)
        }
    };
    if beta_in_range(field, &beta, r) {
        return Err(InstanceError::BetaInRange(field.format_elem(&beta), r));
    }
    let blocks: BTreeMap<usize, Poly> = layout
        .x_blocks()
        .iter()
        .map(|&i| (i, ks_block(&layout, field, i)))
        .collect();
    let mut sum = Poly::zero(field);
    let mut cb = CircuitBuilder::new(field);
    let mut summands = Vec::new();
    for pt in &part.parts {
        let mut prod = Poly::one(field);
        let mut factors = Vec::new();
        for i in pt {
            prod = prod.mul(&blocks[i]);
            factors.push(cb.poly(&blocks[i]));
        }
        sum = sum.add(&prod);
        summands.push(if factors.len() == 1 { factors[0] } else { cb.mul(factors) });
    }
    let f = sum.add_const(&field.neg(&beta));
    summands.push(cb.constant(field.neg(&beta)));
    let out = cb.add(summands);
    let circuit = CircuitForm::new(cb.finish(out));
    let mut meta = Meta::new("ks_modp")
        .param("word", w)
        .param("p", p)
        .param("r", r)
        .param("parts", format!("{:?}", part.parts))
        .param("flipped", layout.flipped);
    meta.beta = Some(field.format_elem(&beta));
    let degree = f.degree().unwrap_or(0);
    let bound = p * w.len() as u64 * u64::from(w.bound()) * (1u64 << w.bound());
    meta.params.insert("degree".into(), degree.to_string());
    meta.params.insert("degree_bound_pdb2b".into(), bound.to_string());
    if degree > bound {
        meta.notes.push(format!("degree {degree} exceeds p·d·b·2^b = {bound}"));
    }
    let n = f.vars().len();
    if n > CUBE_CAP {
        meta.unsat = UnsatStatus::CitedUnverified {
            vars: n,
            note: format!("blocks are Boolean functions, so the sum lies in {{0..{r}}} and β is outside it"),
        };
    }
    Ok(WithCircuit {
        instance: finish(field, vec![f], meta)?,
        circuit,
    })
}

/// The items `x_σ^{(i)} f_σ^{(i)}` over all x-role blocks, in block/string
/// order.
pub fn sym_items(layout: &BlockLayout, field: &Field) -> Vec<Poly> {
    let mut items = Vec::new();
    for &i in layout.x_blocks() {
        for s in 0..(1u32 << layout.word.width(i)) {
            items.push(Poly::var(field, layout.var(i, s)).mul(&f_sigma(layout, field, i, s)));
        }
    }
    items
}

/// `ml(e₂(items))` via `(ml(S²) − ml(S))/2`, valid because every item is
/// Boolean-valued on the cube.
fn ml_e2_of_items(field: &Field, items: &[Poly]) -> Result<Poly, InstanceError> {
    let s = items.iter().fold(Poly::zero(field), |acc, it| acc.add(it));
    let half = field.inv(&field.from_i64(2))?;
    Ok(s.ml_pow(2).sub(&s.ml()).scale(&half))
}

/// Symmetric knapsack of degree 2: `ml(e₂({x_σ f_σ})) − β`.
///
/// Over `F_p` (`p ≥ 3`) or `ℚ`. Without an explicit β the smallest element
/// outside the Boolean image is used; when the cube is too large to
/// enumerate, the image is bounded by `{C(m,2) : m ≤ N}` with `N` the number
/// of items, since the items are Boolean-valued.
pub fn ks_sym_e2(w: &Word, field: &Field, beta: Option<Elem>) -> Result<WithCircuit, InstanceError> {
    if field.characteristic() == 2 {
        return Err(InstanceError::CharTwo("ks_sym_e2".into()));
    }
    if field.kind() == FieldKind::Extension {
        return Err(InstanceError::FieldTooSmall(field.spec()));
    }
    let layout = check_word(w)?;
    let items = sym_items(&layout, field);
    let e2 = ml_e2_of_items(field, &items)?;
    let n = e2.vars().len();
    let mut meta = Meta::new("ks_sym_e2").param("word", w).param("items", items.len());
    let weights: BTreeSet<Elem> = (0..=items.len() as u64)
        .map(|m| field.from_bigint(&crate::ff::binomial(m, 2)))
        .collect();
    let beta = match beta {
        Some(b) => {
            if weights.contains(&b) {
                return Err(InstanceError::BetaInImage(field.format_elem(&b)));
            }
            b
        }
        None => {
            let image = if n <= CUBE_CAP {
                e2.boolean_image(CUBE_CAP)?
            } else {
                weights.clone()
            };
            first_outside(field, &image).ok_or(InstanceError::NoValidBeta)?
        }
    };
    if n > CUBE_CAP {
        meta.unsat = UnsatStatus::CitedUnverified {
            vars: n,
            note: "beta valid by cited lemma, unverified".into(),
        };
    }
    meta.beta = Some(field.format_elem(&beta));
    let f = e2.add_const(&field.neg(&beta));

    let mut cb = CircuitBuilder::new(field);
    let mut summands = Vec::new();
    let xs: Vec<(VarId, Poly)> = layout
        .x_blocks()
        .iter()
        .flat_map(|&i| (0..(1u32 << layout.word.width(i))).map(move |s| (i, s)))
        .map(|(i, s)| (layout.var(i, s), f_sigma(&layout, field, i, s)))
        .collect();
    for a in 0..xs.len() {
        for b in (a + 1)..xs.len() {
            let inner = xs[a].1.ml_mul(&xs[b].1);
            if inner.is_zero() {
                continue;
            }
            let xa = cb.input(xs[a].0);
            let xb = cb.input(xs[b].0);
            let body = cb.poly(&inner);
            summands.push(cb.mul(vec![xa, xb, body]));
        }
    }
    summands.push(cb.constant(field.neg(&beta)));
    let out = cb.add(summands);
    let circuit = CircuitForm::new(cb.finish(out));
    let instance = finish(field, vec![f], meta).map_err(|e| match e {
        InstanceError::HasBooleanRoot(_) => {
            InstanceError::BetaInImage(field.format_elem(&field.from_i64(0)))
        }
        other => other,
    })?;
    Ok(WithCircuit { instance, circuit })
}

fn first_outside(field: &Field, image: &BTreeSet<Elem>) -> Option<Elem> {
    match field.size() {
        Some(q) => (0..q).map(|i| field.elem_from_index(i)).find(|e| !image.contains(e)),
        None => (0..).map(|i| field.from_i64(i)).find(|e| !image.contains(e)),
    }
}

/// `x_i`.
pub fn x(i: u32) -> VarId {
    VarId::Plain(i)
}

/// `y_i` of the lifting gadget.
pub fn lift_y(i: u32) -> VarId {
    VarId::Gadget(Gadget::LiftY(i))
}

fn need_large_char(field: &Field, what: &str) -> Result<(), InstanceError> {
    if field.characteristic() == 2 {
        return Err(InstanceError::FieldTooSmall(format!("{} ({what})", field.spec())));
    }
    Ok(())
}

/// `∏_{i=1}^n (1 − x_i) − 2`.
pub fn roabp_hard_poly(field: &Field, n: u32) -> Poly {
    (1..=n)
        .fold(Poly::one(field), |acc, i| acc.mul(&Poly::one(field).sub(&Poly::var(field, x(i)))))
        .add_const(&field.from_i64(-2))
}

pub fn roabp_hard_fixed(field: &Field, n: u32) -> Result<Instance, InstanceError> {
    need_large_char(field, "roabp_hard_fixed")?;
    finish(field, vec![roabp_hard_poly(field, n)], Meta::new("roabp_hard_fixed").param("n", n))
}

/// `f(x̄ ∘ ȳ)`: substitutes `x_i ↦ x_i y_i` for every plain variable.
pub fn lift_xy(f: &Poly) -> Poly {
    let field = f.field();
    let map: BTreeMap<VarId, Poly> = f
        .vars()
        .into_iter()
        .filter_map(|v| match v {
            VarId::Plain(i) => Some((v, Poly::var(field, v).mul(&Poly::var(field, lift_y(i))))),
            _ => None,
        })
        .collect();
    f.subst(&map)
}

pub fn roabp_hard_fixed_lifted(field: &Field, n: u32) -> Result<Instance, InstanceError> {
    need_large_char(field, "roabp_hard_fixed")?;
    finish(
        field,
        vec![lift_xy(&roabp_hard_poly(field, n))],
        Meta::new("roabp_hard_fixed_lifted").param("n", n),
    )
}

pub fn z(i: u32, j: u32) -> VarId {
    VarId::Gadget(Gadget::Z(i, j))
}

pub fn wv(i: u32, j: u32) -> VarId {
    VarId::Gadget(Gadget::W(i, j))
}

/// `∏_{i<j ≤ 2n} (1 − w_{i,j}) − 2`.
pub fn anyorder_pre(field: &Field, n: u32) -> Poly {
    let mut acc = Poly::one(field);
    for i in 1..=2 * n {
        for j in (i + 1)..=2 * n {
            acc = acc.mul(&Poly::one(field).sub(&Poly::var(field, wv(i, j))));
        }
    }
    acc.add_const(&field.from_i64(-2))
}

/// Gadget substitution `w_{i,j} ↦ z_{i,j} x_i x_j`.
pub fn anyorder_gadget(f: &Poly) -> Poly {
    let field = f.field();
    let map: BTreeMap<VarId, Poly> = f
        .vars()
        .into_iter()
        .filter_map(|v| match v {
            VarId::Gadget(Gadget::W(i, j)) => Some((
                v,
                Poly::monomial(field, Monomial::from_vars([z(i, j), x(i), x(j)]), field.one()),
            )),
            _ => None,
        })
        .collect();
    f.subst(&map)
}

/// `f*(z̄, x̄) = ∏_{i<j}(1 − z_{i,j} x_i x_j) − 2` over `C(2n,2) + 2n`
/// variables.
pub fn roabp_hard_anyorder(field: &Field, n: u32) -> Result<Instance, InstanceError> {
    need_large_char(field, "roabp_hard_anyorder")?;
    let f = anyorder_gadget(&anyorder_pre(field, n));
    let m = (2 * n) * (2 * n).saturating_sub(1) / 2;
    finish(field, vec![f], Meta::new("roabp_hard_anyorder").param("n", n).param("m", m))
}

/// The pair `f = ∏_{i<j}(x_i + x_j + 1)`, `g = ∏(1 − x_i) − 1`.
pub fn multiples_polys(field: &Field, n: u32) -> (Poly, Poly) {
    let mut f = Poly::one(field);
    for (a, b) in multiples_factors(n) {
        f = f.mul(&linear_factor(field, a, b));
    }
    let g = (1..=n)
        .fold(Poly::one(field), |acc, i| acc.mul(&Poly::one(field).sub(&Poly::var(field, x(i)))))
        .add_const(&field.from_i64(-1));
    (f, g)
}

/// Index pairs `(i, j)`, `i < j`, of the linear factors of `f`.
pub fn multiples_factors(n: u32) -> Vec<(u32, u32)> {
    (1..=n).flat_map(|i| ((i + 1)..=n).map(move |j| (i, j))).collect()
}

/// `x_i + x_j + 1`.
pub fn linear_factor(field: &Field, i: u32, j: u32) -> Poly {
    Poly::var(field, x(i)).add(&Poly::var(field, x(j))).add_const(&field.one())
}

pub fn multiples_system(field: &Field, n: u32) -> Result<Instance, InstanceError> {
    if !field.is_finite() || field.size() == Some(2) {
        return Err(InstanceError::FieldTooSmall(field.spec()));
    }
    let (f, g) = multiples_polys(field, n);
    let vars: Vec<VarId> = (1..=n).map(x).collect();
    let mut roots = Vec::new();
    crate::mpoly::scan_cube(std::slice::from_ref(&g), &vars, |base, vals| {
        for (t, v) in vals[0].iter().enumerate() {
            if field.is_zero(v) {
                roots.push(base | t as u64);
            }
        }
        true
    });
    let mut meta = Meta::new("multiples_system").param("n", n);
    meta.params.insert("g_roots".into(), format!("{roots:?}"));
    meta.params
        .insert("f_at_zero".into(), field.format_elem(&f.constant_term()));
    if roots != [0] || field.is_zero(&f.constant_term()) {
        meta.notes.push("g does not have the unique root 0 with f(0) ≠ 0".into());
    }
    finish(field, vec![f, g], meta)
}

fn lemma_char_note(field: &Field, n: usize) -> String {
    let c = field.characteristic();
    let ok = c == 0 || c as usize > n;
    format!("degree lemma needs char 0 or char > {n}: {}", if ok { "satisfied" } else { "violated" })
}

/// `Σ x_i − β`.
pub fn subset_sum(field: &Field, n: u32, beta: Elem) -> Result<Instance, InstanceError> {
    if beta_in_range(field, &beta, n as usize) {
        return Err(InstanceError::BetaInImage(field.format_elem(&beta)));
    }
    let f = (1..=n)
        .fold(Poly::zero(field), |acc, i| acc.add(&Poly::var(field, x(i))))
        .add_const(&field.neg(&beta));
    let mut meta = Meta::new("subset_sum").param("n", n);
    meta.beta = Some(field.format_elem(&beta));
    meta.notes.push(lemma_char_note(field, n as usize));
    finish(field, vec![f], meta)
}

/// `Σ_{i∈I} ψ_i − β`.
pub fn psi_sum(field: &Field, psis: &[Poly], beta: Elem, generator: &str) -> Result<Instance, InstanceError> {
    if beta_in_range(field, &beta, psis.len()) {
        return Err(InstanceError::BetaInImage(field.format_elem(&beta)));
    }
    let f = psis
        .iter()
        .fold(Poly::zero(field), |acc, p| acc.add(p))
        .add_const(&field.neg(&beta));
    let mut meta = Meta::new(generator).param("parts", psis.len());
    meta.beta = Some(field.format_elem(&beta));
    meta.notes.push(lemma_char_note(field, psis.len()));
    finish(field, vec![f], meta)
}

/// `∏_{x ∈ part} (1 − x)`.
pub fn indicator(field: &Field, part: &[VarId]) -> Poly {
    part.iter()
        .fold(Poly::one(field), |acc, &v| acc.mul(&Poly::one(field).sub(&Poly::var(field, v))))
}

/// `Σ_{i∈I} ∏_{x∈x̄_i} (1 − x) − β`.
pub fn partition_indicator(field: &Field, parts: &[Vec<VarId>], beta: Elem) -> Result<Instance, InstanceError> {
    let psis: Vec<Poly> = parts.iter().map(|p| indicator(field, p)).collect();
    let mut inst = psi_sum(field, &psis, beta, "partition_indicator")?;
    inst.meta
        .params
        .insert("partition".into(), format!("{:?}", parts.iter().map(|p| p.iter().map(|v| v.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()));
    Ok(inst)
}

/// `e₂(x_1..x_n) − β`.
pub fn e2_minus_beta(field: &Field, n: u32, beta: Elem) -> Result<Instance, InstanceError> {
    let vars: Vec<VarId> = (1..=n).map(x).collect();
    let e2 = crate::mpoly::e_sym(field, 2, &vars)?;
    let f = e2.add_const(&field.neg(&beta));
    let mut meta = Meta::new("e2_minus_beta").param("n", n);
    meta.beta = Some(field.format_elem(&beta));
    finish(field, vec![f], meta).map_err(|e| match e {
        InstanceError::HasBooleanRoot(_) => InstanceError::BetaInImage(field.format_elem(&beta)),
        other => other,
    })
}
