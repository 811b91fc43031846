//! Read-once oblivious algebraic branching programs.
//!
//! Layer `ℓ` reads the variable `order[ℓ]`; its edges form a
//! `widths[ℓ] × widths[ℓ+1]` matrix of univariate labels stored as
//! coefficient lists (index = power). The program computes the `1×1`
//! product of the layer matrices.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dims::{coeff_dim, DimError};
use crate::ff::{Elem, FfError, Field};
use crate::linalg::SpanBasis;
use crate::mpoly::{Gadget, Monomial, Poly, PolyError, VarId};

/// Largest variable count accepted by [`nisan_build`] and the cube checks.
pub const MAX_NISAN_VARS: usize = 24;
/// Largest term count accepted by [`nisan_build`].
pub const MAX_NISAN_TERMS: usize = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RoAbpError {
    #[error("{0} is too large for exact construction")]
    TooLarge(String),
    #[error("programs read different variable orders")]
    OrderMismatch,
    #[error("variable order is invalid: {0}")]
    BadOrder(String),
    #[error("program has inconsistent shape: {0}")]
    Shape(String),
    #[error("polynomial has a Boolean root at {0}")]
    HasBooleanRoot(String),
    #[error("roABP parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FfError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Dim(#[from] DimError),
}

/// A univariate label `Σ_e c_e v^e`, trailing zeros trimmed.
pub type Label = Vec<Elem>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoAbp {
    field: Field,
    order: Vec<VarId>,
    widths: Vec<usize>,
    layers: Vec<Vec<Vec<Label>>>,
}

/// Size data: raw counts and the `n·r·d·D` convention with `D = n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoAbpSize {
    pub n: usize,
    pub width: usize,
    pub ideg: usize,
    pub nodes: usize,
    pub edges: usize,
    /// `n · width · ideg · n`.
    pub conventional: u128,
}

fn trim(field: &Field, mut l: Label) -> Label {
    while l.last().is_some_and(|c| field.is_zero(c)) {
        l.pop();
    }
    l
}

fn label_add(field: &Field, a: &Label, b: &Label) -> Label {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for e in 0..n {
        let x = a.get(e).cloned().unwrap_or_else(|| field.zero());
        let y = b.get(e).cloned().unwrap_or_else(|| field.zero());
        out.push(field.add(&x, &y));
    }
    trim(field, out)
}

fn label_mul(field: &Field, a: &Label, b: &Label) -> Label {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if field.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = field.add(&out[i + j], &field.mul(x, y));
        }
    }
    trim(field, out)
}

fn label_scale(field: &Field, a: &Label, c: &Elem) -> Label {
    trim(field, a.iter().map(|x| field.mul(x, c)).collect())
}

fn label_eval(field: &Field, a: &Label, x: &Elem) -> Elem {
    a.iter().rev().fold(field.zero(), |acc, c| field.add(&field.mul(&acc, x), c))
}

fn label_poly(field: &Field, a: &Label, v: VarId) -> Poly {
    Poly::from_terms(
        field,
        a.iter()
            .enumerate()
            .map(|(e, c)| (Monomial::var_pow(v, e as u32), c.clone())),
    )
}

fn check_order(order: &[VarId]) -> Result<(), RoAbpError> {
    let set: BTreeSet<&VarId> = order.iter().collect();
    if set.len() != order.len() {
        return Err(RoAbpError::BadOrder("repeated variable".into()));
    }
    Ok(())
}

impl RoAbp {
    /// Assembles a program, checking that the layer shapes chain from a
    /// single source to a single sink.
    pub fn new(field: &Field, order: Vec<VarId>, layers: Vec<Vec<Vec<Label>>>) -> Result<RoAbp, RoAbpError> {
        check_order(&order)?;
        if order.len() != layers.len() {
            return Err(RoAbpError::Shape(format!("{} variables but {} layers", order.len(), layers.len())));
        }
        if order.is_empty() {
            return Err(RoAbpError::Shape("no layers".into()));
        }
        let mut widths = vec![1usize];
        for (l, layer) in layers.iter().enumerate() {
            let rows = layer.len();
            if rows != widths[l] {
                return Err(RoAbpError::Shape(format!("layer {l} has {rows} rows, expected {}", widths[l])));
            }
            let cols = layer.first().map_or(0, Vec::len);
            if cols == 0 || layer.iter().any(|r| r.len() != cols) {
                return Err(RoAbpError::Shape(format!("layer {l} is ragged or empty")));
            }
            if layer.iter().flatten().flatten().any(|c| !field.contains(c)) {
                return Err(RoAbpError::Shape(format!("layer {l} has a label outside {}", field.spec())));
            }
            widths.push(cols);
        }
        if *widths.last().unwrap() != 1 {
            return Err(RoAbpError::Shape("last layer must end in a single sink".into()));
        }
        let layers = layers
            .into_iter()
            .map(|layer| {
                layer
                    .into_iter()
                    .map(|row| row.into_iter().map(|l| trim(field, l)).collect())
                    .collect()
            })
            .collect();
        Ok(RoAbp {
            field: field.clone(),
            order,
            widths,
            layers,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn order(&self) -> &[VarId] {
        &self.order
    }

    /// Node counts per level, `widths[0] = widths[n] = 1`.
    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    pub fn layer(&self, l: usize) -> &[Vec<Label>] {
        &self.layers[l]
    }

    pub fn width(&self) -> usize {
        self.widths.iter().copied().max().unwrap_or(1)
    }

    /// Largest label degree.
    pub fn ideg(&self) -> usize {
        self.layers
            .iter()
            .flatten()
            .flatten()
            .map(|l| l.len().saturating_sub(1))
            .max()
            .unwrap_or(0)
    }

    pub fn size(&self) -> RoAbpSize {
        let n = self.order.len();
        let (width, ideg) = (self.width(), self.ideg());
        RoAbpSize {
            n,
            width,
            ideg,
            nodes: self.widths.iter().sum(),
            edges: self.layers.iter().flatten().flatten().filter(|l| !l.is_empty()).count(),
            conventional: (n as u128) * (width as u128) * (ideg as u128) * (n as u128),
        }
    }

    /// The polynomial computed.
    pub fn extract_poly(&self) -> Poly {
        let f = &self.field;
        let mut row = vec![Poly::one(f)];
        for (layer, &v) in self.layers.iter().zip(&self.order) {
            let cols = layer[0].len();
            let mut next = vec![Poly::zero(f); cols];
            for (k, g) in row.iter().enumerate() {
                if g.is_zero() {
                    continue;
                }
                for (l, lab) in layer[k].iter().enumerate() {
                    if !lab.is_empty() {
                        next[l] = next[l].add(&g.mul(&label_poly(f, lab, v)));
                    }
                }
            }
            row = next;
        }
        row.pop().expect("single sink")
    }

    /// Value at a point of `target` (which must contain this field).
    /// Variables missing from the point are an error.
    pub fn eval_in(&self, target: &Field, point: &BTreeMap<VarId, Elem>) -> Result<Elem, RoAbpError> {
        let mut row = vec![target.one()];
        for (layer, v) in self.layers.iter().zip(&self.order) {
            let x = point.get(v).ok_or(PolyError::MissingVariable(*v))?;
            let cols = layer[0].len();
            let mut next = vec![target.zero(); cols];
            for (k, g) in row.iter().enumerate() {
                if target.is_zero(g) {
                    continue;
                }
                for (l, lab) in layer[k].iter().enumerate() {
                    if lab.is_empty() {
                        continue;
                    }
                    let lab: Label = lab
                        .iter()
                        .map(|c| target.embed(&self.field, c))
                        .collect::<Result<_, _>>()?;
                    let t = target.mul(g, &label_eval(target, &lab, x));
                    next[l] = target.add(&next[l], &t);
                }
            }
            row = next;
        }
        Ok(row.pop().expect("single sink"))
    }

    pub fn eval(&self, point: &BTreeMap<VarId, Elem>) -> Result<Elem, RoAbpError> {
        self.eval_in(&self.field.clone(), point)
    }

    /// Value at the Boolean point whose set bits (in `order` positions) are 1.
    pub fn eval_boolean(&self, mask: u64) -> Elem {
        let f = &self.field;
        let mut row = vec![f.one()];
        for (t, layer) in self.layers.iter().enumerate() {
            let bit = mask >> t & 1 == 1;
            let cols = layer[0].len();
            let mut next = vec![f.zero(); cols];
            for (k, g) in row.iter().enumerate() {
                if f.is_zero(g) {
                    continue;
                }
                for (l, lab) in layer[k].iter().enumerate() {
                    let v = if bit {
                        lab.iter().fold(f.zero(), |a, c| f.add(&a, c))
                    } else {
                        lab.first().cloned().unwrap_or_else(|| f.zero())
                    };
                    next[l] = f.add(&next[l], &f.mul(g, &v));
                }
            }
            row = next;
        }
        row.pop().expect("single sink")
    }

    fn map_labels<F: Fn(&Label) -> Label>(&self, g: F) -> RoAbp {
        RoAbp {
            field: self.field.clone(),
            order: self.order.clone(),
            widths: self.widths.clone(),
            layers: self
                .layers
                .iter()
                .map(|layer| layer.iter().map(|row| row.iter().map(&g).collect()).collect())
                .collect(),
        }
    }
}

/// The prefix coefficient space at level `i`: coefficients in `F[x_{>i}]`
/// of the `x_{≤i}`-monomials of `f`, in grlex order of those monomials.
fn prefix_coeffs(f: &Poly, prefix: &BTreeSet<VarId>) -> Vec<Poly> {
    f.group_by(|v| prefix.contains(&v)).into_values().collect()
}

fn desk_check(f: &Poly, order: &[VarId]) -> Result<(), RoAbpError> {
    check_order(order)?;
    let known: BTreeSet<VarId> = order.iter().copied().collect();
    if let Some(v) = f.vars().into_iter().find(|v| !known.contains(v)) {
        return Err(RoAbpError::BadOrder(format!("{v} is not in the order")));
    }
    if order.is_empty() {
        return Err(RoAbpError::BadOrder("empty order".into()));
    }
    if order.len() > MAX_NISAN_VARS || f.num_terms() > MAX_NISAN_TERMS {
        return Err(RoAbpError::TooLarge(format!(
            "polynomial with {} variables and {} terms",
            order.len(),
            f.num_terms()
        )));
    }
    Ok(())
}

/// Minimal-width roABP for `f` in the given order.
///
/// Level `i` nodes are a basis of the space spanned by the coefficients of
/// the `x_{≤i}`-monomials of `f`, chosen greedily in grlex order. Each basis
/// element at level `i−1` expands in `x_i` with coefficients in the level-`i`
/// space; their coordinates are the edge labels. The zero polynomial gets a
/// width-1 program with zero labels.
pub fn nisan_build(f: &Poly, order: &[VarId]) -> Result<RoAbp, RoAbpError> {
    desk_check(f, order)?;
    let field = f.field();
    let n = order.len();
    if f.is_zero() {
        return RoAbp::new(field, order.to_vec(), vec![vec![vec![Vec::new()]]; n]);
    }
    let mut bases: Vec<Vec<Poly>> = Vec::with_capacity(n + 1);
    let mut span_bases: Vec<SpanBasis> = Vec::with_capacity(n + 1);
    let mut prefix = BTreeSet::new();
    for i in 0..=n {
        if i > 0 {
            prefix.insert(order[i - 1]);
        }
        let mut b = SpanBasis::new(field);
        if i == n {
            b.insert(&Poly::one(field));
        } else {
            for g in prefix_coeffs(f, &prefix) {
                b.insert(&g);
            }
        }
        bases.push(b.members().to_vec());
        span_bases.push(b);
    }
    let mut layers = Vec::with_capacity(n);
    for i in 1..=n {
        let v = order[i - 1];
        let next = &span_bases[i];
        let mut layer = vec![vec![Vec::new(); bases[i].len()]; bases[i - 1].len()];
        for (k, g) in bases[i - 1].iter().enumerate() {
            let parts = g.group_by(|u| u == v);
            for (m, h) in parts {
                let e = m.exponent(v) as usize;
                let coords = next
                    .coords(&h)
                    .expect("coefficients of a prefix-space element lie in the next space");
                for (l, c) in coords.into_iter().enumerate() {
                    if field.is_zero(&c) {
                        continue;
                    }
                    let lab: &mut Label = &mut layer[k][l];
                    if lab.len() <= e {
                        lab.resize(e + 1, field.zero());
                    }
                    lab[e] = field.add(&lab[e], &c);
                }
            }
        }
        layers.push(layer);
    }
    RoAbp::new(field, order.to_vec(), layers)
}

/// `max_i dim coeff_{x_{≤i} | x_{>i}}(f)`, computed from dense coefficient
/// matrices. An ABP has width at least 1, so the zero polynomial gives 1.
pub fn width_lower(f: &Poly, order: &[VarId]) -> Result<usize, RoAbpError> {
    desk_check(f, order)?;
    let mut best = 1;
    for i in 0..=order.len() {
        let xs: BTreeSet<VarId> = order[..i].iter().copied().collect();
        let ys: BTreeSet<VarId> = order[i..].iter().copied().collect();
        best = best.max(coeff_dim(f, &xs, &ys)?);
    }
    Ok(best)
}

fn same_order(a: &RoAbp, b: &RoAbp) -> Result<(), RoAbpError> {
    if a.order != b.order || a.field != b.field {
        return Err(RoAbpError::OrderMismatch);
    }
    Ok(())
}

/// Block-diagonal sum: width at most `r + s`.
pub fn closure_sum(a: &RoAbp, b: &RoAbp) -> Result<RoAbp, RoAbpError> {
    same_order(a, b)?;
    let f = &a.field;
    let n = a.order.len();
    if n == 1 {
        let lab = label_add(f, &a.layers[0][0][0], &b.layers[0][0][0]);
        return RoAbp::new(f, a.order.clone(), vec![vec![vec![lab]]]);
    }
    let mut layers = Vec::with_capacity(n);
    for l in 0..n {
        let (la, lb) = (&a.layers[l], &b.layers[l]);
        let (ra, ca) = (la.len(), la[0].len());
        let (rb, cb) = (lb.len(), lb[0].len());
        let layer = if l == 0 {
            let mut row = la[0].clone();
            row.extend(lb[0].iter().cloned());
            vec![row]
        } else if l == n - 1 {
            la.iter().chain(lb.iter()).map(|r| vec![r[0].clone()]).collect()
        } else {
            let mut m = vec![vec![Vec::new(); ca + cb]; ra + rb];
            for (i, row) in la.iter().enumerate() {
                for (j, lab) in row.iter().enumerate() {
                    m[i][j] = lab.clone();
                }
            }
            for (i, row) in lb.iter().enumerate() {
                for (j, lab) in row.iter().enumerate() {
                    m[ra + i][ca + j] = lab.clone();
                }
            }
            m
        };
        layers.push(layer);
    }
    RoAbp::new(f, a.order.clone(), layers)
}

/// Kronecker product: width at most `r · s`.
pub fn closure_prod(a: &RoAbp, b: &RoAbp) -> Result<RoAbp, RoAbpError> {
    same_order(a, b)?;
    let f = &a.field;
    let layers = a
        .layers
        .iter()
        .zip(&b.layers)
        .map(|(la, lb)| {
            let (ra, ca) = (la.len(), la[0].len());
            let (rb, cb) = (lb.len(), lb[0].len());
            let mut m = vec![vec![Vec::new(); ca * cb]; ra * rb];
            for i in 0..ra {
                for k in 0..rb {
                    for j in 0..ca {
                        for l in 0..cb {
                            m[i * rb + k][j * cb + l] = label_mul(f, &la[i][j], &lb[k][l]);
                        }
                    }
                }
            }
            m
        })
        .collect();
    RoAbp::new(f, a.order.clone(), layers)
}

/// Fixes some variables to constants and folds their layers into a
/// neighbour, so the result reads only the free variables. When every
/// variable is fixed the result is a single constant layer over the last
/// variable of the original order.
pub fn partial_subst(a: &RoAbp, asg: &BTreeMap<VarId, Elem>) -> Result<RoAbp, RoAbpError> {
    let f = &a.field;
    let mut order = Vec::new();
    let mut layers: Vec<Vec<Vec<Label>>> = Vec::new();
    // Constant matrix waiting to be multiplied into the next free layer.
    let mut pending: Option<Vec<Vec<Elem>>> = None;
    for (layer, v) in a.layers.iter().zip(&a.order) {
        match asg.get(v) {
            Some(x) => {
                if !f.contains(x) {
                    return Err(FfError::BadElement(f.format_elem(x)).into());
                }
                let m: Vec<Vec<Elem>> = layer
                    .iter()
                    .map(|row| row.iter().map(|lab| label_eval(f, lab, x)).collect())
                    .collect();
                pending = Some(match pending {
                    None => m,
                    Some(p) => const_mul(f, &p, &m),
                });
            }
            None => {
                let layer = match pending.take() {
                    None => layer.clone(),
                    Some(p) => const_times_layer(f, &p, layer),
                };
                order.push(*v);
                layers.push(layer);
            }
        }
    }
    if let Some(p) = pending {
        match layers.pop() {
            Some(last) => layers.push(layer_times_const(f, &last, &p)),
            None => {
                order.push(*a.order.last().expect("nonempty"));
                let c = trim(f, vec![p[0][0].clone()]);
                layers.push(vec![vec![c]]);
            }
        }
    }
    RoAbp::new(f, order, layers)
}

fn const_mul(f: &Field, a: &[Vec<Elem>], b: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let cols = b[0].len();
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(f.zero(), |acc, (x, brow)| f.add(&acc, &f.mul(x, &brow[j])))
                })
                .collect()
        })
        .collect()
}

fn const_times_layer(f: &Field, p: &[Vec<Elem>], layer: &[Vec<Label>]) -> Vec<Vec<Label>> {
    let cols = layer[0].len();
    p.iter()
        .map(|prow| {
            (0..cols)
                .map(|j| {
                    prow.iter()
                        .zip(layer)
                        .fold(Vec::new(), |acc, (c, lrow)| label_add(f, &acc, &label_scale(f, &lrow[j], c)))
                })
                .collect()
        })
        .collect()
}

fn layer_times_const(f: &Field, layer: &[Vec<Label>], p: &[Vec<Elem>]) -> Vec<Vec<Label>> {
    let cols = p[0].len();
    layer
        .iter()
        .map(|lrow| {
            (0..cols)
                .map(|j| {
                    lrow.iter()
                        .zip(p)
                        .fold(Vec::new(), |acc, (lab, prow)| label_add(f, &acc, &label_scale(f, lab, &prow[j])))
                })
                .collect()
        })
        .collect()
}

/// The `x_i ↦ x_i y_i` lift of a program over plain variables, read in the
/// interleaved order `x_1 < y_1 < x_2 < …` of its own order.
pub fn interleave_lift(a: &RoAbp) -> Result<RoAbp, RoAbpError> {
    interleave_lift_with(a, |v| match v {
        VarId::Plain(i) => Some((v, VarId::Gadget(Gadget::LiftY(i)))),
        _ => None,
    })
}

/// Lift with a custom split `v ↦ (x, y)` of each variable.
///
/// A layer with labels `L_{k,l}(v) = Σ_e c_e v^e` becomes an x-layer from
/// node `k` to intermediate nodes `(k, e)` labelled `x^e`, followed by a
/// y-layer from `(k, e)` to `l` labelled `c_e y^e`. Width grows to at most
/// `r · (ideg + 1)`.
pub fn interleave_lift_with<F: Fn(VarId) -> Option<(VarId, VarId)>>(a: &RoAbp, split: F) -> Result<RoAbp, RoAbpError> {
    let f = &a.field;
    let mut order = Vec::with_capacity(2 * a.order.len());
    let mut layers = Vec::with_capacity(2 * a.order.len());
    for (layer, &v) in a.layers.iter().zip(&a.order) {
        let (xv, yv) = split(v).ok_or_else(|| RoAbpError::BadOrder(format!("cannot lift {v}")))?;
        let mut mids: Vec<(usize, usize)> = Vec::new();
        for (k, row) in layer.iter().enumerate() {
            let used: BTreeSet<usize> = row
                .iter()
                .flat_map(|lab| lab.iter().enumerate().filter(|(_, c)| !f.is_zero(c)).map(|(e, _)| e))
                .collect();
            if used.is_empty() {
                mids.push((k, 0));
            }
            mids.extend(used.into_iter().map(|e| (k, e)));
        }
        let mono = |e: usize| {
            let mut l = vec![f.zero(); e + 1];
            l[e] = f.one();
            l
        };
        let xl: Vec<Vec<Label>> = (0..layer.len())
            .map(|k| {
                mids.iter()
                    .map(|&(kk, e)| if kk == k { mono(e) } else { Vec::new() })
                    .collect()
            })
            .collect();
        let cols = layer[0].len();
        let yl: Vec<Vec<Label>> = mids
            .iter()
            .map(|&(k, e)| {
                (0..cols)
                    .map(|l| match layer[k][l].get(e) {
                        Some(c) if !f.is_zero(c) => {
                            let mut lab = vec![f.zero(); e + 1];
                            lab[e] = c.clone();
                            lab
                        }
                        _ => Vec::new(),
                    })
                    .collect()
            })
            .collect();
        order.push(xv);
        order.push(yv);
        layers.push(xl);
        layers.push(yl);
    }
    RoAbp::new(f, order, layers)
}

/// Multilinearization: every label is reduced modulo `v² − v`.
pub fn ml_roabp(a: &RoAbp) -> RoAbp {
    let f = a.field.clone();
    a.map_labels(|lab| match lab.split_first() {
        None => Vec::new(),
        Some((c0, rest)) => {
            let c1 = rest.iter().fold(f.zero(), |acc, c| f.add(&acc, c));
            trim(&f, vec![c0.clone(), c1])
        }
    })
}

/// The constant program `c` over an order.
pub fn constant_roabp(field: &Field, order: &[VarId], c: Elem) -> Result<RoAbp, RoAbpError> {
    let n = order.len();
    let mut layers = vec![vec![vec![vec![field.one()]]]; n];
    if let Some(first) = layers.first_mut() {
        first[0][0] = vec![c];
    }
    RoAbp::new(field, order.to_vec(), layers)
}

/// Output of [`fermat_refutation_roabp`].
#[derive(Debug, Clone)]
pub struct FermatRoAbp {
    /// Program for `ml(f^{p−2})`.
    pub inverse: RoAbp,
    /// `width(A)^{p−2}`.
    pub width_bound: u128,
    /// Number of cube points on which `g · f = 1` was checked.
    pub points_checked: u64,
}

/// Builds `ml(f^{p−2})` by repeated products and multilinearization and
/// checks `g · f = 1` on the cube.
pub fn fermat_refutation_roabp(a: &RoAbp) -> Result<FermatRoAbp, RoAbpError> {
    let f = &a.field;
    let p = f.characteristic();
    if p < 2 || !f.is_finite() {
        return Err(FfError::BadFieldSpec(f.spec()).into());
    }
    let n = a.order.len();
    if n > MAX_NISAN_VARS {
        return Err(RoAbpError::TooLarge(format!("cube of {n} variables")));
    }
    for mask in 0..(1u64 << n) {
        if f.is_zero(&a.eval_boolean(mask)) {
            return Err(RoAbpError::HasBooleanRoot(format_mask(&a.order, mask)));
        }
    }
    let base = ml_roabp(a);
    let mut g = constant_roabp(f, &a.order, f.one())?;
    for _ in 0..p.saturating_sub(2) {
        g = ml_roabp(&closure_prod(&g, &base)?);
    }
    for mask in 0..(1u64 << n) {
        let v = f.mul(&g.eval_boolean(mask), &a.eval_boolean(mask));
        if !f.is_one(&v) {
            return Err(RoAbpError::HasBooleanRoot(format_mask(&a.order, mask)));
        }
    }
    Ok(FermatRoAbp {
        width_bound: (a.width() as u128).saturating_pow(p.saturating_sub(2) as u32),
        inverse: g,
        points_checked: 1u64 << n,
    })
}

fn format_mask(vars: &[VarId], mask: u64) -> String {
    vars.iter()
        .enumerate()
        .map(|(t, v)| format!("{v}={}", mask >> t & 1))
        .collect::<Vec<_>>()
        .join(",")
}

/// File layout: labels are `layers[ℓ][k][l] = [c_0, c_1, …]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoAbpJson {
    pub field: String,
    pub order: Vec<String>,
    pub widths: Vec<usize>,
    pub layers: Vec<Vec<Vec<Vec<String>>>>,
}

impl RoAbpJson {
    pub fn from_roabp(a: &RoAbp) -> RoAbpJson {
        let f = &a.field;
        RoAbpJson {
            field: f.spec(),
            order: a.order.iter().map(|v| v.to_string()).collect(),
            widths: a.widths.clone(),
            layers: a
                .layers
                .iter()
                .map(|layer| {
                    layer
                        .iter()
                        .map(|row| row.iter().map(|lab| lab.iter().map(|c| f.format_elem(c)).collect()).collect())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_roabp(&self) -> Result<RoAbp, RoAbpError> {
        let f = Field::parse(&self.field)?;
        let order = self
            .order
            .iter()
            .map(|s| s.parse::<VarId>().map_err(|e| RoAbpError::Parse(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let layers = self
            .layers
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|lab| lab.iter().map(|c| f.parse_elem(c)).collect::<Result<Label, _>>())
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let a = RoAbp::new(&f, order, layers)?;
        if a.widths != self.widths {
            return Err(RoAbpError::Shape("declared widths do not match the layers".into()));
        }
        Ok(a)
    }
}

pub fn roabp_to_json(a: &RoAbp) -> String {
    serde_json::to_string_pretty(&RoAbpJson::from_roabp(a)).expect("serializable")
}

pub fn roabp_from_json(s: &str) -> Result<RoAbp, RoAbpError> {
    let j: RoAbpJson = serde_json::from_str(s).map_err(|e| RoAbpError::Parse(e.to_string()))?;
    j.to_roabp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::parse_poly;

    fn xs(n: u32) -> Vec<VarId> {
        (1..=n).map(VarId::Plain).collect()
    }

    #[test]
    fn nisan_small() {
        let f = Field::prime(5).unwrap();
        let p = parse_poly(&f, "x_1*x_2*x_3").unwrap();
        let a = nisan_build(&p, &xs(3)).unwrap();
        assert_eq!(a.width(), 1);
        assert_eq!(a.extract_poly(), p);
        let h = crate::instances::roabp_hard_poly(&f, 4);
        let mut ord = xs(4);
        for _ in 0..3 {
            let a = nisan_build(&h, &ord).unwrap();
            assert_eq!(a.width(), 2);
            assert_eq!(a.extract_poly(), h);
            assert_eq!(width_lower(&h, &ord).unwrap(), 2);
            ord.rotate_left(1);
        }
        let j = roabp_to_json(&a);
        assert_eq!(roabp_from_json(&j).unwrap(), a);
    }

    #[test]
    fn closures_and_subst() {
        let f = Field::prime(7).unwrap();
        let p = parse_poly(&f, "x_1 + 2*x_2*x_3 + 3").unwrap();
        let q = parse_poly(&f, "x_1^2*x_3 + x_2 + 1").unwrap();
        let (a, b) = (nisan_build(&p, &xs(3)).unwrap(), nisan_build(&q, &xs(3)).unwrap());
        let s = closure_sum(&a, &b).unwrap();
        assert!(s.width() <= a.width() + b.width());
        assert_eq!(s.extract_poly(), p.add(&q));
        let m = closure_prod(&a, &b).unwrap();
        assert!(m.width() <= a.width() * b.width());
        assert_eq!(m.extract_poly(), p.mul(&q));
        let asg: BTreeMap<VarId, Elem> = [(VarId::Plain(2), f.from_i64(3))].into();
        let r = partial_subst(&a, &asg).unwrap();
        assert_eq!(r.extract_poly(), p.subst_consts(&asg));
        assert!(r.width() <= a.width());
        assert_eq!(ml_roabp(&b).extract_poly(), q.ml());
    }

    #[test]
    fn lift() {
        let f = Field::prime(5).unwrap();
        let p = crate::instances::roabp_hard_poly(&f, 3);
        let a = nisan_build(&p, &xs(3)).unwrap();
        let l = interleave_lift(&a).unwrap();
        assert_eq!(l.extract_poly(), crate::instances::lift_xy(&p));
        let ones: BTreeMap<VarId, Elem> = (1..=3).map(|i| (VarId::Gadget(Gadget::LiftY(i)), f.one())).collect();
        assert_eq!(partial_subst(&l, &ones).unwrap().extract_poly(), p);
    }

    #[test]
    fn fermat() {
        let f = Field::prime(5).unwrap();
        let p = crate::instances::roabp_hard_poly(&f, 3);
        let a = nisan_build(&p, &xs(3)).unwrap();
        let r = fermat_refutation_roabp(&a).unwrap();
        assert_eq!(r.points_checked, 8);
        assert!(r.inverse.width() as u128 <= r.width_bound);
        assert_eq!(r.inverse.extract_poly(), p.ml_pow(3));
        let x = nisan_build(&parse_poly(&f, "x_1").unwrap(), &xs(1)).unwrap();
        assert!(matches!(fermat_refutation_roabp(&x), Err(RoAbpError::HasBooleanRoot(_))));
    }
}
