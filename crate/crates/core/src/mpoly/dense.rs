//! Dense multilinear polynomials indexed by subsets of a variable list.
//!
//! Index `mask` stands for the monomial (or cube point) whose variables are
//! `vars[t]` for every set bit `t`. The zeta transform maps coefficients to
//! cube values and the Möbius transform inverts it.

use std::collections::HashMap;

use crate::ff::{Elem, Field};

use super::monomial::Monomial;
use super::poly::Poly;
use super::var::VarId;

/// Variable count up to which multilinear work goes through dense tables.
pub const DENSE_VAR_CAP: usize = 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMl {
    field: Field,
    vars: Vec<VarId>,
    coeffs: Vec<Elem>,
}

fn index_map(vars: &[VarId]) -> HashMap<VarId, usize> {
    vars.iter().enumerate().map(|(i, &v)| (v, i)).collect()
}

/// Coefficients of `ml(p)` as a dense table over `vars`, which must contain
/// every variable of `p`.
pub fn ml_coeffs(p: &Poly, vars: &[VarId]) -> Vec<Elem> {
    let f = p.field();
    assert!(vars.len() < usize::BITS as usize - 1, "too many variables for a dense table");
    let pos = index_map(vars);
    let mut out = vec![f.zero(); 1usize << vars.len()];
    for (m, c) in p.terms() {
        let mut mask = 0usize;
        for v in m.vars() {
            let t = *pos.get(&v).unwrap_or_else(|| panic!("variable {v} not in the dense index"));
            mask |= 1 << t;
        }
        out[mask] = f.add(&out[mask], c);
    }
    out
}

/// Values of `p` on `{0,1}^vars`, indexed by point mask.
pub fn cube_values(p: &Poly, vars: &[VarId]) -> Vec<Elem> {
    let mut a = ml_coeffs(p, vars);
    zeta(p.field(), &mut a);
    a
}

/// Variables handled per dense chunk in [`scan_cube`].
const CHUNK_BITS: usize = 16;

/// Visits the values of several polynomials on `{0,1}^vars` in chunks:
/// `visit(point, values)` receives the point mask of the chunk's first point
/// and, per polynomial, the values on the chunk's low variables. Stops early
/// when `visit` returns `false`.
pub fn scan_cube<F: FnMut(u64, &[Vec<Elem>]) -> bool>(polys: &[Poly], vars: &[VarId], mut visit: F) {
    let Some(first) = polys.first() else {
        return;
    };
    let f = first.field().clone();
    let low = vars.len().min(CHUNK_BITS);
    let (lo_vars, hi_vars) = vars.split_at(low);
    for h in 0..(1u64 << hi_vars.len()) {
        let asg: std::collections::BTreeMap<VarId, Elem> = hi_vars
            .iter()
            .enumerate()
            .map(|(t, &v)| (v, if h >> t & 1 == 1 { f.one() } else { f.zero() }))
            .collect();
        let vals: Vec<Vec<Elem>> = polys
            .iter()
            .map(|p| {
                let q = if asg.is_empty() { p.clone() } else { p.subst_consts(&asg) };
                cube_values(&q, lo_vars)
            })
            .collect();
        if !visit(h << low, &vals) {
            return;
        }
    }
}

/// A point of `{0,1}^vars` where every polynomial vanishes, as a mask.
pub fn common_boolean_root(polys: &[Poly], vars: &[VarId]) -> Option<u64> {
    let mut found = None;
    scan_cube(polys, vars, |base, vals| {
        let n = vals.first().map_or(0, Vec::len);
        let f = polys[0].field();
        if let Some(t) = (0..n).find(|&t| vals.iter().all(|v| f.is_zero(&v[t]))) {
            found = Some(base | t as u64);
            return false;
        }
        true
    });
    found
}

/// Subset-sum transform: `a[S] ← Σ_{T⊆S} a[T]`.
pub fn zeta(field: &Field, a: &mut [Elem]) {
    let n = a.len().trailing_zeros();
    for t in 0..n {
        let bit = 1usize << t;
        for mask in 0..a.len() {
            if mask & bit != 0 {
                let s = field.add(&a[mask], &a[mask ^ bit]);
                a[mask] = s;
            }
        }
    }
}

/// Inverse of [`zeta`].
pub fn mobius(field: &Field, a: &mut [Elem]) {
    let n = a.len().trailing_zeros();
    for t in 0..n {
        let bit = 1usize << t;
        for mask in 0..a.len() {
            if mask & bit != 0 {
                let s = field.sub(&a[mask], &a[mask ^ bit]);
                a[mask] = s;
            }
        }
    }
}

impl DenseMl {
    /// Dense form of `ml(p)`.
    pub fn from_poly(p: &Poly, vars: Vec<VarId>) -> DenseMl {
        let coeffs = ml_coeffs(p, &vars);
        DenseMl {
            field: p.field().clone(),
            vars,
            coeffs,
        }
    }

    /// The unique multilinear polynomial with the given cube values.
    pub fn from_values(field: &Field, vars: Vec<VarId>, mut values: Vec<Elem>) -> DenseMl {
        assert_eq!(values.len(), 1usize << vars.len());
        mobius(field, &mut values);
        DenseMl {
            field: field.clone(),
            vars,
            coeffs: values,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn values(&self) -> Vec<Elem> {
        let mut a = self.coeffs.clone();
        zeta(&self.field, &mut a);
        a
    }

    pub fn to_poly(&self) -> Poly {
        let f = &self.field;
        Poly::from_terms(
            f,
            self.coeffs.iter().enumerate().filter(|(_, c)| !f.is_zero(c)).map(|(mask, c)| {
                let m = Monomial::from_vars(
                    (0..self.vars.len()).filter(|t| mask >> t & 1 == 1).map(|t| self.vars[t]),
                );
                (m, c.clone())
            }),
        )
    }

    /// Fixes `v` to a Boolean value, dropping it from the index.
    pub fn subst_boolean(&self, v: VarId, bit: bool) -> DenseMl {
        let Some(t) = self.vars.iter().position(|&x| x == v) else {
            return self.clone();
        };
        let f = &self.field;
        let lo = (1usize << t) - 1;
        let half = self.coeffs.len() / 2;
        let mut coeffs = Vec::with_capacity(half);
        for m in 0..half {
            let full = (m & lo) | ((m & !lo) << 1);
            let c = &self.coeffs[full];
            coeffs.push(if bit {
                f.add(c, &self.coeffs[full | (1 << t)])
            } else {
                c.clone()
            });
        }
        let mut vars = self.vars.clone();
        vars.remove(t);
        DenseMl {
            field: f.clone(),
            vars,
            coeffs,
        }
    }

    /// Total degree; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.field.is_zero(c))
            .map(|(m, _)| m.count_ones())
            .max()
    }
}
