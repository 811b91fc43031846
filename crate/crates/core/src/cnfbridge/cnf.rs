//! Unary-bit CNF encodings of circuit equations `C = 0`.

use std::collections::BTreeMap;

use crate::ff::{Elem, Field};
use crate::mpoly::{Poly, VarId};

use super::slp::{slp_of, Operand, Slp, SlpVar};
use super::ubit::{graft, ubit_gate, ubit_of};
use super::{AlgCircuit, CircuitBuilder, CnfError};

/// DIMACS literal: `±k` for variable `k ≥ 1`.
pub type Lit = i32;
pub type Clause = Vec<Lit>;

/// Boolean formula over the unary bits of every program variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub q: u64,
    /// `names[k − 1]` is the bit variable numbered `k`.
    pub names: Vec<VarId>,
    pub clauses: Vec<Clause>,
    /// `clauses[output_from..]` encode `g_out = 0`.
    pub output_from: usize,
}

impl CnfFormula {
    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    /// Whether a total assignment (`model[k − 1]` for variable `k`) satisfies
    /// every clause in `range`.
    pub fn satisfied_in(&self, model: &[bool], range: std::ops::Range<usize>) -> bool {
        self.clauses[range]
            .iter()
            .all(|cl| cl.iter().any(|&l| model[l.unsigned_abs() as usize - 1] == (l > 0)))
    }

    pub fn satisfied(&self, model: &[bool]) -> bool {
        self.satisfied_in(model, 0..self.clauses.len())
    }

    /// `∏_{positive} (1 − x) · ∏_{negative} x`, zero exactly when the clause holds.
    pub fn translate(&self, field: &Field, k: usize) -> Poly {
        self.translate_with(field, k, &|v| Poly::var(field, v))
    }

    pub fn translate_with(&self, field: &Field, k: usize, leaf: &dyn Fn(VarId) -> Poly) -> Poly {
        self.clauses[k].iter().fold(Poly::one(field), |acc, &l| {
            let x = leaf(self.names[l.unsigned_abs() as usize - 1]);
            acc.mul(&if l > 0 { Poly::one(field).sub(&x) } else { x })
        })
    }
}

/// The plain encoding together with the program it encodes and the bit
/// numbering.
#[derive(Debug, Clone)]
pub struct Encoding {
    pub slp: Slp,
    pub cnf: CnfFormula,
    /// First DIMACS number of each program variable's `q` bits.
    pub base: BTreeMap<SlpVar, u32>,
}

impl Encoding {
    pub fn lit(&self, v: SlpVar, j: u64) -> Lit {
        (self.base[&v] + j as u32) as Lit
    }

    /// Bit assignment induced by an input point; also returns `C(ᾱ)`.
    pub fn induced<F: Fn(VarId) -> Option<Elem>>(&self, asg: F) -> Result<(Vec<bool>, Elem), CnfError> {
        let f = &self.slp.field;
        let val = self.slp.run(asg)?;
        let mut model = vec![false; self.cnf.num_vars()];
        for (v, e) in &val {
            let j = f.index_of(e).expect("finite field");
            model[self.lit(*v, j) as usize - 1] = true;
        }
        Ok((model, self.slp.value(&self.slp.output, &val)))
    }

    /// Decodes the value of every program variable from a model; `None`
    /// when a block is not exactly-one.
    pub fn decode(&self, model: &[bool]) -> Option<BTreeMap<SlpVar, u64>> {
        let q = self.cnf.q;
        let mut out = BTreeMap::new();
        for &v in self.base.keys() {
            let ones: Vec<u64> = (0..q).filter(|&j| model[self.lit(v, j) as usize - 1]).collect();
            if ones.len() != 1 {
                return None;
            }
            out.insert(v, ones[0]);
        }
        Some(out)
    }

    /// Input values read off a model.
    pub fn decode_inputs(&self, model: &[bool]) -> Option<BTreeMap<VarId, Elem>> {
        let vals = self.decode(model)?;
        Some(
            self.slp
                .inputs
                .iter()
                .map(|(sv, x)| (*x, self.slp.field.elem_from_index(vals[sv])))
                .collect(),
        )
    }
}

fn finite_q(field: &Field) -> Result<u64, CnfError> {
    if !field.is_finite() {
        return Err(CnfError::NotPrimeField(field.spec()));
    }
    Ok(field.size().expect("finite"))
}

fn exactly_one(lits: &[Lit], out: &mut Vec<Clause>) {
    out.push(lits.to_vec());
    for a in 0..lits.len() {
        for b in a + 1..lits.len() {
            out.push(vec![-lits[a], -lits[b]]);
        }
    }
}

/// The plain encoding of `C = 0`: exactly-one blocks for every program
/// variable, blocking clauses `¬a_i ∨ ¬b_j ∨ ¬z_k` for each equation and
/// each `k ≠ i∘j`, constants folded in, then unit clauses forcing the
/// output's 0-bit. Boolean axioms are implicit.
pub fn plain_cnf(c: &AlgCircuit) -> Result<Encoding, CnfError> {
    let field = c.field().clone();
    let q = finite_q(&field)?;
    if q > 64 {
        return Err(CnfError::TooLarge { what: "field size".into(), cap: 64 });
    }
    let slp = slp_of(c)?;
    let vars = slp.vars();
    let mut base = BTreeMap::new();
    let mut names = Vec::with_capacity(vars.len() * q as usize);
    for &v in &vars {
        base.insert(v, names.len() as u32 + 1);
        names.extend((0..q).map(|j| v.bit(j as u32)));
    }
    let lit = |v: SlpVar, j: u64| (base[&v] + j as u32) as Lit;
    let mut clauses = Vec::new();
    for &v in &vars {
        let lits: Vec<Lit> = (0..q).map(|j| lit(v, j)).collect();
        exactly_one(&lits, &mut clauses);
    }
    let elem = |i: u64| field.elem_from_index(i);
    let choices = |o: &Operand| -> Vec<(u64, Option<SlpVar>)> {
        match o {
            Operand::Var(v) => (0..q).map(|i| (i, Some(*v))).collect(),
            Operand::Const(e) => vec![(field.index_of(e).expect("finite"), None)],
        }
    };
    for eq in &slp.eqs {
        for (i, av) in choices(&eq.a) {
            for (j, bv) in choices(&eq.b) {
                // A repeated operand cannot carry two values at once.
                if av.is_some() && av == bv && i != j {
                    continue;
                }
                let k = field.index_of(&eq.op.apply(&field, &elem(i), &elem(j))).expect("finite");
                let mut pre: Clause = Vec::new();
                if let Some(a) = av {
                    pre.push(-lit(a, i));
                }
                if let Some(b) = bv {
                    if !(av == bv && i == j) {
                        pre.push(-lit(b, j));
                    }
                }
                for kk in (0..q).filter(|&kk| kk != k) {
                    let mut cl = pre.clone();
                    cl.push(-lit(eq.out, kk));
                    clauses.push(cl);
                }
            }
        }
    }
    let output_from = clauses.len();
    match &slp.output {
        Operand::Var(v) => {
            clauses.push(vec![lit(*v, 0)]);
            clauses.extend((1..q).map(|j| vec![-lit(*v, j)]));
        }
        Operand::Const(e) => {
            if !field.is_zero(e) {
                clauses.push(Vec::new());
            }
        }
    }
    Ok(Encoding {
        slp,
        cnf: CnfFormula {
            q,
            names,
            clauses,
            output_from,
        },
        base,
    })
}

/// The extended encoding: the plain clauses plus, as a separate algebraic
/// stratum, `x_g − Σ_i i·x_{g,i} = 0` for every program variable.
#[derive(Debug, Clone)]
pub struct Ecnf {
    pub encoding: Encoding,
    /// `(x_g, x_g − Σ_i i·x_{g,i})`; inputs use their own variable as `x_g`.
    pub extension: Vec<(VarId, Poly)>,
}

pub fn ecnf(c: &AlgCircuit) -> Result<Ecnf, CnfError> {
    let encoding = plain_cnf(c)?;
    let field = c.field().clone();
    let q = encoding.cnf.q;
    let extension = encoding
        .base
        .keys()
        .map(|&v| {
            let xg = encoding.slp.inputs.get(&v).copied().unwrap_or_else(|| v.node());
            let sum = (0..q).fold(Poly::zero(&field), |a, i| {
                let ei = field.elem_from_index(i);
                a.add(&Poly::var(&field, v.bit(i as u32)).scale(&ei))
            });
            (xg, Poly::var(&field, xg).sub(&sum))
        })
        .collect();
    Ok(Ecnf { encoding, extension })
}

impl Ecnf {
    /// All equations as polynomials: clause translations, Boolean axioms
    /// of the bits, extension axioms.
    pub fn equations(&self) -> Vec<Poly> {
        let f = &self.encoding.slp.field;
        let cnf = &self.encoding.cnf;
        let mut out: Vec<Poly> = (0..cnf.clauses.len()).map(|k| cnf.translate(f, k)).collect();
        out.extend(cnf.names.iter().map(|&v| Poly::boolean_axiom(f, v)));
        out.extend(self.extension.iter().map(|(_, p)| p.clone()));
        out
    }

    /// Whether every equation vanishes at the point induced by `asg`
    /// (bits from the program values, `x_g` from the extension axioms).
    pub fn holds_at<F: Fn(VarId) -> Option<Elem>>(&self, asg: F) -> Result<bool, CnfError> {
        let f = &self.encoding.slp.field;
        let (model, _) = self.encoding.induced(&asg)?;
        let num: BTreeMap<VarId, usize> =
            self.encoding.cnf.names.iter().enumerate().map(|(k, v)| (*v, k)).collect();
        let mut point: BTreeMap<VarId, Elem> = BTreeMap::new();
        for (v, k) in &num {
            point.insert(*v, if model[*k] { f.one() } else { f.zero() });
        }
        for (xg, p) in &self.extension {
            // x_g appears linearly with coefficient 1.
            let rest = p.sub(&Poly::var(f, *xg));
            let val = rest.eval(&point)?;
            point.insert(*xg, f.neg(&val));
        }
        for eq in self.equations() {
            if !f.is_zero(&eq.eval(&point)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The plain encoding with every bit `x_{u,j}` replaced by `UBIT_j(C_u)`.
#[derive(Debug, Clone)]
pub struct SemiCnf {
    pub encoding: Encoding,
    /// `x_{u,j} ↦ (u, j)`.
    pub mapping: BTreeMap<VarId, (SlpVar, u64)>,
    /// The circuit `C_u` for every program variable.
    pub node_circuits: BTreeMap<SlpVar, AlgCircuit>,
}

pub fn semi_cnf(c: &AlgCircuit) -> Result<SemiCnf, CnfError> {
    let encoding = plain_cnf(c)?;
    let q = encoding.cnf.q;
    let mut mapping = BTreeMap::new();
    let mut node_circuits = BTreeMap::new();
    for &v in encoding.base.keys() {
        node_circuits.insert(v, encoding.slp.circuit_for(c, v)?);
        for j in 0..q {
            mapping.insert(v.bit(j as u32), (v, j));
        }
    }
    Ok(SemiCnf {
        encoding,
        mapping,
        node_circuits,
    })
}

impl SemiCnf {
    pub fn len(&self) -> usize {
        self.encoding.cnf.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Equation `k` as an unexpanded circuit.
    pub fn equation_circuit(&self, k: usize) -> Result<AlgCircuit, CnfError> {
        let cnf = &self.encoding.cnf;
        let field = self.encoding.slp.field.clone();
        let mut b = CircuitBuilder::new(&field);
        let mut factors = Vec::new();
        for &l in &cnf.clauses[k] {
            let (u, j) = self.mapping[&cnf.names[l.unsigned_abs() as usize - 1]];
            let g = graft(&mut b, &self.node_circuits[&u]);
            let ub = ubit_gate(&mut b, j, g)?;
            factors.push(if l > 0 { b.const_minus(field.one(), ub) } else { ub });
        }
        let out = if factors.is_empty() { b.constant(field.one()) } else { b.mul(factors) };
        Ok(b.finish(out))
    }

    /// Polynomial of equation `k`, expanded.
    pub fn equation_poly(&self, k: usize) -> Result<Poly, CnfError> {
        let f = &self.encoding.slp.field;
        let subst = self.substitution()?;
        Ok(self.encoding.cnf.translate_with(f, k, &|v| subst[&v].clone()))
    }

    /// `x_{u,j} ↦ UBIT_j(C_u)` as expanded polynomials.
    pub fn substitution(&self) -> Result<BTreeMap<VarId, Poly>, CnfError> {
        let f = &self.encoding.slp.field;
        let mut cache: BTreeMap<SlpVar, Poly> = BTreeMap::new();
        let mut out = BTreeMap::new();
        for (&bit, &(u, j)) in &self.mapping {
            let cu = cache.entry(u).or_insert_with(|| self.node_circuits[&u].expand());
            out.insert(bit, ubit_of(f, j, cu)?);
        }
        Ok(out)
    }

    /// Whether every equation vanishes at an input point, computed from the
    /// node values without expanding.
    pub fn holds_at<F: Fn(VarId) -> Option<Elem>>(&self, asg: F) -> Result<Vec<bool>, CnfError> {
        let f = &self.encoding.slp.field;
        let vals = self.encoding.slp.run(asg)?;
        let bitval = |v: VarId| -> Result<Elem, CnfError> {
            let (u, j) = self.mapping[&v];
            let x = Poly::constant(f, vals[&u].clone());
            Ok(ubit_of(f, j, &x)?.constant_term())
        };
        let cnf = &self.encoding.cnf;
        let mut out = Vec::with_capacity(cnf.clauses.len());
        for cl in &cnf.clauses {
            let mut acc = f.one();
            for &l in cl {
                let b = bitval(cnf.names[l.unsigned_abs() as usize - 1])?;
                acc = f.mul(&acc, &if l > 0 { f.sub(&f.one(), &b) } else { b });
            }
            out.push(f.is_zero(&acc));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::parse_poly;

    fn circ(f: &Field, s: &str) -> AlgCircuit {
        AlgCircuit::from_poly(&parse_poly(f, s).unwrap())
    }

    #[test]
    fn identity_circuit() {
        let f = Field::prime(3).unwrap();
        let e = plain_cnf(&circ(&f, "x_1")).unwrap();
        assert_eq!(e.cnf.num_vars(), 3);
        assert_eq!(e.cnf.output_from, 4);
        let sat: Vec<u64> = (0..3)
            .filter(|&a| {
                let (m, _) = e.induced(|_| Some(f.from_i64(a as i64))).unwrap();
                e.cnf.satisfied(&m)
            })
            .collect();
        assert_eq!(sat, vec![0]);
    }

    #[test]
    fn semi_single_literal() {
        let f = Field::prime(3).unwrap();
        let s = semi_cnf(&circ(&f, "x_1")).unwrap();
        let k = s.encoding.cnf.output_from;
        let x = VarId::Plain(1);
        let u0 = ubit_of(&f, 0, &Poly::var(&f, x)).unwrap();
        assert_eq!(s.equation_poly(k).unwrap(), Poly::one(&f).sub(&u0));
        assert_eq!(s.equation_circuit(k).unwrap().expand(), Poly::one(&f).sub(&u0));
    }

    #[test]
    fn ecnf_holds_on_solutions() {
        let f = Field::prime(3).unwrap();
        let e = ecnf(&circ(&f, "x_1*x_2 + 2")).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let asg = |v: VarId| Some(f.from_i64(if v == VarId::Plain(1) { a } else { b }));
                assert_eq!(e.holds_at(asg).unwrap(), (a * b) % 3 == 1);
            }
        }
    }
}
