//! Straight-line programs: one binary equation per fan-in step.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ff::{Elem, Field};
use crate::mpoly::{Gadget, VarId};

use super::{AlgCircuit, CnfError, Gate};

/// A program variable: gate `gate` itself when `sub == 0`, otherwise the
/// `sub`-th intermediate of that gate's chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SlpVar {
    pub gate: u32,
    pub sub: u32,
}

impl SlpVar {
    pub fn node(self) -> VarId {
        VarId::Gadget(Gadget::Node {
            gate: self.gate,
            sub: self.sub,
        })
    }

    pub fn bit(self, j: u32) -> VarId {
        VarId::Gadget(Gadget::Bit {
            gate: self.gate,
            sub: self.sub,
            bit: j,
        })
    }
}

impl fmt::Display for SlpVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.node())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operand {
    Var(SlpVar),
    Const(Elem),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BinOp {
    Add,
    Mul,
}

impl BinOp {
    pub fn apply(self, f: &Field, a: &Elem, b: &Elem) -> Elem {
        match self {
            BinOp::Add => f.add(a, b),
            BinOp::Mul => f.mul(a, b),
        }
    }
}

/// `out = a ∘ b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlpEq {
    pub op: BinOp,
    pub a: Operand,
    pub b: Operand,
    pub out: SlpVar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slp {
    pub field: Field,
    /// Reachable gates, children first, ties by gate id.
    pub order: Vec<usize>,
    /// Input variables keyed by their (first) input gate.
    pub inputs: BTreeMap<SlpVar, VarId>,
    pub eqs: Vec<SlpEq>,
    /// Chain intermediates `v_i^g`, in creation order.
    pub ext: Vec<SlpVar>,
    pub output: Operand,
    /// The subcircuit gate computing each program variable.
    circuit_of: BTreeMap<SlpVar, CircuitRef>,
}

/// How to rebuild the circuit computing a program variable.
#[derive(Debug, Clone, PartialEq, Eq)]
enum CircuitRef {
    Gate(usize),
    Prefix { gate: usize, len: usize },
}

/// Lowers a circuit to binary equations in topological order. A fan-in-`t`
/// gate becomes `t − 1` equations with `t − 2` intermediates; fan-in 1
/// becomes `u + 0 = g` (or `u · 1 = g`).
pub fn slp_of(c: &AlgCircuit) -> Result<Slp, CnfError> {
    let f = c.field().clone();
    let order = c.topo_order()?;
    let mut operand: HashMap<usize, Operand> = HashMap::new();
    let mut by_var: BTreeMap<VarId, SlpVar> = BTreeMap::new();
    let mut inputs = BTreeMap::new();
    let mut eqs = Vec::new();
    let mut ext = Vec::new();
    let mut circuit_of = BTreeMap::new();
    for &g in &order {
        let gv = SlpVar { gate: g as u32, sub: 0 };
        let op = match c.gate(g) {
            Gate::Input(v) => {
                let sv = *by_var.entry(*v).or_insert_with(|| {
                    inputs.insert(gv, *v);
                    circuit_of.insert(gv, CircuitRef::Gate(g));
                    gv
                });
                Operand::Var(sv)
            }
            Gate::Const(e) => Operand::Const(e.clone()),
            Gate::Add(ch) | Gate::Mul(ch) => {
                let bop = if matches!(c.gate(g), Gate::Add(_)) { BinOp::Add } else { BinOp::Mul };
                let args: Vec<Operand> = ch.iter().map(|k| operand[k].clone()).collect();
                circuit_of.insert(gv, CircuitRef::Gate(g));
                if args.len() == 1 {
                    let unit = match bop {
                        BinOp::Add => f.zero(),
                        BinOp::Mul => f.one(),
                    };
                    eqs.push(SlpEq {
                        op: bop,
                        a: args[0].clone(),
                        b: Operand::Const(unit),
                        out: gv,
                    });
                } else {
                    let t = args.len();
                    let mut acc = args[0].clone();
                    for (i, u) in args.iter().enumerate().skip(1) {
                        let out = if i == t - 1 {
                            gv
                        } else {
                            let v = SlpVar { gate: g as u32, sub: i as u32 };
                            ext.push(v);
                            circuit_of.insert(v, CircuitRef::Prefix { gate: g, len: i + 1 });
                            v
                        };
                        // u_1 ∘ u_2 first, then u_{i+2} ∘ v_i.
                        let (a, b) = if i == 1 { (acc, u.clone()) } else { (u.clone(), acc) };
                        eqs.push(SlpEq { op: bop, a, b, out });
                        acc = Operand::Var(out);
                    }
                }
                Operand::Var(gv)
            }
        };
        operand.insert(g, op);
    }
    let output = operand[&c.output()].clone();
    Ok(Slp {
        field: f,
        order,
        inputs,
        eqs,
        ext,
        output,
        circuit_of,
    })
}

impl Slp {
    /// Every program variable: inputs, gate outputs and intermediates, sorted.
    pub fn vars(&self) -> Vec<SlpVar> {
        let mut v: Vec<SlpVar> = self.inputs.keys().copied().collect();
        v.extend(self.eqs.iter().map(|e| e.out));
        v.sort();
        v.dedup();
        v
    }

    /// Runs the program on an input assignment. Fails on a missing input.
    pub fn run<F: Fn(VarId) -> Option<Elem>>(&self, asg: F) -> Result<BTreeMap<SlpVar, Elem>, CnfError> {
        let mut val = BTreeMap::new();
        for (&sv, &x) in &self.inputs {
            val.insert(sv, asg(x).ok_or(CnfError::MissingInput(x))?);
        }
        for e in &self.eqs {
            let a = self.value(&e.a, &val);
            let b = self.value(&e.b, &val);
            val.insert(e.out, e.op.apply(&self.field, &a, &b));
        }
        Ok(val)
    }

    pub fn value(&self, o: &Operand, val: &BTreeMap<SlpVar, Elem>) -> Elem {
        match o {
            Operand::Const(c) => c.clone(),
            Operand::Var(v) => val[v].clone(),
        }
    }

    pub fn output_value<F: Fn(VarId) -> Option<Elem>>(&self, asg: F) -> Result<Elem, CnfError> {
        let val = self.run(asg)?;
        Ok(self.value(&self.output, &val))
    }

    /// A circuit computing program variable `v` over the original inputs.
    pub fn circuit_for(&self, c: &AlgCircuit, v: SlpVar) -> Result<AlgCircuit, CnfError> {
        match self.circuit_of.get(&v) {
            Some(CircuitRef::Gate(g)) => c.with_output(*g),
            Some(CircuitRef::Prefix { gate, len }) => {
                let mut gates = c.gates().to_vec();
                let ch = c.children(*gate)[..*len].to_vec();
                gates.push(match c.gate(*gate) {
                    Gate::Add(_) => Gate::Add(ch),
                    _ => Gate::Mul(ch),
                });
                let out = gates.len() - 1;
                AlgCircuit::new(c.field(), gates, out)
            }
            None => Err(CnfError::BadGate(v.gate as usize)),
        }
    }
}
