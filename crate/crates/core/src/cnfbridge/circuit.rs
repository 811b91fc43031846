//! Unbounded fan-in algebraic circuits.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::ff::{Elem, Field};
use crate::mpoly::{Poly, VarId};

use super::CnfError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Gate {
    Input(VarId),
    Const(Elem),
    Add(Vec<usize>),
    Mul(Vec<usize>),
}

/// A DAG of gates with a single output. Gate ids are vector indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgCircuit {
    field: Field,
    gates: Vec<Gate>,
    output: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitMetrics {
    /// Number of gates reachable from the output.
    pub size: usize,
    /// Longest output-to-leaf path, counted in gates above the leaves.
    pub depth: usize,
    /// Largest number of product gates on a path.
    pub product_depth: usize,
    /// Formal (syntactic) degree.
    pub formal_degree: u64,
}

impl AlgCircuit {
    /// Checks acyclicity and child indices.
    pub fn new(field: &Field, gates: Vec<Gate>, output: usize) -> Result<AlgCircuit, CnfError> {
        let c = AlgCircuit {
            field: field.clone(),
            gates,
            output,
        };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<(), CnfError> {
        let n = self.gates.len();
        if self.output >= n {
            return Err(CnfError::BadGate(self.output));
        }
        for (id, g) in self.gates.iter().enumerate() {
            match g {
                Gate::Add(ch) | Gate::Mul(ch) => {
                    if ch.is_empty() {
                        return Err(CnfError::EmptyFanIn(id));
                    }
                    if let Some(&b) = ch.iter().find(|&&c| c >= n) {
                        return Err(CnfError::BadGate(b));
                    }
                }
                Gate::Const(c) => {
                    if !self.field.contains(c) {
                        return Err(CnfError::BadGate(id));
                    }
                }
                Gate::Input(_) => {}
            }
        }
        self.topo_order().map(|_| ())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate(&self, id: usize) -> &Gate {
        &self.gates[id]
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn children(&self, id: usize) -> &[usize] {
        match &self.gates[id] {
            Gate::Add(ch) | Gate::Mul(ch) => ch,
            _ => &[],
        }
    }

    /// Gates reachable from the output, children before parents, ties
    /// broken by smallest id (Kahn's algorithm).
    pub fn topo_order(&self) -> Result<Vec<usize>, CnfError> {
        let reach = self.reachable();
        let mut indeg: BTreeMap<usize, usize> = reach.iter().map(|&g| (g, 0)).collect();
        let mut parents: HashMap<usize, Vec<usize>> = HashMap::new();
        for &g in &reach {
            let distinct: BTreeSet<usize> = self.children(g).iter().copied().collect();
            for c in distinct {
                *indeg.get_mut(&g).expect("reachable") += 1;
                parents.entry(c).or_default().push(g);
            }
        }
        let mut ready: BTreeSet<usize> = indeg.iter().filter(|(_, &d)| d == 0).map(|(&g, _)| g).collect();
        let mut order = Vec::with_capacity(reach.len());
        while let Some(g) = ready.pop_first() {
            order.push(g);
            for &p in parents.get(&g).map(Vec::as_slice).unwrap_or(&[]) {
                let d = indeg.get_mut(&p).expect("reachable");
                *d -= 1;
                if *d == 0 {
                    ready.insert(p);
                }
            }
        }
        if order.len() != reach.len() {
            return Err(CnfError::Cyclic);
        }
        Ok(order)
    }

    fn reachable(&self) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![self.output];
        while let Some(g) = stack.pop() {
            if seen.insert(g) {
                stack.extend(self.children(g).iter().copied().filter(|c| *c < self.gates.len()));
            }
        }
        seen
    }

    fn order(&self) -> Vec<usize> {
        self.topo_order().expect("validated at construction")
    }

    /// Input variables reachable from the output, sorted.
    pub fn inputs(&self) -> Vec<VarId> {
        let set: BTreeSet<VarId> = self
            .reachable()
            .into_iter()
            .filter_map(|g| match self.gates[g] {
                Gate::Input(v) => Some(v),
                _ => None,
            })
            .collect();
        set.into_iter().collect()
    }

    pub fn metrics(&self) -> CircuitMetrics {
        let order = self.order();
        let mut depth: HashMap<usize, (usize, usize, u64)> = HashMap::new();
        for &g in &order {
            let v = match &self.gates[g] {
                Gate::Input(_) => (0, 0, 1),
                Gate::Const(_) => (0, 0, 0),
                Gate::Add(ch) | Gate::Mul(ch) => {
                    let is_mul = matches!(self.gates[g], Gate::Mul(_));
                    let d = ch.iter().map(|c| depth[c].0).max().unwrap_or(0) + 1;
                    let pd = ch.iter().map(|c| depth[c].1).max().unwrap_or(0) + usize::from(is_mul);
                    let deg = if is_mul {
                        ch.iter().map(|c| depth[c].2).fold(0u64, u64::saturating_add)
                    } else {
                        ch.iter().map(|c| depth[c].2).max().unwrap_or(0)
                    };
                    (d, pd, deg)
                }
            };
            depth.insert(g, v);
        }
        let (d, pd, deg) = depth[&self.output];
        CircuitMetrics {
            size: order.len(),
            depth: d,
            product_depth: pd,
            formal_degree: deg,
        }
    }

    /// Value of every reachable gate under `asg`, computed in `target`
    /// (which must contain the circuit's field).
    pub fn eval_all<F: Fn(VarId) -> Option<Elem>>(
        &self,
        target: &Field,
        asg: F,
    ) -> Result<HashMap<usize, Elem>, CnfError> {
        let mut val: HashMap<usize, Elem> = HashMap::new();
        for g in self.order() {
            let v = match &self.gates[g] {
                Gate::Input(x) => asg(*x).ok_or(CnfError::MissingInput(*x))?,
                Gate::Const(c) => target.embed(&self.field, c)?,
                Gate::Add(ch) => ch.iter().fold(target.zero(), |a, c| target.add(&a, &val[c])),
                Gate::Mul(ch) => ch.iter().fold(target.one(), |a, c| target.mul(&a, &val[c])),
            };
            val.insert(g, v);
        }
        Ok(val)
    }

    pub fn eval<F: Fn(VarId) -> Option<Elem>>(&self, asg: F) -> Result<Elem, CnfError> {
        self.eval_in(&self.field.clone(), asg)
    }

    pub fn eval_in<F: Fn(VarId) -> Option<Elem>>(&self, target: &Field, asg: F) -> Result<Elem, CnfError> {
        Ok(self.eval_all(target, asg)?.remove(&self.output).expect("output evaluated"))
    }

    /// The polynomial of every reachable gate, with the given polynomials
    /// substituted for mapped inputs.
    pub fn expand_with(&self, subst: &BTreeMap<VarId, Poly>) -> HashMap<usize, Poly> {
        let f = &self.field;
        let mut val: HashMap<usize, Poly> = HashMap::new();
        for g in self.order() {
            let p = match &self.gates[g] {
                Gate::Input(x) => subst.get(x).cloned().unwrap_or_else(|| Poly::var(f, *x)),
                Gate::Const(c) => Poly::constant(f, c.clone()),
                Gate::Add(ch) => ch.iter().fold(Poly::zero(f), |a, c| a.add(&val[c])),
                Gate::Mul(ch) => ch.iter().fold(Poly::one(f), |a, c| a.mul(&val[c])),
            };
            val.insert(g, p);
        }
        val
    }

    /// The polynomial computed at the output.
    pub fn expand(&self) -> Poly {
        self.expand_subst(&BTreeMap::new())
    }

    pub fn expand_subst(&self, subst: &BTreeMap<VarId, Poly>) -> Poly {
        self.expand_with(subst).remove(&self.output).expect("output expanded")
    }

    /// Same gates with a different output.
    pub fn with_output(&self, output: usize) -> Result<AlgCircuit, CnfError> {
        AlgCircuit::new(&self.field, self.gates.clone(), output)
    }

    /// Sum-of-products circuit for `p`: one product gate per nonconstant
    /// term (powers as repeated children) under a single sum gate.
    pub fn from_poly(p: &Poly) -> AlgCircuit {
        let mut b = CircuitBuilder::new(p.field());
        let out = b.poly(p);
        b.finish(out)
    }
}

/// Incremental construction with shared inputs and constants.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    field: Field,
    gates: Vec<Gate>,
    inputs: HashMap<VarId, usize>,
}

impl CircuitBuilder {
    pub fn new(field: &Field) -> CircuitBuilder {
        CircuitBuilder {
            field: field.clone(),
            gates: Vec::new(),
            inputs: HashMap::new(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    fn push(&mut self, g: Gate) -> usize {
        self.gates.push(g);
        self.gates.len() - 1
    }

    pub fn input(&mut self, v: VarId) -> usize {
        if let Some(&id) = self.inputs.get(&v) {
            return id;
        }
        let id = self.push(Gate::Input(v));
        self.inputs.insert(v, id);
        id
    }

    pub fn constant(&mut self, c: Elem) -> usize {
        self.push(Gate::Const(c))
    }

    pub fn add(&mut self, children: Vec<usize>) -> usize {
        assert!(!children.is_empty());
        self.push(Gate::Add(children))
    }

    pub fn mul(&mut self, children: Vec<usize>) -> usize {
        assert!(!children.is_empty());
        self.push(Gate::Mul(children))
    }

    /// `c − g`.
    pub fn const_minus(&mut self, c: Elem, g: usize) -> usize {
        let minus_one = self.field.from_i64(-1);
        let neg = {
            let m = self.constant(minus_one);
            self.mul(vec![m, g])
        };
        let k = self.constant(c);
        self.add(vec![k, neg])
    }

    /// Sum-of-products subcircuit for `p`.
    pub fn poly(&mut self, p: &Poly) -> usize {
        let f = self.field.clone();
        let mut summands = Vec::new();
        for (m, c) in p.terms().rev() {
            let mut ch = Vec::new();
            if !f.is_one(c) || m.is_one() {
                ch.push(self.constant(c.clone()));
            }
            for &(v, e) in m.factors() {
                let id = self.input(v);
                ch.extend(std::iter::repeat_n(id, e as usize));
            }
            summands.push(if ch.len() == 1 { ch[0] } else { self.mul(ch) });
        }
        if summands.is_empty() {
            return self.constant(f.zero());
        }
        if summands.len() == 1 {
            return summands[0];
        }
        self.add(summands)
    }

    pub fn finish(self, output: usize) -> AlgCircuit {
        AlgCircuit::new(&self.field, self.gates, output).expect("builder output is well-formed")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum GateJson {
    Input { var: String },
    Const { c: String },
    Add { args: Vec<usize> },
    Mul { args: Vec<usize> },
}

/// `{"field": spec, "gates": [...], "output": id}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitJson {
    pub field: String,
    pub gates: Vec<GateJson>,
    pub output: usize,
}

impl CircuitJson {
    pub fn from_circuit(c: &AlgCircuit) -> CircuitJson {
        let f = c.field();
        CircuitJson {
            field: f.spec(),
            gates: c
                .gates()
                .iter()
                .map(|g| match g {
                    Gate::Input(v) => GateJson::Input { var: v.to_string() },
                    Gate::Const(e) => GateJson::Const { c: f.format_elem(e) },
                    Gate::Add(a) => GateJson::Add { args: a.clone() },
                    Gate::Mul(a) => GateJson::Mul { args: a.clone() },
                })
                .collect(),
            output: c.output(),
        }
    }

    pub fn to_circuit(&self) -> Result<AlgCircuit, CnfError> {
        let field = Field::parse(&self.field)?;
        let gates = self
            .gates
            .iter()
            .map(|g| {
                Ok(match g {
                    GateJson::Input { var } => {
                        Gate::Input(var.parse().map_err(|_| CnfError::Parse(format!("bad variable {var:?}")))?)
                    }
                    GateJson::Const { c } => Gate::Const(field.parse_elem(c)?),
                    GateJson::Add { args } => Gate::Add(args.clone()),
                    GateJson::Mul { args } => Gate::Mul(args.clone()),
                })
            })
            .collect::<Result<Vec<_>, CnfError>>()?;
        AlgCircuit::new(&field, gates, self.output)
    }
}

pub fn circuit_to_json(c: &AlgCircuit) -> String {
    serde_json::to_string(&CircuitJson::from_circuit(c)).expect("serializable")
}

pub fn circuit_from_json(s: &str) -> Result<AlgCircuit, CnfError> {
    let j: CircuitJson = serde_json::from_str(s).map_err(|e| CnfError::Parse(e.to_string()))?;
    j.to_circuit()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::parse_poly;

    #[test]
    fn build_and_expand() {
        let f = Field::prime(3).unwrap();
        let p = parse_poly(&f, "x_1^2*x_2 + 2*x_1 + 1").unwrap();
        let c = AlgCircuit::from_poly(&p);
        assert_eq!(c.expand(), p);
        let m = c.metrics();
        assert_eq!((m.depth, m.product_depth, m.formal_degree), (2, 1, 3));
        let back = circuit_from_json(&circuit_to_json(&c)).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejects_cycles() {
        let f = Field::prime(3).unwrap();
        let gates = vec![Gate::Input(VarId::Plain(1)), Gate::Add(vec![0, 2]), Gate::Mul(vec![1])];
        assert_eq!(AlgCircuit::new(&f, gates, 2), Err(CnfError::Cyclic));
        let gates = vec![Gate::Add(vec![5])];
        assert!(matches!(AlgCircuit::new(&f, gates, 0), Err(CnfError::BadGate(5))));
    }
}
