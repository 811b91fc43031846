//! A small DPLL solver and the three-way satisfiability comparison.

use std::collections::BTreeMap;
use std::path::Path;

use crate::booloracle::OracleReport;
use crate::ff::Elem;
use crate::mpoly::VarId;

use super::cnf::{ecnf, Clause, CnfFormula};
use super::dimacs::{emit_dimacs, parse_solver_output, sidecar_json, SolverVerdict};
use super::{AlgCircuit, CnfError};

/// Satisfying assignment (`model[k − 1]` for variable `k`) or `None`.
pub fn dpll(num_vars: usize, clauses: &[Clause]) -> Option<Vec<bool>> {
    let mut asg: Vec<Option<bool>> = vec![None; num_vars];
    if search(clauses, &mut asg) {
        Some(asg.into_iter().map(|v| v.unwrap_or(false)).collect())
    } else {
        None
    }
}

fn lit_value(asg: &[Option<bool>], l: i32) -> Option<bool> {
    asg[l.unsigned_abs() as usize - 1].map(|v| v == (l > 0))
}

fn search(clauses: &[Clause], asg: &mut Vec<Option<bool>>) -> bool {
    let mut trail = Vec::new();
    loop {
        let mut unit = None;
        for cl in clauses {
            let mut open = None;
            let mut n_open = 0;
            let mut sat = false;
            for &l in cl {
                match lit_value(asg, l) {
                    Some(true) => {
                        sat = true;
                        break;
                    }
                    Some(false) => {}
                    None => {
                        n_open += 1;
                        open = Some(l);
                    }
                }
            }
            if sat {
                continue;
            }
            if n_open == 0 {
                for v in trail {
                    asg[v] = None;
                }
                return false;
            }
            if n_open == 1 {
                unit = open;
                break;
            }
        }
        match unit {
            Some(l) => {
                let v = l.unsigned_abs() as usize - 1;
                asg[v] = Some(l > 0);
                trail.push(v);
            }
            None => break,
        }
    }
    let Some(v) = asg.iter().position(Option::is_none) else {
        return true;
    };
    for b in [false, true] {
        asg[v] = Some(b);
        if search(clauses, asg) {
            return true;
        }
    }
    asg[v] = None;
    for t in trail {
        asg[t] = None;
    }
    false
}

/// Cap on `q^n` in enumerate mode.
pub const EQUISAT_POINT_CAP: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquisatMode<'a> {
    Enumerate,
    /// Writes `<stem>.cnf` and `<stem>.map.json`; with solver output
    /// supplied, ingests its verdict.
    DimacsExport { stem: &'a Path, solver_output: Option<&'a str> },
}

/// Satisfiability of `C = 0` over `F_q^n`, of its plain encoding (by DPLL)
/// and of its extended encoding (as equations), which must agree.
pub fn equisat_check(c: &AlgCircuit, mode: EquisatMode<'_>) -> Result<OracleReport, CnfError> {
    let field = c.field().clone();
    let ec = ecnf(c)?;
    let enc = &ec.encoding;
    let cnf: &CnfFormula = &enc.cnf;
    let mut rep = OracleReport::new("equisat");
    rep.params.insert("q".into(), cnf.q.to_string());
    rep.params.insert("vars".into(), cnf.num_vars().to_string());
    rep.params.insert("clauses".into(), cnf.clauses.len().to_string());

    if let EquisatMode::DimacsExport { stem, solver_output } = mode {
        let dimacs = emit_dimacs(cnf);
        let cnf_path = stem.with_extension("cnf");
        let map_path = stem.with_extension("map.json");
        std::fs::write(&cnf_path, &dimacs).map_err(|e| CnfError::Parse(e.to_string()))?;
        std::fs::write(&map_path, sidecar_json(cnf)).map_err(|e| CnfError::Parse(e.to_string()))?;
        rep.params.insert("dimacs".into(), cnf_path.display().to_string());
        rep.params.insert("sidecar".into(), map_path.display().to_string());
        let Some(out) = solver_output else {
            rep.expected = "external solver verdict".into();
            rep.computed = "deferred".into();
            return Ok(rep);
        };
        let verdict = parse_solver_output(out)?;
        let dp = dpll(cnf.num_vars(), &cnf.clauses).is_some();
        let ext = match &verdict {
            SolverVerdict::Sat(_) => Some(true),
            SolverVerdict::Unsat => Some(false),
            SolverVerdict::Unknown => None,
        };
        if let SolverVerdict::Sat(Some(model)) = &verdict {
            let full: Vec<bool> = (1..=cnf.num_vars()).map(|k| model.get(&(k as u32)).copied().unwrap_or(false)).collect();
            rep.check(cnf.satisfied(&full), || "solver model violates a clause".into());
        }
        rep.check(ext == Some(dp), || format!("solver says {verdict:?}, internal DPLL sat = {dp}"));
        rep.expected = format!("sat = {dp}");
        rep.computed = format!("{verdict:?}");
        return Ok(rep);
    }

    let inputs: Vec<VarId> = enc.slp.inputs.values().copied().collect();
    let q = cnf.q;
    let points = q.checked_pow(inputs.len() as u32).filter(|&p| p <= EQUISAT_POINT_CAP);
    let Some(points) = points else {
        return Err(CnfError::TooLarge {
            what: format!("{q}^{} points", inputs.len()),
            cap: EQUISAT_POINT_CAP,
        });
    };
    let mut circuit_sat = None;
    let mut ecnf_sat = false;
    for idx in 0..points {
        let mut asg: BTreeMap<VarId, Elem> = BTreeMap::new();
        let mut r = idx;
        for &x in &inputs {
            asg.insert(x, field.elem_from_index(r % q));
            r /= q;
        }
        let get = |v: VarId| asg.get(&v).cloned();
        let value = c.eval(get)?;
        let zero = field.is_zero(&value);
        let (model, slp_val) = enc.induced(get)?;
        rep.check(slp_val == value, || format!("program and circuit differ at {asg:?}"));
        rep.check(cnf.satisfied_in(&model, 0..cnf.output_from), || format!("gate blocks fail at {asg:?}"));
        rep.check(cnf.satisfied_in(&model, cnf.output_from..cnf.clauses.len()) == zero, || {
            format!("output block disagrees with C = {} at {asg:?}", field.format_elem(&value))
        });
        let holds = ec.holds_at(get)?;
        rep.check(holds == zero, || format!("extended encoding disagrees at {asg:?}"));
        ecnf_sat |= holds;
        if zero && circuit_sat.is_none() {
            circuit_sat = Some(asg.clone());
        }
    }
    let model = dpll(cnf.num_vars(), &cnf.clauses);
    if let Some(m) = &model {
        match enc.decode_inputs(m) {
            Some(pt) => {
                let v = c.eval(|x| pt.get(&x).cloned())?;
                rep.check(field.is_zero(&v), || format!("DPLL model decodes to a non-root {pt:?}"));
            }
            None => rep.check(false, || "DPLL model breaks an exactly-one block".into()),
        }
    }
    let (a, b, e) = (circuit_sat.is_some(), model.is_some(), ecnf_sat);
    rep.check(a == b && b == e, || format!("circuit {a}, cnf {b}, ecnf {e}"));
    rep.params.insert("points".into(), points.to_string());
    if let Some(w) = &circuit_sat {
        let wit: Vec<String> = w.iter().map(|(k, v)| format!("{k}={}", field.format_elem(v))).collect();
        rep.params.insert("witness".into(), wit.join(","));
    }
    rep.expected = "circuit, cnf and ecnf agree".into();
    rep.computed = format!("sat: circuit {a}, cnf {b}, ecnf {e}");
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnfbridge::cnf::plain_cnf;
    use crate::ff::Field;
    use crate::mpoly::{parse_poly, Poly};

    fn circ(f: &Field, s: &str) -> AlgCircuit {
        AlgCircuit::from_poly(&parse_poly(f, s).unwrap())
    }

    #[test]
    fn solver_basics() {
        assert!(dpll(2, &[vec![1, 2], vec![-1], vec![-2]]).is_none());
        let m = dpll(3, &[vec![1, 2], vec![-1], vec![2, 3]]).unwrap();
        assert!(!m[0] && m[1]);
        assert!(dpll(0, &[vec![]]).is_none());
    }

    #[test]
    fn fixtures() {
        let f = Field::prime(3).unwrap();
        let r = equisat_check(&circ(&f, "x_1^2 + 1"), EquisatMode::Enumerate).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.computed.contains("circuit false"));
        let c = circ(&f, "x_1 + 2");
        let r = equisat_check(&c, EquisatMode::Enumerate).unwrap();
        assert!(r.pass && r.params["witness"] == "x_1=1", "{r:?}");
        let e = plain_cnf(&c).unwrap();
        let (m, _) = e.induced(|_| Some(f.one())).unwrap();
        let input = *e.slp.inputs.keys().next().unwrap();
        let bits: Vec<bool> = (0..3).map(|j| m[e.lit(input, j) as usize - 1]).collect();
        assert_eq!(bits, vec![false, true, false]);
        let zero = AlgCircuit::from_poly(&Poly::zero(&f));
        assert!(equisat_check(&zero, EquisatMode::Enumerate).unwrap().computed.contains("circuit true"));
    }
}
