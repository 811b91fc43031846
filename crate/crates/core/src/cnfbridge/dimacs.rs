//! DIMACS text, its sidecar name map, and external solver output.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::cnf::{Clause, CnfFormula};
use super::CnfError;

/// `p cnf V C` followed by one 0-terminated clause per line.
pub fn emit_dimacs(cnf: &CnfFormula) -> String {
    let mut s = format!("p cnf {} {}\n", cnf.num_vars(), cnf.clauses.len());
    for cl in &cnf.clauses {
        for l in cl {
            s.push_str(&l.to_string());
            s.push(' ');
        }
        s.push_str("0\n");
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dimacs {
    pub num_vars: usize,
    pub clauses: Vec<Clause>,
}

/// Accepts `c` comment lines, free whitespace and clauses spanning lines.
pub fn parse_dimacs(text: &str) -> Result<Dimacs, CnfError> {
    let bad = |m: String| CnfError::Parse(m);
    let mut header = None;
    let mut clauses = Vec::new();
    let mut cur: Clause = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('c') || t.starts_with('%') {
            continue;
        }
        if t.starts_with('p') {
            if header.is_some() {
                return Err(bad(format!("line {}: second header", ln + 1)));
            }
            let parts: Vec<&str> = t.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(bad(format!("line {}: malformed header", ln + 1)));
            }
            let v: usize = parts[2].parse().map_err(|_| bad("bad variable count".into()))?;
            let c: usize = parts[3].parse().map_err(|_| bad("bad clause count".into()))?;
            if v > i32::MAX as usize {
                return Err(bad("variable count too large".into()));
            }
            header = Some((v, c));
            continue;
        }
        let Some((nv, _)) = header else {
            return Err(bad(format!("line {}: clause before header", ln + 1)));
        };
        for tok in t.split_whitespace() {
            let l: i32 = tok.parse().map_err(|_| bad(format!("line {}: bad literal {tok:?}", ln + 1)))?;
            if l == 0 {
                clauses.push(std::mem::take(&mut cur));
            } else {
                if l.unsigned_abs() as usize > nv {
                    return Err(bad(format!("line {}: literal {l} exceeds {nv}", ln + 1)));
                }
                cur.push(l);
            }
        }
    }
    let Some((num_vars, nc)) = header else {
        return Err(bad("missing header".into()));
    };
    if !cur.is_empty() {
        return Err(bad("unterminated clause".into()));
    }
    if clauses.len() != nc {
        return Err(bad(format!("header promises {nc} clauses, found {}", clauses.len())));
    }
    Ok(Dimacs { num_vars, clauses })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sidecar {
    pub q: u64,
    /// `names[k − 1]` names DIMACS variable `k`.
    pub names: Vec<String>,
    pub output_from: usize,
}

pub fn sidecar_json(cnf: &CnfFormula) -> String {
    let s = Sidecar {
        q: cnf.q,
        names: cnf.names.iter().map(ToString::to_string).collect(),
        output_from: cnf.output_from,
    };
    serde_json::to_string_pretty(&s).expect("serializable") + "\n"
}

/// Rebuilds a formula from DIMACS text and its sidecar.
pub fn formula_from_parts(dimacs: &str, sidecar: &str) -> Result<CnfFormula, CnfError> {
    let d = parse_dimacs(dimacs)?;
    let s: Sidecar = serde_json::from_str(sidecar).map_err(|e| CnfError::Parse(e.to_string()))?;
    if s.names.len() != d.num_vars {
        return Err(CnfError::Parse(format!("sidecar names {} variables, DIMACS {}", s.names.len(), d.num_vars)));
    }
    let names = s
        .names
        .iter()
        .map(|n| n.parse().map_err(|_| CnfError::Parse(format!("bad variable {n:?}"))))
        .collect::<Result<_, _>>()?;
    if s.output_from > d.clauses.len() {
        return Err(CnfError::Parse("output_from beyond clause list".into()));
    }
    Ok(CnfFormula {
        q: s.q,
        names,
        clauses: d.clauses,
        output_from: s.output_from,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverVerdict {
    /// With the model when the solver printed one.
    Sat(Option<BTreeMap<u32, bool>>),
    Unsat,
    Unknown,
}

/// Reads `SAT`/`UNSAT` (bare, or as `s SATISFIABLE`/`s UNSATISFIABLE`)
/// and optional `v` value lines.
pub fn parse_solver_output(text: &str) -> Result<SolverVerdict, CnfError> {
    let mut verdict = None;
    let mut model = BTreeMap::new();
    let mut saw_model = false;
    for line in text.lines() {
        let t = line.trim();
        let status = t.strip_prefix("s ").unwrap_or(t).trim();
        let v = match status {
            "SAT" | "SATISFIABLE" => Some(true),
            "UNSAT" | "UNSATISFIABLE" => Some(false),
            "UNKNOWN" | "INDETERMINATE" => {
                verdict.get_or_insert(None);
                continue;
            }
            _ => None,
        };
        if let Some(v) = v {
            if matches!(verdict, Some(Some(old)) if old != v) {
                return Err(CnfError::Parse("conflicting verdict lines".into()));
            }
            verdict = Some(Some(v));
            continue;
        }
        let vals = t.strip_prefix("v ").or_else(|| (verdict == Some(Some(true))).then_some(t));
        let Some(vals) = vals else { continue };
        for tok in vals.split_whitespace() {
            let Ok(l) = tok.parse::<i64>() else {
                if t.starts_with("v ") {
                    return Err(CnfError::Parse(format!("bad model literal {tok:?}")));
                }
                break;
            };
            if l == 0 {
                continue;
            }
            let var = u32::try_from(l.unsigned_abs()).map_err(|_| CnfError::Parse("model literal too large".into()))?;
            model.insert(var, l > 0);
            saw_model = true;
        }
    }
    Ok(match verdict {
        Some(Some(true)) => SolverVerdict::Sat(saw_model.then_some(model)),
        Some(Some(false)) => SolverVerdict::Unsat,
        _ => SolverVerdict::Unknown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "p cnf 3 2\n1 -2 0\n3 0\n";
        let d = parse_dimacs(text).unwrap();
        assert_eq!(d.clauses, vec![vec![1, -2], vec![3]]);
        let cnf = CnfFormula {
            q: 3,
            names: (1..=3).map(crate::mpoly::VarId::Plain).collect(),
            clauses: d.clauses.clone(),
            output_from: 1,
        };
        assert_eq!(emit_dimacs(&cnf), text);
        assert_eq!(formula_from_parts(text, &sidecar_json(&cnf)).unwrap(), cnf);
        assert!(parse_dimacs("p cnf 1 1\n2 0\n").is_err());
        assert!(parse_dimacs("c only\np cnf 1 1\n1\n-1 0\n").is_ok());
        assert!(parse_dimacs("p cnf 1 2\n1 0\n").is_err());
    }

    #[test]
    fn solver_lines() {
        assert_eq!(parse_solver_output("UNSAT\n").unwrap(), SolverVerdict::Unsat);
        assert_eq!(parse_solver_output("c x\ns UNSATISFIABLE\n").unwrap(), SolverVerdict::Unsat);
        let SolverVerdict::Sat(Some(m)) = parse_solver_output("SAT\n1 -2 0\n").unwrap() else { panic!() };
        assert_eq!(m, [(1, true), (2, false)].into());
        let SolverVerdict::Sat(Some(m)) = parse_solver_output("s SATISFIABLE\nv -1 0\n").unwrap() else { panic!() };
        assert!(!m[&1]);
        assert_eq!(parse_solver_output("").unwrap(), SolverVerdict::Unknown);
        assert!(parse_solver_output("SAT\nUNSAT\n").is_err());
    }
}
