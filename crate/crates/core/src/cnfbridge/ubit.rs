//! Lagrange indicator polynomials `UBIT_j(x) = ∏_{i≠j} (x − i)/(j − i)` over
//! prime fields, and the identities they satisfy.

use std::collections::BTreeMap;

use crate::booloracle::OracleReport;
use crate::ff::{Field, FieldKind};
use crate::mpoly::{Poly, VarId};

use super::{AlgCircuit, CircuitBuilder, CnfError, Gate};

fn prime_q(field: &Field) -> Result<u64, CnfError> {
    match field.kind() {
        FieldKind::Prime => Ok(field.characteristic()),
        _ => Err(CnfError::NotPrimeField(field.spec())),
    }
}

fn check_index(field: &Field, j: u64) -> Result<u64, CnfError> {
    let q = prime_q(field)?;
    if j >= q {
        return Err(CnfError::IndexOutOfField { j, q });
    }
    Ok(q)
}

/// `UBIT_j(x)` as a univariate polynomial in `x`.
pub fn ubit(field: &Field, j: u64, x: VarId) -> Result<Poly, CnfError> {
    ubit_of(field, j, &Poly::var(field, x))
}

/// `UBIT_j(p)`.
pub fn ubit_of(field: &Field, j: u64, p: &Poly) -> Result<Poly, CnfError> {
    let q = check_index(field, j)?;
    let mut num = Poly::one(field);
    let mut den = field.one();
    for i in (0..q).filter(|&i| i != j) {
        let fi = field.from_i64(i as i64);
        num = num.mul(&p.add_const(&field.neg(&fi)));
        den = field.mul(&den, &field.sub(&field.from_i64(j as i64), &fi));
    }
    Ok(num.scale(&field.inv(&den)?))
}

/// Adds `UBIT_j(g)` to the builder as one product gate over `q − 1`
/// shifted copies of `g` and the normalising scalar: depth grows by 2.
pub fn ubit_gate(b: &mut CircuitBuilder, j: u64, g: usize) -> Result<usize, CnfError> {
    let field = b.field().clone();
    let q = check_index(&field, j)?;
    let mut den = field.one();
    let mut ch = Vec::new();
    for i in (0..q).filter(|&i| i != j) {
        let fi = field.from_i64(i as i64);
        den = field.mul(&den, &field.sub(&field.from_i64(j as i64), &fi));
        let k = b.constant(field.neg(&fi));
        ch.push(b.add(vec![g, k]));
    }
    let scale = b.constant(field.inv(&den)?);
    ch.insert(0, scale);
    Ok(b.mul(ch))
}

/// Copies `c` into the builder and returns the id of its output.
pub fn graft(b: &mut CircuitBuilder, c: &AlgCircuit) -> usize {
    let mut map = BTreeMap::new();
    for g in c.topo_order().expect("validated circuit") {
        let id = match c.gate(g) {
            Gate::Input(v) => b.input(*v),
            Gate::Const(e) => b.constant(e.clone()),
            Gate::Add(ch) => b.add(ch.iter().map(|k| map[k]).collect()),
            Gate::Mul(ch) => b.mul(ch.iter().map(|k| map[k]).collect()),
        };
        map.insert(g, id);
    }
    map[&c.output()]
}

/// `UBIT_j(C)` as a circuit.
pub fn ubit_circuit(j: u64, c: &AlgCircuit) -> Result<AlgCircuit, CnfError> {
    let mut b = CircuitBuilder::new(c.field());
    let g = graft(&mut b, c);
    let out = ubit_gate(&mut b, j, g)?;
    Ok(b.finish(out))
}

/// The four identity families over `F_q`: `x = Σ j·UBIT_j(x)`,
/// `Σ UBIT_j(x) = 1`, `UBIT_j² − UBIT_j = Q_j·(x^q − x)` with
/// `deg Q_j = q − 2`, and `(a + b)^q = a^q + b^q`.
pub fn identity_suite(q: u64) -> Result<OracleReport, CnfError> {
    let field = Field::prime(q)?;
    let x = VarId::Plain(1);
    let xp = Poly::var(&field, x);
    let mut rep = OracleReport::new("ubit-identities");
    rep.params.insert("q".into(), q.to_string());
    let bits: Vec<Poly> = (0..q).map(|j| ubit(&field, j, x)).collect::<Result<_, _>>()?;

    for (j, u) in bits.iter().enumerate() {
        for t in 0..q {
            let val = u.eval_with(|_| Some(field.from_i64(t as i64)))?;
            let want = if t == j as u64 { field.one() } else { field.zero() };
            rep.check(val == want, || format!("UBIT_{j}({t}) = {}", field.format_elem(&val)));
        }
    }
    let weighted = bits
        .iter()
        .enumerate()
        .fold(Poly::zero(&field), |a, (j, u)| a.add(&u.scale(&field.from_i64(j as i64))));
    rep.check(weighted == xp, || format!("Σ j·UBIT_j = {weighted}"));
    let total = bits.iter().fold(Poly::zero(&field), |a, u| a.add(u));
    rep.check(total.is_one(), || format!("Σ UBIT_j = {total}"));

    let field_axiom = xp.pow(q).sub(&xp);
    let mut qdegs = Vec::new();
    for (j, u) in bits.iter().enumerate() {
        let lhs = u.mul(u).sub(u);
        match lhs.div_exact(&field_axiom)? {
            Some(quot) => {
                let d = quot.degree();
                qdegs.push(d.map_or("-".to_string(), |d| d.to_string()));
                rep.check(d == Some(q - 2), || format!("deg Q_{j} = {d:?}"));
            }
            None => return Err(CnfError::DivisionFails(format!("UBIT_{j}² − UBIT_{j} mod x^{q} − x"))),
        }
    }
    let (a, b) = (Poly::var(&field, VarId::Plain(1)), Poly::var(&field, VarId::Plain(2)));
    let frob = a.add(&b).pow(q);
    rep.check(frob == a.pow(q).add(&b.pow(q)), || format!("(a+b)^{q} = {frob}"));

    rep.expected = format!("all identities hold, deg Q = {}", q - 2);
    rep.computed = format!("Q degrees {}", qdegs.join(","));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::parse_poly;

    #[test]
    fn small_bits() {
        let f = Field::prime(3).unwrap();
        let x = VarId::Plain(1);
        assert_eq!(ubit(&f, 0, x).unwrap(), parse_poly(&f, "2*x_1^2 + 1").unwrap());
        assert_eq!(ubit(&f, 2, x).unwrap(), parse_poly(&f, "2*x_1^2 + x_1").unwrap());
        assert_eq!(ubit(&f, 3, x), Err(CnfError::IndexOutOfField { j: 3, q: 3 }));
        let f9 = Field::parse("3^2").unwrap();
        assert!(matches!(ubit(&f9, 0, x), Err(CnfError::NotPrimeField(_))));
    }

    #[test]
    fn circuit_matches_poly() {
        let f = Field::prime(5).unwrap();
        let p = parse_poly(&f, "x_1*x_2 + 3").unwrap();
        let c = AlgCircuit::from_poly(&p);
        for j in 0..5 {
            let u = ubit_circuit(j, &c).unwrap();
            assert_eq!(u.expand(), ubit_of(&f, j, &p).unwrap());
            assert_eq!(u.metrics().depth, c.metrics().depth + 2);
        }
    }

    #[test]
    fn suites() {
        for q in [3, 5, 7] {
            let r = identity_suite(q).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }
}
