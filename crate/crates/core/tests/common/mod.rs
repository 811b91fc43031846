//! Shared generators for the integration tests.
#![allow(dead_code)]

use ipskit::cnfbridge::{AlgCircuit, CircuitBuilder};
use ipskit::ff::Field;
use ipskit::mpoly::{Monomial, Poly, VarId};
use rand::Rng;

/// Up to `max_terms` random terms over `vars` with individual degree at
/// most `max_ideg`.
pub fn random_poly<R: Rng>(field: &Field, rng: &mut R, vars: &[VarId], max_terms: usize, max_ideg: u32) -> Poly {
    let terms = rng.gen_range(0..=max_terms);
    let mut p = Poly::zero(field);
    for _ in 0..terms {
        let mut m = Monomial::one();
        for &v in vars {
            if rng.gen_bool(0.4) {
                m = m.mul(&Monomial::var_pow(v, rng.gen_range(1..=max_ideg.max(1))));
            }
        }
        p = p.add(&Poly::monomial(field, m, field.random(rng, 7)));
    }
    p
}

pub fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

/// `x_1·x_2 + 2` over `F_3`, built gate by gate.
pub fn golden_circuit() -> AlgCircuit {
    let f = Field::prime(3).unwrap();
    let mut b = CircuitBuilder::new(&f);
    let x1 = b.input(VarId::Plain(1));
    let x2 = b.input(VarId::Plain(2));
    let m = b.mul(vec![x1, x2]);
    let two = b.constant(f.from_i64(2));
    let s = b.add(vec![m, two]);
    b.finish(s)
}
