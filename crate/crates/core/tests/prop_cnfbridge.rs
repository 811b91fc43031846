use std::collections::BTreeMap;

use ipskit::cnfbridge::{ecnf, emit_dimacs, parse_dimacs, plain_cnf, random_circuit, semi_cnf};
use ipskit::ff::{Elem, Field};
use ipskit::mpoly::VarId;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn points(field: &Field, vars: &[VarId]) -> Vec<BTreeMap<VarId, Elem>> {
    let q = field.size().unwrap();
    let total = q.pow(vars.len() as u32);
    (0..total)
        .map(|mut idx| {
            vars.iter()
                .map(|&v| {
                    let e = field.elem_from_index(idx % q);
                    idx /= q;
                    (v, e)
                })
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn induced_assignments_match_the_circuit(seed in any::<u64>(), fi in 0usize..3) {
        let field = [Field::prime(3).unwrap(), Field::prime(5).unwrap(), Field::parse("2^2").unwrap()][fi].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_circuit(&field, &mut rng, 5, 2);
        let enc = plain_cnf(&c).unwrap();
        let cnf = &enc.cnf;
        let inputs: Vec<VarId> = enc.slp.inputs.values().copied().collect();
        for pt in points(&field, &inputs) {
            let get = |v: VarId| pt.get(&v).cloned();
            let value = c.eval(get).unwrap();
            let (model, v2) = enc.induced(get).unwrap();
            prop_assert_eq!(&v2, &value);
            prop_assert!(cnf.satisfied_in(&model, 0..cnf.output_from));
            prop_assert_eq!(cnf.satisfied_in(&model, cnf.output_from..cnf.clauses.len()), field.is_zero(&value));
            prop_assert_eq!(enc.decode_inputs(&model).unwrap(), pt.clone());
        }
    }

    #[test]
    fn extended_encoding_agrees(seed in any::<u64>()) {
        let field = Field::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_circuit(&field, &mut rng, 5, 3);
        let ec = ecnf(&c).unwrap();
        let inputs: Vec<VarId> = ec.encoding.slp.inputs.values().copied().collect();
        for pt in points(&field, &inputs) {
            let get = |v: VarId| pt.get(&v).cloned();
            prop_assert_eq!(ec.holds_at(get).unwrap(), field.is_zero(&c.eval(get).unwrap()));
        }
    }

    #[test]
    fn dimacs_round_trip(seed in any::<u64>(), fi in 0usize..2) {
        let field = [Field::prime(3).unwrap(), Field::prime(5).unwrap()][fi].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cnf = plain_cnf(&random_circuit(&field, &mut rng, 6, 3)).unwrap().cnf;
        let d = parse_dimacs(&emit_dimacs(&cnf)).unwrap();
        prop_assert_eq!(d.num_vars, cnf.num_vars());
        prop_assert_eq!(d.clauses, cnf.clauses);
    }
}

/// Semi-CNF equations are the clause translations with each bit variable
/// replaced by `UBIT_j` of its node, checked structurally and by value.
#[test]
fn semi_cnf_is_translation_after_substitution() {
    let field = Field::prime(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..12 {
        let c = random_circuit(&field, &mut rng, 4, 3);
        let sc = semi_cnf(&c).unwrap();
        let subst = sc.substitution().unwrap();
        for k in 0..sc.len() {
            let translated = sc.encoding.cnf.translate(&field, k).subst(&subst);
            assert_eq!(sc.equation_poly(k).unwrap(), translated);
            assert_eq!(sc.equation_circuit(k).unwrap().expand(), translated);
        }
        let inputs: Vec<VarId> = sc.encoding.slp.inputs.values().copied().collect();
        for pt in points(&field, &inputs) {
            let get = |v: VarId| pt.get(&v).cloned();
            let holds = sc.holds_at(get).unwrap();
            let zero = field.is_zero(&c.eval(get).unwrap());
            assert_eq!(holds.iter().all(|&h| h), zero);
            for (k, h) in holds.iter().enumerate() {
                let val = sc.equation_poly(k).unwrap().eval(&pt).unwrap();
                assert_eq!(*h, field.is_zero(&val));
            }
        }
    }
}
