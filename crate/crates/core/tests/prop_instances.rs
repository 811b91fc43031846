use ipskit::booloracle::balanced_words;
use ipskit::ff::Field;
use ipskit::instances::{ks_block, ks_modp, ks_sym_e2, subset_sum, Instance};
use ipskit::mpoly::{common_boolean_root, parse_poly, Poly, VarId};
use ipskit::wordspec::{derive_blocks, scattered_partition, Word};

fn small_words(max_vars: u64) -> Vec<Word> {
    let mut ws = balanced_words(1, 1, max_vars);
    ws.extend(balanced_words(1, 2, max_vars));
    ws
}

#[test]
fn ks_circuit_matches_direct_construction() {
    let mut checked = 0;
    for w in small_words(8) {
        for p in [5u64, 7] {
            let f = Field::prime(p).unwrap();
            let Ok(out) = ks_modp(&w, &f, None, None) else { continue };
            let layout = derive_blocks(&w);
            let sp = scattered_partition(&w).unwrap();
            let beta = f.parse_elem(out.instance.meta.beta.as_deref().unwrap()).unwrap();
            let direct = sp
                .parts
                .iter()
                .map(|part| part.iter().fold(Poly::one(&f), |acc, &i| acc.mul(&ks_block(&layout, &f, i))))
                .fold(Poly::zero(&f), |a, b| a.add(&b))
                .add_const(&f.neg(&beta));
            assert_eq!(out.instance.axioms[0], direct, "{w}");
            assert!(out.circuit.computes(&direct), "{w}");
            let deg = direct.degree().unwrap_or(0);
            let bound = p * w.len() as u64 * u64::from(w.bound()) * (1 << w.bound());
            assert!(deg <= bound, "{w}: degree {deg} > {bound}");
            checked += 1;
        }
    }
    assert!(checked > 10);
}

#[test]
fn certificates_reverify_on_load() {
    let f = Field::prime(7).unwrap();
    let inst = subset_sum(&f, 4, f.from_i64(6)).unwrap();
    let text = inst.to_json_string();
    assert_eq!(Instance::from_json_str(&text).unwrap(), inst);
    // β = 2 is a reachable subset sum, so the stored status no longer holds.
    let tampered = text.replace("+ 1", "+ 5");
    assert_ne!(tampered, text);
    assert!(Instance::from_json_str(&tampered).is_err());

    for w in small_words(8) {
        let inst = ks_modp(&w, &f, None, None).unwrap().instance;
        assert_eq!(Instance::from_json_str(&inst.to_json_string()).unwrap(), inst);
    }
}

#[test]
fn sym_e2_lifts_to_rationals() {
    let q = Field::rationals();
    let mut checked = 0;
    for w in small_words(8) {
        for p in [3u64, 5, 7] {
            let f = Field::prime(p).unwrap();
            let Ok(out) = ks_sym_e2(&w, &f, None) else { continue };
            let lifted: Vec<Poly> = out.instance.axioms.iter().map(|a| parse_poly(&q, &a.to_string()).unwrap()).collect();
            let vars: Vec<VarId> = out.instance.vars();
            assert!(vars.len() <= 16);
            assert_eq!(common_boolean_root(&lifted, &vars), None, "{w} over F_{p}");
            assert_eq!(common_boolean_root(&out.instance.axioms, &vars), None);
            checked += 1;
        }
    }
    assert!(checked > 10);
}
