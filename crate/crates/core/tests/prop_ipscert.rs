mod common;

use std::collections::BTreeMap;

use ipskit::booloracle::ml_inverse;
use ipskit::ff::Field;
use ipskit::instances::{multiples_factors, multiples_polys, multiples_system, Instance, Meta, UnsatStatus};
use ipskit::ipscert::{extract_multiple, fermat_refute, functional_inverse_check, verify, verify_ips_circuit, VerifyOptions};
use ipskit::mpoly::{common_boolean_root, Poly, VarId};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn vars(n: u32) -> Vec<VarId> {
    (1..=n).map(VarId::Plain).collect()
}

fn instance(field: &Field, f: Poly) -> Instance {
    Instance {
        field: field.clone(),
        axioms: vec![f],
        meta: Meta {
            generator: "random".into(),
            params: BTreeMap::new(),
            beta: None,
            seed: None,
            unsat: UnsatStatus::NotChecked { vars: 0 },
            notes: Vec::new(),
        },
    }
}

/// A random polynomial with a nonzero constant shift, redrawn until it has
/// no Boolean root.
fn rootless(field: &Field, rng: &mut ChaCha8Rng, n: u32) -> Option<Poly> {
    (0..20).find_map(|_| {
        let p = common::random_poly(field, rng, &vars(n), 5, 2).add_const(&field.one());
        (p.vars().len() == n as usize && common_boolean_root(std::slice::from_ref(&p), &vars(n)).is_none()).then_some(p)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn fermat_certificates_verify(seed in any::<u64>(), n in 1u32..=4, fi in 0usize..3) {
        let field = Field::prime([3u64, 5, 7][fi]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(f) = rootless(&field, &mut rng, n) else { return Ok(()) };
        let inst = instance(&field, f.clone());
        let cert = fermat_refute(&inst).unwrap();
        let rep = verify(&cert, &inst, &VerifyOptions::default()).unwrap();
        prop_assert!(rep.passed(), "{rep:?}");

        // The circuit form evaluates to 1 at every Boolean point with the axioms plugged in.
        let c = cert.to_circuit(&inst).unwrap();
        prop_assert!(verify_ips_circuit(&c, &inst, &VerifyOptions::default()).unwrap().passed());
    }

    #[test]
    fn multilinear_inverse_is_unique(seed in any::<u64>(), n in 1u32..=4) {
        let field = Field::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(f) = rootless(&field, &mut rng, n) else { return Ok(()) };
        let interp = ml_inverse(&f).unwrap();
        let fermat = f.pow(3).ml();
        prop_assert!(functional_inverse_check(&interp, &f));
        prop_assert!(functional_inverse_check(&fermat, &f));
        prop_assert_eq!(interp, fermat);
    }
}

#[test]
fn extracted_multiple_factors_exactly() {
    for field in [Field::prime(3).unwrap(), Field::prime(5).unwrap()] {
        for n in [2u32, 3] {
            let inst = multiples_system(&field, n).unwrap();
            let cert = fermat_refute(&inst).unwrap();
            let ex = extract_multiple(&cert, &inst, &multiples_factors(n)).unwrap();
            let (f, _) = multiples_polys(&field, n);
            let quotient = ex.quotient.clone().expect("exact division");
            assert!(!ex.multiple.is_zero());
            assert_eq!(quotient.mul(&f), ex.multiple);
        }
    }
}
