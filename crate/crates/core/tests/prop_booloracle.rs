mod common;

use ipskit::booloracle::{deg_check, ml_inverse, Caps, DegLemma};
use ipskit::ff::Field;
use ipskit::mpoly::{common_boolean_root, VarId};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn inverse_times_f_reduces_to_one(seed in any::<u64>(), n in 1u32..=5, fi in 0usize..3) {
        let field = [Field::prime(7).unwrap(), Field::parse("2^3").unwrap(), Field::rationals()][fi].clone();
        let vars: Vec<VarId> = (1..=n).map(VarId::Plain).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = common::random_poly(&field, &mut rng, &vars, 6, 2).add_const(&field.one());
        let all: Vec<VarId> = f.vars().into_iter().collect();
        match ml_inverse(&f) {
            Ok(g) => {
                prop_assert!(g.is_multilinear());
                prop_assert!(g.mul(&f).bool_reduce().remainder.is_one());
            }
            Err(_) => prop_assert!(common_boolean_root(std::slice::from_ref(&f), &all).is_some()),
        }
    }
}

#[test]
fn degree_verdicts_hold_along_the_sweep() {
    let caps = Caps::default();
    for field in [Field::rationals(), Field::prime(13).unwrap()] {
        for n in 2..=10u32 {
            let beta = field.from_i64(i64::from(n) + 1);
            let r = deg_check(&field, &DegLemma::SubsetSum { n, beta }, &caps).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }
}
