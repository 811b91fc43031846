mod common;

use std::collections::BTreeMap;

use ipskit::ff::Field;
use ipskit::mpoly::{Poly, VarId};
use ipskit::roabp::{closure_prod, closure_sum, ml_roabp, nisan_build, partial_subst, width_lower};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn vars(n: u32) -> Vec<VarId> {
    (1..=n).map(VarId::Plain).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn nisan_round_trip_and_optimal(seed in any::<u64>(), n in 1u32..=5) {
        let f = Field::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::random_poly(&f, &mut rng, &vars(n), 10, 2);
        let mut ord = vars(n);
        ord.shuffle(&mut rng);
        let a = nisan_build(&p, &ord).unwrap();
        prop_assert_eq!(a.extract_poly(), p.clone());
        prop_assert_eq!(a.width(), width_lower(&p, &ord).unwrap());
    }

    #[test]
    fn closures_and_ml(seed in any::<u64>(), n in 1u32..=4) {
        let f = Field::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, q) = (common::random_poly(&f, &mut rng, &vars(n), 6, 2), common::random_poly(&f, &mut rng, &vars(n), 6, 2));
        let ord = vars(n);
        let (a, b) = (nisan_build(&p, &ord).unwrap(), nisan_build(&q, &ord).unwrap());
        let s = closure_sum(&a, &b).unwrap();
        prop_assert_eq!(s.extract_poly(), p.add(&q));
        prop_assert!(s.width() <= a.width() + b.width());
        let m = closure_prod(&a, &b).unwrap();
        prop_assert_eq!(m.extract_poly(), p.mul(&q));
        prop_assert!(m.width() <= a.width() * b.width());
        let l = ml_roabp(&m);
        prop_assert_eq!(l.extract_poly(), p.mul(&q).ml());
        prop_assert!(l.width() <= m.width());

        let asg: BTreeMap<VarId, _> = [(VarId::Plain(1), f.from_i64(2))].into_iter().collect();
        let sub = partial_subst(&a, &asg).unwrap();
        prop_assert_eq!(sub.extract_poly(), p.subst_consts(&asg));
        prop_assert!(sub.width() <= a.width());
    }

    #[test]
    fn evaluation_matches_extraction(seed in any::<u64>(), n in 1u32..=4) {
        let f = Field::prime(5).unwrap();
        let ext = Field::extension(5, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::random_poly(&f, &mut rng, &vars(n), 8, 3);
        let a = nisan_build(&p, &vars(n)).unwrap();
        let pt: BTreeMap<VarId, _> = vars(n).into_iter().map(|v| (v, f.random(&mut rng, 0))).collect();
        prop_assert_eq!(a.eval(&pt).unwrap(), p.eval(&pt).unwrap());
        let ept: BTreeMap<VarId, _> = vars(n).into_iter().map(|v| (v, ext.random(&mut rng, 0))).collect();
        let lifted = a.eval_in(&ext, &ept).unwrap();
        // Evaluating the extracted polynomial at extension points embeds its coefficients first.
        let embedded = Poly::from_terms(&ext, p.terms().map(|(m, c)| (m.clone(), ext.embed(&f, c).unwrap())));
        prop_assert_eq!(lifted, embedded.eval(&ept).unwrap());
    }
}
