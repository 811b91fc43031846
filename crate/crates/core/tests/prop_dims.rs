mod common;

use std::collections::BTreeSet;

use ipskit::booloracle::balanced_words;
use ipskit::dims::{coeff_dim, eval_dim, relrank, sml_project, word_matrix};
use ipskit::ff::Field;
use ipskit::mpoly::{Poly, VarId};
use ipskit::wordspec::{derive_blocks, Word};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn vars(n: u32) -> Vec<VarId> {
    (1..=n).map(VarId::Plain).collect()
}

fn words() -> Vec<Word> {
    let mut ws = balanced_words(1, 1, 8);
    ws.extend(balanced_words(1, 2, 8));
    ws
}

/// A random polynomial over the word's variables, of low degree per variable.
fn word_poly(f: &Field, w: &Word, rng: &mut ChaCha8Rng) -> Poly {
    let vs = derive_blocks(w).all_vars();
    common::random_poly(f, rng, &vs, 12, 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eval_dim_bounded_by_coeff_dim(seed in any::<u64>(), n in 2u32..=5, k in 1usize..4) {
        let f = Field::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut vs = vars(n);
        let p = common::random_poly(&f, &mut rng, &vs, 8, 2);
        vs.shuffle(&mut rng);
        let cut = k.min(vs.len() - 1);
        let xs: BTreeSet<VarId> = vs[..cut].iter().copied().collect();
        let ys: BTreeSet<VarId> = vs[cut..].iter().copied().collect();
        let c = coeff_dim(&p, &xs, &ys).unwrap();
        let bool_pts = [f.zero(), f.one()];
        prop_assert!(eval_dim(&p, &xs, &ys, &bool_pts).unwrap() <= c);
        // |S| = 3 > ideg ≤ 2 forces equality.
        let s3 = [f.zero(), f.one(), f.from_i64(2)];
        prop_assert_eq!(eval_dim(&p, &xs, &ys, &s3).unwrap(), c);
    }

    #[test]
    fn word_rank_two_ways(seed in any::<u64>(), wi in 0usize..64) {
        let ws = words();
        let w = &ws[wi % ws.len()];
        let f = Field::prime(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = sml_project(&word_poly(&f, w, &mut rng), w);
        let m = word_matrix(&p, w).unwrap();
        let l = derive_blocks(w);
        let pos: BTreeSet<VarId> = l.pos.iter().flat_map(|&i| l.block_vars(i)).collect();
        let neg: BTreeSet<VarId> = l.neg.iter().flat_map(|&i| l.block_vars(i)).collect();
        prop_assert_eq!(m.rank(), coeff_dim(&p, &pos, &neg).unwrap());
        let r = relrank(&p, w).unwrap();
        prop_assert!(r.at_most_one());
    }

    #[test]
    fn projection_is_linear_idempotent(seed in any::<u64>(), wi in 0usize..64, c in 0i64..7) {
        let ws = words();
        let w = &ws[wi % ws.len()];
        let f = Field::prime(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = word_poly(&f, w, &mut rng);
        let b = word_poly(&f, w, &mut rng);
        let pa = sml_project(&a, w);
        prop_assert_eq!(sml_project(&pa, w), pa.clone());
        let lhs = sml_project(&a.scale(&f.from_i64(c)).add(&b), w);
        prop_assert_eq!(lhs, pa.scale(&f.from_i64(c)).add(&sml_project(&b, w)));
    }
}
