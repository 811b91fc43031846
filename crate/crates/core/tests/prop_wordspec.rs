use ipskit::wordspec::{derive_blocks, is_balanced, overlap_graph, scattered_partition, word_gen, Word};
use proptest::prelude::*;

fn word_strategy() -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::sample::select(vec![1i64, 2, 3, -1, -2, -3]), 1..8).prop_map(|e| Word::new(&e).unwrap())
}

proptest! {
    #[test]
    fn intervals_partition_each_side(w in word_strategy()) {
        let l = derive_blocks(&w);
        for side in [&l.pos, &l.neg] {
            let mut next = 1;
            for &i in side.iter() {
                let iv = l.interval(i);
                prop_assert_eq!(iv.lo, next);
                prop_assert_eq!(iv.len(), u32::from(w.width(i)));
                next = iv.hi + 1;
            }
            let total: u32 = side.iter().map(|&i| u32::from(w.width(i))).sum();
            prop_assert_eq!(next - 1, total);
        }
    }

    #[test]
    fn scattered_partitions_check_out(w in word_strategy()) {
        match scattered_partition(&w) {
            Ok(sp) => {
                let l = derive_blocks(&w);
                let g = overlap_graph(&l);
                prop_assert!(sp.is_scattered(&g));
                let mut xs = l.x_blocks().to_vec();
                xs.sort_unstable();
                prop_assert!(sp.covers(&xs));
                prop_assert!(sp.parts.iter().all(|p| !p.is_empty()));
            }
            Err(_) => prop_assert!(!is_balanced(&w)),
        }
    }

    #[test]
    fn generated_words_are_balanced(d in 2usize..=12, a in 1u32..=3, dk in 1u32..=3) {
        if let Ok(w) = word_gen(d, a, a + dk) {
            prop_assert_eq!(w.len(), d);
            prop_assert!(is_balanced(&w));
        }
    }
}
