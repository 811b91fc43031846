use ipskit::ff::Field;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn small_fields() -> Vec<Field> {
    let mut out: Vec<Field> = [2u64, 3, 5, 7, 11, 13, 31, 47].iter().map(|&p| Field::prime(p).unwrap()).collect();
    for (p, k) in [(2u64, 2u32), (2, 3), (2, 5), (3, 2), (3, 3), (5, 2), (7, 2)] {
        out.push(Field::extension(p, k).unwrap());
    }
    out
}

#[test]
fn fermat_and_inverses_exhaustive() {
    for f in small_fields() {
        let q = f.size().unwrap();
        assert!(q <= 49);
        let mut seen = 0;
        for a in f.elements() {
            seen += 1;
            if f.is_zero(&a) {
                continue;
            }
            assert!(f.is_one(&f.pow(&a, q - 1)), "{} in {f}", f.format_elem(&a));
            let inv = f.inv(&a).unwrap();
            assert!(f.is_one(&f.mul(&a, &inv)));
        }
        assert_eq!(seen, q);
    }
}

#[test]
fn extensions_are_deterministic() {
    for (p, k) in [(2u64, 8u32), (3, 4), (5, 3), (101, 2)] {
        let a = Field::extension(p, k).unwrap();
        let b = Field::extension(p, k).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a, b);
    }
}

proptest! {
    #[test]
    fn rational_inverses(n in -10_000i64..10_000, d in 1i64..10_000) {
        prop_assume!(n != 0);
        let q = Field::rationals();
        let a = q.from_rational(&BigRational::new(BigInt::from(n), BigInt::from(d))).unwrap();
        prop_assert!(q.is_one(&q.mul(&a, &q.inv(&a).unwrap())));
    }

    #[test]
    fn index_round_trip(fi in 0usize..15, idx in any::<u64>()) {
        let f = small_fields()[fi].clone();
        let q = f.size().unwrap();
        let e = f.elem_from_index(idx % q);
        prop_assert_eq!(f.index_of(&e), Some(idx % q));
        prop_assert_eq!(f.parse_elem(&f.format_elem(&e)).unwrap(), e);
    }
}
