use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

use realizer::kernel::{deinterleave, fueled_run, interleave, pair, tuple, unpair, untuple, MachineDesc, Seq};
use realizer::multivalued::Verdict;
use realizer::problems::cover::planted_cover;
use realizer::problems::sep::{hashed_bit, planted_finite, planted_random};
use realizer::problems::{
    bounded_ck_oracle, covers_unit, finite_subcover, planted_sep_oracle, regular_path_oracle, verify_separator,
    Automaton, CharFn,
};
use realizer::problems::range::random_planted_injective;
use realizer::reals::rational::add_fast;
use realizer::reals::{pow2_neg, CReal, Rational};
use realizer::reductions::{range_le_c1, sep_le_c1, sep_le_path2};

fn dyadic_or_not() -> impl Strategy<Value = Rational> {
    (-1000i64..1000, 0u32..12, any::<bool>()).prop_map(|(n, e, dy)| {
        let den = if dy { BigInt::from(1u64 << e) } else { BigInt::from(2 * e as i64 + 3) };
        Rational::new(BigInt::from(n), den)
    })
}

proptest! {
    #[test]
    fn pairing_round_trips(n in 0u64..1 << 20, m in 0u64..1 << 20) {
        let z = pair(n, m).unwrap();
        prop_assert_eq!(unpair(z), (n, m));
    }

    #[test]
    fn tupling_round_trips(items in prop::collection::vec(0u64..50, 1..5)) {
        let z = tuple(&items).unwrap();
        prop_assert_eq!(untuple(z, items.len()), items);
    }

    #[test]
    fn interleaving_is_inverse(seed in any::<u64>()) {
        let p = Seq::from_fn(move |i| hashed_bit(seed, i) + i);
        let q = Seq::from_fn(move |i| hashed_bit(seed ^ 7, i) * 5);
        let (a, b) = deinterleave(&interleave(&p, &q));
        prop_assert_eq!(a.prefix(40), p.prefix(40));
        prop_assert_eq!(b.prefix(40), q.prefix(40));
    }

    #[test]
    fn more_fuel_extends_the_run(seed in any::<u64>(), f in 0u64..60, extra in 0u64..60) {
        let m = MachineDesc::Compose { parts: vec![MachineDesc::PrefixSum, MachineDesc::Delay { k: 2 }] }.build();
        let x = Seq::from_fn(move |i| hashed_bit(seed, i));
        prop_assert!(fueled_run(&m, &x, f).is_prefix_of(&fueled_run(&m, &x, f + extra)));
    }

    #[test]
    fn fast_addition_is_addition(a in dyadic_or_not(), b in dyadic_or_not()) {
        prop_assert_eq!(add_fast(&a, &b), &a + &b);
    }

    #[test]
    fn real_arithmetic_respects_error_bounds(a in dyadic_or_not(), b in dyadic_or_not(), k in 0u32..30) {
        let (x, y) = (CReal::exact(a.clone()), CReal::exact(b.clone()));
        for (got, want) in [(x.add(&y), &a + &b), (x.mul(&y), &a * &b), (x.sub(&y), &a - &b)] {
            prop_assert!((got.approx(k) - want).abs() <= pow2_neg(k));
        }
    }

    #[test]
    fn planted_separator_verifies_and_its_complement_fails(seed in any::<u64>()) {
        let x = planted_random(seed);
        let r: CharFn<u64> = planted_sep_oracle().realize(&x).unwrap();
        prop_assert_eq!(verify_separator(&x, &r, 64), Verdict::Accept);
        prop_assert!(matches!(verify_separator(&x, &r.complement(), 64), Verdict::Reject(_)));
    }

    #[test]
    fn range_via_c1_is_sound(seed in any::<u64>()) {
        let x = random_planted_injective(seed, 16);
        prop_assert_eq!(range_le_c1().check(&x, &bounded_ck_oracle(1), 40).unwrap(), Verdict::Accept);
    }

    #[test]
    fn sep_via_c1_and_path2_are_sound(seed in 0u64..10_000) {
        let x = planted_finite(seed, 16);
        prop_assert_eq!(sep_le_c1().check(&x, &bounded_ck_oracle(1), 48).unwrap(), Verdict::Accept);
        prop_assert_eq!(sep_le_path2().check(&x, &regular_path_oracle(), 48).unwrap(), Verdict::Accept);
    }

    #[test]
    fn forced_automata_have_live_leftmost_paths(pattern in prop::collection::vec(prop::option::of(0u8..2), 1..6)) {
        let a = Automaton::forcing_periodic(&pattern);
        let path = a.leftmost_path().unwrap().prefix(30);
        prop_assert!(a.run(&path).is_some_and(|s| a.live()[s]));
        for (i, bit) in path.iter().enumerate() {
            if let Some(b) = pattern[i % pattern.len()] {
                prop_assert_eq!(*bit, b as u64);
            }
        }
    }

    #[test]
    fn subcovers_cover(seed in any::<u64>(), k in 2usize..8) {
        let cover = planted_cover(seed, k, 200);
        let sub = finite_subcover(&cover, 10_000).unwrap();
        let iv: Vec<_> = sub.indices.iter().map(|&i| cover.get(i)).collect();
        prop_assert!(covers_unit(&iv));
    }
}
