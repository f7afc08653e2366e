mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use seqtop::predicate::{parse, Expr, Norm1, Norm2, MAX_VARS};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Windowed quantifier evaluation agrees with a much wider reference window.
    #[test]
    fn quantifier_windows_are_exact(seed in any::<u64>()) {
        let mut r = rng(seed);
        let e = common::random_quantified(&mut r, 2, 2);
        for a in 0..8u64 {
            for b in 0..8u64 {
                let mut env = vec![0; MAX_VARS];
                env[0] = a;
                env[1] = b;
                let wide = common::eval_wide(&e, &mut env, 64);
                prop_assert_eq!(e.eval(&env), wide, "{} at ({}, {})", e.show(&["m", "n", "i", "j"]), a, b);
            }
        }
    }

    /// The type bound of a quantified predicate really is a bound: tabulation on pair
    /// types never finds two representatives of one type with different values.
    #[test]
    fn quantified_bound_is_type_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let e = common::random_quantified(&mut r, 2, 1);
        let n = Norm2::of(&e, 0, 1);
        prop_assert!(n.is_ok(), "{:?}", n.err());
        let n = n.unwrap();
        for a in 0..40u64 {
            for b in 0..40u64 {
                prop_assert_eq!(n.eval(a, b), e.eval(&[a, b]));
            }
        }
    }

    #[test]
    fn norm1_matches_pointwise_and_is_idempotent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let e = common::random_quantified(&mut r, 1, 1);
        let n = Norm1::of(&e, 0).unwrap();
        for x in 0..120u64 {
            prop_assert_eq!(n.eval(x), e.eval(&[x]));
        }
        prop_assert_eq!(&Norm1::of(&n.to_expr(0), 0).unwrap(), &n);
        let shown = n.show("n");
        prop_assert_eq!(&Norm1::of(&parse(&shown, &["n"]).unwrap(), 0).unwrap(), &n);
    }

    #[test]
    fn norm2_is_idempotent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let e = common::random_qf(&mut r, 2, 3);
        let n = Norm2::of(&e, 0, 1).unwrap();
        let again = Norm2::of(&n.to_expr(0, 1), 0, 1).unwrap();
        prop_assert_eq!(&again, &n);
    }

    #[test]
    fn fix_then_normalize_matches_slice(seed in any::<u64>(), a in 0u64..12) {
        let mut r = rng(seed);
        let e = common::random_qf(&mut r, 2, 3);
        let n = Norm2::of(&e, 0, 1).unwrap();
        let fixed = Norm1::of(&e.fix(0, a), 1).unwrap();
        prop_assert_eq!(&n.slice_left(a), &fixed);
        let sliced = Norm1::of(&Expr::Table2(0, 1, n.clone().into()).fix(0, a), 1).unwrap();
        prop_assert_eq!(&sliced, &fixed);
    }

    #[test]
    fn boolean_ops_are_pointwise(s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = Norm1::of(&common::random_qf(&mut rng(s1), 1, 3), 0).unwrap();
        let b = Norm1::of(&common::random_qf(&mut rng(s2), 1, 3), 0).unwrap();
        for x in 0..100u64 {
            prop_assert_eq!(a.and(&b).eval(x), a.eval(x) && b.eval(x));
            prop_assert_eq!(a.or(&b).eval(x), a.eval(x) || b.eval(x));
            prop_assert_eq!(a.complement().eval(x), !a.eval(x));
        }
        prop_assert_eq!(a.is_subset(&b), (0..100u64).all(|x| !a.eval(x) || b.eval(x)));
    }
}
