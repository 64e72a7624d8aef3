mod common;

use common::{elem, squares};
use idgalois::monofield::{FieldCtx, MonoElem};
use idgalois::padicnum::{DigitOracle, PadicExponent};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn monomials_multiply(a1 in -9i64..9, b1 in -3i64..3, a2 in -9i64..9, b2 in -3i64..3) {
        let c = squares(3, 4);
        let (e1, e2) = (PadicExponent::new(a1, b1), PadicExponent::new(a2, b2));
        let lhs = &MonoElem::power_of_t(&c, e1).unwrap() * &MonoElem::power_of_t(&c, e2).unwrap();
        let rhs = MonoElem::power_of_t(&c, PadicExponent::combine(1, e1, 1, e2)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn arithmetic_results_are_normalized(s1 in any::<u64>(), s2 in any::<u64>(), p in prop::sample::select(vec![2u32, 3, 5])) {
        let c = squares(p, 4);
        let (x, y) = (elem(&c, s1), elem(&c, s2));
        for z in [&x + &y, &x * &y, &x - &y, x.checked_div(&y).unwrap()] {
            let again = MonoElem::from_fraction(&c, &z.numerator(), &z.denominator()).unwrap();
            prop_assert_eq!(&again, &z);
            prop_assert_eq!(again.to_string(), z.to_string());
        }
    }

    #[test]
    fn p_root_inverts_frobenius(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3, 5]), k in 1u32..3) {
        let c = FieldCtx::new(p, k, DigitOracle::Squares, 4).unwrap();
        let x = elem(&c, seed);
        prop_assert_eq!(x.pow(p as i64).unwrap().p_root().unwrap(), x.clone());
        prop_assert_eq!(x.frobenius(), x.pow(p as i64).unwrap());
    }
}

#[test]
fn constants_are_exactly_fq() {
    for (p, k) in [(2, 1), (2, 2), (3, 1), (5, 1)] {
        let c = FieldCtx::new(p, k, DigitOracle::Squares, 4).unwrap();
        for v in c.fq().elements() {
            assert!(c.constant(v).is_constant());
        }
        let mut seen = 0;
        for seed in 0..400 {
            let x = elem(&c, seed);
            if x.as_constant().is_none() {
                assert!(!x.is_constant(), "{x}");
                seen += 1;
            }
        }
        assert!(seen >= 100);
    }
}
