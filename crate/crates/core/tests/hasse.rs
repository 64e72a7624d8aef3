mod common;

use common::{elem, elems, squares};
use idgalois::hasse::{is_theta_constant, theta_coeff, verify_additivity, verify_homomorphism, verify_iterativity, IdScalar};
use idgalois::monofield::{FieldCtx, MonoElem};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn derivation_axioms(s1 in any::<u64>(), s2 in any::<u64>(), p in prop::sample::select(vec![2u32, 3, 5])) {
        let c = squares(p, 12);
        let (x, y) = (elem(&c, s1), elem(&c, s2));
        let series = x.theta(12).unwrap();
        prop_assert_eq!(series.coeff(0), &x);
        prop_assert!(verify_additivity(&x, &y, 12).unwrap().passed());
        prop_assert!(verify_homomorphism(&x, &y, 12).unwrap().passed());
        prop_assert!(verify_iterativity(&x, 12).unwrap().passed());
    }

    #[test]
    fn exact_and_derivation_constancy_agree(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3])) {
        let c = squares(p, 10);
        let x = elem(&c, seed);
        for z in [x.clone(), c.from_int(seed as i64), &x - &x] {
            prop_assert_eq!(z.is_constant(), is_theta_constant(&z, 10).unwrap());
        }
        // a p^k-th power with p^k > order looks constant up to that order only
        let frob = x.pow((p as i64).pow(4)).unwrap();
        prop_assert!(is_theta_constant(&frob, 10).unwrap());
        prop_assert_eq!(frob.is_constant(), x.is_constant());
    }
}

fn kernel_members(c: &FieldCtx, ell: u32, seed: u64) -> Vec<MonoElem> {
    let p = c.p() as i64;
    let pl = p.pow(ell);
    let mut out: Vec<MonoElem> = elems(c, seed, 6).iter().map(|x| x.pow(pl).unwrap()).collect();
    let alpha_low = c.root_alpha_low(ell as usize);
    out.push(c.monomial(c.fq().one(), -alpha_low, 1).unwrap());
    out.push(&out[0] + &out[6]);
    out.extend(elems(c, seed + 1, 4));
    out
}

#[test]
fn kernel_collapses_to_p_power_orders() {
    for (p, ell) in [(2u32, 1u32), (2, 2), (3, 1), (3, 2)] {
        let pl = (p as usize).pow(ell);
        let c = squares(p, pl);
        for seed in 0..4 {
            for x in kernel_members(&c, ell, seed) {
                let s = x.theta(pl - 1).unwrap();
                let all = (1..pl).all(|j| s.coeff(j).is_zero());
                let powers = (0..ell).all(|i| theta_coeff(&x, (p as usize).pow(i)).unwrap().is_zero());
                assert_eq!(all, powers, "p = {p}, l = {ell}, x = {x}");
            }
        }
    }
}
