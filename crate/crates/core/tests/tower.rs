mod common;

use common::{elems, squares};
use idgalois::padicnum::PadicExponent;
use idgalois::tower::{f_ell_membership, lattice_index, tower_consistency, TowerLevel};

#[test]
fn digit_identity_for_small_levels() {
    for p in [2u32, 3, 5] {
        let c = squares(p, 12);
        for ell in 0..=3 {
            assert!(TowerLevel::new(&c, ell).unwrap().digit_identity_holds().unwrap(), "p = {p}, l = {ell}");
        }
    }
}

#[test]
fn tower_levels_compose() {
    for p in [2u32, 3] {
        let c = squares(p, 12);
        for (a, b) in [(1, 1), (1, 2), (2, 1), (0, 3)] {
            let r = tower_consistency(&c, a, b).unwrap();
            assert!(r.passed(), "p = {p}, ({a}, {b}): {r}");
        }
    }
}

#[test]
fn successive_indices_are_p() {
    for p in [2u32, 3, 5] {
        let c = squares(p, 12);
        for ell in 0..=2 {
            let idx = lattice_index(&c.kernel_lattice(ell + 1), &c.kernel_lattice(ell)).unwrap();
            assert_eq!(idx, p as u64);
        }
    }
}

#[test]
fn members_have_exponents_in_the_kernel_lattice() {
    for p in [2u32, 3] {
        let c = squares(p, 30);
        for ell in 1..=3usize {
            let pl = (p as i64).pow(ell as u32);
            if pl as usize > c.trunc() {
                continue;
            }
            let lattice = c.kernel_lattice(ell);
            let alpha_low = c.root_alpha_low(ell);
            let shifted = c.monomial(c.fq().one(), -alpha_low, 1).unwrap();
            let mut members: Vec<_> = elems(&c, ell as u64, 4).iter().map(|x| x.pow(pl).unwrap()).collect();
            members.push(&members[0] * &shifted + members[1].clone());
            for z in members {
                assert!(f_ell_membership(&z, ell).unwrap(), "{z}");
                for (a, b) in z.numerator().keys().chain(z.denominator().keys()) {
                    assert!(lattice.contains(PadicExponent::new(*a, *b)), "t^{a} x^{b} in {z}");
                }
            }
            let outsider = c.t();
            assert!(!f_ell_membership(&outsider, ell).unwrap());
        }
    }
}
