mod common;

use common::squares;
use idgalois::galois::{grouplike_verify, grouplikes, product_realization, subtower_check, constants_search, TensorAlg, Window};
use idgalois::report::Status;

#[test]
fn grouplikes_number_p_to_the_level() {
    for (p, ell) in [(2u32, 1usize), (2, 2), (3, 1)] {
        let pl = (p as usize).pow(ell as u32);
        let order = pl * p as usize * p as usize;
        let c = squares(p, order);
        let alg = TensorAlg::new(&c, ell).unwrap();
        let found = constants_search(&alg, order, Window::default_for(p, ell)).unwrap();
        assert_eq!(found.dimension(), pl);
        let g = grouplikes(&alg, &found.basis).unwrap().expect("search within limit");
        assert_eq!(g.len(), pl, "p = {p}, l = {ell}");
        assert!(g.iter().all(|x| x.pow(pl as u64).is_one()));
        let r = grouplike_verify(&c, ell).unwrap();
        assert!(r.passed(), "{r}");
    }
}

#[test]
fn subtowers_embed_as_powers() {
    for (p, ell, k) in [(2u32, 2usize, 1usize), (2, 3, 1), (2, 3, 2), (3, 2, 1)] {
        let c = squares(p, (p as usize).pow(ell as u32 + 1));
        let r = subtower_check(&c, ell, k).unwrap();
        assert!(r.passed(), "({p}, {ell}, {k}): {r}");
    }
}

#[test]
fn product_with_artin_schreier_at_three() {
    let c = squares(3, 27);
    let r = product_realization(&c, 1, &c.t()).unwrap();
    for name in [
        "dimension over F = 9",
        "group-like count = 3",
        "ID-automorphism count = 3",
        "constants = F_q (within window)",
    ] {
        let line = r.get(name).unwrap_or_else(|| panic!("missing {name}: {r}"));
        assert_eq!(line.status, Status::Pass, "{name}: {}", line.details);
    }
    assert!(r.passed(), "{r}");
}
