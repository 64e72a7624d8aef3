mod common;

use common::{elems, squares};
use idgalois::ide::{derive_matrix, frobenius_level, verify_frobenius_pullback, verify_ide, verify_solution, FundamentalMatrix, Matrix};
use idgalois::monofield::MonoElem;
use idgalois::tower::TowerLevel;
use proptest::prelude::*;

fn square(entries: Vec<MonoElem>, n: usize) -> Matrix<MonoElem> {
    Matrix::from_rows(entries.chunks(n).map(|r| r.to_vec()).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn derived_matrix_is_an_ide_solved_by_y(seed in any::<u64>(), n in 1usize..=3, p in prop::sample::select(vec![2u32, 3])) {
        // 3x3 cases stay in characteristic 2 with a sparse lower triangle
        let c = squares(if n == 3 { 2 } else { p }, 4);
        let mut entries = elems(&c, seed, n * n);
        if n == 3 {
            entries[3] = c.zero();
            entries[6] = c.zero();
        }
        let y = FundamentalMatrix::new(square(entries, n));
        prop_assume!(y.is_ok());
        let y = y.unwrap();
        let det_inv = y.inverse().det();
        prop_assert_eq!(&(det_inv * y.det().clone()), &c.one());
        let a = derive_matrix(&y, 4).unwrap();
        prop_assert!(a.coeff(0).is_identity());
        let ide = verify_ide(&a, 4).unwrap();
        prop_assert!(ide.passed(), "{}", ide);
        let sol = verify_solution(&a, y.matrix(), 4).unwrap();
        prop_assert!(sol.passed(), "{}", sol);
    }
}

#[test]
fn frobenius_powers_pull_back() {
    for (p, ell) in [(2u32, 1usize), (2, 2), (3, 1), (3, 2)] {
        let pl = (p as i64).pow(ell as u32);
        let n = 2 * pl as usize;
        let size = if pl > 4 { 1 } else { 2 };
        let c = squares(p, n);
        let lvl = TowerLevel::new(&c, ell).unwrap();
        let mut tried = 0;
        for seed in 0..4 {
            let entries: Vec<MonoElem> = elems(&c, 40 + seed, size * size).iter().map(|z| z.pow(pl).unwrap()).collect();
            let Ok(y) = FundamentalMatrix::new(square(entries, size)) else { continue };
            let a = derive_matrix(&y, n).unwrap();
            assert!(frobenius_level(&a).unwrap().level >= ell);
            let r = verify_frobenius_pullback(&a, y.matrix(), &lvl).unwrap();
            assert!(r.passed(), "p = {p}, l = {ell}: {r}");
            tried += 1;
        }
        assert!(tried >= 2);
    }
}
