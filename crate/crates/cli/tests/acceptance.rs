//! The ten acceptance criteria, one printed line each.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use clap::Parser;
use jsonschema::JSONSchema;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use idgalois::finiteext::{dedekind_solution, extend_derivation, verify_id_automorphism, FiniteExt};
use idgalois::galois::{constants_search, grouplike_verify, product_realization, TensorAlg, Window};
use idgalois::hasse::{verify_additivity, verify_homomorphism, verify_iterativity, IdScalar};
use idgalois::ide::{derive_matrix, frobenius_level, verify_frobenius_pullback, verify_ide, verify_solution};
use idgalois::ide::{FundamentalMatrix, Matrix};
use idgalois::monofield::FieldCtx;
use idgalois::padicnum::{DigitOracle, PadicExponent};
use idgalois::report::Status;
use idgalois::sample::random_elem;
use idgalois::tower::{check_l1_eq_lp, lattice_index, TowerLevel};
use idgalois_cli::commands::{execute, Cli};
use idgalois_cli::expr::{parse_expr, print_expr};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn squares(p: u32, order: usize) -> FieldCtx {
    FieldCtx::new(p, 1, DigitOracle::Squares, order).unwrap()
}

/// Exact binomial coefficient through the multiplicative formula.
fn exact_binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn axiom_suite() -> Outcome {
    let start = Instant::now();
    let mut checks = 0usize;
    for p in [2u32, 3, 5] {
        let ctx = squares(p, 12);
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + p as u64);
        let elems: Vec<_> = (0..200).map(|_| random_elem(&ctx, &mut rng)).collect();
        for (i, x) in elems.iter().enumerate() {
            let y = &elems[(i + 1) % elems.len()];
            let s = x.theta(12).map_err(|e| e.to_string())?;
            ensure(s.coeff(0) == x, format!("theta^(0) != id at p = {p} on {x}"))?;
            for r in [
                verify_additivity(x, y, 12),
                verify_homomorphism(x, y, 12),
                verify_iterativity(x, 12),
            ] {
                let r = r.map_err(|e| e.to_string())?;
                checks += r.len();
                let first = r.failures().next().map(|f| f.name.clone());
                if let Some(name) = first {
                    return Err(format!("p = {p}, x = {x}, y = {y}: {name}"));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), format!("runtime {elapsed:?}"))?;
    Ok(format!("600 elements, {checks} checks, 0 failures, {:.1}s", elapsed.as_secs_f64()))
}

fn lucas_oracle() -> Outcome {
    let mut count = 0;
    for p in [2u32, 3, 5] {
        let ctx = squares(p, 12);
        for beta in 0..=60u64 {
            for n in 0..=beta {
                let got = ctx
                    .padic()
                    .lucas_binom(PadicExponent::integer(beta as i64), n)
                    .map_err(|e| e.to_string())?;
                let want = (exact_binom(beta, n) % p as u128) as u32;
                ensure(got == want, format!("p = {p}: binom({beta},{n}) = {got}, expected {want}"))?;
                count += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let p = [2u32, 3, 5][rng.gen_range(0..3)];
        let ctx = squares(p, 12);
        let padic = ctx.padic();
        let b1 = PadicExponent::new(rng.gen_range(-20..=20), rng.gen_range(-3..=3));
        let b2 = PadicExponent::new(rng.gen_range(-20..=20), rng.gen_range(-3..=3));
        let n = rng.gen_range(0..=12u64);
        let sum = PadicExponent::combine(1, b1, 1, b2);
        // β ↦ binom(β, n) mod p only depends on β mod p^e once p^e > n
        let mut pe = 1i128;
        while pe <= 12 {
            pe *= p as i128;
        }
        let rep = |b: PadicExponent| padic.residue(b).rem_euclid(pe) as u64;
        let oracle = |b: PadicExponent, k: u64| (exact_binom(rep(b), k) % p as u128) as u32;
        let lhs = oracle(sum, n);
        let rhs = (0..=n).map(|i| oracle(b1, i) * oracle(b2, n - i)).sum::<u32>() % p;
        ensure(lhs == rhs, format!("Vandermonde oracle fails at {b1}, {b2}, {n}"))?;
        let lib = padic.lucas_binom(sum, n).map_err(|e| e.to_string())?;
        let lib_rhs = (0..=n)
            .map(|i| Ok(padic.lucas_binom(b1, i)? * padic.lucas_binom(b2, n - i)?))
            .sum::<Result<u32, idgalois::Error>>()
            .map_err(|e| e.to_string())?
            % p;
        ensure(lib == lhs && lib_rhs == rhs, format!("library disagrees at {b1}, {b2}, {n}"))?;
    }
    Ok(format!("{count} binomials, 100 Vandermonde triples"))
}

fn tower_degrees() -> Outcome {
    for p in [2u32, 3] {
        let ctx = squares(p, 12);
        let full = ctx.lattice();
        for ell in 1..=3usize {
            let pl = (p as u64).pow(ell as u32);
            let kernel = ctx.kernel_lattice(ell);
            let idx = lattice_index(&kernel, &full).map_err(|e| e.to_string())?;
            ensure(idx == pl, format!("p = {p}: [F:F_{ell}] = {idx}"))?;
            // independent oracle: a + bα ≡ 0 mod p^ℓ from the raw digits
            let alpha_mod: i64 = (0..ell).map(|i| DigitOracle::Squares.digit(i) as i64 % p as i64 * (p as i64).pow(i as u32)).sum();
            let mut classes = BTreeSet::new();
            for a in -30..=30i64 {
                for b in -4..=4i64 {
                    let r = (a + b * alpha_mod).rem_euclid(pl as i64);
                    classes.insert(r);
                    ensure(
                        kernel.contains(PadicExponent::new(a, b)) == (r == 0),
                        format!("membership of ({a},{b}) in F_{ell}"),
                    )?;
                }
            }
            ensure(classes.len() as u64 == pl, "residue classes")?;
            let lvl = TowerLevel::new(&ctx, ell).map_err(|e| e.to_string())?;
            let bracket = lvl.index_bracket_over_f().map_err(|e| e.to_string())?;
            ensure(bracket == pl, format!("p = {p}: [F_[{ell}]:F] = {bracket}"))?;
        }
        for ell in 0..=2usize {
            let idx = lattice_index(&ctx.kernel_lattice(ell + 1), &ctx.kernel_lattice(ell)).map_err(|e| e.to_string())?;
            ensure(idx == p as u64, format!("p = {p}: [F_{ell}:F_{}] = {idx}", ell + 1))?;
        }
    }
    Ok("[F:F_l] = [F_[l]:F] = p^l for l <= 3, [F_l:F_(l+1)] = p".into())
}

fn l1_criterion() -> Outcome {
    for p in [2u32, 3, 5] {
        let rational = FieldCtx::rational(p, 1, 6).unwrap();
        ensure(check_l1_eq_lp(&rational), format!("F_{p}(t) should satisfy L_1 = L^p"))?;
        ensure(!check_l1_eq_lp(&squares(p, 6)), format!("F_{p}(t, t^alpha) should not"))?;
    }
    Ok("true for F_q(t), false for F_q(t, t^alpha)".into())
}

fn gm_example() -> Outcome {
    for p in [2u32, 3] {
        let ctx = squares(p, 20);
        let x = ctx.x().unwrap();
        let y = FundamentalMatrix::new(Matrix::from_rows(vec![vec![x.clone()]]).unwrap()).unwrap();
        let a = derive_matrix(&y, 20).map_err(|e| e.to_string())?;
        // θ^(n)(t^α) = binom(α, n)·t^α/t^n, so A_n = binom(α, n)·t^(-n)
        for n in 0..=20u64 {
            let b = ctx.padic().lucas_binom(PadicExponent::alpha(), n).unwrap();
            let want = ctx.monomial(ctx.fq().from_int(b as i64), -(n as i64), 0).unwrap();
            ensure(a.coeff(n as usize).get(0, 0) == &want, format!("A_{n} at p = {p}"))?;
        }
        let ide = verify_ide(&a, 20).map_err(|e| e.to_string())?;
        ensure(ide.passed(), format!("verify_ide at p = {p}: {ide}"))?;
        let sol = verify_solution(&a, y.matrix(), 20).map_err(|e| e.to_string())?;
        let direct = sol.checks.iter().filter(|c| c.name.starts_with("theta(Y) = AY")).all(|c| c.status == Status::Pass);
        let iter = sol.checks.iter().filter(|c| c.name.starts_with("iterativity")).all(|c| c.status == Status::Pass);
        ensure(direct && iter && direct == iter, format!("solution checks at p = {p}"))?;
        ensure(sol.get("equivalence").map(|c| c.status) == Some(Status::Pass), "equivalence line")?;
    }
    Ok("verify_ide for k + l <= 20; theta(Y) = AY and iterativity agree".into())
}

fn frobenius_pullback() -> Outcome {
    for p in [2u32, 3] {
        let n = 4 * p as usize;
        let ctx = squares(p, n);
        let lvl = TowerLevel::new(&ctx, 1).unwrap();
        // s = t^α·t^(-α_1) lies in E_1: all θ^(j), 0 < j < p, vanish on it
        let s = ctx.monomial(ctx.fq().one(), -lvl.alpha_ell(), 1).unwrap();
        let y = FundamentalMatrix::new(Matrix::from_rows(vec![vec![s]]).unwrap()).unwrap();
        let a = derive_matrix(&y, n).map_err(|e| e.to_string())?;
        let found = frobenius_level(&a).map_err(|e| e.to_string())?;
        ensure(found.level >= 1, format!("frobenius_level = {} at p = {p}", found.level))?;
        let r = verify_frobenius_pullback(&a, y.matrix(), &lvl).map_err(|e| e.to_string())?;
        ensure(r.passed(), format!("pullback at p = {p}: {r}"))?;
    }
    Ok("frobenius_level >= 1, p-th root matrix solves its IDE in F_[1]".into())
}

fn classical_pv() -> Outcome {
    let ctx = FieldCtx::rational(2, 1, 12).unwrap();
    let t = ctx.t();
    let m = vec![t.clone(), ctx.one(), ctx.one()];
    let series = extend_derivation(&ctx, m).map_err(|e| e.to_string())?;
    // D = Σ d_n T^n with d_0 = 0 solves D^2 + D = T over F_2
    let mut d = vec![0u8; 13];
    d[1] = 1;
    for n in 2..=12 {
        let sq = if n % 2 == 0 { d[n / 2] } else { 0 };
        d[n] = sq % 2;
    }
    for n in 1..=12usize {
        let dn = series.coeff(n).coeff(0);
        let expected = if d[n] == 1 { ctx.one() } else { ctx.zero() };
        ensure(dn == expected && series.coeff(n).coeff(1).is_zero(), format!("d_{n} = {}", series.coeff(n)))?;
    }
    let ones: Vec<usize> = (1..=12).filter(|&n| d[n] == 1).collect();
    ensure(ones == vec![1, 2, 4, 8], format!("oracle ones at {ones:?}"))?;
    let ext = FiniteExt::artin_schreier(&ctx, &t).map_err(|e| e.to_string())?;
    ensure(ext.substitution_vanishes().map_err(|e| e.to_string())?, "m(theta(y)) != 0")?;
    let autos = ext.standard_automorphisms().map_err(|e| e.to_string())?;
    ensure(autos.len() == 2, "two automorphisms")?;
    for s in &autos {
        ensure(verify_id_automorphism(&ext, s, 12).map_err(|e| e.to_string())?, format!("y -> {}", s.image()))?;
    }
    let sol = dedekind_solution(&ext, &autos, 12).map_err(|e| e.to_string())?;
    ensure(sol.y.det() == &ext.one(), format!("det(Y) = {}", sol.y.det()))?;
    let ide = verify_ide(&sol.a, 12).map_err(|e| e.to_string())?;
    ensure(ide.passed(), format!("verify_ide: {ide}"))?;
    ensure(sol.report.passed(), format!("{}", sol.report))?;
    Ok("d_n = 1 exactly at n = 1, 2, 4, 8; det(Y) = 1; A passes verify_ide".into())
}

fn mu_realization() -> Outcome {
    let start = Instant::now();
    let mut dims = Vec::new();
    for (p, ell) in [(2u32, 1usize), (2, 2), (2, 3), (3, 1), (3, 2)] {
        let order = (p as usize).pow(ell as u32 + 2);
        let ctx = squares(p, order);
        let r = grouplike_verify(&ctx, ell).map_err(|e| e.to_string())?;
        ensure(
            r.passed() && r.checks.iter().all(|c| c.status == Status::Pass),
            format!("grouplike_verify({p}, {ell}): {r}"),
        )?;
        let alg = TensorAlg::new(&ctx, ell).map_err(|e| e.to_string())?;
        let found = constants_search(&alg, order, Window::default_for(p, ell)).map_err(|e| e.to_string())?;
        let pl = (p as usize).pow(ell as u32);
        ensure(found.dimension() == pl, format!("({p}, {ell}): dimension {}", found.dimension()))?;
        ensure(found.verify_theta(order).map_err(|e| e.to_string())?, "found constants not constant")?;
        dims.push(format!("({p},{ell})->{pl}"));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), format!("runtime {elapsed:?}"))?;
    Ok(format!("{} in {:.1}s", dims.join(" "), elapsed.as_secs_f64()))
}

fn product_case() -> Outcome {
    let ctx = squares(2, 8);
    let r = product_realization(&ctx, 1, &ctx.t()).map_err(|e| e.to_string())?;
    for name in [
        "dimension over F = 4",
        "group-like count = 2",
        "ID-automorphism count = 2",
        "constants = F_q (within window)",
        "consistent with G^0 x H = mu_{p^l} x Z/p",
    ] {
        let c = r.get(name).ok_or_else(|| format!("missing line {name}"))?;
        ensure(c.status == Status::Pass, format!("{name}: {}", c.details))?;
    }
    ensure(r.checks.iter().all(|c| c.status == Status::Pass), format!("{r}"))?;
    Ok("dimension 4, 2 group-likes, 2 ID-automorphisms, constants F_2".into())
}

fn cli_checks() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_idgalois"))
        .args(["selftest", "--p", "2", "--order", "12"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), format!("selftest exit {:?}", out.status.code()))?;
    let selftest: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;

    let ctx = squares(3, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..100 {
        let e = random_elem(&ctx, &mut rng);
        let back = parse_expr(&print_expr(&e), &ctx).map_err(|err| err.to_string())?;
        ensure(back == e, format!("round-trip of {e}"))?;
    }

    let schema_value: Value = serde_json::from_str(include_str!("../../../docs/report.schema.json")).unwrap();
    let schema = JSONSchema::compile(&schema_value).map_err(|e| e.to_string())?;
    let mut reports = vec![selftest];
    for args in [
        vec!["tower", "--p", "2", "--level", "3"],
        vec!["galois-kummer", "--p", "2", "--level", "1", "--order", "8"],
        vec!["derive", "--expr", "x^t"],
    ] {
        let cli = Cli::try_parse_from(std::iter::once("idgalois").chain(args)).map_err(|e| e.to_string())?;
        reports.push(serde_json::from_str(&execute(&cli.command).to_json()).unwrap());
    }
    for r in &reports {
        ensure(schema.is_valid(r), format!("schema rejects {}", r["command"]))?;
    }
    Ok("selftest exit 0, 100 round-trips, 4 reports schema-valid".into())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("axiom suite", axiom_suite),
        ("Lucas oracle", lucas_oracle),
        ("tower degrees", tower_degrees),
        ("L_1 = L^p criterion", l1_criterion),
        ("G_m example IDE", gm_example),
        ("Frobenius pullback", frobenius_pullback),
        ("classical PV", classical_pv),
        ("mu_{p^l} realization", mu_realization),
        ("product realization", product_case),
        ("CLI", cli_checks),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
