use std::thread;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use idgalois::finiteext::{dedekind_solution, verify_id_automorphism, FiniteExt};
use idgalois::galois::{constants_search, grouplike_verify, product_realization, subtower_check, TensorAlg, Window};
use idgalois::hasse::{theta_coeff, verify_additivity, verify_homomorphism, verify_iterativity, IdScalar};
use idgalois::ide::{derive_matrix, verify_ide, verify_solution, FundamentalMatrix, Matrix};
use idgalois::monofield::{FieldCtx, MonoElem};
use idgalois::padicnum::{DigitOracle, PadicExponent};
use idgalois::report::{Report, Status};
use idgalois::sample::random_elem;
use idgalois::tower::{check_l1_eq_lp, tower_consistency, TowerLevel};

use crate::expr::{parse_expr, ExprError};
use crate::output::CliReport;

#[derive(Parser, Debug)]
#[command(name = "idgalois", version, about = "Iterative differential algebra in characteristic p")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// The base field `F_q(t, t^α)`, or `F_q(t)` with `--alpha none`.
#[derive(Args, Clone, Debug, Serialize)]
pub struct FieldArgs {
    /// Characteristic.
    #[arg(long, default_value_t = 2)]
    pub p: u32,
    /// Degree of `F_q` over `F_p`.
    #[arg(long)]
    pub k: Option<u32>,
    /// Field size `q = p^k`, an alternative to `--k`.
    #[arg(long)]
    pub q: Option<u32>,
    /// Digit stream of `α`: `squares`, `ones`, `explicit:<d0,d1,...>` or `none`.
    #[arg(long, default_value = "squares")]
    pub alpha: String,
    /// Truncation order `N` of derivation series.
    #[arg(long, default_value_t = 12)]
    pub order: usize,
    /// p-adic digit budget (default derived from the order).
    #[arg(long)]
    pub digits: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Derivation series of an element.
    Derive {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        expr: String,
        /// Report a single coefficient `θ^(n)`.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Derive `A = θ(Y)·Y^(-1)` and check the IDE compatibility conditions.
    VerifyIde {
        #[command(flatten)]
        field: FieldArgs,
        /// Matrix `Y`: rows separated by `;`, entries by `,`.
        #[arg(long)]
        y: String,
    },
    /// Check that `Y` solves the IDE derived from `--from` (default `Y`).
    VerifySolution {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        y: String,
        #[arg(long)]
        from: Option<String>,
    },
    /// Tower data at one level.
    Tower {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        level: usize,
        /// Number of digits of `γ` to print.
        #[arg(long, default_value_t = 6)]
        gamma_digits: usize,
    },
    /// Whether `L_1 = L^p`.
    L1check {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// A Galois extension with explicit automorphisms, solved via Dedekind.
    Classical {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum, default_value_t = Family::ArtinSchreier)]
        family: Family,
        /// Right-hand side `f` of `y^p - y = f` or `y^d = f`.
        #[arg(long)]
        f: String,
        /// Kummer degree.
        #[arg(long, default_value_t = 2)]
        d: u32,
    },
    /// Group-likes and constants of `F_[ℓ] ⊗_F F_[ℓ]`.
    GaloisKummer {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        level: usize,
    },
    /// The product realization with `E'' = F[y]/(y^p - y - f)`.
    Realize {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        as_rhs: String,
    },
    /// Runs the invariant suites.
    Selftest {
        #[command(flatten)]
        field: FieldArgs,
        /// Random elements per axiom check.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    ArtinSchreier,
    Kummer,
}

#[derive(Debug, thiserror::Error)]
pub enum CmdError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Core(#[from] idgalois::Error),
}

type CmdResult = Result<(Report, Value), CmdError>;

impl FieldArgs {
    pub fn field_degree(&self) -> Result<u32, CmdError> {
        let from_q = match self.q {
            None => None,
            Some(q) => {
                let mut k = 0;
                let mut n = 1u64;
                while n < q as u64 && self.p > 1 {
                    n *= self.p as u64;
                    k += 1;
                }
                if n != q as u64 || q < 2 {
                    return Err(CmdError::Usage(format!("--q {q} is not a power of --p {}", self.p)));
                }
                Some(k)
            }
        };
        match (from_q, self.k) {
            (Some(a), Some(b)) if a != b => Err(CmdError::Usage(format!("--q and --k disagree ({a} vs {b})"))),
            (Some(a), _) => Ok(a),
            (None, Some(b)) => Ok(b),
            (None, None) => Ok(1),
        }
    }

    pub fn ctx(&self) -> Result<FieldCtx, CmdError> {
        let k = self.field_degree()?;
        let ctx = if self.alpha.trim() == "none" {
            FieldCtx::rational(self.p, k, self.order)?
        } else {
            let oracle = DigitOracle::parse(&self.alpha)?;
            FieldCtx::new(self.p, k, oracle, self.order)?
        };
        Ok(match self.digits {
            Some(d) => ctx.with_budget(d)?,
            None => ctx,
        })
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Derive { .. } => "derive",
            Command::VerifyIde { .. } => "verify-ide",
            Command::VerifySolution { .. } => "verify-solution",
            Command::Tower { .. } => "tower",
            Command::L1check { .. } => "l1check",
            Command::Classical { .. } => "classical",
            Command::GaloisKummer { .. } => "galois-kummer",
            Command::Realize { .. } => "realize",
            Command::Selftest { .. } => "selftest",
        }
    }

    fn field(&self) -> &FieldArgs {
        match self {
            Command::Derive { field, .. }
            | Command::VerifyIde { field, .. }
            | Command::VerifySolution { field, .. }
            | Command::Tower { field, .. }
            | Command::L1check { field }
            | Command::Classical { field, .. }
            | Command::GaloisKummer { field, .. }
            | Command::Realize { field, .. }
            | Command::Selftest { field, .. } => field,
        }
    }

    fn params(&self) -> Value {
        let mut v = serde_json::to_value(self.field()).expect("arguments serialize");
        let extra = match self {
            Command::Derive { expr, n, .. } => json!({ "expr": expr, "n": n }),
            Command::VerifyIde { y, .. } => json!({ "y": y }),
            Command::VerifySolution { y, from, .. } => json!({ "y": y, "from": from }),
            Command::Tower { level, gamma_digits, .. } => json!({ "level": level, "gamma_digits": gamma_digits }),
            Command::L1check { .. } => json!({}),
            Command::Classical { family, f, d, .. } => json!({ "family": family, "f": f, "d": d }),
            Command::GaloisKummer { level, .. } => json!({ "level": level }),
            Command::Realize { level, as_rhs, .. } => json!({ "level": level, "as_rhs": as_rhs }),
            Command::Selftest { samples, seed, .. } => json!({ "samples": samples, "seed": seed }),
        };
        if let (Value::Object(base), Value::Object(extra)) = (&mut v, extra) {
            base.extend(extra);
        }
        v
    }
}

/// Runs a parsed command.
pub fn execute(cmd: &Command) -> CliReport {
    let outcome = cmd.field().ctx().and_then(|ctx| match cmd {
        Command::Derive { expr, n, .. } => derive(&ctx, expr, *n),
        Command::VerifyIde { y, .. } => run_verify_ide(&ctx, y),
        Command::VerifySolution { y, from, .. } => run_verify_solution(&ctx, y, from.as_deref()),
        Command::Tower { level, gamma_digits, .. } => tower(&ctx, *level, *gamma_digits),
        Command::L1check { .. } => l1check(&ctx),
        Command::Classical { family, f, d, .. } => classical(&ctx, *family, f, *d),
        Command::GaloisKummer { level, .. } => galois_kummer(&ctx, *level),
        Command::Realize { level, as_rhs, .. } => realize(&ctx, *level, as_rhs),
        Command::Selftest { samples, seed, .. } => selftest(&ctx, *samples, *seed),
    });
    match outcome {
        Ok((report, result)) => CliReport::from_report(cmd.name(), cmd.params(), report, result),
        Err(e) => CliReport::from_error(cmd.name(), cmd.params(), e.to_string()),
    }
}

/// Parses `a, b; c, d` into a square matrix.
pub fn parse_matrix(s: &str, ctx: &FieldCtx) -> Result<Matrix<MonoElem>, CmdError> {
    let rows = s
        .split(';')
        .map(|row| row.split(',').map(|e| parse_expr(e, ctx)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_rows(rows)?)
}

fn matrix_strings<E: IdScalar>(m: &Matrix<E>) -> Vec<Vec<String>> {
    m.rows().iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect()
}

fn derive(ctx: &FieldCtx, expr: &str, n: Option<usize>) -> CmdResult {
    let x = parse_expr(expr, ctx)?;
    let order = ctx.trunc();
    let series = x.theta(order)?;
    let mut report = Report::new();
    report.check("theta^(0) = id", series.coeff(0) == &x, "");
    report.extend("", verify_iterativity(&x, order)?);
    let mut result = json!({
        "element": x.to_string(),
        "series": series.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    });
    if let Some(n) = n {
        result["coefficient"] = json!(theta_coeff(&x, n)?.to_string());
    }
    Ok((report, result))
}

fn run_verify_ide(ctx: &FieldCtx, y: &str) -> CmdResult {
    let y = FundamentalMatrix::new(parse_matrix(y, ctx)?)?;
    let a = derive_matrix(&y, ctx.trunc())?;
    let report = verify_ide(&a, ctx.trunc())?;
    let result = json!({ "A": a.to_json(), "det": y.det().to_string() });
    Ok((report, result))
}

fn run_verify_solution(ctx: &FieldCtx, y: &str, from: Option<&str>) -> CmdResult {
    let sol = parse_matrix(y, ctx)?;
    let source = match from {
        Some(s) => FundamentalMatrix::new(parse_matrix(s, ctx)?)?,
        None => FundamentalMatrix::new(sol.clone())?,
    };
    let a = derive_matrix(&source, ctx.trunc())?;
    let report = verify_solution(&a, &sol, ctx.trunc())?;
    Ok((report, json!({ "A": a.to_json() })))
}

fn tower(ctx: &FieldCtx, level: usize, digits: usize) -> CmdResult {
    let lvl = TowerLevel::new(ctx, level)?;
    let summary = lvl.summary(digits)?;
    let mut report = Report::new();
    let m = ctx.imperfection_degree();
    let pl = (ctx.p() as u64).pow(level as u32);
    let expect_bracket = (ctx.p() as u64).pow(level as u32 * (m - 1));
    report.check(
        format!("[F:F_{level}] = p^{level}"),
        summary.index_f_over_fell == pl,
        summary.index_f_over_fell.to_string(),
    );
    report.check(
        format!("[F_[{level}]:F] = p^({level}(m-1))"),
        summary.index_fbracket_over_f == expect_bracket,
        format!("{} with m = {m}", summary.index_fbracket_over_f),
    );
    report.check("alpha digit identity", lvl.digit_identity_holds()?, "");
    report.extend("", tower_consistency(ctx, level, 1)?);
    Ok((report, serde_json::to_value(&summary).expect("summary serializes")))
}

fn l1check(ctx: &FieldCtx) -> CmdResult {
    let holds = check_l1_eq_lp(ctx);
    let mut report = Report::new();
    report.check("L_1 = L^p", holds, format!("lattice {:?}", ctx.lattice()));
    Ok((report, json!({ "holds": holds })))
}

fn classical(ctx: &FieldCtx, family: Family, f: &str, d: u32) -> CmdResult {
    let f = parse_expr(f, ctx)?;
    let ext = match family {
        Family::ArtinSchreier => FiniteExt::artin_schreier(ctx, &f)?,
        Family::Kummer => FiniteExt::kummer(ctx, d, &f)?,
    };
    let order = ctx.trunc();
    let mut report = Report::new();
    report.check("m(theta(y)) = 0 mod T^(N+1)", ext.substitution_vanishes()?, "");
    let (st, cert) = ext.geometricity();
    report.push("geometric", st, cert);
    let autos = ext.standard_automorphisms()?;
    for (i, s) in autos.iter().enumerate() {
        report.check(
            format!("automorphism {i} is an ID-automorphism"),
            verify_id_automorphism(&ext, s, order)?,
            format!("y -> {}", s.image()),
        );
    }
    let sol = dedekind_solution(&ext, &autos, order)?;
    report.extend("", sol.report.clone());
    let result = json!({
        "minpoly": ext.minpoly_string(),
        "theta_y": ext.theta_y().coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "automorphisms": autos.iter().map(|s| s.image().to_string()).collect::<Vec<_>>(),
        "Y": matrix_strings(sol.y.matrix()),
        "det": sol.y.det().to_string(),
        "A": sol.a.to_json(),
    });
    Ok((report, result))
}

fn galois_kummer(ctx: &FieldCtx, level: usize) -> CmdResult {
    let order = ctx.trunc();
    let mut report = grouplike_verify(ctx, level)?;
    let alg = TensorAlg::new(ctx, level)?;
    let window = Window::default_for(ctx.p(), level);
    let consts = constants_search(&alg, order, window)?;
    report.push(
        format!("constants dimension = {}", alg.dimension()),
        consts.status(),
        format!(
            "found {}, theta-condition solutions {}, upper bound {}",
            consts.dimension(),
            consts.theta_kernel_dim,
            consts.upper_bound
        ),
    );
    report.check("found constants are theta-constant", consts.verify_theta(order)?, "");
    for k in 0..level {
        report.extend(&format!("subtower k={k}: "), subtower_check(ctx, level, k)?);
    }
    let result = json!({
        "w": alg.w().to_string(),
        "dimension": alg.dimension(),
        "constants": consts.basis.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "window": consts.window,
    });
    Ok((report, result))
}

fn realize(ctx: &FieldCtx, level: usize, rhs: &str) -> CmdResult {
    let f = parse_expr(rhs, ctx)?;
    let report = product_realization(ctx, level, &f)?;
    Ok((report, json!({ "f": f.to_string(), "level": level })))
}

fn selftest(ctx: &FieldCtx, samples: usize, seed: u64) -> CmdResult {
    type Suite = fn(&FieldCtx, usize, u64) -> Result<Report, CmdError>;
    let suites: [(&str, Suite); 6] = [
        ("axioms", suite_axioms),
        ("lucas", suite_lucas),
        ("tower", suite_tower),
        ("l1", suite_l1),
        ("classical", suite_classical),
        ("galois", suite_galois),
    ];
    let outcomes: Vec<Result<Report, CmdError>> = thread::scope(|s| {
        let handles: Vec<_> = suites
            .iter()
            .map(|(_, suite)| s.spawn(move || suite(ctx, samples, seed)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite thread")).collect()
    });
    let mut report = Report::new();
    for ((name, _), r) in suites.iter().zip(outcomes) {
        match r {
            Ok(r) => {
                let ok = r.passed();
                let n = r.len();
                report.push(
                    format!("{name}"),
                    Status::from_bool(ok),
                    format!("{} of {n} checks passed", n - r.failures().count()),
                );
                for c in r.failures() {
                    report.push(format!("{name}: {}", c.name), c.status, c.details.clone());
                }
            }
            Err(e) => report.push(*name, Status::Fail, e.to_string()),
        }
    }
    Ok((report, Value::Null))
}

fn suite_axioms(ctx: &FieldCtx, samples: usize, seed: u64) -> Result<Report, CmdError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = ctx.trunc();
    let mut report = Report::new();
    for _ in 0..samples {
        let x = random_elem(ctx, &mut rng);
        let y = random_elem(ctx, &mut rng);
        report.check("theta^(0) = id", x.theta(order)?.coeff(0) == &x, x.to_string());
        report.extend("", verify_additivity(&x, &y, order)?);
        report.extend("", verify_homomorphism(&x, &y, order)?);
        report.extend("", verify_iterativity(&x, order)?);
    }
    Ok(report)
}

fn exact_binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn suite_lucas(ctx: &FieldCtx, _: usize, _: u64) -> Result<Report, CmdError> {
    let p = ctx.p();
    let padic = ctx.padic();
    let mut report = Report::new();
    for beta in 0..=40u64 {
        for n in 0..=beta {
            let got = padic.lucas_binom(PadicExponent::integer(beta as i64), n)?;
            let want = (exact_binom(beta, n) % p as u128) as u32;
            if got != want {
                report.check(format!("binom({beta},{n})"), false, format!("{got} != {want}"));
            }
        }
    }
    report.check("lucas agrees with factorial binomials for beta <= 40", report.passed(), "");
    Ok(report)
}

fn suite_tower(ctx: &FieldCtx, _: usize, _: u64) -> Result<Report, CmdError> {
    let mut report = Report::new();
    if !ctx.has_param() {
        return Ok(report);
    }
    for level in 1..=2 {
        let (r, _) = tower(ctx, level, 4)?;
        report.extend(&format!("level {level}: "), r);
    }
    Ok(report)
}

fn suite_l1(ctx: &FieldCtx, _: usize, _: u64) -> Result<Report, CmdError> {
    let mut report = Report::new();
    let rational = FieldCtx::rational(ctx.p(), ctx.k(), ctx.trunc())?;
    report.check("L_1 = L^p for F_q(t)", check_l1_eq_lp(&rational), "");
    if ctx.has_param() && ctx.root_oracle().declared_irrational() {
        report.check("L_1 != L^p for F_q(t, t^alpha)", !check_l1_eq_lp(ctx), "");
    }
    Ok(report)
}

fn suite_classical(ctx: &FieldCtx, _: usize, _: u64) -> Result<Report, CmdError> {
    let rational = FieldCtx::rational(ctx.p(), ctx.k(), ctx.trunc())?;
    let (report, _) = classical(&rational, Family::ArtinSchreier, "t", 2)?;
    Ok(report)
}

fn suite_galois(ctx: &FieldCtx, _: usize, _: u64) -> Result<Report, CmdError> {
    if !ctx.has_param() {
        return Ok(Report::new());
    }
    Ok(grouplike_verify(ctx, 1)?)
}
