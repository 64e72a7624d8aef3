//! The monomial function field `F_q(t, x)`, `x = t^α`, and its subfields.
//!
//! An element is stored in normal form `t^a·x^b·N/D` where `N, D ∈ F_q[t, x]`
//! are coprime, neither is divisible by `t` or `x`, and the coefficient of the
//! lexicographically least monomial of `D` is 1. Since `α ∉ Q` makes `x`
//! transcendental over `F_q(t)`, equality of elements is equality of normal
//! forms.

mod lattice;
pub mod poly;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::padicnum::{DigitOracle, Fq, FqElem, PadicCtx, PadicExponent};

pub use lattice::ExponentLattice;
pub use poly::BiPoly;

/// A Laurent polynomial in `t` and `x`: exponents `(a, b)` of `t^a x^b`.
pub type Laurent = BTreeMap<(i64, i64), FqElem>;

struct FieldInner {
    fq: Fq,
    padic: PadicCtx,
    has_param: bool,
    trunc: usize,
    /// Depth of the parameter in the tower: `π = (α - α_level)/p^level`.
    level: usize,
    root_oracle: DigitOracle,
}

/// Shared description of an ID-field `F_q(t)` or `F_q(t, t^π)`.
#[derive(Clone)]
pub struct FieldCtx(Arc<FieldInner>);

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p())
            .field("k", &self.k())
            .field("oracle", &self.0.padic.oracle().label())
            .field("has_param", &self.0.has_param)
            .field("trunc", &self.0.trunc)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.0, &o.0)
            || (self.0.fq == o.0.fq
                && self.0.has_param == o.0.has_param
                && self.0.level == o.0.level
                && self.0.root_oracle == o.0.root_oracle
                && self.0.trunc == o.0.trunc
                && self.0.padic.budget() == o.0.padic.budget())
    }
}

impl Eq for FieldCtx {}

impl FieldCtx {
    /// `F_q(t, t^α)` with `q = p^k`, derivations truncated at `order`.
    pub fn new(p: u32, k: u32, oracle: DigitOracle, order: usize) -> Result<Self> {
        Self::build(p, k, oracle, order, true, 0, None)
    }

    /// `F_q(t)` with the derivation `θ_t`.
    pub fn rational(p: u32, k: u32, order: usize) -> Result<Self> {
        Self::build(p, k, DigitOracle::Explicit(Arc::from([])), order, false, 0, None)
    }

    /// Same field with an explicit digit budget.
    pub fn with_budget(&self, budget: usize) -> Result<Self> {
        Self::build(
            self.p(),
            self.k(),
            self.0.root_oracle.clone(),
            self.0.trunc,
            self.0.has_param,
            self.0.level,
            Some(budget),
        )
    }

    /// Same field with a different truncation order.
    pub fn with_order(&self, order: usize) -> Result<Self> {
        Self::build(
            self.p(),
            self.k(),
            self.0.root_oracle.clone(),
            order,
            self.0.has_param,
            self.0.level,
            None,
        )
    }

    /// The field `F_q(t, t^γ)`, `γ` the level-`level` digit shift of `α`.
    pub fn at_level(&self, level: usize) -> Result<Self> {
        Self::build(
            self.p(),
            self.k(),
            self.0.root_oracle.clone(),
            self.0.trunc,
            self.0.has_param,
            level,
            None,
        )
    }

    fn build(
        p: u32,
        k: u32,
        root_oracle: DigitOracle,
        order: usize,
        has_param: bool,
        level: usize,
        budget: Option<usize>,
    ) -> Result<Self> {
        if order == 0 {
            return Err(Error::Invalid("truncation order must be at least 1".into()));
        }
        let fq = Fq::new(p, k)?;
        let budget = budget.unwrap_or_else(|| PadicCtx::default_budget(p, order));
        let padic = PadicCtx::new(p, root_oracle.shifted(level), budget)?;
        let ctx = FieldCtx(Arc::new(FieldInner {
            fq,
            padic,
            has_param,
            trunc: order,
            level,
            root_oracle,
        }));
        // non-degeneracy: θ^(1)(t) = 1
        let d1 = ctx.0.padic.lucas_binom(PadicExponent::integer(1), 1)?;
        debug_assert_eq!(d1, 1);
        Ok(ctx)
    }

    pub fn fq(&self) -> &Fq {
        &self.0.fq
    }

    pub fn padic(&self) -> &PadicCtx {
        &self.0.padic
    }

    pub fn p(&self) -> u32 {
        self.0.fq.p()
    }

    pub fn k(&self) -> u32 {
        self.0.fq.k()
    }

    pub fn trunc(&self) -> usize {
        self.0.trunc
    }

    pub fn level(&self) -> usize {
        self.0.level
    }

    pub fn has_param(&self) -> bool {
        self.0.has_param
    }

    /// The digit stream of `α` for the root field.
    pub fn root_oracle(&self) -> &DigitOracle {
        &self.0.root_oracle
    }

    /// Digit stream of this field's parameter.
    pub fn oracle(&self) -> &DigitOracle {
        self.0.padic.oracle()
    }

    /// Degree of imperfection: 1 for `F_q(t)`, 2 with the transcendental exponent.
    pub fn imperfection_degree(&self) -> u32 {
        if self.0.has_param {
            2
        } else {
            1
        }
    }

    /// The integer `α_ℓ` of the root parameter.
    pub fn root_alpha_low(&self, level: usize) -> i64 {
        let p = self.p() as i64;
        (0..level).rev().fold(0, |acc, i| {
            acc * p + (self.0.root_oracle.digit(i) % self.p()) as i64
        })
    }

    /// The exponent lattice of the field itself.
    pub fn lattice(&self) -> ExponentLattice {
        if self.0.has_param {
            ExponentLattice::with_parameter(
                self.p(),
                self.0.level as u32,
                self.root_alpha_low(self.0.level),
                1,
            )
        } else {
            ExponentLattice::integers(1)
        }
    }

    /// The exponent lattice of the level-`ℓ` subfield, `p^ℓ·(Z + Zπ_ℓ)` in this
    /// field's parameter.
    pub fn kernel_lattice(&self, ell: usize) -> ExponentLattice {
        let scale = (self.p() as i128).pow(ell as u32);
        if self.0.has_param {
            let level = self.0.level + ell;
            ExponentLattice::with_parameter(self.p(), level as u32, self.root_alpha_low(level), 1)
                .scaled(scale)
        } else {
            ExponentLattice::integers(scale)
        }
    }

    pub fn zero(&self) -> MonoElem {
        MonoElem::zero(self)
    }

    pub fn one(&self) -> MonoElem {
        self.constant(self.fq().one())
    }

    pub fn constant(&self, c: FqElem) -> MonoElem {
        MonoElem::monomial(self, c, 0, 0).expect("constants never need the parameter")
    }

    pub fn from_int(&self, n: i64) -> MonoElem {
        self.constant(self.fq().from_int(n))
    }

    pub fn t(&self) -> MonoElem {
        MonoElem::monomial(self, self.fq().one(), 1, 0).expect("t is always present")
    }

    /// `x = t^π`, the transcendental monomial.
    pub fn x(&self) -> Result<MonoElem> {
        MonoElem::monomial(self, self.fq().one(), 0, 1)
    }

    pub fn monomial(&self, c: FqElem, a: i64, b: i64) -> Result<MonoElem> {
        MonoElem::monomial(self, c, a, b)
    }
}

/// Denominator factors with multiplicities. Each factor is free of monomial
/// factors, non-constant and has least coefficient 1; entries are distinct
/// but need not be coprime.
pub(crate) type Factors = Vec<(BiPoly, u32)>;

/// An element of the monomial field in normal form.
///
/// The value is `t^a x^b · num/den` with `num`, `den` coprime polynomials free
/// of monomial factors and the least coefficient of `den` equal to 1. The
/// denominator is also kept as a product of small factors so that reductions
/// only ever take gcds against those.
#[derive(Clone)]
pub struct MonoElem {
    ctx: FieldCtx,
    shift: (i64, i64),
    num: BiPoly,
    den: BiPoly,
    factors: Factors,
}

impl PartialEq for MonoElem {
    fn eq(&self, o: &Self) -> bool {
        self.shift == o.shift && self.num == o.num && self.den == o.den && self.ctx == o.ctx
    }
}

impl Eq for MonoElem {}

impl std::hash::Hash for MonoElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.shift.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

fn check_param(ctx: &FieldCtx, b: i64) -> Result<()> {
    if b != 0 && !ctx.has_param() {
        Err(Error::NoParameter)
    } else {
        Ok(())
    }
}

/// Splits a Laurent polynomial into `(t^a x^b, polynomial)`.
fn laurent_to_parts(f: &Fq, l: &Laurent) -> ((i64, i64), BiPoly) {
    if l.is_empty() {
        return ((0, 0), BiPoly::zero());
    }
    let amin = l.keys().map(|k| k.0).min().unwrap();
    let bmin = l.keys().map(|k| k.1).min().unwrap();
    let poly = BiPoly::from_terms(
        f,
        l.iter()
            .map(|(&(a, b), &c)| ((a - amin) as usize, (b - bmin) as usize, c)),
    );
    ((amin, bmin), poly)
}

fn parts_to_laurent(shift: (i64, i64), p: &BiPoly) -> Laurent {
    p.terms()
        .map(|(a, b, c)| ((a as i64 + shift.0, b as i64 + shift.1), c))
        .collect()
}

/// `d = c·d'` with the least coefficient of `d'` equal to 1.
fn unit_normal(f: &Fq, d: BiPoly) -> (BiPoly, FqElem) {
    let lc = d.least_coeff().expect("nonzero polynomial");
    if lc == FqElem::ONE {
        (d, lc)
    } else {
        (d.scale(f, f.inv(lc).expect("nonzero")), lc)
    }
}

fn push_factor(list: &mut Factors, g: BiPoly, e: u32) {
    if e == 0 || g.as_constant().is_some() {
        return;
    }
    match list.iter_mut().find(|(h, _)| *h == g) {
        Some(entry) => entry.1 += e,
        None => list.push((g, e)),
    }
}

fn multiplicity(list: &Factors, g: &BiPoly) -> u32 {
    list.iter().find(|(h, _)| h == g).map_or(0, |(_, e)| *e)
}

pub(crate) fn factor_product(f: &Fq, list: &[(BiPoly, u32)]) -> BiPoly {
    list.iter()
        .filter(|(_, e)| *e > 0)
        .fold(BiPoly::one(), |acc, (g, e)| acc.mul(f, &g.pow(f, *e)))
}

/// Removes every common factor of `num` and the listed denominator factors.
fn cancel(f: &Fq, mut num: BiPoly, factors: Factors) -> (BiPoly, Factors) {
    if factors.is_empty() || num.as_constant().is_some() {
        return (num, factors);
    }
    let mut out = Factors::new();
    let mut work = factors;
    work.reverse();
    while let Some((fac, mut e)) = work.pop() {
        loop {
            if num.as_constant().is_some() {
                push_factor(&mut out, fac, e);
                break;
            }
            let g = num.gcd(f, &fac);
            if g.is_one() {
                push_factor(&mut out, fac, e);
                break;
            }
            let (g, _) = unit_normal(f, g);
            if g == fac {
                num = num.exact_div(f, &fac).expect("factor divides");
                e -= 1;
                if e == 0 {
                    break;
                }
                continue;
            }
            let rest = fac.exact_div(f, &g).expect("gcd divides");
            work.push((rest, e));
            work.push((g, e));
            break;
        }
    }
    (num, out)
}

impl MonoElem {
    pub fn zero(ctx: &FieldCtx) -> MonoElem {
        MonoElem {
            ctx: ctx.clone(),
            shift: (0, 0),
            num: BiPoly::zero(),
            den: BiPoly::one(),
            factors: Factors::new(),
        }
    }

    pub fn monomial(ctx: &FieldCtx, c: FqElem, a: i64, b: i64) -> Result<MonoElem> {
        check_param(ctx, b)?;
        if c.is_zero() {
            return Ok(MonoElem::zero(ctx));
        }
        Ok(MonoElem {
            ctx: ctx.clone(),
            shift: (a, b),
            num: BiPoly::constant(c),
            den: BiPoly::one(),
            factors: Factors::new(),
        })
    }

    /// `t^β` for an exponent of the field's lattice coordinates.
    pub fn power_of_t(ctx: &FieldCtx, beta: PadicExponent) -> Result<MonoElem> {
        Self::monomial(ctx, ctx.fq().one(), beta.a, beta.b)
    }

    pub fn from_laurent(ctx: &FieldCtx, num: &Laurent) -> Result<MonoElem> {
        Self::from_fraction(ctx, num, &Laurent::from([((0, 0), FqElem::ONE)]))
    }

    /// Builds `num/den` and normalizes.
    pub fn from_fraction(ctx: &FieldCtx, num: &Laurent, den: &Laurent) -> Result<MonoElem> {
        let num: Laurent = num.iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (*k, *c)).collect();
        let den: Laurent = den.iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (*k, *c)).collect();
        if den.is_empty() {
            return Err(Error::DivisionByZero);
        }
        for &(_, b) in num.keys().chain(den.keys()) {
            check_param(ctx, b)?;
        }
        let f = ctx.fq();
        let (sn, n) = laurent_to_parts(f, &num);
        let (sd, d) = laurent_to_parts(f, &den);
        Ok(Self::normalize(ctx, (sn.0 - sd.0, sn.1 - sd.1), n, d))
    }

    /// Full normalization from arbitrary polynomial parts (`den ≠ 0`).
    pub(crate) fn normalize(ctx: &FieldCtx, shift: (i64, i64), num: BiPoly, den: BiPoly) -> MonoElem {
        if num.is_zero() {
            return MonoElem::zero(ctx);
        }
        let f = ctx.fq();
        let (dt, dx) = den.monomial_orders();
        let (den, c) = unit_normal(f, den.shift_down(dt, dx));
        let num = num.scale(f, f.inv(c).expect("nonzero"));
        let mut factors = Factors::new();
        push_factor(&mut factors, den, 1);
        Self::from_parts(ctx, (shift.0 - dt as i64, shift.1 - dx as i64), num, factors)
    }

    /// `t^shift · num / Π g^e` for normalized factors `g`; cancels and
    /// extracts monomial factors of `num`.
    pub(crate) fn from_parts(ctx: &FieldCtx, shift: (i64, i64), num: BiPoly, factors: Factors) -> MonoElem {
        if num.is_zero() {
            return MonoElem::zero(ctx);
        }
        let (nt, nx) = num.monomial_orders();
        let num = num.shift_down(nt, nx);
        let (num, factors) = cancel(ctx.fq(), num, factors);
        Self::assemble(ctx, (shift.0 + nt as i64, shift.1 + nx as i64), num, factors)
    }

    fn assemble(ctx: &FieldCtx, shift: (i64, i64), num: BiPoly, factors: Factors) -> MonoElem {
        let den = factor_product(ctx.fq(), &factors);
        MonoElem {
            ctx: ctx.clone(),
            shift,
            num,
            den,
            factors,
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == (0, 0) && self.num.is_one() && self.den.is_one()
    }

    /// Whether the element lies in `F_q` (exact; no truncation involved).
    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn as_constant(&self) -> Option<FqElem> {
        if self.is_zero() {
            return Some(FqElem::ZERO);
        }
        if self.shift != (0, 0) || !self.den.is_one() {
            return None;
        }
        self.num.as_constant()
    }

    /// Whether the denominator is 1 (a Laurent polynomial).
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// The single monomial `(c, a, b)` if the element is `c·t^a·x^b`.
    pub fn as_monomial(&self) -> Option<(FqElem, i64, i64)> {
        if !self.den.is_one() || self.num.num_terms() != 1 {
            return None;
        }
        let (a, b, c) = self.num.terms().next()?;
        Some((c, a as i64 + self.shift.0, b as i64 + self.shift.1))
    }

    pub fn numerator(&self) -> Laurent {
        parts_to_laurent(self.shift, &self.num)
    }

    pub fn denominator(&self) -> Laurent {
        parts_to_laurent((0, 0), &self.den)
    }

    /// Monomial shift, reduced numerator and denominator factors.
    pub(crate) fn parts(&self) -> ((i64, i64), &BiPoly, &Factors) {
        (self.shift, &self.num, &self.factors)
    }

    /// The valuations `(ord_t, -deg_t, ord_x, -deg_x)`, reading the element in
    /// `F_q(x)(t)` and in `F_q(t)(x)`; `None` for zero.
    pub fn monomial_valuations(&self) -> Option<[i64; 4]> {
        if self.is_zero() {
            return None;
        }
        let deg_t = self.shift.0 + self.num.deg_t() as i64 - self.den.deg_t() as i64;
        let deg_x = self.shift.1 + self.num.deg_x().unwrap_or(0) as i64 - self.den.deg_x().unwrap_or(0) as i64;
        Some([self.shift.0, -deg_t, self.shift.1, -deg_x])
    }

    /// All monomial exponents appearing in the normal form (numerator with the
    /// monomial shift, and denominator).
    pub fn exponents(&self) -> Vec<PadicExponent> {
        self.numerator()
            .keys()
            .chain(self.denominator().keys())
            .map(|&(a, b)| PadicExponent::new(a, b))
            .collect()
    }

    fn same_ctx(&self, o: &MonoElem) {
        assert!(self.ctx == o.ctx, "{}", Error::ContextMismatch);
    }

    pub fn checked_add(&self, o: &MonoElem) -> Result<MonoElem> {
        if self.ctx != o.ctx {
            return Err(Error::ContextMismatch);
        }
        Ok(self.add_impl(o))
    }

    fn add_impl(&self, o: &MonoElem) -> MonoElem {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let f = self.ctx.fq();
        let s = (self.shift.0.min(o.shift.0), self.shift.1.min(o.shift.1));
        let n1 = self
            .num
            .shift_up((self.shift.0 - s.0) as usize, (self.shift.1 - s.1) as usize);
        let n2 = o.num.shift_up((o.shift.0 - s.0) as usize, (o.shift.1 - s.1) as usize);
        if self.den == o.den {
            return Self::from_parts(&self.ctx, s, n1.add(f, &n2), self.factors.clone());
        }
        let mut common = self.factors.clone();
        for (g, e) in &o.factors {
            match common.iter_mut().find(|(h, _)| h == g) {
                Some(entry) => entry.1 = entry.1.max(*e),
                None => common.push((g.clone(), *e)),
            }
        }
        let cofactor = |own: &Factors| -> BiPoly {
            let rest: Factors = common
                .iter()
                .map(|(g, e)| (g.clone(), e - multiplicity(own, g)))
                .collect();
            factor_product(f, &rest)
        };
        let num = n1.mul(f, &cofactor(&self.factors)).add(f, &n2.mul(f, &cofactor(&o.factors)));
        Self::from_parts(&self.ctx, s, num, common)
    }

    fn mul_impl(&self, o: &MonoElem) -> MonoElem {
        if self.is_zero() || o.is_zero() {
            return MonoElem::zero(&self.ctx);
        }
        let f = self.ctx.fq();
        let shift = (self.shift.0 + o.shift.0, self.shift.1 + o.shift.1);
        let (n1, f2) = cancel(f, self.num.clone(), o.factors.clone());
        let (n2, f1) = cancel(f, o.num.clone(), self.factors.clone());
        let mut factors = f1;
        for (g, e) in f2 {
            push_factor(&mut factors, g, e);
        }
        Self::assemble(&self.ctx, shift, n1.mul(f, &n2), factors)
    }

    pub fn inverse(&self) -> Result<MonoElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = self.ctx.fq();
        let (num, c) = unit_normal(f, self.num.clone());
        let mut factors = Factors::new();
        push_factor(&mut factors, num, 1);
        let inv = f.inv(c).expect("nonzero");
        Ok(Self::assemble(
            &self.ctx,
            (-self.shift.0, -self.shift.1),
            self.den.scale(f, inv),
            factors,
        ))
    }

    pub fn checked_div(&self, o: &MonoElem) -> Result<MonoElem> {
        if self.ctx != o.ctx {
            return Err(Error::ContextMismatch);
        }
        Ok(self.mul_impl(&o.inverse()?))
    }

    pub fn scale(&self, c: FqElem) -> MonoElem {
        if c.is_zero() || self.is_zero() {
            return MonoElem::zero(&self.ctx);
        }
        MonoElem {
            num: self.num.scale(self.ctx.fq(), c),
            ..self.clone()
        }
    }

    /// Multiplication by the image of an integer in `F_p`.
    pub fn scale_int(&self, n: i64) -> MonoElem {
        self.scale(self.ctx.fq().from_int(n))
    }

    pub fn pow(&self, e: i64) -> Result<MonoElem> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        if self.is_zero() {
            return Ok(if e == 0 { self.ctx.one() } else { self.clone() });
        }
        let f = self.ctx.fq();
        let e32 = u32::try_from(e).map_err(|_| Error::Invalid("exponent too large".into()))?;
        let factors = self
            .factors
            .iter()
            .filter(|_| e32 > 0)
            .map(|(g, m)| (g.clone(), m * e32))
            .collect();
        Ok(MonoElem {
            ctx: self.ctx.clone(),
            shift: (self.shift.0 * e, self.shift.1 * e),
            num: self.num.pow(f, e32),
            den: self.den.pow(f, e32),
            factors,
        })
    }

    /// `y` with `y^p = self`.
    pub fn p_root(&self) -> Result<MonoElem> {
        let p = self.ctx.p() as i64;
        let f = self.ctx.fq();
        let mut terms = Vec::new();
        for (part, shift) in [(&self.num, self.shift), (&self.den, (0, 0))] {
            let mut mapped = Laurent::new();
            for (a, b, c) in part.terms() {
                let (a, b) = (a as i64 + shift.0, b as i64 + shift.1);
                if a % p != 0 || b % p != 0 {
                    return Err(Error::NotPthPower { a, b });
                }
                mapped.insert((a / p, b / p), f.p_root(c));
            }
            terms.push(mapped);
        }
        Self::from_fraction(&self.ctx, &terms[0], &terms[1])
    }

    /// Frobenius `y ↦ y^p`.
    pub fn frobenius(&self) -> MonoElem {
        self.pow(self.ctx.p() as i64).expect("nonnegative exponent")
    }

    /// Image under the ring map sending `t^a x^b ↦ t^{a + b·shift} x^{b·scale}`
    /// into `target` (an embedding of monomial fields).
    pub fn map_monomials(&self, target: &FieldCtx, x_shift: i64, x_scale: i64) -> Result<MonoElem> {
        if target.fq() != self.ctx.fq() {
            return Err(Error::ContextMismatch);
        }
        let f = target.fq();
        let map = |shift: (i64, i64), poly: &BiPoly| -> Result<((i64, i64), BiPoly)> {
            let l: Laurent = parts_to_laurent(shift, poly)
                .into_iter()
                .map(|((a, b), c)| ((a + b * x_shift, b * x_scale), c))
                .collect();
            for &(_, b) in l.keys() {
                check_param(target, b)?;
            }
            Ok(laurent_to_parts(f, &l))
        };
        if self.is_zero() {
            return Ok(MonoElem::zero(target));
        }
        let (mut shift, mut num) = map(self.shift, &self.num)?;
        let mut factors = Factors::new();
        for (g, e) in &self.factors {
            let (s, g) = map((0, 0), g)?;
            let (g, c) = unit_normal(f, g);
            shift = (shift.0 - s.0 * *e as i64, shift.1 - s.1 * *e as i64);
            num = num.scale(f, f.pow(c, -(*e as i64)).expect("nonzero"));
            push_factor(&mut factors, g, *e);
        }
        Ok(Self::from_parts(target, shift, num, factors))
    }

    /// Rebinds an element to an equal context (e.g. one with a larger order).
    pub fn in_ctx(&self, target: &FieldCtx) -> Result<MonoElem> {
        self.map_monomials(target, 0, 1)
    }
}

impl fmt::Debug for MonoElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonoElem({self})")
    }
}

/// Writes a Laurent polynomial as a sum of terms, highest monomial first.
pub fn render_laurent(fq: &Fq, l: &Laurent) -> String {
    if l.is_empty() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (&(a, b), &c) in l.iter().rev() {
        let mut factors = Vec::new();
        match (a, b) {
            (0, 0) => {}
            _ => {
                if b != 0 {
                    factors.push(if b == 1 { "x".to_string() } else { format!("x^{b}") });
                }
                if a != 0 {
                    factors.push(if a == 1 { "t".to_string() } else { format!("t^{a}") });
                }
            }
        }
        factors.reverse();
        let coeff = fq.render(c);
        let coeff = if coeff.contains(' ') { format!("({coeff})") } else { coeff };
        let term = if factors.is_empty() {
            coeff
        } else if c == FqElem::ONE {
            factors.join("*")
        } else {
            format!("{coeff}*{}", factors.join("*"))
        };
        parts.push(term);
    }
    parts.join(" + ")
}

impl fmt::Display for MonoElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fq = self.ctx.fq();
        let num = render_laurent(fq, &self.numerator());
        if self.den.is_one() {
            return f.write_str(&num);
        }
        let den = render_laurent(fq, &self.denominator());
        let num = if self.numerator().len() > 1 { format!("({num})") } else { num };
        write!(f, "{num}/({den})")
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&MonoElem> for &MonoElem {
            type Output = MonoElem;
            fn $m(self, o: &MonoElem) -> MonoElem {
                self.same_ctx(o);
                #[allow(clippy::redundant_closure_call)]
                ($body)(self, o)
            }
        }
        impl $tr<MonoElem> for MonoElem {
            type Output = MonoElem;
            fn $m(self, o: MonoElem) -> MonoElem {
                (&self).$m(&o)
            }
        }
        impl $tr<&MonoElem> for MonoElem {
            type Output = MonoElem;
            fn $m(self, o: &MonoElem) -> MonoElem {
                (&self).$m(o)
            }
        }
    };
}

forward_binop!(Add, add, |a: &MonoElem, b: &MonoElem| a.add_impl(b));
forward_binop!(Sub, sub, |a: &MonoElem, b: &MonoElem| a.add_impl(&-b));
forward_binop!(Mul, mul, |a: &MonoElem, b: &MonoElem| a.mul_impl(b));
forward_binop!(Div, div, |a: &MonoElem, b: &MonoElem| a
    .checked_div(b)
    .expect("division by zero"));

impl Neg for &MonoElem {
    type Output = MonoElem;
    fn neg(self) -> MonoElem {
        MonoElem {
            num: self.num.neg(self.ctx.fq()),
            ..self.clone()
        }
    }
}

impl Neg for MonoElem {
    type Output = MonoElem;
    fn neg(self) -> MonoElem {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32, k: u32) -> FieldCtx {
        FieldCtx::new(p, k, DigitOracle::Squares, 12).unwrap()
    }

    #[test]
    fn quotient_normalizes() {
        let c = ctx(5, 1);
        let t = c.t();
        let one = c.one();
        let q = (&t * &t - &one) / (&t - &one);
        assert_eq!(q, &t + &one);
        assert!((&q / &q).is_one());
    }

    #[test]
    fn bivariate_quotient() {
        let c = ctx(3, 1);
        let (t, x) = (c.t(), c.x().unwrap());
        let num = &t * &t * &x * &x - &t * &t;
        let den = &t * &x - &t;
        assert_eq!(num / den, &t * &x + &t);
    }

    #[test]
    fn constants() {
        let c = FieldCtx::new(7, 1, DigitOracle::Squares, 4).unwrap();
        assert!(c.from_int(5).is_constant());
        assert!(!c.t().is_constant());
        let (t, x) = (c.t(), c.x().unwrap());
        assert!(((&t * &x) / (&x * &t)).is_constant());
        let r = (&t + &x) / (&x + &t).scale_int(3);
        assert_eq!(r.as_constant(), Some(c.fq().from_int(5)));
    }

    #[test]
    fn p_root_examples() {
        let c = ctx(3, 2);
        let t = c.t();
        assert_eq!(t.pow(3).unwrap().p_root().unwrap(), t);
        assert_eq!(
            c.x().unwrap().p_root(),
            Err(Error::NotPthPower { a: 0, b: 1 })
        );
        let g = c.fq().generator();
        let elem = t.pow(6).unwrap().scale(g);
        let root = elem.p_root().unwrap();
        let expect = t.pow(2).unwrap().scale(c.fq().pow(g, 3).unwrap());
        assert_eq!(root, expect);
        assert_eq!(root.frobenius(), elem);
    }

    #[test]
    fn parameter_required() {
        let l = FieldCtx::rational(3, 1, 6).unwrap();
        assert_eq!(l.x().unwrap_err(), Error::NoParameter);
        assert_eq!(l.imperfection_degree(), 1);
    }

    #[test]
    fn display_forms() {
        let c = ctx(5, 1);
        let (t, x) = (c.t(), c.x().unwrap());
        let e = (&t * &t * &x).scale_int(2) / (&t - &c.one());
        assert_eq!(e.to_string(), "3*t^2*x/(4*t + 1)");
        assert_eq!(t.inverse().unwrap().to_string(), "t^-1");
        assert_eq!(c.zero().to_string(), "0");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_elem(c: FieldCtx) -> impl Strategy<Value = MonoElem> {
            let term = (0u32..3, -2i64..3, -1i64..2);
            let poly = prop::collection::vec(term, 1..4);
            (poly.clone(), poly).prop_filter_map("zero denominator", move |(n, d)| {
                let f = c.fq();
                let lift = |v: &Vec<(u32, i64, i64)>| -> Laurent {
                    let mut l = Laurent::new();
                    for &(co, a, b) in v {
                        let e = l.entry((a, b)).or_insert(FqElem::ZERO);
                        *e = f.add(*e, f.from_int(co as i64 + 1));
                    }
                    l
                };
                MonoElem::from_fraction(&c, &lift(&n), &lift(&d)).ok()
            })
        }

        proptest! {
            #[test]
            fn field_laws(a in small_elem(ctx(3, 1)), b in small_elem(ctx(3, 1)), c in small_elem(ctx(3, 1))) {
                prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
                prop_assert_eq!(&(&a - &b) + &b, a.clone());
                if !b.is_zero() {
                    prop_assert_eq!(&(&a / &b) * &b, a.clone());
                }
            }

            #[test]
            fn normal_form_is_canonical(a in small_elem(ctx(2, 1)), b in small_elem(ctx(2, 1))) {
                // rebuilding from the stored parts reproduces the same normal form
                let again = MonoElem::from_fraction(a.ctx(), &a.numerator(), &a.denominator()).unwrap();
                prop_assert_eq!(&again, &a);
                if !b.is_zero() {
                    let q = &(&a * &b) / &b;
                    prop_assert_eq!(q, a);
                }
            }

            #[test]
            fn p_root_inverts_frobenius(a in small_elem(ctx(3, 2))) {
                prop_assert_eq!(a.frobenius().p_root().unwrap(), a);
            }
        }
    }
}

/// A Laurent polynomial as a monomial shift times a polynomial, for the
/// quotient recursion of the derivation engine.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct LPoly {
    pub shift: (i64, i64),
    pub poly: BiPoly,
}

impl LPoly {
    pub fn zero() -> Self {
        LPoly { shift: (0, 0), poly: BiPoly::zero() }
    }

    pub fn from_laurent(f: &Fq, l: &Laurent) -> Self {
        let (shift, poly) = laurent_to_parts(f, l);
        LPoly { shift, poly }
    }

    pub fn from_parts(shift: (i64, i64), poly: BiPoly) -> Self {
        LPoly { shift, poly }
    }

    pub fn to_laurent(&self) -> Laurent {
        parts_to_laurent(self.shift, &self.poly)
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn mul(&self, f: &Fq, o: &LPoly) -> LPoly {
        if self.is_zero() || o.is_zero() {
            return LPoly::zero();
        }
        LPoly {
            shift: (self.shift.0 + o.shift.0, self.shift.1 + o.shift.1),
            poly: self.poly.mul(f, &o.poly),
        }
    }

    pub fn add(&self, f: &Fq, o: &LPoly) -> LPoly {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let s = (self.shift.0.min(o.shift.0), self.shift.1.min(o.shift.1));
        let a = self.poly.shift_up((self.shift.0 - s.0) as usize, (self.shift.1 - s.1) as usize);
        let b = o.poly.shift_up((o.shift.0 - s.0) as usize, (o.shift.1 - s.1) as usize);
        LPoly { shift: s, poly: a.add(f, &b) }
    }

    pub fn sub(&self, f: &Fq, o: &LPoly) -> LPoly {
        self.add(f, &LPoly { shift: o.shift, poly: o.poly.neg(f) })
    }
}
