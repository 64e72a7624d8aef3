//! The iterative derivation engine.
//!
//! On the monomial field the derivation is determined by
//! `θ^(n)(t^β) = binom(β, n)·t^(β-n)`, extended additively over numerators and
//! to quotients through `θ(r/s) = θ(r)·θ(s)^(-1)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::monofield::poly::BiPoly;
use crate::monofield::{factor_product, Factors, FieldCtx, LPoly, Laurent, MonoElem};
use crate::padicnum::Fq;
use crate::padicnum::{int_binom_mod, PadicExponent};
use crate::report::Report;

/// Element type of an ID-field: field arithmetic plus truncated `θ`.
pub trait IdScalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn try_inverse(&self) -> Result<Self>;
    /// Image of an integer in the prime field.
    fn int_like(&self, n: i64) -> Self;
    fn characteristic(&self) -> u32;
    /// `θ^(0)(self), ..., θ^(order)(self)`.
    fn theta(&self, order: usize) -> Result<TruncSeries<Self>>;
}

/// A truncated series `Σ_{n ≤ N} r_n T^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<E> {
    coeffs: Vec<E>,
}

impl<E: IdScalar> TruncSeries<E> {
    /// Panics on an empty coefficient list.
    pub fn new(coeffs: Vec<E>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs its constant term");
        TruncSeries { coeffs }
    }

    pub fn constant(c: E, order: usize) -> Self {
        let z = c.zero_like();
        let mut coeffs = vec![z; order + 1];
        coeffs[0] = c;
        TruncSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &E {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        TruncSeries {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }

    pub fn map<F: Fn(&E) -> E>(&self, f: F) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Coefficientwise image in another scalar type.
    pub fn map_to<F: IdScalar, G: Fn(&E) -> F>(&self, g: G) -> TruncSeries<F> {
        TruncSeries::new(self.coeffs.iter().map(g).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        TruncSeries {
            coeffs: (0..=n).map(|i| self.coeffs[i].clone() + o.coeffs[i].clone()).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        TruncSeries {
            coeffs: (0..=n).map(|i| self.coeffs[i].clone() - o.coeffs[i].clone()).collect(),
        }
    }

    /// Cauchy product truncated to the smaller order.
    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let coeffs = (0..=n)
            .map(|k| {
                let mut acc = self.coeffs[0].zero_like();
                for i in 0..=k {
                    if self.coeffs[i].is_zero_elem() || o.coeffs[k - i].is_zero_elem() {
                        continue;
                    }
                    acc = acc + self.coeffs[i].clone() * o.coeffs[k - i].clone();
                }
                acc
            })
            .collect();
        TruncSeries { coeffs }
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = TruncSeries::constant(self.coeffs[0].one_like(), self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `s^(-1)` with `s·s^(-1) ≡ 1 mod T^(N+1)`.
    pub fn invert(&self) -> Result<Self> {
        let inv0 = self.coeffs[0]
            .try_inverse()
            .map_err(|_| Error::NonInvertibleSeries)?;
        let mut out = vec![inv0.clone()];
        for n in 1..=self.order() {
            let mut acc = inv0.zero_like();
            for i in 1..=n {
                if self.coeffs[i].is_zero_elem() {
                    continue;
                }
                acc = acc + self.coeffs[i].clone() * out[n - i].clone();
            }
            out.push(-(acc * inv0.clone()));
        }
        Ok(TruncSeries { coeffs: out })
    }

    pub fn is_zero_from(&self, start: usize) -> bool {
        self.coeffs.iter().skip(start).all(|c| c.is_zero_elem())
    }
}

impl<E: IdScalar> fmt::Display for TruncSeries<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero_elem() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*T")?,
                _ => write!(f, "({c})*T^{n}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(T^{})", self.order() + 1)
    }
}

/// `θ^(n)` of a Laurent polynomial, term by term.
pub fn theta_laurent(ctx: &FieldCtx, l: &Laurent, n: usize) -> Result<Laurent> {
    let f = ctx.fq();
    let mut out = Laurent::new();
    for (&(a, b), &c) in l {
        let binom = ctx.padic().lucas_binom(PadicExponent::new(a, b), n as u64)?;
        if binom == 0 {
            continue;
        }
        let e = out.entry((a - n as i64, b)).or_insert(f.zero());
        *e = f.add(*e, f.mul(c, f.from_int(binom as i64)));
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

fn check_order(ctx: &FieldCtx, order: usize) -> Result<()> {
    if order > ctx.trunc() {
        return Err(Error::OrderTooLarge {
            order,
            trunc: ctx.trunc(),
        });
    }
    Ok(())
}

/// `θ(x)` truncated at `order`.
pub fn theta_series(x: &MonoElem, order: usize) -> Result<TruncSeries<MonoElem>> {
    let ctx = x.ctx();
    check_order(ctx, order)?;
    if x.is_laurent() {
        let num = x.numerator();
        let coeffs = (0..=order)
            .map(|n| MonoElem::from_laurent(ctx, &theta_laurent(ctx, &num, n)?))
            .collect::<Result<Vec<_>>>()?;
        return Ok(TruncSeries::new(coeffs));
    }
    // Write x = R/B^E with B the product of the distinct denominator factors.
    let f = ctx.fq();
    let (shift, num, factors) = x.parts();
    let e_max = factors.iter().map(|(_, e)| *e).max().expect("non-Laurent element");
    let base = factors.iter().fold(BiPoly::one(), |acc, (g, _)| acc.mul(f, g));
    let lift: Factors = factors.iter().map(|(g, e)| (g.clone(), e_max - e)).collect();
    let r = LPoly::from_parts(shift, num.mul(f, &factor_product(f, &lift))).to_laurent();
    let b = LPoly::from_parts((0, 0), base);
    let one = LPoly::from_parts((0, 0), BiPoly::one());
    let mut b_pows = vec![one.clone()];
    for i in 1..=order {
        b_pows.push(b_pows[i - 1].mul(f, &b));
    }
    let b_laurent = b.to_laurent();
    let s: Vec<LPoly> = (0..=order)
        .map(|i| Ok(LPoly::from_laurent(f, &theta_laurent(ctx, &b_laurent, i)?)))
        .collect::<Result<_>>()?;
    // θ(1/B) has coefficients C_n / B^(n+1), C_n = −Σ_{i=1}^n S_i·C_(n−i)·B^(i−1)
    let mut c = vec![one];
    for n in 1..=order {
        let mut acc = LPoly::zero();
        for i in 1..=n {
            if s[i].is_zero() || c[n - i].is_zero() {
                continue;
            }
            acc = acc.sub(f, &s[i].mul(f, &c[n - i]).mul(f, &b_pows[i - 1]));
        }
        c.push(acc);
    }
    // θ(1/B^E) has coefficients W_n / B^(n+E)
    let w = lpoly_series_pow(f, &c, e_max);
    let mut coeffs = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let mut acc = LPoly::zero();
        for i in 0..=n {
            if w[n - i].is_zero() {
                continue;
            }
            let r_i = LPoly::from_laurent(f, &theta_laurent(ctx, &r, i)?);
            if r_i.is_zero() {
                continue;
            }
            acc = acc.add(f, &r_i.mul(f, &b_pows[i]).mul(f, &w[n - i]));
        }
        let den: Factors = factors
            .iter()
            .map(|(g, _)| (g.clone(), n as u32 + e_max))
            .collect();
        coeffs.push(MonoElem::from_parts(ctx, acc.shift, acc.poly, den));
    }
    Ok(TruncSeries::new(coeffs))
}

fn lpoly_series_mul(f: &Fq, a: &[LPoly], b: &[LPoly]) -> Vec<LPoly> {
    (0..a.len())
        .map(|n| {
            (0..=n).fold(LPoly::zero(), |acc, i| {
                if a[i].is_zero() || b[n - i].is_zero() {
                    acc
                } else {
                    acc.add(f, &a[i].mul(f, &b[n - i]))
                }
            })
        })
        .collect()
}

fn lpoly_series_pow(f: &Fq, s: &[LPoly], mut e: u32) -> Vec<LPoly> {
    let mut base = s.to_vec();
    let mut acc: Option<Vec<LPoly>> = None;
    while e > 0 {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => lpoly_series_mul(f, &a, &base),
            });
        }
        e >>= 1;
        if e > 0 {
            base = lpoly_series_mul(f, &base, &base);
        }
    }
    acc.expect("positive exponent")
}

/// A single coefficient `θ^(n)(x)`; direct for Laurent polynomials.
pub fn theta_coeff(x: &MonoElem, n: usize) -> Result<MonoElem> {
    if x.is_laurent() {
        let ctx = x.ctx();
        if n > ctx.trunc() {
            return Err(Error::OrderTooLarge { order: n, trunc: ctx.trunc() });
        }
        return MonoElem::from_laurent(ctx, &theta_laurent(ctx, &x.numerator(), n)?);
    }
    Ok(theta_series(x, n)?.coeff(n).clone())
}

/// Inverse of a series with invertible constant term.
pub fn series_invert<E: IdScalar>(s: &TruncSeries<E>) -> Result<TruncSeries<E>> {
    s.invert()
}

impl IdScalar for MonoElem {
    fn zero_like(&self) -> Self {
        MonoElem::zero(self.ctx())
    }

    fn one_like(&self) -> Self {
        self.ctx().one()
    }

    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }

    fn try_inverse(&self) -> Result<Self> {
        self.inverse()
    }

    fn int_like(&self, n: i64) -> Self {
        self.ctx().from_int(n)
    }

    fn characteristic(&self) -> u32 {
        self.ctx().p()
    }

    fn theta(&self, order: usize) -> Result<TruncSeries<Self>> {
        theta_series(self, order)
    }
}

/// Checks `θ^(i)(θ^(j)(x)) = binom(i+j, i)·θ^(i+j)(x)` for all `i + j ≤ order`.
pub fn verify_iterativity<E: IdScalar>(x: &E, order: usize) -> Result<Report> {
    let p = x.characteristic();
    let outer = x.theta(order)?;
    let mut report = Report::new();
    for j in 0..=order {
        let inner = outer.coeff(j).theta(order - j)?;
        for i in 0..=order - j {
            let lhs = inner.coeff(i);
            let c = int_binom_mod((i + j) as u64, i as u64, p);
            let rhs = x.int_like(c as i64) * outer.coeff(i + j).clone();
            let ok = *lhs == rhs;
            let details = if ok {
                String::new()
            } else {
                format!("lhs = {lhs}, rhs = {rhs}")
            };
            report.check(format!("iterativity(i={i},j={j})"), ok, details);
        }
    }
    Ok(report)
}

/// Checks `θ^(k)(xy) = Σ_{i+j=k} θ^(i)(x)·θ^(j)(y)` for all `k ≤ order`.
pub fn verify_homomorphism<E: IdScalar>(x: &E, y: &E, order: usize) -> Result<Report> {
    let lhs = (x.clone() * y.clone()).theta(order)?;
    let rhs = x.theta(order)?.mul(&y.theta(order)?);
    let mut report = Report::new();
    for k in 0..=order {
        let ok = lhs.coeff(k) == rhs.coeff(k);
        let details = if ok {
            String::new()
        } else {
            format!("lhs = {}, rhs = {}", lhs.coeff(k), rhs.coeff(k))
        };
        report.check(format!("homomorphism(k={k})"), ok, details);
    }
    Ok(report)
}

/// Checks `θ^(n)(x + y) = θ^(n)(x) + θ^(n)(y)`.
pub fn verify_additivity<E: IdScalar>(x: &E, y: &E, order: usize) -> Result<Report> {
    let lhs = (x.clone() + y.clone()).theta(order)?;
    let rhs = x.theta(order)?.add(&y.theta(order)?);
    let mut report = Report::new();
    for k in 0..=order {
        report.check(format!("additivity(k={k})"), lhs.coeff(k) == rhs.coeff(k), "");
    }
    Ok(report)
}

/// Whether `θ^(n)(x) = 0` for `1 ≤ n ≤ order`.
pub fn is_theta_constant<E: IdScalar>(x: &E, order: usize) -> Result<bool> {
    Ok(x.theta(order)?.is_zero_from(1))
}
