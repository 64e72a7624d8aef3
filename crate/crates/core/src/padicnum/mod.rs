//! Exact arithmetic in `F_{p^k}` and in the exponent group `Z + Zα ⊂ Z_p`.
//!
//! An exponent `β = a + bα` is stored by its integer coordinates. Its base-`p`
//! digits are computed from the coordinates and a prefix of the digit stream
//! of `α`; binomial residues `binom(β, n) mod p` follow from Lucas' theorem.

mod fq;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

pub use fq::{is_prime, Fq, FqElem, MAX_FIELD_SIZE};

/// Source of the base-`p` digits of the transcendental exponent `α ∈ Z_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DigitOracle {
    /// `d_i = 1` if `i` is a perfect square, else `0`.
    Squares,
    /// Every digit is 1 (the rational number `1/(1-p)`).
    Ones,
    /// Finite digit list, zero-extended.
    Explicit(Arc<[u32]>),
    /// The digit stream of another oracle with the first `shift` digits dropped.
    Shifted { base: Box<DigitOracle>, shift: usize },
}

impl DigitOracle {
    /// Parses `squares`, `ones` or `explicit:<d0,d1,...>`.
    pub fn parse(text: &str) -> Result<DigitOracle> {
        match text.trim() {
            "squares" => Ok(DigitOracle::Squares),
            "ones" => Ok(DigitOracle::Ones),
            s => {
                let body = s
                    .strip_prefix("explicit:")
                    .ok_or_else(|| Error::Invalid(format!("unknown digit oracle `{s}`")))?;
                let digits = body
                    .split(',')
                    .filter(|d| !d.trim().is_empty())
                    .map(|d| {
                        d.trim()
                            .parse::<u32>()
                            .map_err(|_| Error::Invalid(format!("bad digit `{d}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(DigitOracle::Explicit(digits.into()))
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            DigitOracle::Squares => "squares".into(),
            DigitOracle::Ones => "ones".into(),
            DigitOracle::Explicit(d) => {
                let body: Vec<String> = d.iter().map(|x| x.to_string()).collect();
                format!("explicit:{}", body.join(","))
            }
            DigitOracle::Shifted { base, shift } => format!("{}>>{shift}", base.label()),
        }
    }

    /// Raw digit at `i`; callers reduce modulo `p`.
    pub fn digit(&self, i: usize) -> u32 {
        match self {
            DigitOracle::Squares => {
                let r = (i as f64).sqrt() as usize;
                let hit = (r.saturating_sub(1)..=r + 1).any(|s| s * s == i);
                hit as u32
            }
            DigitOracle::Ones => 1,
            DigitOracle::Explicit(d) => d.get(i).copied().unwrap_or(0),
            DigitOracle::Shifted { base, shift } => base.digit(i + shift),
        }
    }

    /// Whether the stream is declared irrational (not eventually periodic).
    pub fn declared_irrational(&self) -> bool {
        match self {
            DigitOracle::Squares => true,
            DigitOracle::Ones | DigitOracle::Explicit(_) => false,
            DigitOracle::Shifted { base, .. } => base.declared_irrational(),
        }
    }

    /// The stream with the first `shift` digits removed.
    pub fn shifted(&self, shift: usize) -> DigitOracle {
        if shift == 0 {
            return self.clone();
        }
        match self {
            DigitOracle::Shifted { base, shift: s } => DigitOracle::Shifted {
                base: base.clone(),
                shift: s + shift,
            },
            other => DigitOracle::Shifted {
                base: Box::new(other.clone()),
                shift,
            },
        }
    }

    /// Heuristic test for eventual periodicity on the first `bound` digits.
    ///
    /// Reports a period `P` with pre-period `s` if the digits agree on
    /// `[s, bound - P)` for some `P <= bound / 4`, `s <= bound / 2`.
    pub fn looks_periodic(&self, p: u32, bound: usize) -> bool {
        let d: Vec<u32> = (0..bound).map(|i| self.digit(i) % p).collect();
        for period in 1..=bound / 4 {
            for start in 0..=bound / 2 {
                if (start..bound - period).all(|i| d[i] == d[i + period]) {
                    return true;
                }
            }
        }
        false
    }
}

impl fmt::Display for DigitOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// An exponent `a + bα` in `Z + Zα`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
pub struct PadicExponent {
    pub a: i64,
    pub b: i64,
}

impl PadicExponent {
    pub const ZERO: PadicExponent = PadicExponent { a: 0, b: 0 };

    pub fn new(a: i64, b: i64) -> Self {
        PadicExponent { a, b }
    }

    pub fn integer(a: i64) -> Self {
        PadicExponent { a, b: 0 }
    }

    pub fn alpha() -> Self {
        PadicExponent { a: 0, b: 1 }
    }

    /// `c1·β1 + c2·β2`.
    pub fn combine(c1: i64, b1: PadicExponent, c2: i64, b2: PadicExponent) -> PadicExponent {
        PadicExponent {
            a: c1 * b1.a + c2 * b2.a,
            b: c1 * b1.b + c2 * b2.b,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
}

impl std::ops::Add for PadicExponent {
    type Output = PadicExponent;
    fn add(self, o: PadicExponent) -> PadicExponent {
        PadicExponent::combine(1, self, 1, o)
    }
}

impl std::ops::Sub for PadicExponent {
    type Output = PadicExponent;
    fn sub(self, o: PadicExponent) -> PadicExponent {
        PadicExponent::combine(1, self, -1, o)
    }
}

impl fmt::Display for PadicExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}α"),
            (a, b) => write!(f, "{a}{b:+}α"),
        }
    }
}

/// Digit arithmetic for exponents over a fixed prime, oracle and digit budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicCtx {
    p: u32,
    oracle: DigitOracle,
    budget: usize,
    /// `p^budget`
    modulus: i128,
    /// `α mod p^budget`
    alpha_mod: i128,
}

impl PadicCtx {
    pub fn new(p: u32, oracle: DigitOracle, budget: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        let max_budget = (62.0 / (p as f64).log2()).floor() as usize;
        if budget == 0 || budget > max_budget {
            return Err(Error::Invalid(format!(
                "digit budget {budget} outside 1..={max_budget} for p = {p}"
            )));
        }
        let modulus = (p as i128).pow(budget as u32);
        let mut alpha_mod = 0i128;
        let mut place = 1i128;
        for i in 0..budget {
            alpha_mod += (oracle.digit(i) % p) as i128 * place;
            place *= p as i128;
        }
        Ok(PadicCtx {
            p,
            oracle,
            budget,
            modulus,
            alpha_mod,
        })
    }

    /// Budget `⌈log_p(order + 1)⌉ + 4` guard digits.
    pub fn default_budget(p: u32, order: usize) -> usize {
        let mut digits = 0;
        let mut reach = 1u128;
        while reach <= order as u128 {
            reach *= p as u128;
            digits += 1;
        }
        digits + 4
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn oracle(&self) -> &DigitOracle {
        &self.oracle
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// `β mod p^budget` as an integer in `[0, p^budget)`.
    pub fn residue(&self, beta: PadicExponent) -> i128 {
        let a = (beta.a as i128).rem_euclid(self.modulus);
        let b = (beta.b as i128).rem_euclid(self.modulus);
        (a + b * self.alpha_mod).rem_euclid(self.modulus)
    }

    /// The first `count` base-`p` digits of `β`, with carries.
    pub fn digits(&self, beta: PadicExponent, count: usize) -> Result<Vec<u32>> {
        if count > self.budget {
            return Err(Error::InsufficientPrecision {
                needed: count,
                budget: self.budget,
            });
        }
        let mut r = self.residue(beta);
        let p = self.p as i128;
        Ok((0..count)
            .map(|_| {
                let d = (r % p) as u32;
                r /= p;
                d
            })
            .collect())
    }

    /// `binom(β, n) mod p` by Lucas' theorem.
    pub fn lucas_binom(&self, beta: PadicExponent, n: u64) -> Result<u32> {
        let p = self.p as u64;
        let mut nd = Vec::new();
        let mut m = n;
        while m > 0 {
            nd.push((m % p) as u32);
            m /= p;
        }
        if nd.is_empty() {
            return Ok(1);
        }
        let bd = self.digits(beta, nd.len())?;
        let mut acc = 1u64;
        for (&b, &k) in bd.iter().zip(&nd) {
            let c = small_binom_mod(b, k, self.p);
            if c == 0 {
                return Ok(0);
            }
            acc = acc * c as u64 % p;
        }
        Ok(acc as u32)
    }

    /// The integer `α_ℓ` formed by the low `ℓ` digits of `α`.
    pub fn alpha_low(&self, level: usize) -> i64 {
        let p = self.p as i64;
        (0..level)
            .rev()
            .fold(0i64, |acc, i| acc * p + (self.oracle.digit(i) % self.p) as i64)
    }
}

/// `binom(n, k) mod p` for `n, k < p` via Pascal's rule.
pub fn small_binom_mod(n: u32, k: u32, p: u32) -> u32 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    // n, k < p so the factorial quotient has no p in the denominator
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = num * ((n - i) as u64) % p as u64;
        den = den * ((i + 1) as u64) % p as u64;
    }
    (num * mod_inverse(den, p as u64) % p as u64) as u32
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// `binom(n, k) mod p` for nonnegative integers by Lucas' theorem.
pub fn int_binom_mod(n: u64, k: u64, p: u32) -> u32 {
    if k > n {
        return 0;
    }
    let p64 = p as u64;
    let (mut n, mut k) = (n, k);
    let mut acc = 1u64;
    while k > 0 || n > 0 {
        let c = small_binom_mod((n % p64) as u32, (k % p64) as u32, p);
        if c == 0 {
            return 0;
        }
        acc = acc * c as u64 % p64;
        n /= p64;
        k /= p64;
    }
    acc as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32, oracle: DigitOracle) -> PadicCtx {
        PadicCtx::new(p, oracle, 8).unwrap()
    }

    /// Exact binomial coefficient for the factorial oracle.
    fn factorial_binom(n: u64, k: u64) -> u128 {
        let mut r = 1u128;
        for i in 0..k {
            r = r * (n - i) as u128 / (i + 1) as u128;
        }
        r
    }

    #[test]
    fn spec_examples_lucas() {
        let c2 = ctx(2, DigitOracle::Squares);
        assert_eq!(c2.lucas_binom(PadicExponent::integer(7), 3).unwrap(), 1);
        assert_eq!(factorial_binom(7, 3) % 2, 1);
        let c3 = ctx(3, DigitOracle::Squares);
        assert_eq!(c3.lucas_binom(PadicExponent::integer(10), 2).unwrap(), 0);
        assert_eq!(factorial_binom(10, 2) % 3, 0);
        assert_eq!(c3.lucas_binom(PadicExponent::alpha(), 1).unwrap(), 1);
        assert_eq!(c3.lucas_binom(PadicExponent::new(-17, 4), 0).unwrap(), 1);
    }

    #[test]
    fn lucas_matches_factorial_formula() {
        for p in [2u32, 3, 5] {
            let c = ctx(p, DigitOracle::Squares);
            for beta in 0..=60u64 {
                for n in 0..=beta {
                    let expect = (factorial_binom(beta, n) % p as u128) as u32;
                    assert_eq!(
                        c.lucas_binom(PadicExponent::integer(beta as i64), n).unwrap(),
                        expect,
                        "p={p} beta={beta} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn digits_of_negative_one() {
        let c = ctx(3, DigitOracle::Squares);
        assert_eq!(c.digits(PadicExponent::integer(-1), 4).unwrap(), vec![2, 2, 2, 2]);
        assert_eq!(c.digits(PadicExponent::ZERO, 5).unwrap(), vec![0; 5]);
    }

    #[test]
    fn digits_of_alpha_minus_one() {
        let c = ctx(3, DigitOracle::Squares);
        let beta = PadicExponent::new(-1, 1);
        assert_eq!(c.digits(beta, 5).unwrap(), vec![0, 1, 0, 0, 1]);
        assert_eq!(c.digits(PadicExponent::alpha(), 5).unwrap(), vec![1, 1, 0, 0, 1]);
    }

    #[test]
    fn digit_budget_is_enforced() {
        let c = PadicCtx::new(2, DigitOracle::Squares, 3).unwrap();
        assert!(c.lucas_binom(PadicExponent::alpha(), 7).is_ok());
        assert_eq!(
            c.lucas_binom(PadicExponent::alpha(), 8),
            Err(Error::InsufficientPrecision { needed: 4, budget: 3 })
        );
    }

    #[test]
    fn combine_examples() {
        let c = ctx(3, DigitOracle::Squares);
        let beta = PadicExponent::new(4, -2);
        assert!(PadicExponent::combine(1, beta, -1, beta).is_zero());
        let two_alpha = PadicExponent::combine(1, PadicExponent::alpha(), 1, PadicExponent::alpha());
        let doubled = (2 * c.residue(PadicExponent::alpha())).rem_euclid(3i128.pow(8));
        assert_eq!(c.residue(two_alpha), doubled);
    }

    #[test]
    fn digit_shift_identity() {
        // α = α_ℓ + p^ℓ γ, γ the level-ℓ shift
        for p in [2u32, 3] {
            let base = ctx(p, DigitOracle::Squares);
            for level in 0..=3usize {
                let shifted = PadicCtx::new(p, DigitOracle::Squares.shifted(level), 8).unwrap();
                let pl = (p as i128).pow(level as u32);
                let m = (p as i128).pow(8);
                let lhs = base.residue(PadicExponent::alpha());
                let gamma = shifted.residue(PadicExponent::alpha());
                let rhs = (base.alpha_low(level) as i128 + pl * gamma).rem_euclid(m);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn oracle_parsing_and_periodicity() {
        assert_eq!(DigitOracle::parse("squares").unwrap(), DigitOracle::Squares);
        let e = DigitOracle::parse("explicit:1,0,2").unwrap();
        assert_eq!(e.digit(2), 2);
        assert_eq!(e.digit(9), 0);
        assert!(!e.declared_irrational());
        assert!(DigitOracle::parse("cubes").is_err());
        assert!(!DigitOracle::Squares.looks_periodic(2, 96));
        assert!(DigitOracle::Ones.looks_periodic(2, 96));
        assert!(e.looks_periodic(3, 96));
        let sq: Vec<u32> = (0..10).map(|i| DigitOracle::Squares.digit(i)).collect();
        assert_eq!(sq, vec![1, 1, 0, 0, 1, 0, 0, 0, 0, 1]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn vandermonde(a1 in -50i64..50, b1 in -5i64..5, a2 in -50i64..50, b2 in -5i64..5, n in 0u64..=12, p in prop::sample::select(vec![2u32, 3, 5])) {
                let c = PadicCtx::new(p, DigitOracle::Squares, 8).unwrap();
                let (x, y) = (PadicExponent::new(a1, b1), PadicExponent::new(a2, b2));
                let mut sum = 0u32;
                for i in 0..=n {
                    sum += c.lucas_binom(x, i).unwrap() * c.lucas_binom(y, n - i).unwrap();
                }
                prop_assert_eq!(sum % p, c.lucas_binom(x + y, n).unwrap());
            }

            #[test]
            fn locality(a in -200i64..200, b in -5i64..5, n in 0u64..27) {
                // n < 3^3 only reads three digits
                let c1 = PadicCtx::new(3, DigitOracle::Squares, 6).unwrap();
                let c2 = PadicCtx::new(3, DigitOracle::Explicit(vec![1, 1, 0, 2, 2, 2].into()), 6).unwrap();
                let beta = PadicExponent::new(a, b);
                prop_assert_eq!(c1.lucas_binom(beta, n).unwrap(), c2.lucas_binom(beta, n).unwrap());
            }
        }
    }
}
