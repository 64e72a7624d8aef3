//! Finite fields `F_{p^k}` with table-driven multiplication.
//!
//! Elements are encoded as integers `c_0 + c_1 p + ... + c_{k-1} p^{k-1}` where
//! `c_i` are the coordinates in the polynomial basis `1, g, ..., g^{k-1}` and `g`
//! is a root of the field modulus.

use std::fmt;

use crate::error::{Error, Result};

/// Largest field size the lookup tables are built for.
pub const MAX_FIELD_SIZE: u32 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FqElem(pub(crate) u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    /// The integer encoding of the element.
    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The field `F_q`, `q = p^k`.
#[derive(Clone)]
pub struct Fq {
    p: u32,
    k: u32,
    q: u32,
    /// Monic primitive modulus, coefficients low to high (length `k + 1`).
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fq")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for Fq {}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Fq {
    pub fn new(p: u32, k: u32) -> Result<Fq> {
        if !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidFieldSize { p, k });
        }
        let q = (p as u64).checked_pow(k).filter(|&q| q <= MAX_FIELD_SIZE as u64);
        let q = q.ok_or(Error::InvalidFieldSize { p, k })? as u32;
        if k == 1 {
            // modulus y - r for the least primitive root r
            let r = (1..p.max(2))
                .find(|&r| multiplicative_order_mod(r, p) == p - 1)
                .unwrap_or(1);
            let mut f = Fq {
                p,
                k,
                q,
                modulus: vec![(p - r) % p, 1],
                exp: Vec::new(),
                log: Vec::new(),
            };
            f.build_tables(r % p);
            return Ok(f);
        }
        // lexicographically least monic primitive polynomial of degree k
        for tail in 0..q {
            let mut modulus = Vec::with_capacity(k as usize + 1);
            let mut c = tail;
            for _ in 0..k {
                modulus.push(c % p);
                c /= p;
            }
            modulus.push(1);
            if modulus[0] == 0 {
                continue;
            }
            let mut f = Fq {
                p,
                k,
                q,
                modulus,
                exp: Vec::new(),
                log: Vec::new(),
            };
            // g = code p is the class of the polynomial variable
            if f.build_tables(p) {
                return Ok(f);
            }
        }
        unreachable!("primitive polynomials exist for every degree")
    }

    /// Fills exp/log tables from powers of `g`; false if `g` is not primitive.
    fn build_tables(&mut self, g: u32) -> bool {
        let n = (self.q - 1) as usize;
        let mut exp = vec![0u32; n];
        let mut log = vec![u32::MAX; self.q as usize];
        let mut cur = 1u32;
        for (i, slot) in exp.iter_mut().enumerate() {
            if log[cur as usize] != u32::MAX {
                return false;
            }
            *slot = cur;
            log[cur as usize] = i as u32;
            cur = self.slow_mul(cur, g);
        }
        if cur != 1 {
            return false;
        }
        self.exp = exp;
        self.log = log;
        true
    }

    fn to_coords(&self, mut c: u32) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.k as usize);
        for _ in 0..self.k {
            v.push(c % self.p);
            c /= self.p;
        }
        v
    }

    fn from_coords(&self, v: &[u32]) -> u32 {
        v.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let k = self.k as usize;
        let (x, y) = (self.to_coords(a), self.to_coords(b));
        let mut prod = vec![0u64; 2 * k];
        for i in 0..k {
            for j in 0..k {
                prod[i + j] = (prod[i + j] + x[i] as u64 * y[j] as u64) % p;
            }
        }
        for d in (k..2 * k).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &m) in self.modulus[..k].iter().enumerate() {
                let sub = c * m as u64 % p;
                prod[d - k + i] = (prod[d - k + i] + p - sub) % p;
            }
        }
        let out: Vec<u32> = prod[..k].iter().map(|&c| c as u32).collect();
        self.from_coords(&out)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FqElem {
        FqElem::ZERO
    }

    pub fn one(&self) -> FqElem {
        FqElem::ONE
    }

    /// The basis generator `g` (the class of the modulus variable).
    pub fn generator(&self) -> FqElem {
        if self.k == 1 {
            FqElem(self.exp[1 % self.exp.len()])
        } else {
            FqElem(self.p)
        }
    }

    /// Element from its integer encoding; `None` if out of range.
    pub fn from_code(&self, code: u32) -> Option<FqElem> {
        (code < self.q).then_some(FqElem(code))
    }

    /// The image of an integer under `Z -> F_p ⊂ F_q`.
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.p as i64) as u32)
    }

    /// Coordinates over `F_p` in the basis `1, g, ..., g^{k-1}`.
    pub fn coords(&self, a: FqElem) -> Vec<u32> {
        self.to_coords(a.0)
    }

    pub fn from_coords_elem(&self, coords: &[u32]) -> FqElem {
        let mut v: Vec<u32> = coords.iter().map(|c| c % self.p).collect();
        v.resize(self.k as usize, 0);
        FqElem(self.from_coords(&v))
    }

    /// Returns `Some(n)` if `a` lies in the prime field.
    pub fn as_prime(&self, a: FqElem) -> Option<u32> {
        (a.0 < self.p).then_some(a.0)
    }

    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        if self.k == 1 {
            let s = a.0 + b.0;
            return FqElem(if s >= self.p { s - self.p } else { s });
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0, 1);
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FqElem(out)
    }

    pub fn neg(&self, a: FqElem) -> FqElem {
        if self.k == 1 {
            return FqElem(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let (mut x, mut out, mut place) = (a.0, 0, 1);
        while x > 0 {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        FqElem(out)
    }

    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.0 == 0 || b.0 == 0 {
            return FqElem::ZERO;
        }
        let n = self.q - 1;
        let e = (self.log[a.0 as usize] + self.log[b.0 as usize]) % n;
        FqElem(self.exp[e as usize])
    }

    pub fn inv(&self, a: FqElem) -> Option<FqElem> {
        if a.0 == 0 {
            return None;
        }
        let n = self.q - 1;
        let e = (n - self.log[a.0 as usize]) % n;
        Some(FqElem(self.exp[e as usize]))
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Option<FqElem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: FqElem, e: i64) -> Option<FqElem> {
        if a.0 == 0 {
            return match e.cmp(&0) {
                std::cmp::Ordering::Less => None,
                std::cmp::Ordering::Equal => Some(FqElem::ONE),
                std::cmp::Ordering::Greater => Some(FqElem::ZERO),
            };
        }
        let n = (self.q - 1) as i64;
        let l = self.log[a.0 as usize] as i64;
        let idx = (l * e.rem_euclid(n)).rem_euclid(n);
        Some(FqElem(self.exp[idx as usize]))
    }

    pub fn frobenius(&self, a: FqElem) -> FqElem {
        self.pow(a, self.p as i64).unwrap_or(FqElem::ZERO)
    }

    /// The unique `p`-th root, `a^{p^{k-1}}`.
    pub fn p_root(&self, a: FqElem) -> FqElem {
        let e = (self.p as i64).pow(self.k - 1);
        self.pow(a, e).unwrap_or(FqElem::ZERO)
    }

    /// A primitive `d`-th root of unity, if `d | q - 1`.
    pub fn root_of_unity(&self, d: u32) -> Option<FqElem> {
        let n = self.q - 1;
        if d == 0 || n % d != 0 {
            return None;
        }
        Some(FqElem(self.exp[(n / d) as usize % self.exp.len()]))
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.q).map(FqElem)
    }

    /// Renders an element as an expression in `g` (plain integer when in `F_p`).
    pub fn render(&self, a: FqElem) -> String {
        if let Some(n) = self.as_prime(a) {
            return n.to_string();
        }
        let coords = self.to_coords(a.0);
        let mut parts = Vec::new();
        for (i, &c) in coords.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let term = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "g".to_string(),
                (1, c) => format!("{c}*g"),
                (i, 1) => format!("g^{i}"),
                (i, c) => format!("{c}*g^{i}"),
            };
            parts.push(term);
        }
        parts.join(" + ")
    }
}

fn multiplicative_order_mod(r: u32, p: u32) -> u32 {
    if r % p == 0 {
        return 0;
    }
    let mut cur = r as u64 % p as u64;
    let mut ord = 1;
    while cur != 1 {
        cur = cur * r as u64 % p as u64;
        ord += 1;
    }
    ord
}
