//! Dense polynomials in `F_q[t]` and `F_q[t][x]`.
//!
//! Univariate polynomials are coefficient vectors (low degree first) with no
//! trailing zeros. Bivariate polynomials are vectors of univariate rows indexed
//! by the `x`-degree, again trimmed.

use crate::padicnum::{Fq, FqElem};

pub type UPoly = Vec<FqElem>;

pub fn utrim(a: &mut UPoly) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

pub fn udeg(a: &UPoly) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn uadd(f: &Fq, a: &UPoly, b: &UPoly) -> UPoly {
    let n = a.len().max(b.len());
    let mut out: UPoly = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(FqElem::ZERO);
            let y = b.get(i).copied().unwrap_or(FqElem::ZERO);
            f.add(x, y)
        })
        .collect();
    utrim(&mut out);
    out
}

pub fn uneg(f: &Fq, a: &UPoly) -> UPoly {
    a.iter().map(|&c| f.neg(c)).collect()
}

pub fn usub(f: &Fq, a: &UPoly, b: &UPoly) -> UPoly {
    uadd(f, a, &uneg(f, b))
}

pub fn uscale(f: &Fq, a: &UPoly, c: FqElem) -> UPoly {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|&x| f.mul(x, c)).collect()
}

pub fn umul(f: &Fq, a: &UPoly, b: &UPoly) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![FqElem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    utrim(&mut out);
    out
}

/// Quotient and remainder; panics on a zero divisor.
pub fn udivrem(f: &Fq, a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
    let db = udeg(b).expect("division by the zero polynomial");
    let inv = f.inv(b[db]).expect("trimmed leading coefficient");
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![FqElem::ZERO; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = f.mul(r[i], inv);
        if c.is_zero() {
            continue;
        }
        q[i - db] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[i - db + j] = f.sub(r[i - db + j], f.mul(c, bj));
        }
    }
    utrim(&mut q);
    utrim(&mut r);
    (q, r)
}

pub fn uexact_div(f: &Fq, a: &UPoly, b: &UPoly) -> Option<UPoly> {
    let (q, r) = udivrem(f, a, b);
    r.is_empty().then_some(q)
}

pub fn umonic(f: &Fq, a: &UPoly) -> UPoly {
    match a.last() {
        Some(&lc) => uscale(f, a, f.inv(lc).expect("nonzero")),
        None => Vec::new(),
    }
}

/// Monic gcd.
pub fn ugcd(f: &Fq, a: &UPoly, b: &UPoly) -> UPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let (_, r) = udivrem(f, &a, &b);
        a = b;
        b = r;
    }
    umonic(f, &a)
}

fn uis_one(a: &UPoly) -> bool {
    a.len() == 1 && a[0] == FqElem::ONE
}

/// A polynomial in `F_q[t][x]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    pub(crate) rows: Vec<UPoly>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly { rows: Vec::new() }
    }

    pub fn constant(c: FqElem) -> Self {
        Self::from_rows(vec![vec![c]])
    }

    pub fn one() -> Self {
        Self::constant(FqElem::ONE)
    }

    pub fn from_rows(mut rows: Vec<UPoly>) -> Self {
        rows.iter_mut().for_each(utrim);
        while rows.last().is_some_and(|r| r.is_empty()) {
            rows.pop();
        }
        BiPoly { rows }
    }

    /// Builds from `(t-degree, x-degree, coefficient)` triples; duplicates add up.
    pub fn from_terms(f: &Fq, terms: impl IntoIterator<Item = (usize, usize, FqElem)>) -> Self {
        let mut rows: Vec<UPoly> = Vec::new();
        for (a, b, c) in terms {
            if rows.len() <= b {
                rows.resize(b + 1, Vec::new());
            }
            let row = &mut rows[b];
            if row.len() <= a {
                row.resize(a + 1, FqElem::ZERO);
            }
            row[a] = f.add(row[a], c);
        }
        Self::from_rows(rows)
    }

    /// Nonzero terms as `(t-degree, x-degree, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, FqElem)> + '_ {
        self.rows.iter().enumerate().flat_map(|(b, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(a, &c)| (a, b, c))
        })
    }

    pub fn num_terms(&self) -> usize {
        self.terms().count()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.rows.len() == 1 && uis_one(&self.rows[0])
    }

    /// The constant value if the polynomial has no `t` or `x`.
    pub fn as_constant(&self) -> Option<FqElem> {
        match self.rows.as_slice() {
            [] => Some(FqElem::ZERO),
            [row] if row.len() == 1 => Some(row[0]),
            _ => None,
        }
    }

    pub fn deg_x(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    pub fn deg_t(&self) -> usize {
        self.rows.iter().map(|r| r.len().saturating_sub(1)).max().unwrap_or(0)
    }

    /// Largest powers `(t^i, x^j)` dividing the polynomial.
    pub fn monomial_orders(&self) -> (usize, usize) {
        let xo = self.rows.iter().position(|r| !r.is_empty()).unwrap_or(0);
        let to = self
            .rows
            .iter()
            .filter_map(|r| r.iter().position(|c| !c.is_zero()))
            .min()
            .unwrap_or(0);
        (to, xo)
    }

    /// Divides by `t^i x^j`, which must divide the polynomial.
    pub fn shift_down(&self, i: usize, j: usize) -> BiPoly {
        let rows = self.rows[j.min(self.rows.len())..]
            .iter()
            .map(|r| if r.len() > i { r[i..].to_vec() } else { Vec::new() })
            .collect();
        Self::from_rows(rows)
    }

    pub fn shift_up(&self, i: usize, j: usize) -> BiPoly {
        if self.is_zero() {
            return BiPoly::zero();
        }
        let mut rows = vec![Vec::new(); j];
        for r in &self.rows {
            if r.is_empty() {
                rows.push(Vec::new());
            } else {
                let mut nr = vec![FqElem::ZERO; i];
                nr.extend_from_slice(r);
                rows.push(nr);
            }
        }
        Self::from_rows(rows)
    }

    /// Coefficient of the lexicographically least monomial (lowest `x`, then lowest `t`).
    pub fn least_coeff(&self) -> Option<FqElem> {
        self.rows
            .iter()
            .find(|r| !r.is_empty())
            .and_then(|r| r.iter().copied().find(|c| !c.is_zero()))
    }

    pub fn leading_row(&self) -> Option<&UPoly> {
        self.rows.last()
    }

    pub fn add(&self, f: &Fq, o: &BiPoly) -> BiPoly {
        let n = self.rows.len().max(o.rows.len());
        let empty = Vec::new();
        let rows = (0..n)
            .map(|i| uadd(f, self.rows.get(i).unwrap_or(&empty), o.rows.get(i).unwrap_or(&empty)))
            .collect();
        Self::from_rows(rows)
    }

    pub fn neg(&self, f: &Fq) -> BiPoly {
        BiPoly {
            rows: self.rows.iter().map(|r| uneg(f, r)).collect(),
        }
    }

    pub fn sub(&self, f: &Fq, o: &BiPoly) -> BiPoly {
        self.add(f, &o.neg(f))
    }

    pub fn scale(&self, f: &Fq, c: FqElem) -> BiPoly {
        Self::from_rows(self.rows.iter().map(|r| uscale(f, r, c)).collect())
    }

    pub fn mul_upoly(&self, f: &Fq, c: &UPoly) -> BiPoly {
        Self::from_rows(self.rows.iter().map(|r| umul(f, r, c)).collect())
    }

    pub fn mul(&self, f: &Fq, o: &BiPoly) -> BiPoly {
        if self.is_zero() || o.is_zero() {
            return BiPoly::zero();
        }
        let mut rows = vec![Vec::new(); self.rows.len() + o.rows.len() - 1];
        for (i, a) in self.rows.iter().enumerate() {
            if a.is_empty() {
                continue;
            }
            for (j, b) in o.rows.iter().enumerate() {
                if b.is_empty() {
                    continue;
                }
                rows[i + j] = uadd(f, &rows[i + j], &umul(f, a, b));
            }
        }
        Self::from_rows(rows)
    }

    pub fn pow(&self, f: &Fq, e: u32) -> BiPoly {
        let mut acc = BiPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(f, &base);
            }
        }
        acc
    }

    /// Exact quotient in `F_q[t][x]`, or `None` if the division is not exact.
    pub fn exact_div(&self, f: &Fq, d: &BiPoly) -> Option<BiPoly> {
        let dd = d.deg_x().expect("division by the zero polynomial");
        if self.is_zero() {
            return Some(BiPoly::zero());
        }
        if dd == 0 {
            let c = &d.rows[0];
            let rows = self
                .rows
                .iter()
                .map(|r| uexact_div(f, r, c))
                .collect::<Option<Vec<_>>>()?;
            return Some(Self::from_rows(rows));
        }
        let lc = &d.rows[dd];
        let mut r = self.clone();
        let mut q: Vec<UPoly> = vec![Vec::new(); self.rows.len().saturating_sub(dd).max(1)];
        while let Some(dr) = r.deg_x() {
            if dr < dd {
                return None;
            }
            let c = uexact_div(f, &r.rows[dr], lc)?;
            let shift = dr - dd;
            let sub = d.mul_upoly(f, &c).shift_up(0, shift);
            r = r.sub(f, &sub);
            q[shift] = c;
            if r.deg_x() == Some(dr) {
                return None;
            }
        }
        Some(Self::from_rows(q))
    }

    /// `gcd` of the rows in `F_q[t]` (monic).
    pub fn content(&self, f: &Fq) -> UPoly {
        let mut g: UPoly = Vec::new();
        for r in &self.rows {
            if r.is_empty() {
                continue;
            }
            g = ugcd(f, &g, r);
            if uis_one(&g) {
                break;
            }
        }
        g
    }

    pub fn primitive_part(&self, f: &Fq) -> BiPoly {
        if self.is_zero() {
            return BiPoly::zero();
        }
        let c = self.content(f);
        let rows = self
            .rows
            .iter()
            .map(|r| uexact_div(f, r, &c).expect("content divides every row"))
            .collect();
        Self::from_rows(rows)
    }

    /// Pseudo-remainder with respect to `x`.
    fn prem(&self, f: &Fq, d: &BiPoly) -> BiPoly {
        let dd = d.deg_x().expect("nonzero divisor");
        let lc = &d.rows[dd];
        let mut r = self.clone();
        while let Some(dr) = r.deg_x() {
            if dr < dd {
                break;
            }
            let top = r.rows[dr].clone();
            r = r
                .mul_upoly(f, lc)
                .sub(f, &d.mul_upoly(f, &top).shift_up(0, dr - dd));
        }
        r
    }

    fn monic(&self, f: &Fq) -> BiPoly {
        match self.rows.last().and_then(|r| r.last()) {
            Some(&lc) => self.scale(f, f.inv(lc).expect("nonzero")),
            None => BiPoly::zero(),
        }
    }

    /// `gcd` in `F_q[t, x]`, normalized to a monic leading coefficient.
    pub fn gcd(&self, f: &Fq, o: &BiPoly) -> BiPoly {
        if self.is_zero() {
            return o.monic(f);
        }
        if o.is_zero() {
            return self.monic(f);
        }
        if self.is_one() || o.is_one() {
            return BiPoly::one();
        }
        // common monomial factor
        let (ta, xa) = self.monomial_orders();
        let (tb, xb) = o.monomial_orders();
        let (tm, xm) = (ta.min(tb), xa.min(xb));
        let a = self.shift_down(tm, xm);
        let b = o.shift_down(tm, xm);
        let ca = a.content(f);
        let cb = b.content(f);
        let c = ugcd(f, &ca, &cb);
        let mut a = a.primitive_part(f);
        let mut b = b.primitive_part(f);
        let g = if a.deg_x() == Some(0) || b.deg_x() == Some(0) {
            BiPoly::one()
        } else {
            if a.deg_x() < b.deg_x() {
                std::mem::swap(&mut a, &mut b);
            }
            loop {
                let r = a.prem(f, &b);
                if r.is_zero() {
                    break b;
                }
                if r.deg_x() == Some(0) {
                    break BiPoly::one();
                }
                a = b;
                b = r.primitive_part(f);
            }
        };
        g.mul_upoly(f, &c).shift_up(tm, xm).monic(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Fq {
        Fq::new(5, 1).unwrap()
    }

    fn bp(f: &Fq, terms: &[(usize, usize, i64)]) -> BiPoly {
        BiPoly::from_terms(f, terms.iter().map(|&(a, b, c)| (a, b, f.from_int(c))))
    }

    #[test]
    fn univariate_division() {
        let f = f5();
        let a: UPoly = [4, 0, 1].iter().map(|&c| f.from_int(c)).collect(); // t^2 - 1
        let b: UPoly = [4, 1].iter().map(|&c| f.from_int(c)).collect(); // t - 1
        let q = uexact_div(&f, &a, &b).unwrap();
        assert_eq!(q, vec![f.one(), f.one()]);
        assert_eq!(ugcd(&f, &a, &b), b);
    }

    #[test]
    fn bivariate_exact_division() {
        let f = f5();
        // (t x - t)(t x + t) = t^2 x^2 - t^2
        let a = bp(&f, &[(1, 1, 1), (1, 0, -1)]);
        let b = bp(&f, &[(1, 1, 1), (1, 0, 1)]);
        let prod = a.mul(&f, &b);
        assert_eq!(prod, bp(&f, &[(2, 2, 1), (2, 0, -1)]));
        assert_eq!(prod.exact_div(&f, &a).unwrap(), b);
        assert!(a.exact_div(&f, &b).is_none());
    }

    #[test]
    fn bivariate_gcd_recovers_common_factor() {
        let f = Fq::new(3, 1).unwrap();
        let g = bp(&f, &[(1, 1, 1), (0, 0, 1), (2, 0, 2)]); // t x + 1 + 2 t^2
        let u = bp(&f, &[(0, 2, 1), (1, 0, 1)]);
        let v = bp(&f, &[(3, 1, 2), (0, 0, 1)]);
        let h = g.mul(&f, &u).gcd(&f, &g.mul(&f, &v));
        assert_eq!(h, g.monic(&f));
        assert!(u.gcd(&f, &v).is_one());
    }

    #[test]
    fn gcd_with_monomial_factors() {
        let f = Fq::new(2, 1).unwrap();
        let a = bp(&f, &[(2, 1, 1), (3, 1, 1)]); // t^2 x (1 + t)
        let b = bp(&f, &[(1, 2, 1)]); // t x^2
        assert_eq!(a.gcd(&f, &b), bp(&f, &[(1, 1, 1)]));
    }
}
