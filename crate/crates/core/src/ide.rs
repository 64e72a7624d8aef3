//! Iterative differential equations `θ(Y) = A·Y`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hasse::{verify_iterativity, IdScalar, TruncSeries};
use crate::monofield::MonoElem;
use crate::padicnum::int_binom_mod;
use crate::report::Report;
use crate::tower::TowerLevel;

/// A dense square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<E> {
    n: usize,
    rows: Vec<Vec<E>>,
}

impl<E: IdScalar> Matrix<E> {
    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(format!("expected a non-empty square matrix, got {n} rows")));
        }
        Ok(Matrix { n, rows })
    }

    pub fn identity(n: usize, like: &E) -> Self {
        Self::scalar(n, like.one_like())
    }

    pub fn zero(n: usize, like: &E) -> Self {
        Self::scalar(n, like.zero_like())
    }

    fn scalar(n: usize, c: E) -> Self {
        let z = c.zero_like();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { c.clone() } else { z.clone() }).collect())
            .collect();
        Matrix { n, rows }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.rows[i][j] = v;
    }

    pub fn rows(&self) -> &[Vec<E>] {
        &self.rows
    }

    pub fn map<F: Fn(&E) -> Result<E>>(&self, f: F) -> Result<Self> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(&f).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix { n: self.n, rows })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(|e| e.is_zero_elem())
    }

    pub fn is_identity(&self) -> bool {
        let one = self.rows[0][0].one_like();
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let e = &self.rows[i][j];
                if i == j {
                    *e == one
                } else {
                    e.is_zero_elem()
                }
            })
        })
    }

    pub fn add(&self, o: &Self) -> Self {
        let rows = self
            .rows
            .iter()
            .zip(&o.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect())
            .collect();
        Matrix { n: self.n, rows }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        let z = self.rows[0][0].zero_like();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(z.clone(), |acc, k| {
                            let (a, b) = (&self.rows[i][k], &o.rows[k][j]);
                            if a.is_zero_elem() || b.is_zero_elem() {
                                acc
                            } else {
                                acc + a.clone() * b.clone()
                            }
                        })
                    })
                    .collect()
            })
            .collect();
        Matrix { n, rows }
    }

    pub fn scale(&self, c: &E) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|e| c.clone() * e.clone()).collect())
            .collect();
        Matrix { n: self.n, rows }
    }

    /// Gauss–Jordan inverse and determinant.
    pub fn inverse_and_det(&self) -> Result<(Self, E)> {
        let n = self.n;
        let mut a = self.rows.clone();
        let mut inv = Self::identity(n, &self.rows[0][0]).rows;
        let mut det = self.rows[0][0].one_like();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero_elem()).ok_or(Error::Singular)?;
            if pivot != col {
                a.swap(pivot, col);
                inv.swap(pivot, col);
                det = -det;
            }
            let pv = a[col][col].clone();
            det = det * pv.clone();
            let pinv = pv.try_inverse()?;
            for j in 0..n {
                a[col][j] = a[col][j].clone() * pinv.clone();
                inv[col][j] = inv[col][j].clone() * pinv.clone();
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero_elem() {
                    continue;
                }
                let factor = a[r][col].clone();
                for j in 0..n {
                    let (top_a, top_i) = (a[col][j].clone(), inv[col][j].clone());
                    a[r][j] = a[r][j].clone() - factor.clone() * top_a;
                    inv[r][j] = inv[r][j].clone() - factor.clone() * top_i;
                }
            }
        }
        Ok((Matrix { n, rows: inv }, det))
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(self.inverse_and_det()?.0)
    }

    pub fn det(&self) -> E {
        self.inverse_and_det()
            .map(|(_, d)| d)
            .unwrap_or_else(|_| self.rows[0][0].zero_like())
    }

    /// Entrywise `θ`-series to `order`, as a series of matrices.
    pub fn theta(&self, order: usize) -> Result<Vec<Self>> {
        let series: Vec<Vec<TruncSeries<E>>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|e| e.theta(order)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Ok((0..=order)
            .map(|k| Matrix {
                n: self.n,
                rows: series
                    .iter()
                    .map(|r| r.iter().map(|s| s.coeff(k).clone()).collect())
                    .collect(),
            })
            .collect())
    }
}

impl<E: IdScalar> fmt::Display for Matrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, e) in r.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// The coefficients `A_0, ..., A_N` of an IDE.
#[derive(Clone, Debug, PartialEq)]
pub struct IdeMatrix<E> {
    coeffs: Vec<Matrix<E>>,
}

/// The JSON form `{"n", "trunc", "entries": [[k, i, j, "<element>"]]}`;
/// zero entries are omitted.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdeMatrixJson {
    pub n: usize,
    pub trunc: usize,
    pub entries: Vec<(usize, usize, usize, String)>,
}

impl<E: IdScalar> IdeMatrix<E> {
    pub fn new(coeffs: Vec<Matrix<E>>) -> Result<Self> {
        let n = coeffs.first().ok_or_else(|| Error::Dimension("no coefficients".into()))?.size();
        if coeffs.iter().any(|m| m.size() != n) {
            return Err(Error::Dimension("coefficient sizes differ".into()));
        }
        Ok(IdeMatrix { coeffs })
    }

    pub fn size(&self) -> usize {
        self.coeffs[0].size()
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Matrix<E> {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Matrix<E>] {
        &self.coeffs
    }

    pub fn coeff_mut(&mut self, k: usize) -> &mut Matrix<E> {
        &mut self.coeffs[k]
    }

    pub fn to_json(&self) -> IdeMatrixJson {
        let mut entries = Vec::new();
        for (k, m) in self.coeffs.iter().enumerate() {
            for (i, r) in m.rows().iter().enumerate() {
                for (j, e) in r.iter().enumerate() {
                    if !e.is_zero_elem() {
                        entries.push((k, i, j, e.to_string()));
                    }
                }
            }
        }
        IdeMatrixJson {
            n: self.size(),
            trunc: self.trunc(),
            entries,
        }
    }
}

/// An invertible solution matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FundamentalMatrix<E> {
    y: Matrix<E>,
    y_inv: Matrix<E>,
    det: E,
}

impl<E: IdScalar> FundamentalMatrix<E> {
    pub fn new(y: Matrix<E>) -> Result<Self> {
        let (y_inv, det) = y.inverse_and_det()?;
        Ok(FundamentalMatrix { y, y_inv, det })
    }

    pub fn matrix(&self) -> &Matrix<E> {
        &self.y
    }

    pub fn inverse(&self) -> &Matrix<E> {
        &self.y_inv
    }

    pub fn det(&self) -> &E {
        &self.det
    }

    pub fn size(&self) -> usize {
        self.y.size()
    }
}

/// `A_k = θ^(k)(Y)·Y^(-1)` for `k ≤ order`.
pub fn derive_matrix<E: IdScalar>(y: &FundamentalMatrix<E>, order: usize) -> Result<IdeMatrix<E>> {
    let coeffs = y
        .matrix()
        .theta(order)?
        .into_iter()
        .map(|m| m.mul(y.inverse()))
        .collect();
    IdeMatrix::new(coeffs)
}

/// Checks `A_0 = 1` and `binom(k+l, l)·A_(k+l) = Σ_{i+j=l} θ^(i)(A_k)·A_j`
/// for all `k + l ≤ order`.
pub fn verify_ide<E: IdScalar>(a: &IdeMatrix<E>, order: usize) -> Result<Report> {
    if order > a.trunc() {
        return Err(Error::OrderTooLarge {
            order,
            trunc: a.trunc(),
        });
    }
    let mut report = Report::new();
    report.check("A_0 = identity", a.coeff(0).is_identity(), "");
    let like = a.coeff(0).get(0, 0).clone();
    let p = like.characteristic();
    for k in 0..=order {
        let theta_ak = a.coeff(k).theta(order - k)?;
        for l in 0..=order - k {
            let c = int_binom_mod((k + l) as u64, l as u64, p);
            let lhs = a.coeff(k + l).scale(&like.int_like(c as i64));
            let mut rhs = Matrix::zero(a.size(), &like);
            for i in 0..=l {
                rhs = rhs.add(&theta_ak[i].mul(a.coeff(l - i)));
            }
            let ok = lhs == rhs;
            let details = if ok { String::new() } else { format!("lhs = {lhs}, rhs = {rhs}") };
            report.check(format!("ide(k={k},l={l})"), ok, details);
        }
    }
    Ok(report)
}

/// Checks `θ(Y) = A·Y` to `order` and, separately, entrywise iterativity of
/// `Y`; the final line states whether the two verdicts agree.
pub fn verify_solution<E: IdScalar>(a: &IdeMatrix<E>, y: &Matrix<E>, order: usize) -> Result<Report> {
    if a.size() != y.size() {
        return Err(Error::Dimension(format!("A is {0}×{0}, Y is {1}×{1}", a.size(), y.size())));
    }
    if order > a.trunc() {
        return Err(Error::OrderTooLarge {
            order,
            trunc: a.trunc(),
        });
    }
    let mut report = Report::new();
    let theta_y = y.theta(order)?;
    let mut eq_ok = true;
    for (k, tk) in theta_y.iter().enumerate() {
        let ok = *tk == a.coeff(k).mul(y);
        eq_ok &= ok;
        report.check(format!("theta(Y) = AY (k={k})"), ok, "");
    }
    let mut it_ok = true;
    for i in 0..y.size() {
        for j in 0..y.size() {
            let r = verify_iterativity(y.get(i, j), order)?;
            let ok = r.passed();
            it_ok &= ok;
            let details = r.failures().next().map(|c| c.name.clone()).unwrap_or_default();
            report.check(format!("iterativity(Y[{i}][{j}])"), ok, details);
        }
    }
    report.check(
        "equivalence",
        eq_ok == it_ok,
        format!("theta(Y) = AY: {eq_ok}, entrywise iterativity: {it_ok}"),
    );
    Ok(report)
}

/// Result of the Frobenius level test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusLevel {
    /// Largest `ℓ` with `A_k = 0` whenever `p^ℓ ∤ k`, `1 ≤ k ≤ N`.
    pub level: usize,
    /// All `A_k` with `k ≥ 1` vanish; `level` is then only the largest value
    /// detectable at this truncation.
    pub capped: bool,
    /// Whether every entry of every `A_k` lies in `F_level`, when decidable.
    pub entries_in_f_ell: Option<bool>,
}

pub fn frobenius_level<E: IdScalar>(a: &IdeMatrix<E>) -> Result<FrobeniusLevel> {
    let like = a.coeff(0).get(0, 0);
    let p = like.characteristic() as usize;
    let n = a.trunc();
    let vanishes_off = |pl: usize| (1..=n).filter(|k| k % pl != 0).all(|k| a.coeff(k).is_zero());
    let capped = (1..=n).all(|k| a.coeff(k).is_zero());
    let mut level: usize = 0;
    let mut pl = p;
    if capped {
        while pl <= n {
            level += 1;
            pl *= p;
        }
        level += 1;
    } else {
        while pl <= n && vanishes_off(pl) {
            level += 1;
            pl *= p;
        }
    }
    let probe = p.pow(level.saturating_sub(1) as u32);
    let entries_in_f_ell = if level == 0 {
        Some(true)
    } else {
        match like.theta(probe) {
            Ok(_) => Some(entries_in_level(a, level, p)?),
            Err(_) => None,
        }
    };
    Ok(FrobeniusLevel {
        level,
        capped,
        entries_in_f_ell,
    })
}

fn entries_in_level<E: IdScalar>(a: &IdeMatrix<E>, level: usize, p: usize) -> Result<bool> {
    let top = p.pow(level as u32 - 1);
    for m in a.coeffs() {
        for e in m.rows().iter().flatten() {
            if e.is_zero_elem() {
                continue;
            }
            let s = e.theta(top)?;
            if (0..level).any(|i| !s.coeff(p.pow(i as u32)).is_zero_elem()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The `p^ℓ`-th-root IDE and solution in `F_[ℓ]` coordinates:
/// `A^[ℓ]_m = (A_(p^ℓ m))^(p^(-ℓ))` and `Y^[ℓ] = Y^(p^(-ℓ))`, both embedded in
/// `F_[ℓ]` first. Requires `frobenius_level(A) ≥ ℓ`.
pub fn frobenius_pullback(
    a: &IdeMatrix<MonoElem>,
    y: &Matrix<MonoElem>,
    level: &TowerLevel,
) -> Result<(IdeMatrix<MonoElem>, Matrix<MonoElem>)> {
    let ell = level.ell();
    let pl = (level.base().p() as usize).pow(ell as u32);
    let found = frobenius_level(a)?;
    if found.level < ell {
        return Err(Error::Invalid(format!(
            "Frobenius level {} is below the requested level {ell}",
            found.level
        )));
    }
    let root = |e: &MonoElem| -> Result<MonoElem> {
        let mut v = level.embed(e)?;
        for _ in 0..ell {
            v = v.p_root()?;
        }
        Ok(v)
    };
    let coeffs = (0..=a.trunc() / pl)
        .map(|m| a.coeff(m * pl).map(&root))
        .collect::<Result<Vec<_>>>()?;
    Ok((IdeMatrix::new(coeffs)?, y.map(&root)?))
}

/// Runs `verify_solution` on the Frobenius pullback of `(A, Y)`.
pub fn verify_frobenius_pullback(
    a: &IdeMatrix<MonoElem>,
    y: &Matrix<MonoElem>,
    level: &TowerLevel,
) -> Result<Report> {
    let mut report = Report::new();
    let found = frobenius_level(a)?;
    report.check(
        format!("frobenius_level >= {}", level.ell()),
        found.level >= level.ell(),
        format!("level {}{}", found.level, if found.capped { " (capped)" } else { "" }),
    );
    if found.level < level.ell() {
        return Ok(report);
    }
    let (a_root, y_root) = frobenius_pullback(a, y, level)?;
    let sol = verify_solution(&a_root, &y_root, a_root.trunc())?;
    report.extend("pullback: ", sol);
    Ok(report)
}
