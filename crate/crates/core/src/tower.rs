//! The subfield tower `F_ℓ` and the overfields `F_[ℓ]`.
//!
//! With `α = α_ℓ + p^ℓ·γ` (`α_ℓ` the low `ℓ` digits), `F_ℓ` has exponent
//! lattice `p^ℓ·(Z + Zγ)` and `F_[ℓ] = F_q(t, t^γ)` has `Z + Zγ`. Field degrees
//! are lattice indices.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hasse::{theta_coeff, theta_series};
use crate::monofield::{ExponentLattice, FieldCtx, MonoElem};
use crate::padicnum::PadicExponent;
use crate::report::Report;

/// Level `ℓ` of the tower above a base field.
#[derive(Clone, Debug)]
pub struct TowerLevel {
    ell: usize,
    base: FieldCtx,
    lattice_ell: ExponentLattice,
    bracket: FieldCtx,
}

/// Summary of one tower level, as emitted by the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerSummary {
    pub level: usize,
    pub alpha_ell: i64,
    pub gamma_digits_prefix: Vec<u32>,
    #[serde(rename = "index_F_over_Fell")]
    pub index_f_over_fell: u64,
    #[serde(rename = "index_Fbracket_over_F")]
    pub index_fbracket_over_f: u64,
}

impl TowerLevel {
    pub fn new(base: &FieldCtx, ell: usize) -> Result<Self> {
        let bracket = if base.has_param() {
            base.at_level(base.level() + ell)?
        } else {
            // F_q(t)_[ℓ] = (F_q(t^{p^ℓ}))^{p^{-ℓ}} = F_q(t)
            base.clone()
        };
        Ok(TowerLevel {
            ell,
            base: base.clone(),
            lattice_ell: base.kernel_lattice(ell),
            bracket,
        })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn base(&self) -> &FieldCtx {
        &self.base
    }

    /// Exponent lattice of `F_ℓ`.
    pub fn lattice_ell(&self) -> &ExponentLattice {
        &self.lattice_ell
    }

    /// The context of `F_[ℓ]`; its `x` is `u = t^γ`.
    pub fn bracket(&self) -> &FieldCtx {
        &self.bracket
    }

    /// `α_ℓ` in `[0, p^ℓ)`, the low digits of the base parameter.
    pub fn alpha_ell(&self) -> i64 {
        if self.base.has_param() {
            self.base.padic().alpha_low(self.ell)
        } else {
            0
        }
    }

    pub fn gamma_digits(&self, count: usize) -> Vec<u32> {
        if !self.base.has_param() {
            return Vec::new();
        }
        let p = self.base.p();
        (0..count).map(|i| self.bracket.oracle().digit(i) % p).collect()
    }

    /// The embedding `F → F_[ℓ]`: `t ↦ t`, `x ↦ t^{α_ℓ}·u^{p^ℓ}`.
    pub fn embed(&self, x: &MonoElem) -> Result<MonoElem> {
        if x.ctx() != &self.base {
            return Err(Error::ContextMismatch);
        }
        if !self.base.has_param() {
            return Ok(x.clone());
        }
        let pl = (self.base.p() as i64).pow(self.ell as u32);
        x.map_monomials(&self.bracket, self.alpha_ell(), pl)
    }

    /// `x ∈ F_[ℓ]` as an element of `F`: exact inverse of [`TowerLevel::embed`].
    pub fn pull_back(&self, y: &MonoElem) -> Result<MonoElem> {
        if y.ctx() != &self.bracket {
            return Err(Error::ContextMismatch);
        }
        if !self.base.has_param() {
            return Ok(y.clone());
        }
        let pl = (self.base.p() as i64).pow(self.ell as u32);
        let a = self.alpha_ell();
        let map = |l: crate::monofield::Laurent| -> Result<crate::monofield::Laurent> {
            l.into_iter()
                .map(|((e, g), c)| {
                    if g % pl != 0 {
                        return Err(Error::NotContained);
                    }
                    let b = g / pl;
                    Ok(((e - a * b, b), c))
                })
                .collect()
        };
        MonoElem::from_fraction(&self.base, &map(y.numerator())?, &map(y.denominator())?)
    }

    /// `[F : F_ℓ]` as a lattice index.
    pub fn index_f_over_fell(&self) -> Result<u64> {
        lattice_index(&self.lattice_ell, &self.base.lattice())
    }

    /// `[F_[ℓ] : F]` as a lattice index.
    pub fn index_bracket_over_f(&self) -> Result<u64> {
        lattice_index(&self.base.lattice(), &self.bracket.lattice())
    }

    pub fn summary(&self, digits: usize) -> Result<TowerSummary> {
        Ok(TowerSummary {
            level: self.ell,
            alpha_ell: self.alpha_ell(),
            gamma_digits_prefix: self.gamma_digits(digits),
            index_f_over_fell: self.index_f_over_fell()?,
            index_fbracket_over_f: self.index_bracket_over_f()?,
        })
    }

    /// Digit identity `α = α_ℓ + p^ℓ·γ` at every position within the budget.
    pub fn digit_identity_holds(&self) -> Result<bool> {
        if !self.base.has_param() {
            return Ok(true);
        }
        let pl = (self.base.p() as i64).pow(self.ell as u32);
        let budget = self.base.padic().budget().min(self.bracket.padic().budget());
        let lhs = self.base.padic().digits(PadicExponent::alpha(), budget)?;
        let rhs = self
            .bracket
            .padic()
            .digits(PadicExponent::new(self.alpha_ell(), pl), budget)?;
        Ok(lhs == rhs)
    }

    /// Whether `θ_{F_[ℓ]}(embed(x))` equals the embedded `θ_F(x)` up to `order`.
    pub fn series_match(&self, x: &MonoElem, order: usize) -> Result<bool> {
        let lhs = theta_series(&self.embed(x)?, order)?;
        let rhs = theta_series(x, order)?;
        for n in 0..=order {
            if *lhs.coeff(n) != self.embed(rhs.coeff(n))? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `F_[ℓ]` with the embedding of `F`.
pub fn f_bracket(ctx: &FieldCtx, ell: usize) -> Result<TowerLevel> {
    TowerLevel::new(ctx, ell)
}

/// Whether `x ∈ F_ℓ`, tested by `θ^(p^i)(x) = 0` for all `i < ℓ`.
pub fn f_ell_membership(x: &MonoElem, ell: usize) -> Result<bool> {
    let p = x.ctx().p() as usize;
    for i in 0..ell {
        let n = p.pow(i as u32);
        if n > x.ctx().trunc() {
            return Err(Error::OrderTooLarge {
                order: n,
                trunc: x.ctx().trunc(),
            });
        }
        if !theta_coeff(x, n)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `[sup : sub]`, the absolute determinant of `sub` over a basis of `sup`.
pub fn lattice_index(sub: &ExponentLattice, sup: &ExponentLattice) -> Result<u64> {
    sub.index_in(sup)
}

/// Whether the level-1 kernel equals the field of `p`-th powers. The constants
/// are perfect, so `F^p` has exponent lattice `p·Λ` for `Λ` the lattice of `F`.
pub fn check_l1_eq_lp(ctx: &FieldCtx) -> bool {
    ctx.kernel_lattice(1).same_as(&ctx.lattice().scaled(ctx.p() as i128))
}

/// Consistency of the tower at levels `ℓ, ℓ'`: `(F_[ℓ])_[ℓ'] = F_[ℓ+ℓ']`, and
/// `F_ℓ` is the `p^ℓ`-th power of `F_[ℓ]`.
pub fn tower_consistency(ctx: &FieldCtx, ell: usize, ell2: usize) -> Result<Report> {
    let mut report = Report::new();
    let lvl = TowerLevel::new(ctx, ell)?;
    let nested = TowerLevel::new(lvl.bracket(), ell2)?;
    let direct = TowerLevel::new(ctx, ell + ell2)?;
    report.check(
        format!("bracket({ell})∘bracket({ell2}) = bracket({})", ell + ell2),
        nested.bracket().lattice().same_as(&direct.bracket().lattice()),
        "",
    );
    let pl = (ctx.p() as i128).pow(ell as u32);
    report.check(
        format!("F_{ell} = (F_[{ell}])^(p^{ell})"),
        lvl.lattice_ell().same_as(&lvl.bracket().lattice().scaled(pl)),
        "",
    );
    let back = TowerLevel::new(lvl.bracket(), 0)?;
    report.check(
        format!("bracket(0) of F_[{ell}] is itself"),
        back.bracket().lattice().same_as(&lvl.bracket().lattice()),
        "",
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padicnum::DigitOracle;

    fn ctx(p: u32, order: usize) -> FieldCtx {
        FieldCtx::new(p, 1, DigitOracle::Squares, order).unwrap()
    }

    #[test]
    fn membership_examples() {
        let c = ctx(2, 8);
        let t = c.t();
        for ell in 0..=3 {
            let lvl = TowerLevel::new(&c, ell).unwrap();
            let t_pow = t.pow(1 << ell).unwrap();
            assert!(f_ell_membership(&t_pow, ell).unwrap());
            let s = c.monomial(c.fq().one(), -lvl.alpha_ell(), 1).unwrap();
            assert!(f_ell_membership(&s, ell).unwrap());
            assert!(lvl.lattice_ell().contains(PadicExponent::new(-lvl.alpha_ell(), 1)));
        }
        assert!(!f_ell_membership(&t, 1).unwrap());
        assert!(f_ell_membership(&t, 0).unwrap());
    }

    #[test]
    fn degrees() {
        for p in [2u32, 3] {
            let c = ctx(p, 8);
            for ell in 0..=3usize {
                let lvl = TowerLevel::new(&c, ell).unwrap();
                let pl = (p as u64).pow(ell as u32);
                assert_eq!(lvl.index_f_over_fell().unwrap(), pl);
                assert_eq!(lvl.index_bracket_over_f().unwrap(), pl);
            }
            for ell in 0..=2usize {
                let a = TowerLevel::new(&c, ell).unwrap();
                let b = TowerLevel::new(&c, ell + 1).unwrap();
                assert_eq!(lattice_index(b.lattice_ell(), a.lattice_ell()).unwrap(), p as u64);
            }
        }
    }

    #[test]
    fn rational_field_has_trivial_bracket() {
        let c = FieldCtx::rational(3, 1, 6).unwrap();
        let lvl = TowerLevel::new(&c, 2).unwrap();
        assert_eq!(lvl.index_f_over_fell().unwrap(), 9);
        assert_eq!(lvl.index_bracket_over_f().unwrap(), 1);
    }

    #[test]
    fn l1_criterion() {
        assert!(check_l1_eq_lp(&FieldCtx::rational(2, 1, 4).unwrap()));
        assert!(check_l1_eq_lp(&FieldCtx::rational(5, 2, 4).unwrap()));
        assert!(!check_l1_eq_lp(&ctx(2, 4)));
        assert!(!check_l1_eq_lp(&ctx(3, 4)));
    }

    #[test]
    fn digit_identity_and_consistency() {
        for p in [2u32, 3, 5] {
            let c = ctx(p, 12);
            for ell in 0..=3 {
                let lvl = TowerLevel::new(&c, ell).unwrap();
                assert!(lvl.digit_identity_holds().unwrap());
                assert!(tower_consistency(&c, ell, 1).unwrap().passed());
            }
        }
    }

    #[test]
    fn embedding_is_a_derivation_map() {
        let c = ctx(3, 9);
        let lvl = TowerLevel::new(&c, 1).unwrap();
        let x = c.x().unwrap();
        let e = (&x + &c.t()) / (&x * &x - c.one());
        assert!(lvl.series_match(&x, 9).unwrap());
        assert!(lvl.series_match(&e, 9).unwrap());
        assert_eq!(lvl.pull_back(&lvl.embed(&e).unwrap()).unwrap(), e);
        let id = TowerLevel::new(&c, 0).unwrap();
        assert_eq!(id.embed(&e).unwrap().to_string(), e.to_string());
    }

    #[test]
    fn summary_for_p2_level3() {
        let s = TowerLevel::new(&ctx(2, 8), 3).unwrap().summary(6).unwrap();
        assert_eq!(s.alpha_ell, 3);
        // squares digits shifted by 3: positions 3.. → 0,1,0,0,0,0
        assert_eq!(s.gamma_digits_prefix, vec![0, 1, 0, 0, 0, 0]);
        assert_eq!((s.index_f_over_fell, s.index_fbracket_over_f), (8, 8));
    }
}
