use serde::Serialize;

use crate::error::{Error, Result};
use crate::padicnum::PadicExponent;

/// A lattice of exponents, stored by a rational basis over `(1, α)`, the
/// coordinates of the root field `F_q(t, t^α)`.
///
/// Rank-2 lattices have the form `s·(Z + Zπ)` where `π = (α - α_j)/p^j` is the
/// level-`j` parameter; rank-1 lattices are `s·Z` (no transcendental exponent).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentLattice {
    /// Basis rows over `(1, α)`, to be divided by `den`.
    basis: Vec<[i128; 2]>,
    den: i128,
}

impl ExponentLattice {
    /// `scale·(Z + Zπ)` with `π = (α - alpha_low)/p^level`.
    pub fn with_parameter(p: u32, level: u32, alpha_low: i64, scale: i128) -> Self {
        let pl = (p as i128).pow(level);
        ExponentLattice {
            basis: vec![[scale * pl, 0], [-scale * alpha_low as i128, scale]],
            den: pl,
        }
    }

    /// `scale·Z` inside a field without transcendental exponent.
    pub fn integers(scale: i128) -> Self {
        ExponentLattice {
            basis: vec![[scale, 0]],
            den: 1,
        }
    }

    /// Lattice with an explicit integer basis over `(1, α)` (rank 1 or 2).
    pub fn from_basis(basis: Vec<[i128; 2]>, den: i128) -> Self {
        ExponentLattice { basis, den }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> (&[[i128; 2]], i128) {
        (&self.basis, self.den)
    }

    fn det(&self) -> i128 {
        match self.basis.as_slice() {
            [[a, _]] => *a,
            [[a, b], [c, d]] => a * d - b * c,
            _ => unreachable!("rank is 1 or 2"),
        }
    }

    /// Coordinates of a root-coordinate vector `v/den_v` over this basis,
    /// or `None` when they are not integers.
    fn coords_of(&self, v: [i128; 2], den_v: i128) -> Option<Vec<i128>> {
        match self.basis.as_slice() {
            [[a, _]] => {
                if v[1] != 0 {
                    return None;
                }
                // v0/den_v = c·a/den
                let num = v[0] * self.den;
                let d = a * den_v;
                (num % d == 0).then(|| vec![num / d])
            }
            [[a, b], [c, d]] => {
                // solve (x, y)·M = v·den/den_v
                let det = a * d - b * c;
                let x_num = (v[0] * d - v[1] * c) * self.den;
                let y_num = (v[1] * a - v[0] * b) * self.den;
                let q = det * den_v;
                (x_num % q == 0 && y_num % q == 0).then(|| vec![x_num / q, y_num / q])
            }
            _ => unreachable!(),
        }
    }

    pub fn contains(&self, beta: PadicExponent) -> bool {
        self.coords_of([beta.a as i128, beta.b as i128], 1).is_some()
    }

    pub fn is_sublattice_of(&self, sup: &ExponentLattice) -> bool {
        self.rank() == sup.rank() && self.basis.iter().all(|v| sup.coords_of(*v, self.den).is_some())
    }

    /// `[sup : sub]` as the absolute determinant of `sub` over the basis of `sup`.
    pub fn index_in(&self, sup: &ExponentLattice) -> Result<u64> {
        if !self.is_sublattice_of(sup) {
            return Err(Error::NotContained);
        }
        let rows: Vec<Vec<i128>> = self
            .basis
            .iter()
            .map(|v| sup.coords_of(*v, self.den).expect("checked containment"))
            .collect();
        let det = match rows.as_slice() {
            [r] => r[0],
            [r, s] => r[0] * s[1] - r[1] * s[0],
            _ => unreachable!(),
        };
        Ok(det.unsigned_abs() as u64)
    }

    /// The lattice scaled by `c` (the exponents of `c`-th powers).
    pub fn scaled(&self, c: i128) -> ExponentLattice {
        ExponentLattice {
            basis: self.basis.iter().map(|v| [v[0] * c, v[1] * c]).collect(),
            den: self.den,
        }
    }

    /// Equality as sets of exponents.
    pub fn same_as(&self, other: &ExponentLattice) -> bool {
        self.is_sublattice_of(other) && other.is_sublattice_of(self)
    }

    /// Covolume in root coordinates, `|det| / den^rank`, as a reduced fraction.
    pub fn covolume(&self) -> (i128, i128) {
        let num = self.det().abs();
        let den = self.den.pow(self.rank() as u32);
        let g = gcd_i128(num, den);
        (num / g, den / g)
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
