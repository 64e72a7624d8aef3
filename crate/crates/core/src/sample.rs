//! Seeded random elements for property checks and the self-test.

use rand::Rng;

use crate::monofield::{FieldCtx, Laurent, MonoElem};

/// A random element with a small numerator and, half of the time, a
/// two-term denominator.
pub fn random_elem<R: Rng + ?Sized>(ctx: &FieldCtx, rng: &mut R) -> MonoElem {
    let f = ctx.fq();
    let b_range = if ctx.has_param() { 1 } else { 0 };
    let term = |rng: &mut R, a_lo: i64, a_hi: i64, b_lo: i64| {
        let a = rng.gen_range(a_lo..=a_hi);
        let b = rng.gen_range(b_lo..=b_range);
        let c = f.from_code(rng.gen_range(1..f.q())).expect("in range");
        ((a, b), c)
    };
    loop {
        let mut num = Laurent::new();
        for _ in 0..rng.gen_range(1..=3) {
            let (k, c) = term(rng, -3, 3, -b_range);
            num.insert(k, c);
        }
        let mut den = Laurent::new();
        if rng.gen_bool(0.5) {
            den.insert((0, 0), f.one());
        } else {
            for _ in 0..2 {
                let (k, c) = term(rng, 0, 2, 0);
                den.insert(k, c);
            }
        }
        if let Ok(e) = MonoElem::from_fraction(ctx, &num, &den) {
            if !e.is_zero() {
                return e;
            }
        }
    }
}

/// A random nonzero element of `F_q`, lifted.
pub fn random_constant<R: Rng + ?Sized>(ctx: &FieldCtx, rng: &mut R) -> MonoElem {
    let f = ctx.fq();
    ctx.constant(f.from_code(rng.gen_range(1..f.q())).expect("in range"))
}
