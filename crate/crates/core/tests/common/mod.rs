#![allow(dead_code)]

use idgalois::monofield::{FieldCtx, MonoElem};
use idgalois::padicnum::DigitOracle;
use idgalois::sample::random_elem;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn squares(p: u32, order: usize) -> FieldCtx {
    FieldCtx::new(p, 1, DigitOracle::Squares, order).unwrap()
}

pub fn elem(ctx: &FieldCtx, seed: u64) -> MonoElem {
    random_elem(ctx, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn elems(ctx: &FieldCtx, seed: u64, count: usize) -> Vec<MonoElem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_elem(ctx, &mut rng)).collect()
}
