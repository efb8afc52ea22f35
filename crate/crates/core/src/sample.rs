//! Seeded random elements for randomized identity checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hopf::{Algebra, Element};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A sparse element with `terms` basis vectors and coefficients `n q^k`.
pub fn random_element(alg: &'static Algebra, rng: &mut impl Rng, terms: usize) -> Element {
    let sc = alg.scalars();
    let two_p = 2 * alg.p() as i64;
    let mut x = alg.zero();
    for _ in 0..terms {
        let i = rng.gen_range(0..alg.dim() as u32);
        let n = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let c = sc.int(n) * sc.q_pow(rng.gen_range(0..two_p));
        x = x + alg.basis(i).scale(&c);
    }
    x
}

/// Random pairs for cyclicity tests.
pub fn random_pairs(alg: &'static Algebra, seed: u64, count: usize, terms: usize) -> Vec<(Element, Element)> {
    let mut r = rng(seed);
    (0..count).map(|_| (random_element(alg, &mut r, terms), random_element(alg, &mut r, terms))).collect()
}
