//! Seeded random rationals for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Scalar;
use crate::vector::Vector;

/// The generator used by every sampled check.
pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational `p/q` in `[lo, hi]` with `1 <= q <= max_den`.
pub fn rational<S: Scalar, R: Rng + ?Sized>(rng: &mut R, lo: i64, hi: i64, max_den: i64) -> S {
    let q = rng.random_range(1..=max_den);
    let p = rng.random_range(lo * q..=hi * q);
    S::from_ratio(p, q)
}

pub fn vector<S: Scalar, R: Rng + ?Sized>(rng: &mut R, dim: usize, lo: i64, hi: i64, max_den: i64) -> Vector<S> {
    Vector::new((0..dim).map(|_| rational(rng, lo, hi, max_den)).collect())
}

/// A random point with integer coordinates in `[lo, hi]`.
pub fn int_vector<S: Scalar, R: Rng + ?Sized>(rng: &mut R, dim: usize, lo: i64, hi: i64) -> Vector<S> {
    Vector::new((0..dim).map(|_| S::from_int(rng.random_range(lo..=hi))).collect())
}

/// A pair `x <= y`: `y = x + d` with `d >= 0`.
pub fn ordered_pair<S: Scalar, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> (Vector<S>, Vector<S>) {
    let x = vector(rng, dim, -4, 4, 6);
    let d = vector(rng, dim, 0, 2, 6);
    let y = &x + &d;
    (x, y)
}
