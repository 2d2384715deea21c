#![allow(dead_code)]

use alexpand::poly::{HarmonicPoly, Poly};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn x(n: usize, axis: usize) -> Poly {
    Poly::var(n, axis)
}

pub fn harm(p: Poly) -> HarmonicPoly {
    HarmonicPoly::from_poly(p).expect("harmonic")
}

pub fn r2(n: usize) -> Poly {
    Poly::radius_squared(n)
}
