//! Workloads shared by the benchmarks.

use alexpand::metric::{BootstrapOptions, BootstrapState, ExpMatrix, SeedData};
use alexpand::random::{random_homogeneous, random_member, random_seeds, random_state};
use alexpand::{Expansion, Poly};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn polynomial(n: usize, degree: usize) -> Poly {
    random_homogeneous(&mut rng(degree as u64), n, degree, 12)
}

/// Two sums of random index-set members.
pub fn member_pair(n: usize) -> (Expansion, Expansion) {
    let mut g = rng(n as u64);
    let sum = |g: &mut ChaCha8Rng| (0..6).fold(Expansion::zero(n), |acc, _| acc.add(&random_member(g, n, 3)));
    let a = sum(&mut g);
    let b = sum(&mut g);
    (a, b)
}

pub fn state(n: usize, order: i64) -> ExpMatrix {
    random_state(&mut rng(7), n, order)
}

pub fn seeds(n: usize) -> SeedData {
    random_seeds(&mut rng(11), n, 1..=3, 3)
}

/// The state right before the last stage of a run to `order`.
pub fn penultimate(n: usize, order: i64, seeds: &SeedData) -> BootstrapState {
    let opts = BootstrapOptions::default();
    let mut s = BootstrapState::initial(n, order, seeds).expect("valid seeds");
    while s.certified + (n as i64 - 1) < order {
        s = alexpand::metric::bootstrap_step(&s, seeds, &opts).expect("bootstrap step");
    }
    s
}
