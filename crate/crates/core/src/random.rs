//! Random generators for property tests, self-checks and benchmarks.

use rand::Rng;

use crate::expansion::{Expansion, TermKey};
use crate::metric::{ExpMatrix, SeedData};
use crate::poly::{harmonic_decompose, HarmonicPoly, Monomial, Poly};
use crate::rational::{frac, Rational};

/// Nonzero `p/q` with `|p| <= 9`, `1 <= q <= 6`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let p = rng.random_range(1..=9) * if rng.random_bool(0.5) { 1 } else { -1 };
    frac(p, rng.random_range(1..=6))
}

fn random_monomial<R: Rng + ?Sized>(rng: &mut R, n: usize, d: usize) -> Monomial {
    let mut exps = vec![0u32; n];
    for _ in 0..d {
        exps[rng.random_range(0..n)] += 1;
    }
    Monomial::from_exponents(&exps).expect("small exponents")
}

/// Homogeneous polynomial of degree `d` with up to `max_terms` monomials;
/// never zero.
pub fn random_homogeneous<R: Rng + ?Sized>(rng: &mut R, n: usize, d: usize, max_terms: usize) -> Poly {
    loop {
        let mut p = Poly::zero(n);
        for _ in 0..rng.random_range(1..=max_terms.max(1)) {
            p.add_term(random_monomial(rng, n, d), random_rational(rng));
        }
        if !p.is_zero() {
            return p;
        }
    }
}

/// Nonzero harmonic polynomial of degree `d`, the harmonic part of a
/// random homogeneous polynomial.
pub fn random_harmonic<R: Rng + ?Sized>(rng: &mut R, n: usize, d: usize) -> HarmonicPoly {
    loop {
        let p = random_homogeneous(rng, n, d, 4);
        let comps = harmonic_decompose(&p, d).expect("homogeneous");
        if let Some(c) = comps.into_iter().find(|c| c.power == 0) {
            return c.harmonic;
        }
    }
}

/// Key of a random member of the `n > 4` index set with `l <= max_l`.
pub fn random_t_key<R: Rng + ?Sized>(rng: &mut R, n: usize, max_l: i64) -> TermKey {
    let l = rng.random_range(1..=max_l.max(1));
    let j = rng.random_range(0..l);
    let k = l + rng.random_range(0..=3);
    let m = k - 2 * rng.random_range(0..=k / 2);
    TermKey::new(2 * j - (n as i64 - 2) * l - k, 0, m as usize)
}

/// Key of a random member of the `n = 4` index set. With `exceptional`
/// the key satisfies `sigma + 4 + m = 0`.
pub fn random_ttilde_key<R: Rng + ?Sized>(rng: &mut R, max_l: i64, exceptional: bool) -> TermKey {
    if exceptional {
        let i = rng.random_range(0..=2i64);
        // 2l + k = m + 4: either l = 2, k = m or l = 1, k = m + 2
        let (l, k, m) = if rng.random_bool(0.5) {
            let m = 2 + i + rng.random_range(0..=2);
            (2, m, m)
        } else {
            let m = (i - 1).max(0) + rng.random_range(0..=2);
            (1, m + 2, m)
        };
        return TermKey::new(-2 * l - k, i as u32, m as usize);
    }
    let l = rng.random_range(1..=max_l.max(1));
    let i = rng.random_range(0..=2i64);
    let k = l + i + rng.random_range(0..=2);
    let m = k - 2 * rng.random_range(0..=k / 2);
    TermKey::new(-2 * l - k, i as u32, m as usize)
}

/// One group at `key` with a random harmonic part.
pub fn random_term<R: Rng + ?Sized>(rng: &mut R, n: usize, key: TermKey) -> Expansion {
    Expansion::harmonic(key.sigma, key.logpow, &random_harmonic(rng, n, key.degree))
}

/// Random index-set member of dimension `n` (`n = 4` uses the log set).
pub fn random_member<R: Rng + ?Sized>(rng: &mut R, n: usize, max_l: i64) -> Expansion {
    let key = if n == 4 { random_ttilde_key(rng, max_l, false) } else { random_t_key(rng, n, max_l) };
    random_term(rng, n, key)
}

/// Seeds with one to `per_level` entries at each level in `levels`.
pub fn random_seeds<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    levels: std::ops::RangeInclusive<usize>,
    per_level: usize,
) -> SeedData {
    let mut seeds = SeedData::new(n);
    for level in levels {
        for _ in 0..rng.random_range(1..=per_level.max(1)) {
            let i = rng.random_range(0..n);
            let j = rng.random_range(0..n);
            seeds.insert(level, i, j, random_harmonic(rng, n, level)).expect("valid seed");
        }
    }
    seeds
}

/// Symmetric `U` whose upper entries are sums of up to three random
/// index-set members with `sigma >= -order`.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, n: usize, order: i64) -> ExpMatrix {
    let max_l = (order / (n as i64 - 2).max(2)).max(1);
    let mut u = ExpMatrix::zero(n);
    for i in 0..n {
        for j in i..n {
            let mut e = Expansion::zero(n);
            for _ in 0..rng.random_range(0..=3) {
                let t = random_member(rng, n, max_l);
                if t.max_sigma().is_some_and(|s| s >= -order) {
                    e = e.add(&t);
                }
            }
            u.set_symmetric(i, j, e);
        }
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::{membership_t, membership_ttilde};
    use crate::poisson::is_exceptional;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn generated_keys_are_members() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let k = random_t_key(&mut rng, 5, 4);
            assert!(membership_t(k, 5).unwrap().is_some(), "{k:?}");
            let k = random_ttilde_key(&mut rng, 4, false);
            assert!(membership_ttilde(k, 4).unwrap().is_some(), "{k:?}");
            let k = random_ttilde_key(&mut rng, 4, true);
            assert!(membership_ttilde(k, 4).unwrap().is_some(), "{k:?}");
            assert!(is_exceptional(k.sigma, 4, k.degree));
        }
    }

    #[test]
    fn harmonic_is_harmonic() {
        let mut rng = StdRng::seed_from_u64(1);
        for d in 0..6 {
            let h = random_harmonic(&mut rng, 5, d);
            assert!(h.poly().laplacian().is_zero());
            assert!(h.poly().is_homogeneous_of(d));
        }
    }
}
