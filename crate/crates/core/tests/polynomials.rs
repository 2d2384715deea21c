mod common;

use alexpand::expansion::exp_laplacian;
use alexpand::poly::{harmonic_decompose, poly_arith, reassemble, PolyOp, Poly};
use alexpand::random::{random_harmonic, random_homogeneous};
use alexpand::rational::{frac, int};
use alexpand::{Error, Expansion};
use common::{r2, rng, x};
use proptest::prelude::*;

#[test]
fn arithmetic_examples() {
    let n = 4;
    assert_eq!(poly_arith(&x(n, 0), &x(n, 0), PolyOp::Mul).unwrap().to_string(), (&x(n, 0) * &x(n, 0)).to_string());
    let s = poly_arith(&(&x(n, 0) + &x(n, 1)), &(-&x(n, 1)), PolyOp::Add).unwrap();
    assert_eq!(s, x(n, 0));
    assert_eq!(s.len(), 1);
    let p = &x(n, 0) * &x(n, 1);
    let scaled = poly_arith(&p, &p, PolyOp::Scale(frac(3, 2))).unwrap();
    assert_eq!(scaled.iter().next().unwrap().1, &frac(3, 2));
    assert!(matches!(poly_arith(&x(4, 0), &x(5, 0), PolyOp::Add), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn laplacian_examples() {
    assert!((&x(4, 0) * &x(4, 1)).laplacian().is_zero());
    assert_eq!((&x(4, 0) * &x(4, 0)).laplacian(), Poly::constant(4, int(2)));
    assert_eq!(r2(5).laplacian(), Poly::constant(5, int(10)));
}

#[test]
fn decomposition_examples() {
    let xy = &x(4, 0) * &x(4, 1);
    let d = harmonic_decompose(&xy, 2).unwrap();
    assert_eq!(d.len(), 1);
    assert_eq!((d[0].power, d[0].harmonic.poly()), (0, &xy));

    let x1sq = &x(4, 0) * &x(4, 0);
    let d = harmonic_decompose(&x1sq, 2).unwrap();
    assert_eq!(d.len(), 2);
    assert_eq!(d[0].power, 0);
    assert_eq!(d[0].harmonic.poly(), &(&x1sq - &r2(4).scale(&frac(1, 4))));
    assert_eq!(d[1].power, 1);
    assert_eq!(d[1].harmonic.poly(), &Poly::constant(4, frac(1, 4)));

    assert!(matches!(harmonic_decompose(&(&x1sq + &x(4, 1)), 2), Err(Error::NotHomogeneous { .. })));

    let mut g = rng(11);
    let p = random_homogeneous(&mut g, 5, 4, 8);
    assert_eq!(reassemble(5, &harmonic_decompose(&p, 4).unwrap()), p);
}

#[test]
fn evaluation_examples() {
    let x1sq = &x(4, 0) * &x(4, 0);
    assert_eq!(x1sq.eval(&[2.0, 0.0, 0.0, 0.0]).unwrap(), 4.0);
    assert_eq!(r2(4).eval(&[1.0; 4]).unwrap(), 4.0);
    let h = &x1sq - &r2(4).scale(&frac(1, 4));
    assert_eq!(h.eval(&[1.0; 4]).unwrap(), 0.0);
    assert!(h.eval(&[1.0; 3]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn decomposition_reassembles_exactly(seed in any::<u64>(), n in 4usize..=6, k in 0usize..=8) {
        let mut g = rng(seed);
        let p = random_homogeneous(&mut g, n, k, 10);
        let comps = harmonic_decompose(&p, k).unwrap();
        for c in &comps {
            prop_assert!(c.harmonic.poly().laplacian().is_zero());
            prop_assert!(c.harmonic.poly().is_homogeneous_of(k - 2 * c.power));
        }
        let back = reassemble(n, &comps);
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(harmonic_decompose(&back, k).unwrap(), comps);
    }

    // Delta(|x|^{2a} h_m) = 2a(2a + n - 2 + 2m) |x|^{2a-2} h_m, computed once
    // through the term formula and once by differentiating the polynomial.
    #[test]
    fn eigenvalue_identity(seed in any::<u64>(), n in 4usize..=6, m in 0usize..=4, a in 1usize..=3) {
        let mut g = rng(seed);
        let h = random_harmonic(&mut g, n, m);
        let poly = &Poly::radius_power(n, a) * h.poly();
        let direct = poly.laplacian();
        let sigma = (2 * a + m) as i64;
        let via_terms = exp_laplacian(&Expansion::harmonic(sigma, 0, &h));
        let c = int((2 * a * (2 * a + n - 2 + 2 * m)) as i64);
        prop_assert_eq!(&direct, &(&Poly::radius_power(n, a - 1) * h.poly()).scale(&c));
        prop_assert_eq!(via_terms, Expansion::harmonic(sigma - 2, 0, &h).scale(&c));
    }
}
